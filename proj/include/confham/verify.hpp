#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confham/kepler.hpp"

namespace confham {

struct VerifyConfig {
  KeplerParams params;
  double tol = 1e-11;  // integrator tolerance
  std::uint64_t seed = 42;
  // Overrides every per-suite sample count when set.
  std::optional<int> samples;

  int count(int fallback) const { return samples ? *samples : fallback; }
};

// One measured quantity: the largest residual over the samples against a
// tolerance. Ungated checks are reported but never fail a suite.
struct Check {
  std::string name;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool gated = true;
  std::string error;  // first exception raised while sampling, if any

  bool pass() const { return error.empty() && max_residual <= tolerance; }
  void record(double r) {
    ++samples;
    if (std::isnan(max_residual)) return;  // NaN sticks
    if (!(r <= max_residual)) max_residual = r;
  }
};

struct SuiteReport {
  std::string name;
  std::vector<Check> checks;
  // Calibrated constants and diagnostics (e.g. the global symplectic sign).
  std::vector<std::pair<std::string, double>> info;
  double seconds = 0.0;

  bool pass() const;
  std::size_t samples() const;
  // Gated check with the largest residual/tolerance ratio (or the first failing one).
  const Check* worst() const;
};

SuiteReport check_conservation(const VerifyConfig& cfg);
SuiteReport check_roundtrip(const VerifyConfig& cfg);
SuiteReport check_energy(const VerifyConfig& cfg);
SuiteReport check_symplectic(const VerifyConfig& cfg);
SuiteReport check_anti_symplectic(const VerifyConfig& cfg);
SuiteReport check_equivariance(const VerifyConfig& cfg);
SuiteReport check_intertwine(const VerifyConfig& cfg);
SuiteReport check_poisson(const VerifyConfig& cfg);
SuiteReport check_algebroid(const VerifyConfig& cfg);
SuiteReport check_action(const VerifyConfig& cfg);
SuiteReport check_sigma(const VerifyConfig& cfg);
SuiteReport check_hodograph(const VerifyConfig& cfg);
SuiteReport check_explicit(const VerifyConfig& cfg);
SuiteReport check_conformal(const VerifyConfig& cfg);

struct SuiteEntry {
  std::string name;
  std::function<SuiteReport(const VerifyConfig&)> run;
};

// Every suite, in report order.
const std::vector<SuiteEntry>& suite_registry();

}  // namespace confham
