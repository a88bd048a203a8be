#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "confham/kepler.hpp"
#include "confham/verify.hpp"

namespace confham::cli {

// Exit statuses shared by every subcommand.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  KeplerParams params;
  double tol = 1e-11;
  std::uint64_t seed = 42;
  std::optional<int> samples;  // overrides every suite's own count
  std::string out;             // empty for stdout

  // Throws Error(invalid_argument) on non-positive constants or tol outside (0, 1e-3].
  void validate() const;
  VerifyConfig verify() const;
};

// Command-line suite names and the registry suites each one runs.
struct SuiteGroup {
  std::string name;
  std::vector<std::string> suites;
};
const std::vector<SuiteGroup>& suite_groups();

// Registry suites for a command-line name ("all" selects every suite).
std::vector<std::string> expand_suite(const std::string& name);

// Runs the named registry suites on up to `threads` workers. Results come back
// in the order of `names` whatever the completion order.
std::vector<SuiteReport> run_suites(const std::vector<std::string>& names, const VerifyConfig& cfg,
                                    unsigned threads);

// {name, samples, max_residual, tolerance, pass, worst, checks, info}.
// Timings are left out so reports are byte-identical across runs.
nlohmann::json report_json(const SuiteReport& rep);

// Trajectory CSV: t,rx,ry,rz,px,py,pz,E,Lx,Ly,Lz,ex,ey,ez. Rows already
// written stay in `out` when the integrator fails; the error is rethrown.
void write_trajectory(const RunConfig& cfg, const PhasePointE& x0, double t_final, int n_samples,
                      std::ostream& out);

// Delaunay flow of gls_map(x0): s,OMx,...,Wh,H,quadric,tangency.
void write_delaunay_flow(const RunConfig& cfg, const PhasePointE& x0, double s_final,
                         int n_samples, std::ostream& out);

struct MapSummary {
  int rows = 0;
  int errors = 0;
};

// which: moser | s | gls | gls-inverse | parabolic. Input is CSV; a header row
// selects columns by name (rx..pz, or OMx..Wh,sig for gls-inverse), otherwise
// the leading columns are read in that order. Per-row failures go to the
// trailing `error` column.
MapSummary map_points(const RunConfig& cfg, const std::string& which, std::istream& in,
                      std::ostream& out);

// Poisson table at x as JSON; `pass` compares every row against tolerance.
nlohmann::json brackets_json(const RunConfig& cfg, const PhasePointE& x, double tolerance = 1e-6);

// Full command line. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace confham::cli
