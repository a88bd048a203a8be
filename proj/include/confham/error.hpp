#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace confham {

enum class ErrorKind {
  collision,          // r = 0, or the integrator's collision guard fired
  north_pole,         // evaluation on the fibre over the pole N (h = rho)
  singular_momentum,  // rho^2 + zeta p^2 = 0 (excluded momentum sphere)
  zero_momentum,      // p = 0 in the inversion lift
  degenerate,         // L = 0, |W| = 0, |OM| = 0 ...
  wrong_branch,       // energy sign inconsistent with the requested signature
  zero_energy,        // E in the zero band where the E != 0 machinery is undefined
  radicand,           // negative radicand in the glued S-map
  tangency,           // Q-side tangent delta violates the linearised constraints
  non_convergence,    // integrator step collapse or iteration budget exhausted
  root_find,          // bracketing / Newton failure
  monotonicity,       // sigma_phi not strictly monotone
  fibre_mismatch,     // algebroid elements over different base points
  invalid_argument,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; callers that need to
// branch on the cause use kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::collision: return "collision guard";
    case ErrorKind::north_pole: return "north pole";
    case ErrorKind::singular_momentum: return "singular momentum";
    case ErrorKind::zero_momentum: return "zero momentum";
    case ErrorKind::degenerate: return "degenerate point";
    case ErrorKind::wrong_branch: return "wrong branch";
    case ErrorKind::zero_energy: return "zero energy";
    case ErrorKind::radicand: return "negative radicand";
    case ErrorKind::tangency: return "tangency violation";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::root_find: return "root find";
    case ErrorKind::monotonicity: return "monotonicity";
    case ErrorKind::fibre_mismatch: return "fibre mismatch";
    case ErrorKind::invalid_argument: return "invalid argument";
  }
  return "error";
}

}  // namespace confham
