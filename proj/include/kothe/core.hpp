#ifndef KOTHE_CORE_HPP
#define KOTHE_CORE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kothe {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorKind {
  InvalidArgument,
  NonMonotoneTail,
  UnboundedTail,
  DivergentTail,
  NotInSpace,
  UnknownDual,
  ModularDivergent,
  ExponentOrder,
  BranchOverflow,
  InverseDomain,
  HypothesisUnmet,
  NotBounded,
  UnsupportedTail,
  OutsideSupport,
  UnsupportedIntegrand,
};

const char* to_string(ErrorKind k);

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  /// Validation failures are caller mistakes; everything else is computational.
  bool is_validation() const { return kind_ == ErrorKind::InvalidArgument; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

enum class Certainty { Certified, Heuristic };

/// Interval [lower, upper] containing the quantity of interest.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  Certainty status = Certainty::Certified;
  std::string diagnostics;

  static Bracket exact(double v) { return Bracket{v, v, Certainty::Certified, {}}; }
  static Bracket of(double lo, double hi, Certainty s = Certainty::Certified) {
    return Bracket{lo, hi, s, {}};
  }
  bool certified() const { return status == Certainty::Certified; }
  double mid() const { return std::isfinite(upper) ? 0.5 * (lower + upper) : lower; }
  double width() const { return upper - lower; }
  bool contains(double v, double tol = 0.0) const { return v >= lower - tol && v <= upper + tol; }
};

enum class Tri { Yes, No, Unknown };
const char* to_string(Tri t);

enum class Verdict { Compact, NonCompact, Inconclusive, NotBounded };
const char* to_string(Verdict v);

enum class Membership { Member, NonMember, Inconclusive };
const char* to_string(Membership m);

/// log(m + 1), the logarithmic factor used by every envelope.
inline double logfac(double m) { return std::log1p(m); }

}  // namespace kothe

#endif
