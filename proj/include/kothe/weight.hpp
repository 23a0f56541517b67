#ifndef KOTHE_WEIGHT_HPP
#define KOTHE_WEIGHT_HPP

#include <string>
#include <vector>

#include "kothe/core.hpp"
#include "kothe/seqcore.hpp"

namespace kothe {

/// Positive increasing concave φ on [1, ∞).
///
/// Power      c t^α
/// Table      φ(1..m) given, linear in between, c t^α beyond m
/// Rational   A t / (t + B), bounded by A
/// Affine     a0 + a1 t
class ConcaveWeight {
 public:
  enum class Kind { Power, Table, Rational, Affine };

  ConcaveWeight() = default;
  static ConcaveWeight power(double alpha, double c = 1.0);
  static ConcaveWeight table(std::vector<double> values, double alpha);
  static ConcaveWeight rational(double A, double B);
  static ConcaveWeight affine(double a0, double a1);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double c() const { return c_; }
  const std::vector<double>& values() const { return vals_; }
  double A() const { return A_; }
  double B() const { return B_; }
  double a0() const { return a0_; }
  double a1() const { return a1_; }
  std::string name() const;

  double operator()(double t) const;
  /// φ(n+1) − φ(n), or φ(n) − φ(n−1) with φ(0) = 0 when backward.
  double increment(long long n, bool backward = false) const;

  /// t/φ(t).
  ConcaveWeight dual() const;
  bool bounded() const;
  /// lim φ(t) as t → ∞.
  double limit() const;
  /// lim φ(st)/φ(t) as t → ∞.
  double asymptotic_ratio(double s) const;

  SequenceSpec sequence() const;
  SequenceSpec reciprocal() const;
  /// φ(n)/n.
  SequenceSpec over_n() const;
  /// n/φ(n).
  SequenceSpec n_over() const;
  SequenceSpec increments(bool backward = false) const;

  /// Positivity, monotonicity and concavity on 256 log-spaced points.
  void validate() const;

  bool operator==(const ConcaveWeight& o) const;
  bool operator!=(const ConcaveWeight& o) const { return !(*this == o); }

 private:
  Kind kind_ = Kind::Power;
  double alpha_ = 1.0;
  double c_ = 1.0;
  std::vector<double> vals_;
  double A_ = 0.0, B_ = 0.0;
  double a0_ = 0.0, a1_ = 0.0;
};

struct DilationIndices {
  Bracket p_lower;
  Bracket q_upper;
  std::vector<double> s_grid;
  /// φ̄(s) brackets on s_grid.
  std::vector<Bracket> dilation;
};

std::vector<double> default_s_grid();
std::vector<double> default_t_grid();

/// Lower and upper indices of φ̄(s) = sup_{t >= max(1, 1/s)} φ(st)/φ(t).
DilationIndices dilation_indices(const ConcaveWeight& phi, const std::vector<double>& s_grid,
                                 const std::vector<double>& t_grid);
DilationIndices dilation_indices(const ConcaveWeight& phi);
/// Bracket on φ̄(s) from a finite t grid.
Bracket dilation_function(const ConcaveWeight& phi, double s, const std::vector<double>& t_grid);

}  // namespace kothe

#endif
