#ifndef KOTHE_RADEMACHER_HPP
#define KOTHE_RADEMACHER_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kothe/core.hpp"

namespace kothe {

/// sign(sin 2^n π t) for 1 <= n <= 50 and t in (0,1); 0 on dyadic breakpoints.
int rademacher(int n, double t);

/// Disjoint pieces (a_i, b_i] of length at most one, each mapped onto (0, b_i − a_i] by ω ↦ ω − a_i.
class MeasurePartition {
 public:
  MeasurePartition() = default;
  explicit MeasurePartition(std::vector<std::pair<double, double>> pieces);
  static MeasurePartition unit() { return MeasurePartition({{0.0, 1.0}}); }

  const std::vector<std::pair<double, double>>& pieces() const { return pieces_; }
  /// Index of the piece containing ω, or -1.
  int locate(double omega) const;
  double map(int piece, double omega) const { return omega - pieces_[static_cast<std::size_t>(piece)].first; }
  double measure() const;

 private:
  std::vector<std::pair<double, double>> pieces_;
};

int glued_rademacher(const MeasurePartition& P, int n, double omega);

/// Σ_j c_j ω^j on (lo, hi).
struct IntegrandTerm {
  std::vector<double> coeffs;
  double lo = -kInf;
  double hi = kInf;
};

class Integrand {
 public:
  enum class Kind { Piecewise, Custom };

  static Integrand polynomial(std::vector<double> coeffs);
  static Integrand indicator(double a, double b);
  static Integrand piecewise(std::vector<IntegrandTerm> terms);
  /// Evaluable but not integrable in closed form.
  static Integrand custom(std::string name, std::function<double(double)> f);

  Kind kind() const { return kind_; }
  const std::vector<IntegrandTerm>& terms() const { return terms_; }
  const std::string& name() const { return name_; }
  double operator()(double omega) const;
  /// Exact ∫_a^b f for piecewise polynomials.
  double integrate(double a, double b) const;

 private:
  Kind kind_ = Kind::Piecewise;
  std::vector<IntegrandTerm> terms_;
  std::string name_;
  std::function<double(double)> f_;
};

/// ∫_0^1 Π_i r_{n_i} on the dyadic mesh of the finest index.
double rademacher_integral(const std::vector<int>& ns);

/// ∫_Ω f r_n^Ω dμ by exact integration over the 2^n dyadic cells of every piece.
double glued_integral(const Integrand& f, const MeasurePartition& P, int n);

struct LemmaReport {
  std::vector<std::pair<int, double>> values;
  int window = 0;
  /// max |I_n| over the last window values.
  double trailing_max = 0.0;
};

LemmaReport lemma_r_demo(const Integrand& f, const MeasurePartition& P, int n_max);

}  // namespace kothe

#endif
