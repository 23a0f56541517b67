#ifndef KOTHE_ORLICZ_HPP
#define KOTHE_ORLICZ_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kothe/core.hpp"
#include "kothe/seqcore.hpp"

namespace kothe {

/// M(t) <= c t^p (or >= for lower bounds) on [0, t1].
struct PowerBound {
  double c = 1.0;
  double p = 1.0;
  double t1 = 0.0;
};

class OrliczFunction {
 public:
  enum class Kind { Power, Mtilde, MtildeConjugate, PowerConjugate, Conjugate, Custom };

  struct CustomRule {
    std::string name;
    std::function<double(double)> eval;
    std::optional<PowerBound> upper0;
    std::optional<PowerBound> lower0;
    Tri delta2 = Tri::Unknown;
  };

  struct Impl;

  OrliczFunction();
  static OrliczFunction power(double p, double c = 1.0);
  static OrliczFunction mtilde();
  /// Closed form of (t^2 ⊖ M̃).
  static OrliczFunction mtilde_conjugate();
  /// Closed form of (u^a ⊖ u^b).
  static OrliczFunction power_conjugate(double a, double b);
  /// (N ⊖ M) evaluated by the brute-force supremum.
  static OrliczFunction conjugate(const OrliczFunction& N, const OrliczFunction& M, int grid = 4096);
  static OrliczFunction custom(CustomRule rule);
  /// N ⊖ M using a closed form when one is known.
  static OrliczFunction conjugate_of(const OrliczFunction& N, const OrliczFunction& M, int grid = 4096);

  Kind kind() const;
  std::string name() const;
  double operator()(double t) const;
  /// log M(e^x); -inf where M vanishes.
  double log_eval(double x) const;
  /// Certified [lower, upper] for log M(e^x).
  std::pair<double, double> log_eval_bounds(double x) const;
  double inverse(double u) const;
  /// log M^{-1}(e^{lu}) as a bracket [lo, hi].
  std::pair<double, double> log_inverse(double lu) const;
  std::optional<PowerBound> upper_at_zero() const;
  std::optional<PowerBound> lower_at_zero() const;
  /// Largest a with M = 0 on [0, a].
  double vanishes_below() const;
  bool degenerate() const { return vanishes_below() > 0.0; }
  Tri delta2() const;
  /// Logarithms of kink locations in [e^{xmin}, 1].
  std::vector<double> log_breakpoints(double xmin) const;

  double p() const;
  double c() const;
  double a() const;
  double b() const;
  const OrliczFunction* conj_N() const;
  const OrliczFunction* conj_M() const;
  int grid() const;

  bool operator==(const OrliczFunction& o) const;
  bool operator!=(const OrliczFunction& o) const { return !(*this == o); }

 private:
  explicit OrliczFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Exponent sequence p_n >= 1; infinite values only appear in derived rules.
class ExponentRule {
 public:
  enum class Kind { Constant, TableTail, Formula, Derived };

  static ExponentRule constant(double p);
  static ExponentRule table(std::vector<double> values, double tail);
  /// p_n = c0 + c1 n^{-e}.
  static ExponentRule formula(double c0, double c1, double e);
  /// 1/r_n = 1/q_n - 1/p_n with r_n = inf when p_n = q_n.
  static ExponentRule derived(const ExponentRule& p, const ExponentRule& q);

  Kind kind() const { return kind_; }
  double at(long long n) const;
  /// [inf, sup] of the rule over n >= from.
  std::pair<double, double> range_from(long long from) const;
  /// lim p_n.
  double limit() const;
  double value() const { return c_; }
  const std::vector<double>& values() const { return table_; }
  double tail() const { return tail_; }
  double c0() const { return c0_; }
  double c1() const { return c1_; }
  double e() const { return e_; }
  bool is_constant() const;
  bool operator==(const ExponentRule& o) const;
  void validate(bool allow_infinite = false) const;

 private:
  Kind kind_ = Kind::Constant;
  double c_ = 1.0;
  std::vector<double> table_;
  double tail_ = 1.0;
  double c0_ = 1.0, c1_ = 0.0, e_ = 1.0;
  std::shared_ptr<const ExponentRule> p_, q_;
};

/// Indexed family {M_n} generating a Musielak–Orlicz space.
class OrliczFamily {
 public:
  enum class Kind { Constant, Table, Nakano, Conjugate };

  static OrliczFamily constant(OrliczFunction M);
  static OrliczFamily table(std::vector<OrliczFunction> head, OrliczFunction tail);
  static OrliczFamily nakano(ExponentRule p);
  /// {N_n ⊖ M_n}.
  static OrliczFamily conjugate(const OrliczFamily& N, const OrliczFamily& M);

  Kind kind() const { return kind_; }
  OrliczFunction at(long long n) const;
  double eval(long long n, double t) const;
  /// Uniform bound M_n(t) <= c t^p on [0, t1] for n >= from.
  std::optional<PowerBound> upper_from(long long from) const;
  std::optional<PowerBound> lower_from(long long from) const;
  /// min over n >= from of the vanishing threshold.
  double vanishes_below_from(long long from) const;
  const OrliczFunction& function() const { return M_; }
  const std::vector<OrliczFunction>& head() const { return head_; }
  const ExponentRule& exponents() const { return p_; }
  const OrliczFamily* conj_N() const { return N_.get(); }
  const OrliczFamily* conj_M() const { return Mf_.get(); }
  bool operator==(const OrliczFamily& o) const;

 private:
  Kind kind_ = Kind::Constant;
  OrliczFunction M_;
  std::vector<OrliczFunction> head_;
  ExponentRule p_;
  std::shared_ptr<const OrliczFamily> N_, Mf_;
};

/// Luxemburg–Nakano norm inf{ρ > 0 : Σ M_n(|x_n|/ρ) <= 1}.
Bracket luxemburg_norm(const OrliczFamily& Ms, const SequenceSpec& x, const Truncation& N);
Bracket luxemburg_norm(const OrliczFunction& M, const SequenceSpec& x, const Truncation& N);
/// Σ M_n(|x_n|/ρ) over the explicit part of x.
double modular(const OrliczFamily& Ms, const std::vector<double>& x, double rho);

struct ConjugateOptions {
  int grid = 4096;
  int refine_top = 8;
};

struct ConjugateResult {
  Bracket value;
  double log_lower = -kInf;
  double log_upper = -kInf;
  double argmax = 0.0;
};

/// sup_{0<=s<=1} [N(ts) - M(s)] with a certified upper bound.
ConjugateResult young_conjugate_generalized(const OrliczFunction& N, const OrliczFunction& M, double t,
                                            const ConjugateOptions& opt = {});
ConjugateResult young_conjugate_generalized_log(const OrliczFunction& N, const OrliczFunction& M, double log_t,
                                                const ConjugateOptions& opt = {});

ExponentRule nakano_multiplier_exponents(const ExponentRule& ps, const ExponentRule& qs, long long sample_n = 4096);

struct Delta2Report {
  double max_ratio = 0.0;
  double witness_t = 0.0;
  bool divergent = false;
  std::vector<std::pair<double, double>> ratios;
};

Delta2Report delta2_evidence(const OrliczFunction& M, const std::vector<double>& t_grid, double threshold = 1e6);

struct NakanoCell {
  double ell = 0.0;
  double k = 0.0;
  Bracket sum;
};

struct NakanoReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<NakanoCell> cells;
  double witness_ell = 0.0;
  double witness_lower = 0.0;
  std::string reason;
};

NakanoReport nakano_compactness(const SequenceSpec& lambda, const ExponentRule& ps, const ExponentRule& qs,
                                const std::vector<double>& ell_grid, const std::vector<double>& k_grid,
                                long long N = 4096);
NakanoReport nakano_compactness(const SequenceSpec& lambda, const ExponentRule& ps, const ExponentRule& qs);
std::vector<double> default_ell_grid();
std::vector<double> default_k_grid();

double appendix_mtilde(double t);
double appendix_conjugate(double t);
/// log of the closed-form conjugate at e^{log_t}.
double appendix_conjugate_log(double log_t);
/// Index n of the active branch of the closed-form conjugate at t (0 where it vanishes).
long long appendix_conjugate_branch(double t);
/// Point where branches n and n+1 of the conjugate meet.
double appendix_branch_boundary(long long n);
/// The ε_n of u_n = 2 sqrt(n + ε_n)/(n + 1).
double appendix_epsilon(long long n);

/// R(t) = M0^{-1}(t) (M1 ⊖ M0)^{-1}(t) / M1^{-1}(t).
Bracket factorization_ratio(const OrliczFunction& M0, const OrliczFunction& M1, double t);
Bracket factorization_ratio_log(const OrliczFunction& M0, const OrliczFunction& M1, double log_t,
                                const OrliczFunction* conj = nullptr);

}  // namespace kothe

#endif
