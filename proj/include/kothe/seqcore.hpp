#ifndef KOTHE_SEQCORE_HPP
#define KOTHE_SEQCORE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kothe/core.hpp"

namespace kothe {

inline constexpr long long kNever = std::numeric_limits<long long>::max();

/// Certified bound |x_m| <= K m^beta log(m+1)^gamma.
struct Envelope {
  double K = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double operator()(double m) const;
};

/// Asymptotic shape of |x_m| relative to m^beta log(m+1)^gamma.
/// sup/inf bracket the limsup and liminf of that ratio; freq_lo is a value the
/// ratio approaches along a set of indices of positive density.
struct Profile {
  bool zero = false;
  bool known = true;
  double beta = 0.0;
  double gamma = 0.0;
  double sup_lo = 0.0, sup_hi = 0.0;
  double inf_lo = 0.0, inf_hi = 0.0;
  double freq_lo = 0.0;

  bool decays() const { return beta < 0.0 || (beta == 0.0 && gamma < 0.0); }
  bool flat() const { return beta == 0.0 && gamma == 0.0; }
  bool grows() const { return beta > 0.0 || (beta == 0.0 && gamma > 0.0); }
  bool converges() const { return inf_lo == sup_hi; }

  static Profile zero_profile();
  static Profile unknown();
  static Profile exact(double beta, double gamma, double K);
};

/// Values of a sequence beyond its explicit prefix, with the asymptotic data
/// every certified bound is built from. Indices are absolute and 1-based.
class Tail {
 public:
  virtual ~Tail() = default;
  virtual double at(long long n) const = 0;
  virtual Profile profile() const = 0;
  /// Envelope valid for every m >= n0.
  virtual Envelope upper(long long n0) const = 0;
  /// |x_m| is non-increasing for m >= the returned index (kNever when unknown).
  virtual long long nonincreasing_from() const { return kNever; }
  /// |x_m| is non-decreasing for m >= the returned index and converges.
  virtual long long nondecreasing_from() const { return kNever; }
  /// Eventual sign of x_m: +1, -1, or 0 when mixed or unknown.
  virtual int eventual_sign() const { return 0; }
  /// lim (1/n) sum_{k<=n} x_k when the tail has a known Cesaro mean.
  virtual std::optional<double> cesaro_mean() const { return std::nullopt; }
  virtual bool is_zero() const { return false; }
};

using TailPtr = std::shared_ptr<const Tail>;

/// x_n = a + v[(n-1) mod k] (n+s)^beta log(n+s+1)^gamma.
class PatternTail final : public Tail {
 public:
  PatternTail(double a, std::vector<double> v, double shift, double beta, double gamma,
              std::string label = "pattern");

  double at(long long n) const override;
  Profile profile() const override;
  Envelope upper(long long n0) const override;
  long long nonincreasing_from() const override;
  long long nondecreasing_from() const override;
  int eventual_sign() const override;
  std::optional<double> cesaro_mean() const override;
  bool is_zero() const override { return zero_; }

  double a() const { return a_; }
  const std::vector<double>& v() const { return v_; }
  double shift() const { return s_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  const std::string& label() const { return label_; }

  bool term_decays() const { return beta_ < 0.0 || (beta_ == 0.0 && gamma_ < 0.0); }
  bool term_flat() const { return beta_ == 0.0 && gamma_ == 0.0; }
  double term(double n) const;

 private:
  double a_;
  std::vector<double> v_;
  double s_;
  double beta_;
  double gamma_;
  std::string label_;
  bool zero_;
};

TailPtr zero_tail();
TailPtr power_tail(double c, double alpha);
TailPtr constant_tail(double c);
TailPtr periodic_tail(std::vector<double> values);
TailPtr power_log_tail(double c, double beta, double gamma);
TailPtr affine_power_tail(double a, double b, double alpha);
TailPtr pattern_tail(double a, std::vector<double> v, double shift, double beta, double gamma);

/// Tail given by a closure together with its analysis data.
struct FunctionTailData {
  std::function<double(long long)> value;
  Profile profile;
  std::function<Envelope(long long)> upper;
  long long nonincreasing_from = kNever;
  long long nondecreasing_from = kNever;
  int sign = 0;
};
TailPtr function_tail(FunctionTailData data);

TailPtr multiply(const TailPtr& a, const TailPtr& b);
TailPtr abs_shift(const TailPtr& t, long long s);
TailPtr scale(const TailPtr& t, double c);

/// A real sequence: explicit prefix (index 1 = prefix[0]) plus tail rule.
struct SequenceSpec {
  std::vector<double> prefix;
  TailPtr tail = zero_tail();
  TailPtr majorant;

  SequenceSpec() = default;
  SequenceSpec(std::vector<double> p, TailPtr t = zero_tail(), TailPtr m = nullptr);

  double at(long long n) const;
  long long length() const { return static_cast<long long>(prefix.size()); }
  std::vector<double> head(long long n) const;
  bool finite_support() const { return tail->is_zero(); }
  /// Largest index carrying a nonzero value when the support is finite.
  long long support_end() const;
  void validate() const;
};

SequenceSpec make_sequence(std::vector<double> prefix, TailPtr tail = zero_tail());

struct Truncation {
  enum class Policy { ZeroTailExact, CertifiedTail, HeuristicTail };
  long long N = 1024;
  Policy policy = Policy::CertifiedTail;

  static Truncation exact(long long n) { return Truncation{n, Policy::ZeroTailExact}; }
  static Truncation certified(long long n) { return Truncation{n, Policy::CertifiedTail}; }
  void validate(const SequenceSpec& x) const;
};

const char* to_string(Truncation::Policy p);

SequenceSpec decreasing_rearrangement(const SequenceSpec& x, const Truncation& N);
SequenceSpec decreasing_majorant(const SequenceSpec& x, const Truncation& N);
SequenceSpec hardy(const SequenceSpec& x, const Truncation& N);
SequenceSpec copson(const SequenceSpec& x, const Truncation& N);
SequenceSpec maximal_function(const SequenceSpec& x, const Truncation& N);
SequenceSpec dilate2(const SequenceSpec& x, const Truncation& N);
SequenceSpec pointwise_product(const SequenceSpec& x, const SequenceSpec& y);
SequenceSpec tail_restrict(const SequenceSpec& x, long long n);
SequenceSpec absolute(const SequenceSpec& x);

/// sup_{m >= from} |x_m|.
Bracket sup_abs(const SequenceSpec& x, long long from = 1);
/// sum_{m >= from} |x_m|^p.
Bracket power_sum(const SequenceSpec& x, double p, long long from = 1);
/// limsup |x_m|.
Bracket limsup_abs(const SequenceSpec& x);

Bracket sup_abs_from(const Tail& t, long long from);
Bracket power_sum_from(const Tail& t, double p, long long from);
Bracket limsup_abs(const Tail& t);

/// Certified upper bound for sum_{m >= M} (K m^beta log(m+1)^gamma)^p.
double envelope_power_sum(const Envelope& e, double p, long long M);
/// Smallest u >= 1 after which u^beta log(u+1)^gamma is non-increasing (kInf if never).
double decreasing_from(double beta, double gamma);

}  // namespace kothe

#endif
