#include "kothe/seqcore.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kothe {

namespace {

double lg(double m) { return std::log1p(m); }

double gfun(double u, double beta, double gamma) {
  double v = beta == 0.0 ? 1.0 : std::pow(u, beta);
  if (gamma != 0.0) v *= std::pow(lg(u), gamma);
  return v;
}

// Smallest u >= 1 with (u+1) log(u+1) / u >= c; the left side is increasing.
double solve_h(double c) {
  auto h = [](double u) { return (u + 1.0) * lg(u) / u; };
  if (h(1.0) >= c) return 1.0;
  double hi = 2.0;
  while (h(hi) < c) {
    hi *= 2.0;
    if (hi > 1e300) return kInf;
  }
  double lo = hi / 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (h(mid) >= c ? hi : lo) = mid;
  }
  return hi;
}

// Smallest u >= 1 after which u^beta log(u+1)^gamma is non-decreasing.
double increasing_from(double beta, double gamma) {
  if (beta == 0.0 && gamma == 0.0) return 1.0;
  if (beta < 0.0) return kInf;
  if (beta == 0.0) return gamma > 0.0 ? 1.0 : kInf;
  if (gamma >= 0.0) return 1.0;
  return solve_h(-gamma / beta);
}

bool decays(double beta, double gamma) { return beta < 0.0 || (beta == 0.0 && gamma < 0.0); }
bool grows(double beta, double gamma) { return beta > 0.0 || (beta == 0.0 && gamma > 0.0); }

// sup_{u >= u0} u^beta log(u+1)^gamma for a non-growing shape.
double shape_sup(double u0, double beta, double gamma) {
  double ud = decreasing_from(beta, gamma);
  if (!std::isfinite(ud)) return kInf;
  return gfun(std::max(u0, ud), beta, gamma);
}

// Factor converting (m+s)^beta log(m+s+1)^gamma into m^beta log(m+1)^gamma for m >= n0.
double shift_factor(double s, double n0, double beta, double gamma) {
  double f = 1.0;
  if (s > 0.0 && beta > 0.0) f *= std::pow(1.0 + s / n0, beta);
  if (s > 0.0 && gamma > 0.0) f *= std::pow(lg(n0 + s) / lg(n0), gamma);
  return f;
}

long long ceil_ll(double v) {
  if (!std::isfinite(v) || v > 9e18) return kNever;
  return std::max(1LL, static_cast<long long>(std::ceil(v - 1e-12)));
}

long long gcd_ll(long long a, long long b) { return b == 0 ? a : gcd_ll(b, a % b); }

class GenericFunctionTail final : public Tail {
 public:
  explicit GenericFunctionTail(FunctionTailData d) : d_(std::move(d)) {}
  double at(long long n) const override { return d_.value(n); }
  Profile profile() const override { return d_.profile; }
  Envelope upper(long long n0) const override { return d_.upper(n0); }
  long long nonincreasing_from() const override { return d_.nonincreasing_from; }
  long long nondecreasing_from() const override { return d_.nondecreasing_from; }
  int eventual_sign() const override { return d_.sign; }
  bool is_zero() const override { return d_.profile.zero; }

 private:
  FunctionTailData d_;
};

class ProductTail final : public Tail {
 public:
  ProductTail(TailPtr a, TailPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  double at(long long n) const override { return a_->at(n) * b_->at(n); }
  Profile profile() const override {
    Profile A = a_->profile(), B = b_->profile();
    Profile r;
    r.known = A.known && B.known;
    r.beta = A.beta + B.beta;
    r.gamma = A.gamma + B.gamma;
    r.sup_hi = A.sup_hi * B.sup_hi;
    r.sup_lo = std::max(A.inf_lo * B.sup_lo, A.sup_lo * B.inf_lo);
    r.inf_lo = A.inf_lo * B.inf_lo;
    r.inf_hi = std::min(A.inf_hi * B.sup_hi, A.sup_hi * B.inf_hi);
    r.freq_lo = std::max(A.freq_lo * B.inf_lo, A.inf_lo * B.freq_lo);
    return r;
  }
  Envelope upper(long long n0) const override {
    Envelope A = a_->upper(n0), B = b_->upper(n0);
    return Envelope{A.K * B.K, A.beta + B.beta, A.gamma + B.gamma};
  }
  long long nonincreasing_from() const override {
    long long x = a_->nonincreasing_from(), y = b_->nonincreasing_from();
    if (x == kNever || y == kNever) return kNever;
    return std::max(x, y);
  }
  long long nondecreasing_from() const override {
    long long x = a_->nondecreasing_from(), y = b_->nondecreasing_from();
    if (x == kNever || y == kNever) return kNever;
    return std::max(x, y);
  }
  int eventual_sign() const override { return a_->eventual_sign() * b_->eventual_sign(); }
  std::optional<double> cesaro_mean() const override {
    Profile A = a_->profile(), B = b_->profile();
    if (A.known && B.known && A.decays() && B.flat()) return 0.0;
    if (A.known && B.known && B.decays() && A.flat()) return 0.0;
    return std::nullopt;
  }

 private:
  TailPtr a_, b_;
};

class ShiftAbsTail final : public Tail {
 public:
  ShiftAbsTail(TailPtr t, long long s) : t_(std::move(t)), s_(s) {}
  double at(long long n) const override { return std::fabs(t_->at(n + s_)); }
  Profile profile() const override { return t_->profile(); }
  Envelope upper(long long n0) const override {
    Envelope e = t_->upper(n0 + s_);
    e.K *= shift_factor(static_cast<double>(s_), static_cast<double>(n0), e.beta, e.gamma);
    return e;
  }
  long long nonincreasing_from() const override {
    long long d = t_->nonincreasing_from();
    return d == kNever ? kNever : std::max(1LL, d - s_);
  }
  long long nondecreasing_from() const override {
    long long d = t_->nondecreasing_from();
    return d == kNever ? kNever : std::max(1LL, d - s_);
  }
  int eventual_sign() const override { return 1; }
  std::optional<double> cesaro_mean() const override {
    auto m = t_->cesaro_mean();
    int sg = t_->eventual_sign();
    if (m && sg != 0) return std::fabs(*m);
    return std::nullopt;
  }

 private:
  TailPtr t_;
  long long s_;
};

class DilateTail final : public Tail {
 public:
  explicit DilateTail(TailPtr t) : t_(std::move(t)) {}
  double at(long long n) const override { return t_->at((n + 1) / 2); }
  Profile profile() const override {
    Profile p = t_->profile();
    double f = std::pow(2.0, -p.beta);
    p.sup_lo *= f;
    p.sup_hi *= f;
    p.inf_lo *= f;
    p.inf_hi *= f;
    p.freq_lo *= f;
    return p;
  }
  Envelope upper(long long n0) const override {
    long long h = (n0 + 1) / 2;
    Envelope e = t_->upper(h);
    if (e.beta < 0.0) e.K *= std::pow(2.0, -e.beta);
    if (e.gamma < 0.0) {
      double rho = lg(0.5 * static_cast<double>(n0)) / lg(static_cast<double>(n0));
      e.K *= std::pow(rho, e.gamma);
    }
    return e;
  }
  long long nonincreasing_from() const override {
    long long d = t_->nonincreasing_from();
    return d == kNever ? kNever : 2 * d - 1;
  }
  long long nondecreasing_from() const override {
    long long d = t_->nondecreasing_from();
    return d == kNever ? kNever : 2 * d - 1;
  }
  int eventual_sign() const override { return t_->eventual_sign(); }
  std::optional<double> cesaro_mean() const override { return t_->cesaro_mean(); }

 private:
  TailPtr t_;
};

// out_n = (S_D + sum_{D<k<=n} T_k) / n for n > D.
class HardyTail final : public Tail {
 public:
  HardyTail(TailPtr t, long long D, double SD) : t_(std::move(t)), D_(D), SD_(SD) {
    H_ = D_ + std::max<long long>(D_, 1) + 16384;
    cum_.resize(static_cast<std::size_t>(H_ - D_));
    double s = SD_;
    for (long long n = D_ + 1; n <= H_; ++n) {
      s += t_->at(n);
      cum_[static_cast<std::size_t>(n - D_ - 1)] = s;
    }
    analyse();
  }

  double at(long long n) const override {
    if (n <= D_) return 0.0;
    if (n <= H_) return cum_[static_cast<std::size_t>(n - D_ - 1)] / static_cast<double>(n);
    double s = cum_.back();
    for (long long k = H_ + 1; k <= n; ++k) s += t_->at(k);
    return s / static_cast<double>(n);
  }
  Profile profile() const override { return prof_; }
  Envelope upper(long long n0) const override {
    n0 = std::max(n0, D_ + 1);
    Envelope e = t_->upper(D_ + 1);
    double Dd = static_cast<double>(D_);
    double A = 0.0, beta = -1.0, gamma = 0.0;
    double B = std::fabs(SD_);
    if (e.K == 0.0) {
      A = 0.0;
    } else if (e.beta > -1.0) {
      double K = e.K;
      gamma = e.gamma;
      if (e.gamma < 0.0) {
        K *= std::pow(lg(Dd + 1.0), e.gamma);
        gamma = 0.0;
      }
      beta = e.beta;
      A = e.beta >= 0.0 ? K : K / (e.beta + 1.0);
    } else if (e.beta < -1.0 || e.gamma < -1.0) {
      B += envelope_power_sum(e, 1.0, D_ + 1);
    } else {
      double K = e.K;
      double g = e.gamma;
      if (g < 0.0) {
        K *= std::pow(lg(Dd + 1.0), g);
        g = 0.0;
      }
      double n0d = static_cast<double>(n0);
      // sum_{k<=m} 1/k <= 1 + log m <= (1/log(n0+1) + 1) log(m+1)
      A = K * (1.0 / lg(n0d) + 1.0);
      gamma = g + 1.0;
      beta = -1.0;
    }
    if (A == 0.0) return Envelope{B, -1.0, 0.0};
    double c;
    double n0d = static_cast<double>(n0);
    if (beta > -1.0) {
      c = shape_sup(n0d, -1.0 - beta, -gamma);
    } else {
      c = std::pow(lg(n0d), -gamma);
    }
    return Envelope{A + B * c, beta, gamma};
  }
  long long nonincreasing_from() const override { return nif_; }
  long long nondecreasing_from() const override { return ndf_; }
  int eventual_sign() const override { return sign_; }
  std::optional<double> cesaro_mean() const override { return t_->cesaro_mean(); }

 private:
  void analyse() {
    Profile T = t_->profile();
    int sg = t_->eventual_sign();
    auto mean = t_->cesaro_mean();
    prof_ = Profile{};
    sign_ = 0;
    if (!T.known) {
      prof_ = Profile::unknown();
    } else if (mean && *mean != 0.0) {
      prof_ = Profile::exact(0.0, 0.0, std::fabs(*mean));
      sign_ = *mean > 0 ? 1 : -1;
    } else if (T.beta > -1.0 && !(T.flat() && mean)) {
      prof_.beta = T.beta;
      prof_.gamma = T.gamma;
      double den = T.beta + 1.0;
      prof_.sup_hi = T.sup_hi / den;
      if (sg != 0) {
        prof_.inf_lo = T.inf_lo / den;
        prof_.sup_lo = prof_.inf_lo;
        prof_.freq_lo = prof_.inf_lo;
        prof_.inf_hi = prof_.sup_hi;
        sign_ = sg;
      }
    } else if (T.flat() && mean) {
      // zero Cesaro mean: bounded partial sums for periodic patterns
      const auto* p = dynamic_cast<const PatternTail*>(t_.get());
      prof_.beta = -1.0;
      prof_.gamma = 0.0;
      if (p && p->term_flat()) {
        const auto& v = p->v();
        double c = 0.0, lo = 0.0, hi = 0.0;
        for (double w : v) {
          c += p->a() + w;
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        prof_.sup_hi = std::fabs(SD_) + (hi - lo);
      } else {
        prof_.known = false;
        prof_.sup_hi = kInf;
      }
    } else if (T.beta < -1.0 || (T.beta == -1.0 && T.gamma < -1.0)) {
      Envelope e = t_->upper(H_ + 1);
      double rest = envelope_power_sum(e, 1.0, H_ + 1);
      double s = cum_.back();
      double lo = std::max(0.0, std::fabs(s) - rest);
      prof_.beta = -1.0;
      prof_.gamma = 0.0;
      prof_.sup_hi = std::fabs(s) + rest;
      prof_.sup_lo = prof_.inf_lo = prof_.freq_lo = lo;
      prof_.inf_hi = prof_.sup_hi;
      if (lo > 0.0) sign_ = s > 0 ? 1 : -1;
    } else {
      // beta == -1 and gamma >= -1: logarithmic growth of the partial sums
      prof_.beta = -1.0;
      if (T.gamma > -1.0) {
        prof_.gamma = T.gamma + 1.0;
        double den = T.gamma + 1.0;
        prof_.sup_hi = T.sup_hi / den;
        if (sg != 0) {
          prof_.inf_lo = prof_.sup_lo = prof_.freq_lo = T.inf_lo / den;
          prof_.inf_hi = prof_.sup_hi;
          sign_ = sg;
        }
      } else {
        prof_.known = false;
        prof_.gamma = 1.0;
        prof_.sup_hi = kInf;
        sign_ = sg;
      }
    }
    // monotonicity: with s*T eventually non-increasing and non-negative,
    // H_n >= T_{n+1} at one index propagates to every later index
    nif_ = kNever;
    ndf_ = kNever;
    if (sg != 0) {
      long long d = t_->nonincreasing_from();
      if (d != kNever) {
        for (long long n = std::max(d, D_ + 1); n < H_; ++n) {
          double h = sg * cum_[static_cast<std::size_t>(n - D_ - 1)] / static_cast<double>(n);
          if (h >= sg * t_->at(n + 1) && sg * t_->at(n + 1) >= 0.0) {
            nif_ = n;
            break;
          }
        }
      }
      long long u = t_->nondecreasing_from();
      if (u != kNever) {
        for (long long n = std::max(u, D_ + 1); n < H_; ++n) {
          double h = sg * cum_[static_cast<std::size_t>(n - D_ - 1)] / static_cast<double>(n);
          if (h <= sg * t_->at(n + 1) && h >= 0.0) {
            ndf_ = n;
            break;
          }
        }
      }
      if (sign_ == 0 && nif_ != kNever) sign_ = sg;
    }
  }

  TailPtr t_;
  long long D_;
  double SD_;
  long long H_ = 0;
  std::vector<double> cum_;
  Profile prof_;
  long long nif_ = kNever, ndf_ = kNever;
  int sign_ = 0;
};

// out_n = c * zeta(alpha + 1, n) = sum_{k>=n} c k^{-alpha} / k.
class CopsonPowerTail final : public Tail {
 public:
  CopsonPowerTail(double c, double alpha) : c_(c), alpha_(alpha) {}
  double at(long long n) const override { return c_ * hzeta(alpha_ + 1.0, static_cast<double>(n)); }
  Profile profile() const override { return Profile::exact(-alpha_, 0.0, std::fabs(c_) / alpha_); }
  Envelope upper(long long n0) const override {
    double n = static_cast<double>(std::max(1LL, n0));
    return Envelope{std::fabs(c_) * (1.0 / n + 1.0 / alpha_), -alpha_, 0.0};
  }
  long long nonincreasing_from() const override { return 1; }
  int eventual_sign() const override { return c_ > 0 ? 1 : -1; }
  std::optional<double> cesaro_mean() const override { return 0.0; }

  static double hzeta(double s, double q) {
    gsl_sf_result r;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    int status = gsl_sf_hzeta_e(s, q, &r);
    gsl_set_error_handler(old);
    if (status != GSL_SUCCESS) raise(ErrorKind::DivergentTail, "Hurwitz zeta evaluation failed");
    return r.val;
  }

 private:
  double c_, alpha_;
};

bool all_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

bool all_abs_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return std::fabs(x) == std::fabs(v.front()); });
}

}  // namespace

double Envelope::operator()(double m) const {
  if (K == 0.0) return 0.0;
  return K * gfun(m, beta, gamma);
}

Profile Profile::zero_profile() {
  Profile p;
  p.zero = true;
  return p;
}

Profile Profile::unknown() {
  Profile p;
  p.known = false;
  p.sup_hi = kInf;
  p.inf_hi = kInf;
  return p;
}

Profile Profile::exact(double beta, double gamma, double K) {
  Profile p;
  p.beta = beta;
  p.gamma = gamma;
  p.sup_lo = p.sup_hi = p.inf_lo = p.inf_hi = p.freq_lo = K;
  return p;
}

double decreasing_from(double beta, double gamma) {
  if (beta == 0.0 && gamma == 0.0) return 1.0;
  if (beta > 0.0) return kInf;
  if (beta == 0.0) return gamma < 0.0 ? 1.0 : kInf;
  if (gamma <= 0.0) return 1.0;
  return solve_h(gamma / -beta);
}

// ---------------------------------------------------------------- PatternTail

PatternTail::PatternTail(double a, std::vector<double> v, double shift, double beta, double gamma,
                         std::string label)
    : a_(a), v_(std::move(v)), s_(shift), beta_(beta), gamma_(gamma), label_(std::move(label)) {
  if (v_.empty()) raise(ErrorKind::InvalidArgument, "pattern tail needs at least one value");
  if (!std::isfinite(a_) || !std::isfinite(s_) || !std::isfinite(beta_) || !std::isfinite(gamma_))
    raise(ErrorKind::InvalidArgument, "pattern tail parameters must be finite");
  for (double x : v_)
    if (!std::isfinite(x)) raise(ErrorKind::InvalidArgument, "pattern tail values must be finite");
  if (s_ < 0.0) raise(ErrorKind::InvalidArgument, "pattern tail shift must be non-negative");
  bool vzero = std::all_of(v_.begin(), v_.end(), [](double x) { return x == 0.0; });
  if (vzero) {
    beta_ = 0.0;
    gamma_ = 0.0;
  }
  zero_ = vzero && a_ == 0.0;
}

double PatternTail::term(double n) const { return gfun(n + s_, beta_, gamma_); }

double PatternTail::at(long long n) const {
  if (zero_) return 0.0;
  std::size_t k = v_.size();
  double vi = v_[static_cast<std::size_t>((n - 1) % static_cast<long long>(k))];
  if (vi == 0.0) return a_;
  return a_ + vi * term(static_cast<double>(n));
}

Profile PatternTail::profile() const {
  if (zero_) return Profile::zero_profile();
  Profile p;
  if (term_flat()) {
    double hi = 0.0, lo = kInf;
    for (double x : v_) {
      double w = std::fabs(a_ + x);
      hi = std::max(hi, w);
      lo = std::min(lo, w);
    }
    p.sup_lo = p.sup_hi = p.freq_lo = hi;
    p.inf_lo = p.inf_hi = lo;
    return p;
  }
  if (a_ != 0.0 && term_decays()) return Profile::exact(0.0, 0.0, std::fabs(a_));
  p.beta = beta_;
  p.gamma = gamma_;
  double hi = 0.0, lo = kInf;
  for (double x : v_) {
    hi = std::max(hi, std::fabs(x));
    lo = std::min(lo, std::fabs(x));
  }
  p.sup_lo = p.sup_hi = p.freq_lo = hi;
  p.inf_lo = p.inf_hi = lo;
  return p;
}

Envelope PatternTail::upper(long long n0) const {
  if (zero_) return Envelope{0.0, 0.0, 0.0};
  n0 = std::max(1LL, n0);
  double n = static_cast<double>(n0);
  double maxv = 0.0;
  for (double x : v_) maxv = std::max(maxv, std::fabs(x));
  if (term_flat()) {
    double K = 0.0;
    for (double x : v_) K = std::max(K, std::fabs(a_ + x));
    return Envelope{K, 0.0, 0.0};
  }
  double f = shift_factor(s_, n, beta_, gamma_);
  if (a_ == 0.0) return Envelope{maxv * f, beta_, gamma_};
  if (term_decays()) return Envelope{std::fabs(a_) + maxv * shape_sup(n + s_, beta_, gamma_), 0.0, 0.0};
  double ui = increasing_from(beta_, gamma_);
  double tmin = gfun(std::max(n + s_, ui), beta_, gamma_);
  return Envelope{(std::fabs(a_) / tmin + maxv) * f, beta_, gamma_};
}

long long PatternTail::nonincreasing_from() const {
  if (zero_) return 1;
  if (term_flat()) {
    std::vector<double> w;
    for (double x : v_) w.push_back(std::fabs(a_ + x));
    return all_equal(w) ? 1 : kNever;
  }
  if (!all_abs_equal(v_)) return kNever;
  double ud = decreasing_from(beta_, gamma_);
  if (!std::isfinite(ud)) return kNever;
  if (a_ == 0.0) return ceil_ll(ud - s_);
  if (term_decays() && all_equal(v_) && (a_ > 0) == (v_.front() > 0)) return ceil_ll(ud - s_);
  return kNever;
}

long long PatternTail::nondecreasing_from() const {
  if (zero_) return 1;
  if (term_flat()) return nonincreasing_from();
  if (a_ == 0.0 || !term_decays() || !all_equal(v_) || (a_ > 0) == (v_.front() > 0)) return kNever;
  double ud = decreasing_from(beta_, gamma_);
  if (!std::isfinite(ud)) return kNever;
  long long lo = ceil_ll(ud - s_);
  double c = std::fabs(v_.front()), A = std::fabs(a_);
  auto ok = [&](long long m) { return c * term(static_cast<double>(m)) <= A; };
  if (ok(lo)) return lo;
  long long hi = lo;
  while (!ok(hi)) {
    if (hi > (1LL << 60)) return kNever;
    hi *= 2;
  }
  long long l = hi / 2;
  while (hi - l > 1) {
    long long mid = l + (hi - l) / 2;
    (ok(mid) ? hi : l) = mid;
  }
  return hi;
}

int PatternTail::eventual_sign() const {
  if (zero_) return 1;
  if (term_flat() || a_ == 0.0 || grows(beta_, gamma_)) {
    bool pos = true, neg = true;
    for (double x : v_) {
      double w;
      if (term_flat())
        w = a_ + x;
      else if (a_ == 0.0 || x != 0.0)
        w = x;
      else
        w = a_;
      if (w < 0) pos = false;
      if (w > 0) neg = false;
    }
    if (pos) return 1;
    if (neg) return -1;
    return 0;
  }
  return a_ > 0 ? 1 : -1;
}

std::optional<double> PatternTail::cesaro_mean() const {
  if (zero_) return 0.0;
  if (term_flat()) {
    double s = 0.0;
    for (double x : v_) s += a_ + x;
    return s / static_cast<double>(v_.size());
  }
  if (term_decays()) return a_;
  return std::nullopt;
}

TailPtr zero_tail() {
  static const TailPtr z = std::make_shared<PatternTail>(0.0, std::vector<double>{0.0}, 0.0, 0.0, 0.0, "zero");
  return z;
}

TailPtr power_tail(double c, double alpha) {
  if (!(alpha > 0.0)) raise(ErrorKind::InvalidArgument, "power tail needs alpha > 0");
  return std::make_shared<PatternTail>(0.0, std::vector<double>{c}, 0.0, -alpha, 0.0, "power");
}

TailPtr constant_tail(double c) {
  return std::make_shared<PatternTail>(c, std::vector<double>{0.0}, 0.0, 0.0, 0.0, "constant");
}

TailPtr periodic_tail(std::vector<double> values) {
  return std::make_shared<PatternTail>(0.0, std::move(values), 0.0, 0.0, 0.0, "periodic");
}

TailPtr power_log_tail(double c, double beta, double gamma) {
  return std::make_shared<PatternTail>(0.0, std::vector<double>{c}, 0.0, beta, gamma, "power_log");
}

TailPtr affine_power_tail(double a, double b, double alpha) {
  if (!(alpha > 0.0)) raise(ErrorKind::InvalidArgument, "affine power tail needs alpha > 0");
  return std::make_shared<PatternTail>(a, std::vector<double>{b}, 0.0, -alpha, 0.0, "affine_power");
}

TailPtr pattern_tail(double a, std::vector<double> v, double shift, double beta, double gamma) {
  return std::make_shared<PatternTail>(a, std::move(v), shift, beta, gamma, "pattern");
}

TailPtr function_tail(FunctionTailData data) {
  if (!data.value || !data.upper) raise(ErrorKind::InvalidArgument, "function tail needs value and envelope");
  return std::make_shared<GenericFunctionTail>(std::move(data));
}

TailPtr multiply(const TailPtr& a, const TailPtr& b) {
  if (a->is_zero() || b->is_zero()) return zero_tail();
  const auto* pa = dynamic_cast<const PatternTail*>(a.get());
  const auto* pb = dynamic_cast<const PatternTail*>(b.get());
  if (pa && pb) {
    auto flat_values = [](const PatternTail* p) {
      std::vector<double> w;
      for (double x : p->v()) w.push_back(p->a() + x);
      return w;
    };
    // a constant factor scales every coefficient
    for (int swap = 0; swap < 2; ++swap) {
      const PatternTail* c = swap ? pb : pa;
      const PatternTail* o = swap ? pa : pb;
      if (c->term_flat()) {
        auto w = flat_values(c);
        if (all_equal(w)) {
          std::vector<double> v = o->v();
          for (double& x : v) x *= w.front();
          return std::make_shared<PatternTail>(o->a() * w.front(), v, o->shift(), o->beta(), o->gamma());
        }
      }
    }
    auto combine = [](const std::vector<double>& x, const std::vector<double>& y) -> std::optional<std::vector<double>> {
      long long kx = static_cast<long long>(x.size()), ky = static_cast<long long>(y.size());
      long long l = kx / gcd_ll(kx, ky) * ky;
      if (l > 4096) return std::nullopt;
      std::vector<double> r(static_cast<std::size_t>(l));
      for (long long i = 0; i < l; ++i) r[i] = x[i % kx] * y[i % ky];
      return r;
    };
    if (pa->term_flat() && pb->term_flat()) {
      if (auto r = combine(flat_values(pa), flat_values(pb)))
        return std::make_shared<PatternTail>(0.0, *r, 0.0, 0.0, 0.0);
    }
    for (int swap = 0; swap < 2; ++swap) {
      const PatternTail* c = swap ? pb : pa;
      const PatternTail* o = swap ? pa : pb;
      if (c->term_flat() && o->a() == 0.0) {
        if (auto r = combine(flat_values(c), o->v()))
          return std::make_shared<PatternTail>(0.0, *r, o->shift(), o->beta(), o->gamma());
      }
    }
    if (pa->a() == 0.0 && pb->a() == 0.0 && pa->shift() == pb->shift()) {
      if (auto r = combine(pa->v(), pb->v()))
        return std::make_shared<PatternTail>(0.0, *r, pa->shift(), pa->beta() + pb->beta(),
                                             pa->gamma() + pb->gamma());
    }
  }
  return std::make_shared<ProductTail>(a, b);
}

TailPtr scale(const TailPtr& t, double c) { return multiply(t, constant_tail(c)); }

TailPtr abs_shift(const TailPtr& t, long long s) {
  if (t->is_zero()) return zero_tail();
  if (s < 0) raise(ErrorKind::InvalidArgument, "negative tail shift");
  if (const auto* p = dynamic_cast<const PatternTail*>(t.get())) {
    const auto& v = p->v();
    long long k = static_cast<long long>(v.size());
    if (p->term_flat()) {
      std::vector<double> w(v.size());
      for (long long j = 0; j < k; ++j) w[j] = std::fabs(p->a() + v[(j + s) % k]);
      return std::make_shared<PatternTail>(0.0, w, 0.0, 0.0, 0.0);
    }
    if (p->a() == 0.0) {
      std::vector<double> w(v.size());
      for (long long j = 0; j < k; ++j) w[j] = std::fabs(v[(j + s) % k]);
      return std::make_shared<PatternTail>(0.0, w, p->shift() + static_cast<double>(s), p->beta(), p->gamma());
    }
    if (k == 1 && (p->a() > 0) == (v[0] > 0)) {
      return std::make_shared<PatternTail>(std::fabs(p->a()), std::vector<double>{std::fabs(v[0])},
                                           p->shift() + static_cast<double>(s), p->beta(), p->gamma());
    }
  }
  return std::make_shared<ShiftAbsTail>(t, s);
}

// ---------------------------------------------------------------- SequenceSpec

SequenceSpec::SequenceSpec(std::vector<double> p, TailPtr t, TailPtr m)
    : prefix(std::move(p)), tail(t ? std::move(t) : zero_tail()), majorant(std::move(m)) {
  validate();
}

SequenceSpec make_sequence(std::vector<double> prefix, TailPtr tail) {
  return SequenceSpec(std::move(prefix), std::move(tail));
}

double SequenceSpec::at(long long n) const {
  if (n < 1) raise(ErrorKind::InvalidArgument, "sequence indices start at 1");
  if (n <= length()) return prefix[static_cast<std::size_t>(n - 1)];
  return tail->at(n);
}

std::vector<double> SequenceSpec::head(long long n) const {
  std::vector<double> out(static_cast<std::size_t>(std::max(0LL, n)));
  for (long long i = 1; i <= n; ++i) out[static_cast<std::size_t>(i - 1)] = at(i);
  return out;
}

long long SequenceSpec::support_end() const {
  if (!finite_support()) return kNever;
  long long e = 0;
  for (long long i = 0; i < length(); ++i)
    if (prefix[static_cast<std::size_t>(i)] != 0.0) e = i + 1;
  return e;
}

void SequenceSpec::validate() const {
  for (double x : prefix)
    if (!std::isfinite(x)) raise(ErrorKind::InvalidArgument, "sequence prefix entries must be finite");
  if (!tail) raise(ErrorKind::InvalidArgument, "sequence tail missing");
  if (majorant) {
    double prev = kInf;
    long long L = length();
    for (int i = 0; i < 64; ++i) {
      long long n = L + 1 + static_cast<long long>(std::floor(std::pow(2.0, 0.3 * i))) - 1;
      double m = majorant->at(n);
      double x = std::fabs(tail->at(n));
      if (!(m >= 0.0)) raise(ErrorKind::InvalidArgument, "tail majorant must be non-negative");
      if (m > prev) raise(ErrorKind::InvalidArgument, "tail majorant must be non-increasing");
      if (x > m * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "tail majorant fails at index " << n;
        raise(ErrorKind::InvalidArgument, os.str());
      }
      prev = m;
    }
  }
}

const char* to_string(Truncation::Policy p) {
  switch (p) {
    case Truncation::Policy::ZeroTailExact: return "ZeroTailExact";
    case Truncation::Policy::CertifiedTail: return "CertifiedTail";
    case Truncation::Policy::HeuristicTail: return "HeuristicTail";
  }
  return "CertifiedTail";
}

void Truncation::validate(const SequenceSpec& x) const {
  if (N < 1) raise(ErrorKind::InvalidArgument, "truncation N must be >= 1");
  if (policy == Policy::ZeroTailExact && !x.finite_support())
    raise(ErrorKind::InvalidArgument, "ZeroTailExact requires a zero tail");
}

// ---------------------------------------------------------------- bounds

double envelope_power_sum(const Envelope& e, double p, long long M) {
  if (e.K == 0.0) return 0.0;
  M = std::max(1LL, M);
  double b = p * e.beta, g = p * e.gamma;
  if (b > -1.0 || (b == -1.0 && g >= -1.0)) return kInf;
  double Kp = std::pow(e.K, p);
  double Md = static_cast<double>(M);
  auto f = [&](double m) { return gfun(m, b, g); };
  if (g == 0.0) return Kp * (std::pow(Md, b) + std::pow(Md, b + 1.0) / (-b - 1.0));
  if (g < 0.0) {
    if (b < -1.0) return Kp * std::pow(lg(Md), g) * (std::pow(Md, b) + std::pow(Md, b + 1.0) / (-b - 1.0));
    double s = 0.0;
    if (M == 1) {
      s += f(1.0);
      Md = 2.0;
    }
    return Kp * (s + f(Md) + std::pow(std::log(Md), g + 1.0) / (-g - 1.0));
  }
  // g > 0, b < -1: log(m+1)^g <= log(M+1)^g (m/M)^{g/log(M+1)}
  double eps = 1.0 / lg(Md);
  double b2 = b + g * eps;
  double s = 0.0;
  if (!(b2 < -1.0)) {
    double delta = std::min(1e-3, (-1.0 - b) / 2.0);
    double target = std::exp(g / (-1.0 - b - delta)) - 1.0;
    if (target > 1e7) return kInf;
    long long M2 = static_cast<long long>(std::ceil(target)) + 1;
    for (long long m = M; m < M2; ++m) s += f(static_cast<double>(m));
    M = std::max(M, M2);
    Md = static_cast<double>(M);
    eps = 1.0 / lg(Md);
    b2 = b + g * eps;
  }
  double factor = std::pow(lg(Md), g) * std::pow(Md, -g * eps);
  return Kp * (s + factor * (std::pow(Md, b2) + std::pow(Md, b2 + 1.0) / (-b2 - 1.0)));
}

Bracket limsup_abs(const Tail& t) {
  if (t.is_zero()) return Bracket::exact(0.0);
  Profile p = t.profile();
  if (p.known) {
    if (p.decays()) return Bracket::exact(0.0);
    if (p.grows()) return Bracket::of(p.sup_lo > 0.0 ? kInf : 0.0, kInf);
    return Bracket::of(p.sup_lo, p.sup_hi);
  }
  Envelope e = t.upper(1LL << 20);
  if (e.K == 0.0 || decays(e.beta, e.gamma)) return Bracket::exact(0.0);
  if (e.beta == 0.0 && e.gamma == 0.0) return Bracket::of(0.0, e.K);
  return Bracket::of(0.0, kInf);
}

Bracket sup_abs_from(const Tail& t, long long from) {
  if (t.is_zero()) return Bracket::exact(0.0);
  from = std::max(1LL, from);
  const long long W = 1LL << 16;
  long long nif = t.nonincreasing_from();
  if (nif <= from) return Bracket::exact(std::fabs(t.at(from)));
  if (nif != kNever && nif - from <= W) {
    double m = 0.0;
    for (long long i = from; i <= nif; ++i) m = std::max(m, std::fabs(t.at(i)));
    return Bracket::exact(m);
  }
  Bracket L = limsup_abs(t);
  long long ndf = t.nondecreasing_from();
  if (ndf != kNever && ndf - from <= W) {
    double m = 0.0;
    for (long long i = from; i < ndf; ++i) m = std::max(m, std::fabs(t.at(i)));
    return Bracket::of(std::max(m, L.lower), std::max(m, L.upper));
  }
  const long long w = 4096;
  double m = 0.0;
  for (long long i = from; i < from + w; ++i) m = std::max(m, std::fabs(t.at(i)));
  Envelope e = t.upper(from + w);
  double beyond;
  if (e.K == 0.0)
    beyond = 0.0;
  else if (grows(e.beta, e.gamma))
    beyond = kInf;
  else
    beyond = e.K * shape_sup(static_cast<double>(from + w), e.beta, e.gamma);
  Bracket r = Bracket::of(std::max(m, L.lower), std::max(m, beyond));
  if (r.lower > r.upper) r.upper = r.lower;
  return r;
}

Bracket power_sum_from(const Tail& t, double p, long long from) {
  if (t.is_zero()) return Bracket::exact(0.0);
  from = std::max(1LL, from);
  Profile pr = t.profile();
  if (pr.known && pr.freq_lo > 0.0) {
    double b = p * pr.beta, g = p * pr.gamma;
    if (b > -1.0 || (b == -1.0 && g >= -1.0)) {
      Bracket r = Bracket::of(kInf, kInf);
      r.diagnostics = "divergent tail";
      return r;
    }
  }
  Envelope e = t.upper(from);
  double U = envelope_power_sum(e, p, from);
  Bracket r = Bracket::of(0.0, U);
  if (!std::isfinite(U)) r.diagnostics = "no summable envelope";
  return r;
}

Bracket sup_abs(const SequenceSpec& x, long long from) {
  from = std::max(1LL, from);
  double m = 0.0;
  for (long long i = from; i <= x.length(); ++i) m = std::max(m, std::fabs(x.prefix[static_cast<std::size_t>(i - 1)]));
  long long f2 = std::max(from, x.length() + 1);
  Bracket b = sup_abs_from(*x.tail, f2);
  if (x.majorant) {
    Bracket bm = sup_abs_from(*x.majorant, f2);
    b.upper = std::min(b.upper, bm.upper);
    b.lower = std::min(b.lower, b.upper);
  }
  return Bracket::of(std::max(m, b.lower), std::max(m, b.upper), b.status);
}

Bracket power_sum(const SequenceSpec& x, double p, long long from) {
  from = std::max(1LL, from);
  double s = 0.0;
  for (long long i = from; i <= x.length(); ++i) s += std::pow(std::fabs(x.prefix[static_cast<std::size_t>(i - 1)]), p);
  long long f2 = std::max(from, x.length() + 1);
  Bracket b = power_sum_from(*x.tail, p, f2);
  if (x.majorant) {
    Bracket bm = power_sum_from(*x.majorant, p, f2);
    b.upper = std::min(b.upper, bm.upper);
  }
  return Bracket::of(s + b.lower, s + b.upper, b.status);
}

Bracket limsup_abs(const SequenceSpec& x) {
  Bracket b = limsup_abs(*x.tail);
  if (x.majorant) {
    Bracket bm = limsup_abs(*x.majorant);
    b.upper = std::min(b.upper, bm.upper);
  }
  return b;
}

// ---------------------------------------------------------------- operations

SequenceSpec absolute(const SequenceSpec& x) {
  std::vector<double> p = x.prefix;
  for (double& v : p) v = std::fabs(v);
  return SequenceSpec(std::move(p), abs_shift(x.tail, 0), x.majorant);
}

SequenceSpec decreasing_rearrangement(const SequenceSpec& x, const Truncation& N) {
  N.validate(x);
  if (x.finite_support()) {
    std::vector<double> p = x.prefix;
    for (double& v : p) v = std::fabs(v);
    std::stable_sort(p.begin(), p.end(), std::greater<double>());
    return SequenceSpec(std::move(p));
  }
  const Tail& T = *x.tail;
  long long L = x.length();
  long long d = T.nonincreasing_from();
  if (d == kNever) {
    // tails whose values never exceed their limsup: x* is the prefix excess followed by the limsup
    long long from = kNever;
    double ell = 0.0;
    const auto* p = dynamic_cast<const PatternTail*>(x.tail.get());
    if (p && p->term_flat()) {
      from = L + 1;
      ell = p->profile().sup_hi;
    } else if (long long u = T.nondecreasing_from(); u != kNever) {
      Bracket ls = limsup_abs(T);
      if (ls.lower == ls.upper) {
        from = std::max(u, L + 1);
        ell = ls.upper;
      }
    }
    if (from == kNever) raise(ErrorKind::NonMonotoneTail, "tail is not eventually monotone");
    if (from - L > (1LL << 24)) raise(ErrorKind::NonMonotoneTail, "tail monotone only far beyond the horizon");
    std::vector<double> top;
    for (long long i = 1; i < from; ++i) {
      double v = std::fabs(x.at(i));
      if (v > ell) top.push_back(v);
    }
    std::stable_sort(top.begin(), top.end(), std::greater<double>());
    while (static_cast<long long>(top.size()) < N.N) top.push_back(ell);
    return SequenceSpec(std::move(top), constant_tail(ell));
  }
  Profile pr = T.profile();
  if (pr.known && pr.grows() && pr.sup_lo > 0.0) raise(ErrorKind::UnboundedTail, "tail grows without bound");
  Bracket ls = limsup_abs(T);
  if (ls.lower != ls.upper) raise(ErrorKind::UnsupportedTail, "tail limit is not known exactly");
  double ell = ls.upper;
  long long D = std::max({N.N, L, d - 1});
  if (D - L > (1LL << 24)) raise(ErrorKind::NonMonotoneTail, "tail monotone only far beyond the horizon");
  std::vector<double> top;
  for (long long i = 1; i <= D; ++i) {
    double v = std::fabs(x.at(i));
    if (v > ell) top.push_back(v);
  }
  std::stable_sort(top.begin(), top.end(), std::greater<double>());
  std::vector<double> out;
  out.reserve(top.size() + static_cast<std::size_t>(N.N));
  long long j = D + 1;
  std::size_t ti = 0;
  long long steps = 0;
  while (ti < top.size()) {
    double tv = std::fabs(T.at(j));
    if (top[ti] >= tv) {
      out.push_back(top[ti++]);
    } else {
      out.push_back(tv);
      ++j;
    }
    if (++steps > (1LL << 24)) raise(ErrorKind::UnsupportedTail, "rearrangement merge does not terminate at desk scale");
  }
  while (static_cast<long long>(out.size()) < N.N) {
    out.push_back(std::fabs(T.at(j)));
    ++j;
  }
  long long s = j - 1 - static_cast<long long>(out.size());
  return SequenceSpec(std::move(out), abs_shift(x.tail, s));
}

SequenceSpec decreasing_majorant(const SequenceSpec& x, const Truncation& N) {
  N.validate(x);
  long long L = x.length();
  if (x.finite_support()) {
    std::vector<double> p(x.prefix.size());
    double m = 0.0;
    for (long long i = L - 1; i >= 0; --i) {
      m = std::max(m, std::fabs(x.prefix[i]));
      p[i] = m;
    }
    return SequenceSpec(std::move(p));
  }
  const Tail& T = *x.tail;
  Profile pr = T.profile();
  if (pr.known && pr.grows() && pr.sup_lo > 0.0) raise(ErrorKind::UnboundedTail, "tail supremum is infinite");
  long long d = T.nonincreasing_from();
  long long D;
  double beyond;
  TailPtr tail;
  if (d != kNever) {
    D = std::max({N.N, L, d});
    beyond = std::fabs(T.at(D + 1));
    tail = abs_shift(x.tail, 0);
  } else {
    const auto* p = dynamic_cast<const PatternTail*>(x.tail.get());
    long long u = T.nondecreasing_from();
    Bracket ls = limsup_abs(T);
    if (p && p->term_flat()) {
      D = std::max(N.N, L);
      beyond = ls.upper;
    } else if (u != kNever && ls.lower == ls.upper) {
      D = std::max({N.N, L, u});
      beyond = ls.upper;
    } else {
      if (!std::isfinite(sup_abs_from(T, L + 1).upper))
        raise(ErrorKind::UnboundedTail, "tail supremum is infinite");
      raise(ErrorKind::NonMonotoneTail, "tail supremum is not computable exactly");
    }
    if (!std::isfinite(beyond)) raise(ErrorKind::UnboundedTail, "tail supremum is infinite");
    tail = constant_tail(beyond);
  }
  if (D - L > (1LL << 24)) raise(ErrorKind::NonMonotoneTail, "tail monotone only far beyond the horizon");
  std::vector<double> out(static_cast<std::size_t>(D));
  double m = beyond;
  for (long long i = D; i >= 1; --i) {
    m = std::max(m, std::fabs(x.at(i)));
    out[static_cast<std::size_t>(i - 1)] = m;
  }
  return SequenceSpec(std::move(out), tail);
}

SequenceSpec hardy(const SequenceSpec& x, const Truncation& N) {
  N.validate(x);
  long long D = x.finite_support() ? x.length() : std::max(N.N, x.length());
  std::vector<double> out(static_cast<std::size_t>(D));
  double s = 0.0;
  for (long long n = 1; n <= D; ++n) {
    s += x.at(n);
    out[static_cast<std::size_t>(n - 1)] = s / static_cast<double>(n);
  }
  TailPtr tail;
  if (x.finite_support())
    tail = s == 0.0 ? zero_tail() : std::make_shared<PatternTail>(0.0, std::vector<double>{s}, 0.0, -1.0, 0.0);
  else
    tail = std::make_shared<HardyTail>(x.tail, D, s);
  return SequenceSpec(std::move(out), tail);
}

SequenceSpec copson(const SequenceSpec& x, const Truncation& N) {
  N.validate(x);
  long long L = x.length();
  double rest = 0.0;
  TailPtr tail = zero_tail();
  if (!x.finite_support()) {
    Profile pr = x.tail->profile();
    const auto* p = dynamic_cast<const PatternTail*>(x.tail.get());
    if (pr.known && pr.freq_lo > 0.0 && (pr.beta > 0.0 || (pr.beta == 0.0 && pr.gamma >= -1.0))) {
      if (pr.flat() && x.tail->cesaro_mean().value_or(1.0) == 0.0)
        raise(ErrorKind::UnsupportedTail, "conditionally convergent Copson tail");
      raise(ErrorKind::DivergentTail, "sum of x_k / k diverges");
    }
    if (!(p && p->a() == 0.0 && p->v().size() == 1 && p->shift() == 0.0 && p->gamma() == 0.0 && p->beta() < 0.0))
      raise(ErrorKind::UnsupportedTail, "Copson operator supports zero and power tails");
    double c = p->v()[0], alpha = -p->beta();
    rest = c * CopsonPowerTail::hzeta(alpha + 1.0, static_cast<double>(L + 1));
    tail = std::make_shared<CopsonPowerTail>(c, alpha);
  }
  std::vector<double> out(static_cast<std::size_t>(L));
  double s = rest;
  for (long long n = L; n >= 1; --n) {
    s += x.prefix[static_cast<std::size_t>(n - 1)] / static_cast<double>(n);
    out[static_cast<std::size_t>(n - 1)] = s;
  }
  return SequenceSpec(std::move(out), tail);
}

SequenceSpec maximal_function(const SequenceSpec& x, const Truncation& N) {
  return hardy(decreasing_rearrangement(x, N), Truncation{N.N, Truncation::Policy::CertifiedTail});
}

SequenceSpec dilate2(const SequenceSpec& x, const Truncation& N) {
  N.validate(x);
  long long L = x.length();
  std::vector<double> out(static_cast<std::size_t>(2 * L));
  for (long long n = 1; n <= 2 * L; ++n) out[static_cast<std::size_t>(n - 1)] = x.prefix[static_cast<std::size_t>((n + 1) / 2 - 1)];
  TailPtr tail = x.finite_support() ? zero_tail() : TailPtr(std::make_shared<DilateTail>(x.tail));
  return SequenceSpec(std::move(out), tail);
}

SequenceSpec pointwise_product(const SequenceSpec& x, const SequenceSpec& y) {
  long long L = std::max(x.length(), y.length());
  if (x.finite_support()) L = std::min(L, x.length());
  if (y.finite_support()) L = std::min(L, y.length());
  std::vector<double> out(static_cast<std::size_t>(L));
  for (long long n = 1; n <= L; ++n) out[static_cast<std::size_t>(n - 1)] = x.at(n) * y.at(n);
  return SequenceSpec(std::move(out), multiply(x.tail, y.tail));
}

SequenceSpec tail_restrict(const SequenceSpec& x, long long n) {
  if (n < 1) raise(ErrorKind::InvalidArgument, "tail_restrict index must be >= 1");
  long long L = std::max(x.length(), n - 1);
  std::vector<double> out(static_cast<std::size_t>(L));
  for (long long i = n; i <= L; ++i) out[static_cast<std::size_t>(i - 1)] = x.at(i);
  return SequenceSpec(std::move(out), x.tail, x.majorant);
}

}  // namespace kothe
