#include "kothe/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kothe {

namespace {

bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

SequenceSpec pattern_seq(double a, double v, double s, double beta) {
  return SequenceSpec({}, pattern_tail(a, {v}, s, beta, 0.0));
}

// Δ of c t^α at integers from `from` on, forward or backward.
TailPtr power_increment_tail(double c, double alpha, bool backward) {
  if (alpha == 0.0 || c == 0.0) return zero_tail();
  if (alpha == 1.0) return constant_tail(c);
  FunctionTailData d;
  if (backward) {
    d.value = [c, alpha](long long n) {
      double m = static_cast<double>(n);
      return c * (std::pow(m, alpha) - std::pow(m - 1.0, alpha));
    };
    double K = c * std::max(1.0, alpha * std::pow(2.0, 1.0 - alpha));
    d.upper = [K, alpha](long long) { return Envelope{K, alpha - 1.0, 0.0}; };
  } else {
    d.value = [c, alpha](long long n) {
      double m = static_cast<double>(n);
      return c * std::pow(m, alpha) * std::expm1(alpha * std::log1p(1.0 / m));
    };
    d.upper = [c, alpha](long long) { return Envelope{c * alpha, alpha - 1.0, 0.0}; };
  }
  d.profile = Profile::exact(alpha - 1.0, 0.0, c * alpha);
  d.nonincreasing_from = 1;
  d.sign = 1;
  return function_tail(std::move(d));
}

}  // namespace

ConcaveWeight ConcaveWeight::power(double alpha, double c) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) raise(ErrorKind::InvalidArgument, "power weight needs alpha in (0, 1]");
  if (!finite_pos(c)) raise(ErrorKind::InvalidArgument, "power weight needs c > 0");
  ConcaveWeight w;
  w.kind_ = Kind::Power;
  w.alpha_ = alpha;
  w.c_ = c;
  return w;
}

ConcaveWeight ConcaveWeight::table(std::vector<double> values, double alpha) {
  if (values.empty()) raise(ErrorKind::InvalidArgument, "table weight needs values");
  if (!(alpha >= 0.0 && alpha <= 1.0)) raise(ErrorKind::InvalidArgument, "table weight tail needs alpha in [0, 1]");
  for (double v : values)
    if (!finite_pos(v)) raise(ErrorKind::InvalidArgument, "table weight values must be positive");
  ConcaveWeight w;
  w.kind_ = Kind::Table;
  w.alpha_ = alpha;
  w.c_ = values.back() / std::pow(static_cast<double>(values.size()), alpha);
  w.vals_ = std::move(values);
  return w;
}

ConcaveWeight ConcaveWeight::rational(double A, double B) {
  if (!finite_pos(A) || !(B >= 0.0 && std::isfinite(B))) raise(ErrorKind::InvalidArgument, "rational weight needs A > 0, B >= 0");
  if (B == 0.0) return power(0.0, A);
  ConcaveWeight w;
  w.kind_ = Kind::Rational;
  w.A_ = A;
  w.B_ = B;
  return w;
}

ConcaveWeight ConcaveWeight::affine(double a0, double a1) {
  if (!(a0 >= 0.0 && a1 >= 0.0 && std::isfinite(a0) && std::isfinite(a1)) || a0 + a1 == 0.0)
    raise(ErrorKind::InvalidArgument, "affine weight needs a0, a1 >= 0, not both zero");
  if (a0 == 0.0) return power(1.0, a1);
  if (a1 == 0.0) return power(0.0, a0);
  ConcaveWeight w;
  w.kind_ = Kind::Affine;
  w.a0_ = a0;
  w.a1_ = a1;
  return w;
}

std::string ConcaveWeight::name() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::Power:
      if (c_ != 1.0) os << c_ << "*";
      os << "t^" << alpha_;
      break;
    case Kind::Table:
      os << "table[" << vals_.size() << "]+t^" << alpha_;
      break;
    case Kind::Rational:
      os << A_ << "*t/(t+" << B_ << ")";
      break;
    case Kind::Affine:
      os << a0_ << "+" << a1_ << "*t";
      break;
  }
  return os.str();
}

double ConcaveWeight::operator()(double t) const {
  if (t < 0.0) raise(ErrorKind::InvalidArgument, "weight evaluated at negative t");
  switch (kind_) {
    case Kind::Power:
      return alpha_ == 0.0 ? c_ : c_ * std::pow(t, alpha_);
    case Kind::Table: {
      double m = static_cast<double>(vals_.size());
      if (t >= m) return c_ * std::pow(t, alpha_);
      if (t <= 1.0) return vals_[0] * t;
      auto i = static_cast<std::size_t>(std::floor(t));
      double f = t - static_cast<double>(i);
      return vals_[i - 1] + f * (vals_[i] - vals_[i - 1]);
    }
    case Kind::Rational:
      return A_ * t / (t + B_);
    case Kind::Affine:
      return a0_ + a1_ * t;
  }
  return 0.0;
}

double ConcaveWeight::increment(long long n, bool backward) const {
  if (n < 1) raise(ErrorKind::InvalidArgument, "increment index starts at 1");
  double m = static_cast<double>(n);
  if (backward) {
    if (n == 1) return (*this)(1.0);
    return (*this)(m) - (*this)(m - 1.0);
  }
  if (kind_ == Kind::Power) {
    if (alpha_ == 0.0) return 0.0;
    return c_ * std::pow(m, alpha_) * std::expm1(alpha_ * std::log1p(1.0 / m));
  }
  if (kind_ == Kind::Rational) return A_ * B_ / ((m + B_) * (m + 1.0 + B_));
  if (kind_ == Kind::Affine) return a1_;
  if (m >= static_cast<double>(vals_.size()))
    return alpha_ == 0.0 ? 0.0 : c_ * std::pow(m, alpha_) * std::expm1(alpha_ * std::log1p(1.0 / m));
  return (*this)(m + 1.0) - (*this)(m);
}

ConcaveWeight ConcaveWeight::dual() const {
  switch (kind_) {
    case Kind::Power:
      return power(1.0 - alpha_, 1.0 / c_);
    case Kind::Table: {
      ConcaveWeight w;
      w.kind_ = Kind::Table;
      w.alpha_ = 1.0 - alpha_;
      w.c_ = 1.0 / c_;
      for (std::size_t i = 0; i < vals_.size(); ++i) w.vals_.push_back(static_cast<double>(i + 1) / vals_[i]);
      return w;
    }
    case Kind::Rational:
      return affine(B_ / A_, 1.0 / A_);
    case Kind::Affine:
      return rational(1.0 / a1_, a0_ / a1_);
  }
  return *this;
}

bool ConcaveWeight::bounded() const {
  if (kind_ == Kind::Rational) return true;
  if (kind_ == Kind::Affine) return false;
  return alpha_ == 0.0;
}

double ConcaveWeight::limit() const {
  if (kind_ == Kind::Rational) return A_;
  if (bounded()) return c_;
  return kInf;
}

double ConcaveWeight::asymptotic_ratio(double s) const {
  if (kind_ == Kind::Rational) return 1.0;
  if (kind_ == Kind::Affine) return s;
  return std::pow(s, alpha_);
}

SequenceSpec ConcaveWeight::sequence() const {
  switch (kind_) {
    case Kind::Power:
      return alpha_ == 0.0 ? SequenceSpec({}, constant_tail(c_)) : pattern_seq(0.0, c_, 0.0, alpha_);
    case Kind::Table: {
      TailPtr t = alpha_ == 0.0 ? constant_tail(c_) : pattern_tail(0.0, {c_}, 0.0, alpha_, 0.0);
      return SequenceSpec(vals_, t);
    }
    case Kind::Rational:
      return pattern_seq(A_, -A_ * B_, B_, -1.0);
    case Kind::Affine:
      return pattern_seq(a0_, a1_, 0.0, 1.0);
  }
  return {};
}

SequenceSpec ConcaveWeight::reciprocal() const {
  switch (kind_) {
    case Kind::Power:
      return alpha_ == 0.0 ? SequenceSpec({}, constant_tail(1.0 / c_)) : pattern_seq(0.0, 1.0 / c_, 0.0, -alpha_);
    case Kind::Table: {
      std::vector<double> p;
      for (double v : vals_) p.push_back(1.0 / v);
      TailPtr t = alpha_ == 0.0 ? constant_tail(1.0 / c_) : pattern_tail(0.0, {1.0 / c_}, 0.0, -alpha_, 0.0);
      return SequenceSpec(p, t);
    }
    case Kind::Rational:
      return pattern_seq(1.0 / A_, B_ / A_, 0.0, -1.0);
    case Kind::Affine:
      return pattern_seq(0.0, 1.0 / a1_, a0_ / a1_, -1.0);
  }
  return {};
}

SequenceSpec ConcaveWeight::over_n() const {
  switch (kind_) {
    case Kind::Power:
      return alpha_ == 1.0 ? SequenceSpec({}, constant_tail(c_)) : pattern_seq(0.0, c_, 0.0, alpha_ - 1.0);
    case Kind::Table: {
      std::vector<double> p;
      for (std::size_t i = 0; i < vals_.size(); ++i) p.push_back(vals_[i] / static_cast<double>(i + 1));
      TailPtr t = alpha_ == 1.0 ? constant_tail(c_) : pattern_tail(0.0, {c_}, 0.0, alpha_ - 1.0, 0.0);
      return SequenceSpec(p, t);
    }
    case Kind::Rational:
      return pattern_seq(0.0, A_, B_, -1.0);
    case Kind::Affine:
      return pattern_seq(a1_, a0_, 0.0, -1.0);
  }
  return {};
}

SequenceSpec ConcaveWeight::n_over() const {
  switch (kind_) {
    case Kind::Power:
      return alpha_ == 1.0 ? SequenceSpec({}, constant_tail(1.0 / c_)) : pattern_seq(0.0, 1.0 / c_, 0.0, 1.0 - alpha_);
    case Kind::Table: {
      std::vector<double> p;
      for (std::size_t i = 0; i < vals_.size(); ++i) p.push_back(static_cast<double>(i + 1) / vals_[i]);
      TailPtr t = alpha_ == 1.0 ? constant_tail(1.0 / c_) : pattern_tail(0.0, {1.0 / c_}, 0.0, 1.0 - alpha_, 0.0);
      return SequenceSpec(p, t);
    }
    case Kind::Rational:
      return pattern_seq(B_ / A_, 1.0 / A_, 0.0, 1.0);
    case Kind::Affine:
      return pattern_seq(1.0 / a1_, -a0_ / (a1_ * a1_), a0_ / a1_, -1.0);
  }
  return {};
}

SequenceSpec ConcaveWeight::increments(bool backward) const {
  switch (kind_) {
    case Kind::Power:
      if (backward && alpha_ != 1.0) {
        if (alpha_ == 0.0) return SequenceSpec({c_});
        return SequenceSpec({c_}, power_increment_tail(c_, alpha_, true));
      }
      return SequenceSpec({}, power_increment_tail(c_, alpha_, false));
    case Kind::Table: {
      std::vector<double> p;
      std::size_t m = vals_.size();
      if (backward) {
        p.push_back(vals_[0]);
        for (std::size_t i = 1; i < m; ++i) p.push_back(vals_[i] - vals_[i - 1]);
        if (alpha_ == 0.0) return SequenceSpec(p);
        FunctionTailData d;
        double c = c_, a = alpha_;
        d.value = [c, a](long long n) {
          double x = static_cast<double>(n);
          return c * (std::pow(x, a) - std::pow(x - 1.0, a));
        };
        double K = c * std::max(1.0, a * std::pow(2.0, 1.0 - a));
        d.upper = [K, a](long long) { return Envelope{K, a - 1.0, 0.0}; };
        d.profile = Profile::exact(a - 1.0, 0.0, c * a);
        d.nonincreasing_from = 1;
        d.sign = 1;
        return SequenceSpec(p, function_tail(std::move(d)));
      }
      for (std::size_t i = 1; i < m; ++i) p.push_back(vals_[i] - vals_[i - 1]);
      return SequenceSpec(p, power_increment_tail(c_, alpha_, false));
    }
    case Kind::Rational: {
      double A = A_, B = B_;
      FunctionTailData d;
      d.value = [A, B](long long n) {
        double x = static_cast<double>(n);
        return A * B / ((x + B) * (x + 1.0 + B));
      };
      d.upper = [A, B](long long) { return Envelope{A * B, -2.0, 0.0}; };
      d.profile = Profile::exact(-2.0, 0.0, A * B);
      d.nonincreasing_from = 1;
      d.sign = 1;
      if (backward) {
        FunctionTailData b = d;
        b.value = [A, B](long long n) {
          double x = static_cast<double>(n);
          return A * B / ((x + B) * (x - 1.0 + B));
        };
        double K = std::max(4.0 * A * B, A / (1.0 + B));
        b.upper = [K](long long) { return Envelope{K, -2.0, 0.0}; };
        return SequenceSpec({A / (1.0 + B)}, function_tail(std::move(b)));
      }
      return SequenceSpec({}, function_tail(std::move(d)));
    }
    case Kind::Affine:
      if (backward) return SequenceSpec({a0_ + a1_}, constant_tail(a1_));
      return SequenceSpec({}, constant_tail(a1_));
  }
  return {};
}

void ConcaveWeight::validate() const {
  const int G = 256;
  double prev_t = 1.0, prev_v = (*this)(1.0), prev_slope = kInf;
  if (!finite_pos(prev_v)) raise(ErrorKind::InvalidArgument, "weight must be positive at 1");
  double hi = std::max(1e12, 10.0 * static_cast<double>(vals_.size()));
  for (int i = 1; i < G; ++i) {
    double t = std::exp(std::log(hi) * i / (G - 1));
    double v = (*this)(t);
    if (!finite_pos(v)) raise(ErrorKind::InvalidArgument, "weight must be positive on the grid");
    if (v < prev_v * (1.0 - 1e-14)) raise(ErrorKind::InvalidArgument, "weight must be increasing");
    double slope = (v - prev_v) / (t - prev_t);
    if (slope > prev_slope * (1.0 + 1e-9) + 1e-15) raise(ErrorKind::InvalidArgument, "weight must be concave");
    prev_t = t;
    prev_v = v;
    prev_slope = slope;
  }
  for (std::size_t i = 1; i + 1 < vals_.size(); ++i) {
    if (vals_[i] < vals_[i - 1]) raise(ErrorKind::InvalidArgument, "weight table must be increasing");
    if (vals_[i + 1] - vals_[i] > (vals_[i] - vals_[i - 1]) * (1.0 + 1e-12))
      raise(ErrorKind::InvalidArgument, "weight table increments must be non-increasing");
  }
}

bool ConcaveWeight::operator==(const ConcaveWeight& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Power:
      return alpha_ == o.alpha_ && c_ == o.c_;
    case Kind::Table:
      return alpha_ == o.alpha_ && vals_ == o.vals_;
    case Kind::Rational:
      return A_ == o.A_ && B_ == o.B_;
    case Kind::Affine:
      return a0_ == o.a0_ && a1_ == o.a1_;
  }
  return false;
}

// ---------------------------------------------------------------- dilation

std::vector<double> default_s_grid() {
  std::vector<double> s;
  for (int k = -32; k <= 32; ++k) s.push_back(std::pow(10.0, k / 4.0));
  return s;
}

std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int k = 0; k <= 12 * 64; ++k) t.push_back(std::pow(10.0, k / 64.0));
  return t;
}

Bracket dilation_function(const ConcaveWeight& phi, double s, const std::vector<double>& t_grid) {
  if (!(s > 0.0)) raise(ErrorKind::InvalidArgument, "dilation parameter must be positive");
  double t0 = std::max(1.0, 1.0 / s);
  std::vector<double> ts;
  ts.push_back(t0);
  for (double t : t_grid)
    if (t > t0) ts.push_back(t);
  std::sort(ts.begin(), ts.end());
  double T = ts.back();
  if (phi.kind() == ConcaveWeight::Kind::Table) {
    double m = static_cast<double>(phi.values().size());
    double need = std::max(10.0 * m, 10.0 * m / s);
    while (T < need) {
      T *= 10.0;
      ts.push_back(T);
    }
  }
  auto ratio = [&](double t) { return phi(s * t) / phi(t); };
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    lo = std::max(lo, ratio(ts[i]));
    if (i + 1 < ts.size()) hi = std::max(hi, phi(s * ts[i + 1]) / phi(ts[i]));
  }
  double beyond = std::max(ratio(T), phi.asymptotic_ratio(s));
  lo = std::max(lo, phi.asymptotic_ratio(s));
  hi = std::max({hi, beyond, lo});
  return Bracket::of(lo, hi);
}

DilationIndices dilation_indices(const ConcaveWeight& phi, const std::vector<double>& s_grid,
                                 const std::vector<double>& t_grid) {
  if (s_grid.empty() || t_grid.empty()) raise(ErrorKind::InvalidArgument, "dilation grids must be non-empty");
  double smin = *std::min_element(s_grid.begin(), s_grid.end());
  double smax = *std::max_element(s_grid.begin(), s_grid.end());
  if (!(smin > 0.0) || std::log10(smax / smin) < 6.0 - 1e-9)
    raise(ErrorKind::InvalidArgument, "s grid must span at least six decades");
  DilationIndices out;
  out.s_grid = s_grid;
  // p = inf_{s<1} log s / log φ̄(s), q = sup_{s>1} log s / log φ̄(s)
  double p_up = kInf, p_est_lo = 1.0, q_lo = 1.0, q_est_hi = 1.0;
  bool have_small = false, have_large = false;
  for (double s : s_grid) {
    Bracket d = dilation_function(phi, s, t_grid);
    out.dilation.push_back(d);
    double ls = std::log(s);
    if (s < 1.0) {
      have_small = true;
      double lu = std::log(std::min(1.0, d.upper));
      double ll = std::log(std::min(1.0, d.lower));
      double up = lu < 0.0 ? ls / lu : kInf;
      p_up = std::min(p_up, up);
      if (s == smin) p_est_lo = ll < 0.0 ? ls / ll : kInf;
    } else if (s > 1.0) {
      have_large = true;
      double lu = std::log(std::max(1.0, d.upper));
      double ll = std::log(std::max(1.0, d.lower));
      double lo = lu > 0.0 ? ls / lu : kInf;
      q_lo = std::max(q_lo, lo);
      if (s == smax) q_est_hi = ll > 0.0 ? ls / ll : kInf;
    }
  }
  if (!have_small || !have_large) raise(ErrorKind::InvalidArgument, "s grid must contain points on both sides of 1");
  p_est_lo = std::max(1.0, std::min(p_est_lo, p_up));
  q_est_hi = std::max(q_est_hi, q_lo);
  out.p_lower = Bracket::of(p_est_lo, p_up, Certainty::Heuristic);
  out.q_upper = Bracket::of(q_lo, q_est_hi, Certainty::Heuristic);
  // exact asymptotics for the built-in rules
  double ip = 0.0, iq = 0.0;
  switch (phi.kind()) {
    case ConcaveWeight::Kind::Power:
    case ConcaveWeight::Kind::Table:
      ip = iq = phi.alpha() == 0.0 ? kInf : 1.0 / phi.alpha();
      break;
    case ConcaveWeight::Kind::Rational:
      ip = iq = kInf;
      break;
    case ConcaveWeight::Kind::Affine:
      ip = iq = 1.0;
      break;
  }
  if (out.p_lower.contains(ip, 1e-9 * std::max(1.0, ip)) || (std::isinf(ip) && std::isinf(out.p_lower.upper))) {
    out.p_lower.status = Certainty::Certified;
    out.p_lower.diagnostics = "rule asymptotics";
  }
  if (out.q_upper.contains(iq, 1e-9 * std::max(1.0, iq)) || (std::isinf(iq) && std::isinf(out.q_upper.upper))) {
    out.q_upper.status = Certainty::Certified;
    out.q_upper.diagnostics = "rule asymptotics";
  }
  return out;
}

DilationIndices dilation_indices(const ConcaveWeight& phi) {
  return dilation_indices(phi, default_s_grid(), default_t_grid());
}

}  // namespace kothe
