#include "kothe/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mtilde_table.hpp"

namespace kothe {

namespace {

constexpr double kLog2 = 0.6931471805599453;

// log(e^a - e^b) for a > b; -inf otherwise.
double log_diff(double a, double b) {
  if (!(a > b)) return -kInf;
  if (b == -kInf) return a;
  return a + std::log(-std::expm1(b - a));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

struct OrliczFunction::Impl {
  Kind kind = Kind::Power;
  double p = 1.0, c = 1.0;
  double a = 0.0, b = 0.0;
  std::shared_ptr<const OrliczFunction> N, M;
  int grid = 4096;
  CustomRule custom;
};

OrliczFunction::OrliczFunction() : impl_(std::make_shared<Impl>()) {}

OrliczFunction OrliczFunction::power(double p, double c) {
  if (!(p >= 1.0)) raise(ErrorKind::InvalidArgument, "power Orlicz function needs p >= 1");
  if (!(c > 0.0 && std::isfinite(c))) raise(ErrorKind::InvalidArgument, "power Orlicz function needs c > 0");
  auto i = std::make_shared<Impl>();
  i->kind = Kind::Power;
  i->p = p;
  i->c = c;
  return OrliczFunction(i);
}

OrliczFunction OrliczFunction::mtilde() {
  auto i = std::make_shared<Impl>();
  i->kind = Kind::Mtilde;
  return OrliczFunction(i);
}

OrliczFunction OrliczFunction::mtilde_conjugate() {
  auto i = std::make_shared<Impl>();
  i->kind = Kind::MtildeConjugate;
  return OrliczFunction(i);
}

OrliczFunction OrliczFunction::power_conjugate(double a, double b) {
  if (!(a >= 1.0 && b >= 1.0 && std::isfinite(a) && std::isfinite(b)))
    raise(ErrorKind::InvalidArgument, "power conjugate needs finite exponents >= 1");
  auto i = std::make_shared<Impl>();
  i->kind = Kind::PowerConjugate;
  i->a = a;
  i->b = b;
  return OrliczFunction(i);
}

OrliczFunction OrliczFunction::conjugate(const OrliczFunction& N, const OrliczFunction& M, int grid) {
  if (grid < 16) raise(ErrorKind::InvalidArgument, "conjugate grid must have at least 16 points");
  auto i = std::make_shared<Impl>();
  i->kind = Kind::Conjugate;
  i->N = std::make_shared<OrliczFunction>(N);
  i->M = std::make_shared<OrliczFunction>(M);
  i->grid = grid;
  return OrliczFunction(i);
}

OrliczFunction OrliczFunction::custom(CustomRule rule) {
  if (!rule.eval) raise(ErrorKind::InvalidArgument, "custom Orlicz function needs an evaluator");
  if (rule.eval(0.0) != 0.0) raise(ErrorKind::InvalidArgument, "Orlicz function must vanish at zero");
  double prev = 0.0, prev_slope = 0.0;
  for (int k = 1; k <= 256; ++k) {
    double t = std::pow(10.0, -6.0 + 8.0 * k / 256.0), tp = std::pow(10.0, -6.0 + 8.0 * (k - 1) / 256.0);
    double v = rule.eval(t);
    if (!(v > prev)) raise(ErrorKind::InvalidArgument, "Orlicz function must be strictly increasing");
    double slope = (v - prev) / (t - (k == 1 ? 0.0 : tp));
    if (k > 1 && slope < prev_slope * (1.0 - 1e-9)) raise(ErrorKind::InvalidArgument, "Orlicz function must be convex");
    prev = v;
    prev_slope = slope;
  }
  auto i = std::make_shared<Impl>();
  i->kind = Kind::Custom;
  i->custom = std::move(rule);
  return OrliczFunction(i);
}

OrliczFunction OrliczFunction::conjugate_of(const OrliczFunction& N, const OrliczFunction& M, int grid) {
  if (N.kind() == Kind::Power && M.kind() == Kind::Power && N.c() == 1.0 && M.c() == 1.0 && std::isfinite(N.p()) &&
      std::isfinite(M.p()))
    return power_conjugate(N.p(), M.p());
  if (N.kind() == Kind::Power && N.p() == 2.0 && N.c() == 1.0 && M.kind() == Kind::Mtilde) return mtilde_conjugate();
  return conjugate(N, M, grid);
}

OrliczFunction::Kind OrliczFunction::kind() const { return impl_->kind; }
double OrliczFunction::p() const { return impl_->p; }
double OrliczFunction::c() const { return impl_->c; }
double OrliczFunction::a() const { return impl_->a; }
double OrliczFunction::b() const { return impl_->b; }
const OrliczFunction* OrliczFunction::conj_N() const { return impl_->N.get(); }
const OrliczFunction* OrliczFunction::conj_M() const { return impl_->M.get(); }
int OrliczFunction::grid() const { return impl_->grid; }

std::string OrliczFunction::name() const {
  const Impl& i = *impl_;
  switch (i.kind) {
    case Kind::Power:
      if (std::isinf(i.p)) return "t^inf";
      return (i.c == 1.0 ? std::string() : fmt(i.c) + "*") + "t^" + fmt(i.p);
    case Kind::Mtilde:
      return "mtilde";
    case Kind::MtildeConjugate:
      return "t^2 (-) mtilde";
    case Kind::PowerConjugate:
      return "t^" + fmt(i.a) + " (-) t^" + fmt(i.b);
    case Kind::Conjugate:
      return "(" + i.N->name() + ") (-) (" + i.M->name() + ")";
    case Kind::Custom:
      return i.custom.name;
  }
  return "?";
}

double OrliczFunction::log_eval(double x) const {
  const Impl& i = *impl_;
  if (x == -kInf) return -kInf;
  switch (i.kind) {
    case Kind::Power:
      if (std::isinf(i.p)) return x <= 0.0 ? -kInf : kInf;
      return std::log(i.c) + i.p * x;
    case Kind::Mtilde: {
      if (x >= 0.0) return 2.0 * x;
      // M̃ is the max of its affine pieces; the neighbours absorb branch rounding at the kinks
      long long n = detail::mtilde_branch(x);
      double best = -kInf;
      for (long long m = std::max(1LL, n - 1); m <= n + 1; ++m) {
        double L = std::lgamma(static_cast<double>(m) + 1.0);
        double y = x + L + kLog2;  // log(2 t m!)
        if (y > 0.0) best = std::max(best, -2.0 * L + y + std::log1p(-std::exp(-y)));
      }
      return best;
    }
    case Kind::MtildeConjugate:
      return appendix_conjugate_log(x);
    case Kind::PowerConjugate: {
      double a = i.a, b = i.b;
      double lta = a * x;
      if (a >= b) return lta > 0.0 ? log_diff(lta, 0.0) : -kInf;
      if (lta > std::log(b / a)) return log_diff(lta, 0.0);
      double ls = (std::log(a / b) + lta) / (b - a);
      return lta + std::log1p(-a / b) + a * ls;
    }
    case Kind::Conjugate:
      return young_conjugate_generalized_log(*i.N, *i.M, x, {i.grid, 8}).log_lower;
    case Kind::Custom: {
      double v = i.custom.eval(std::exp(x));
      return v > 0.0 ? std::log(v) : -kInf;
    }
  }
  return -kInf;
}

std::pair<double, double> OrliczFunction::log_eval_bounds(double x) const {
  if (impl_->kind == Kind::Mtilde && x < detail::mtilde_log_b(detail::kMtildeBranches)) return {3.0 * x, 2.0 * x};
  if (impl_->kind == Kind::Conjugate) {
    ConjugateResult r = young_conjugate_generalized_log(*impl_->N, *impl_->M, x, {impl_->grid, 8});
    return {r.log_lower, r.log_upper};
  }
  double v = log_eval(x);
  return {v, v};
}

double OrliczFunction::operator()(double t) const {
  if (t < 0.0 || std::isnan(t)) raise(ErrorKind::InvalidArgument, "Orlicz function evaluated at negative t");
  if (t == 0.0) return 0.0;
  const Impl& i = *impl_;
  if (i.kind == Kind::Power) {
    if (std::isinf(i.p)) return t <= 1.0 ? 0.0 : kInf;
    return i.c * std::pow(t, i.p);
  }
  if (i.kind == Kind::Custom) return i.custom.eval(t);
  if (i.kind == Kind::PowerConjugate) {
    double a = i.a, b = i.b, ta = std::pow(t, a);
    if (a >= b || ta > b / a) return std::max(0.0, ta - 1.0);
    double s = std::pow(a * ta / b, 1.0 / (b - a));
    return ta * (1.0 - a / b) * std::pow(s, a);
  }
  return std::exp(log_eval(std::log(t)));
}

std::pair<double, double> OrliczFunction::log_inverse(double lu) const {
  const Impl& i = *impl_;
  if (lu == -kInf) {
    double v = vanishes_below();
    double l = v > 0.0 ? std::log(v) : -kInf;
    return {l, l};
  }
  if (i.kind == Kind::Power) {
    if (std::isinf(i.p)) return {0.0, 0.0};
    double v = (lu - std::log(i.c)) / i.p;
    return {v, v};
  }
  if (i.kind == Kind::Mtilde) {
    if (lu >= 0.0) return {lu / 2.0, lu / 2.0};
    long long n = detail::mtilde_value_branch(lu);
    double L = std::lgamma(static_cast<double>(n) + 1.0);
    // t = (u n! + 1/n!)/2
    double v = -L + std::log1p(std::exp(lu + 2.0 * L)) - kLog2;
    return {v, v};
  }
  auto solve = [&](int side) {
    auto f = [&](double x) {
      auto b = log_eval_bounds(x);
      return side == 0 ? b.second : b.first;
    };
    double lo = -1.0, hi = 1.0;
    for (int k = 0; f(hi) < lu; ++k) {
      lo = hi;
      hi = hi * 2.0 + 1.0;
      if (k > 2000) raise(ErrorKind::InverseDomain, "inverse range not reached");
    }
    for (int k = 0; !(f(lo) < lu); ++k) {
      hi = lo;
      lo = lo * 2.0 - 1.0;
      if (k > 60) raise(ErrorKind::InverseDomain, "inverse lower end not reached");
    }
    for (int k = 0; k < 400 && hi - lo > 1e-14 * std::max(1.0, std::fabs(hi)); ++k) {
      double mid = 0.5 * (lo + hi);
      (f(mid) < lu ? lo : hi) = mid;
    }
    return std::make_pair(lo, hi);
  };
  if (i.kind == Kind::Conjugate) {
    auto a = solve(0), b = solve(1);
    return {a.first, b.second};
  }
  return solve(1);
}

double OrliczFunction::inverse(double u) const {
  if (!(u >= 0.0)) raise(ErrorKind::InverseDomain, "inverse of a negative value");
  if (u == 0.0) return vanishes_below();
  auto b = log_inverse(std::log(u));
  return std::exp(0.5 * (b.first + b.second));
}

std::optional<PowerBound> OrliczFunction::upper_at_zero() const {
  const Impl& i = *impl_;
  switch (i.kind) {
    case Kind::Power:
      if (std::isinf(i.p)) return PowerBound{0.0, 1.0, 1.0};
      return PowerBound{i.c, i.p, kInf};
    case Kind::Mtilde:
      return PowerBound{1.0, 2.0, kInf};
    case Kind::MtildeConjugate:
      return PowerBound{1.0, 2.0, kInf};
    case Kind::PowerConjugate:
      if (i.a >= i.b) return PowerBound{0.0, i.a, 1.0};
      return PowerBound{(1.0 - i.a / i.b) * std::pow(i.a / i.b, i.a / (i.b - i.a)), i.a * i.b / (i.b - i.a),
                        std::pow(i.b / i.a, 1.0 / i.a)};
    case Kind::Conjugate:
      return i.N->upper_at_zero();
    case Kind::Custom:
      return i.custom.upper0;
  }
  return std::nullopt;
}

std::optional<PowerBound> OrliczFunction::lower_at_zero() const {
  const Impl& i = *impl_;
  switch (i.kind) {
    case Kind::Power:
      if (std::isinf(i.p)) return std::nullopt;
      return PowerBound{i.c, i.p, kInf};
    case Kind::Mtilde:
      return PowerBound{1.0, 3.0, 1.0};
    case Kind::PowerConjugate:
      if (i.a >= i.b) return std::nullopt;
      return upper_at_zero();
    case Kind::MtildeConjugate:
    case Kind::Conjugate:
      return std::nullopt;
    case Kind::Custom:
      return i.custom.lower0;
  }
  return std::nullopt;
}

double OrliczFunction::vanishes_below() const {
  const Impl& i = *impl_;
  if (i.kind == Kind::Power && std::isinf(i.p)) return 1.0;
  if (i.kind == Kind::PowerConjugate && i.a >= i.b) return 1.0;
  if (i.kind == Kind::Conjugate) {
    if (i.N->kind() == Kind::Power && i.M->kind() == Kind::Power && i.N->p() >= i.M->p() && i.N->c() <= i.M->c())
      return 1.0;
  }
  return 0.0;
}

Tri OrliczFunction::delta2() const {
  const Impl& i = *impl_;
  switch (i.kind) {
    case Kind::Power:
      return std::isinf(i.p) ? Tri::No : Tri::Yes;
    case Kind::Mtilde:
    case Kind::MtildeConjugate:
      return Tri::No;
    case Kind::PowerConjugate:
      return i.a >= i.b ? Tri::No : Tri::Yes;
    case Kind::Conjugate:
      return vanishes_below() > 0.0 ? Tri::No : Tri::Unknown;
    case Kind::Custom:
      return i.custom.delta2;
  }
  return Tri::Unknown;
}

std::vector<double> OrliczFunction::log_breakpoints(double xmin) const {
  std::vector<double> out;
  const Impl& i = *impl_;
  if (i.kind == Kind::Mtilde) {
    for (long long n = 1; n <= detail::kMtildeBranches; ++n) {
      double lb = detail::mtilde_log_b(n);
      if (lb < xmin) break;
      out.push_back(lb);
    }
  } else if (i.kind == Kind::MtildeConjugate) {
    for (long long n = 1; n < 100000; ++n) {
      double lb = std::log(appendix_branch_boundary(n));
      if (lb < xmin) break;
      if (lb <= 0.0) out.push_back(lb);
    }
  } else if (i.kind == Kind::PowerConjugate && i.a >= i.b) {
    if (xmin <= 0.0) out.push_back(0.0);
  } else if (i.kind == Kind::Power && std::isinf(i.p)) {
    if (xmin <= 0.0) out.push_back(0.0);
  }
  return out;
}

bool OrliczFunction::operator==(const OrliczFunction& o) const {
  const Impl& x = *impl_;
  const Impl& y = *o.impl_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::Power:
      return x.p == y.p && x.c == y.c;
    case Kind::Mtilde:
    case Kind::MtildeConjugate:
      return true;
    case Kind::PowerConjugate:
      return x.a == y.a && x.b == y.b;
    case Kind::Conjugate:
      return *x.N == *y.N && *x.M == *y.M && x.grid == y.grid;
    case Kind::Custom:
      return x.custom.name == y.custom.name;
  }
  return false;
}

// ---------------------------------------------------------------- exponents

ExponentRule ExponentRule::constant(double p) {
  ExponentRule r;
  r.kind_ = Kind::Constant;
  r.c_ = p;
  r.validate();
  return r;
}

ExponentRule ExponentRule::table(std::vector<double> values, double tail) {
  ExponentRule r;
  r.kind_ = Kind::TableTail;
  r.table_ = std::move(values);
  r.tail_ = tail;
  r.validate();
  return r;
}

ExponentRule ExponentRule::formula(double c0, double c1, double e) {
  if (!(e > 0.0)) raise(ErrorKind::InvalidArgument, "exponent formula needs e > 0");
  ExponentRule r;
  r.kind_ = Kind::Formula;
  r.c0_ = c0;
  r.c1_ = c1;
  r.e_ = e;
  r.validate();
  return r;
}

ExponentRule ExponentRule::derived(const ExponentRule& p, const ExponentRule& q) {
  ExponentRule r;
  r.kind_ = Kind::Derived;
  r.p_ = std::make_shared<ExponentRule>(p);
  r.q_ = std::make_shared<ExponentRule>(q);
  return r;
}

double ExponentRule::at(long long n) const {
  if (n < 1) raise(ErrorKind::InvalidArgument, "exponent index starts at 1");
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::TableTail:
      return n <= static_cast<long long>(table_.size()) ? table_[static_cast<std::size_t>(n - 1)] : tail_;
    case Kind::Formula:
      return c0_ + c1_ * std::pow(static_cast<double>(n), -e_);
    case Kind::Derived: {
      double p = p_->at(n), q = q_->at(n);
      double inv = 1.0 / q - 1.0 / p;
      if (!(inv > 0.0) || p == q) return kInf;
      return 1.0 / inv;
    }
  }
  return 1.0;
}

std::pair<double, double> ExponentRule::range_from(long long from) const {
  from = std::max(1LL, from);
  switch (kind_) {
    case Kind::Constant:
      return {c_, c_};
    case Kind::TableTail: {
      double lo = tail_, hi = tail_;
      for (long long n = from; n <= static_cast<long long>(table_.size()); ++n) {
        lo = std::min(lo, table_[static_cast<std::size_t>(n - 1)]);
        hi = std::max(hi, table_[static_cast<std::size_t>(n - 1)]);
      }
      return {lo, hi};
    }
    case Kind::Formula: {
      double f = at(from);
      return {std::min(f, c0_), std::max(f, c0_)};
    }
    case Kind::Derived: {
      auto P = p_->range_from(from), Q = q_->range_from(from);
      double a = 1.0 / Q.first - 1.0 / P.second;
      double b = 1.0 / Q.second - 1.0 / P.first;
      double lo = a > 0.0 ? 1.0 / a : kInf;
      double hi = b > 0.0 ? 1.0 / b : kInf;
      return {lo, hi};
    }
  }
  return {1.0, 1.0};
}

double ExponentRule::limit() const {
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::TableTail:
      return tail_;
    case Kind::Formula:
      return c0_;
    case Kind::Derived: {
      double p = p_->limit(), q = q_->limit();
      double inv = 1.0 / q - 1.0 / p;
      if (!(inv > 0.0) || p == q) return kInf;
      return 1.0 / inv;
    }
  }
  return 1.0;
}

bool ExponentRule::is_constant() const {
  switch (kind_) {
    case Kind::Constant:
      return true;
    case Kind::TableTail:
      return std::all_of(table_.begin(), table_.end(), [&](double v) { return v == tail_; });
    case Kind::Formula:
      return c1_ == 0.0;
    case Kind::Derived:
      return p_->is_constant() && q_->is_constant();
  }
  return false;
}

bool ExponentRule::operator==(const ExponentRule& o) const {
  if (is_constant() && o.is_constant()) return at(1) == o.at(1);
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Constant:
      return c_ == o.c_;
    case Kind::TableTail:
      return table_ == o.table_ && tail_ == o.tail_;
    case Kind::Formula:
      return c0_ == o.c0_ && c1_ == o.c1_ && e_ == o.e_;
    case Kind::Derived:
      return *p_ == *o.p_ && *q_ == *o.q_;
  }
  return false;
}

void ExponentRule::validate(bool allow_infinite) const {
  auto check = [&](double v) {
    if (std::isnan(v) || v < 1.0) raise(ErrorKind::InvalidArgument, "exponents must be >= 1");
    if (std::isinf(v) && !allow_infinite) raise(ErrorKind::InvalidArgument, "exponents must be finite");
  };
  if (kind_ == Kind::Derived) {
    p_->validate();
    q_->validate();
    return;
  }
  std::size_t m = kind_ == Kind::TableTail ? table_.size() : 0;
  for (long long n = 1; n <= static_cast<long long>(std::max<std::size_t>(m, 4096)); ++n) check(at(n));
  auto r = range_from(1);
  check(r.first);
  check(r.second);
}

// ---------------------------------------------------------------- families

OrliczFamily OrliczFamily::constant(OrliczFunction M) {
  OrliczFamily f;
  f.kind_ = Kind::Constant;
  f.M_ = std::move(M);
  return f;
}

OrliczFamily OrliczFamily::table(std::vector<OrliczFunction> head, OrliczFunction tail) {
  OrliczFamily f;
  f.kind_ = Kind::Table;
  f.head_ = std::move(head);
  f.M_ = std::move(tail);
  return f;
}

OrliczFamily OrliczFamily::nakano(ExponentRule p) {
  OrliczFamily f;
  f.kind_ = Kind::Nakano;
  f.p_ = std::move(p);
  return f;
}

OrliczFamily OrliczFamily::conjugate(const OrliczFamily& N, const OrliczFamily& M) {
  if (N.kind_ == Kind::Constant && M.kind_ == Kind::Constant)
    return constant(OrliczFunction::conjugate_of(N.M_, M.M_));
  if (N.kind_ == Kind::Nakano && M.kind_ == Kind::Nakano) return nakano(ExponentRule::derived(M.p_, N.p_));
  OrliczFamily f;
  f.kind_ = Kind::Conjugate;
  f.N_ = std::make_shared<OrliczFamily>(N);
  f.Mf_ = std::make_shared<OrliczFamily>(M);
  return f;
}

OrliczFunction OrliczFamily::at(long long n) const {
  switch (kind_) {
    case Kind::Constant:
      return M_;
    case Kind::Table:
      return n <= static_cast<long long>(head_.size()) ? head_[static_cast<std::size_t>(n - 1)] : M_;
    case Kind::Nakano:
      return OrliczFunction::power(p_.at(n));
    case Kind::Conjugate:
      return OrliczFunction::conjugate_of(N_->at(n), Mf_->at(n));
  }
  return M_;
}

double OrliczFamily::eval(long long n, double t) const {
  if (kind_ == Kind::Nakano) {
    double p = p_.at(n);
    if (std::isinf(p)) return t <= 1.0 ? 0.0 : kInf;
    return std::pow(t, p);
  }
  return at(n)(t);
}

std::optional<PowerBound> OrliczFamily::upper_from(long long from) const {
  switch (kind_) {
    case Kind::Constant:
      return M_.upper_at_zero();
    case Kind::Table: {
      auto b = M_.upper_at_zero();
      if (!b) return std::nullopt;
      PowerBound r = *b;
      bool any = false;
      for (long long n = from; n <= static_cast<long long>(head_.size()); ++n) {
        auto h = head_[static_cast<std::size_t>(n - 1)].upper_at_zero();
        if (!h) return std::nullopt;
        r.c = std::max(r.c, h->c);
        r.p = std::min(r.p, h->p);
        r.t1 = std::min(r.t1, h->t1);
        any = true;
      }
      if (any) r.t1 = std::min(r.t1, 1.0);
      return r;
    }
    case Kind::Nakano: {
      auto r = p_.range_from(from);
      if (std::isinf(r.first)) return PowerBound{0.0, 1.0, 1.0};
      if (r.first == r.second) return PowerBound{1.0, r.first, kInf};
      return PowerBound{1.0, r.first, 1.0};
    }
    case Kind::Conjugate:
      return N_->upper_from(from);
  }
  return std::nullopt;
}

std::optional<PowerBound> OrliczFamily::lower_from(long long from) const {
  switch (kind_) {
    case Kind::Constant:
      return M_.lower_at_zero();
    case Kind::Table: {
      auto b = M_.lower_at_zero();
      if (!b) return std::nullopt;
      PowerBound r = *b;
      bool any = false;
      for (long long n = from; n <= static_cast<long long>(head_.size()); ++n) {
        auto h = head_[static_cast<std::size_t>(n - 1)].lower_at_zero();
        if (!h) return std::nullopt;
        r.c = std::min(r.c, h->c);
        r.p = std::max(r.p, h->p);
        r.t1 = std::min(r.t1, h->t1);
        any = true;
      }
      if (any) r.t1 = std::min(r.t1, 1.0);
      return r;
    }
    case Kind::Nakano: {
      auto r = p_.range_from(from);
      if (std::isinf(r.second)) return std::nullopt;
      if (p_.kind() == ExponentRule::Kind::Derived) return std::nullopt;
      if (r.first == r.second) return PowerBound{1.0, r.second, kInf};
      return PowerBound{1.0, r.second, 1.0};
    }
    case Kind::Conjugate:
      return std::nullopt;
  }
  return std::nullopt;
}

double OrliczFamily::vanishes_below_from(long long from) const {
  switch (kind_) {
    case Kind::Constant:
      return M_.vanishes_below();
    case Kind::Table: {
      double v = M_.vanishes_below();
      for (long long n = from; n <= static_cast<long long>(head_.size()); ++n)
        v = std::min(v, head_[static_cast<std::size_t>(n - 1)].vanishes_below());
      return v;
    }
    case Kind::Nakano:
      return std::isinf(p_.range_from(from).first) ? 1.0 : 0.0;
    case Kind::Conjugate:
      return 0.0;
  }
  return 0.0;
}

bool OrliczFamily::operator==(const OrliczFamily& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Constant:
      return M_ == o.M_;
    case Kind::Table:
      if (head_.size() != o.head_.size() || !(M_ == o.M_)) return false;
      for (std::size_t i = 0; i < head_.size(); ++i)
        if (!(head_[i] == o.head_[i])) return false;
      return true;
    case Kind::Nakano:
      return p_ == o.p_;
    case Kind::Conjugate:
      return *N_ == *o.N_ && *Mf_ == *o.Mf_;
  }
  return false;
}

// ---------------------------------------------------------------- Luxemburg

double modular(const OrliczFamily& Ms, const std::vector<double>& x, double rho) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = std::fabs(x[i]);
    if (v == 0.0) continue;
    s += Ms.eval(static_cast<long long>(i + 1), v / rho);
    if (std::isinf(s)) return s;
  }
  return s;
}

namespace {

// Smallest ρ on the geometric bisection with g(ρ) <= 1, g non-increasing; returns [lo, hi].
std::pair<double, double> solve_unit(const std::function<double(double)>& g, double rho0) {
  double lr = std::log(rho0);
  double hi = lr, lo = lr;
  for (int k = 0; g(std::exp(hi)) > 1.0; ++k) {
    lo = hi;
    hi += std::max(1.0, std::fabs(hi)) * (k < 8 ? 1.0 : 2.0);
    if (k > 60) return {std::exp(lo), kInf};
  }
  if (lo == hi) {
    lo = hi - 1.0;
    for (int k = 0; !(g(std::exp(lo)) > 1.0); ++k) {
      hi = lo;
      lo -= std::max(1.0, std::fabs(lo));
      if (k > 60) return {0.0, std::exp(hi)};
    }
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
    double mid = 0.5 * (lo + hi);
    (g(std::exp(mid)) > 1.0 ? lo : hi) = mid;
  }
  return {std::exp(lo), std::exp(hi)};
}

}  // namespace

Bracket luxemburg_norm(const OrliczFamily& Ms, const SequenceSpec& x, const Truncation& N) {
  x.validate();
  N.validate(x);
  long long H = N.policy == Truncation::Policy::ZeroTailExact ? x.length() : std::max(N.N, x.length());
  std::vector<double> a = x.head(H);
  for (double& v : a) v = std::fabs(v);
  bool tail_zero = x.finite_support();
  double amax = a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
  if (tail_zero && amax == 0.0) return Bracket::exact(0.0);

  double vb = Ms.vanishes_below_from(H + 1);
  if (!tail_zero) {
    Bracket ls = limsup_abs(x);
    auto Lb = Ms.lower_from(H + 1);
    if (!std::isfinite(ls.lower) && vb == 0.0)
      raise(ErrorKind::ModularDivergent, "sequence is unbounded");
    if (ls.lower > 0.0 && vb == 0.0 && Lb && Lb->c > 0.0)
      raise(ErrorKind::ModularDivergent, "terms do not tend to zero");
    if (ls.upper == 0.0 && Lb && Lb->c > 0.0) {
      Bracket ps = power_sum(x, Lb->p, H + 1);
      if (std::isinf(ps.lower)) raise(ErrorKind::ModularDivergent, "tail power sum diverges for every scale");
    }
  }

  auto explicit_mod = [&](double rho) { return modular(Ms, a, rho); };
  double rho0 = amax > 0.0 ? amax : 1.0;
  if (amax == 0.0 && !tail_zero) {
    Bracket s = sup_abs(x, H + 1);
    rho0 = std::isfinite(s.upper) && s.upper > 0.0 ? s.upper : 1.0;
  }

  double lower = 0.0;
  if (amax > 0.0) lower = solve_unit(explicit_mod, rho0).first;

  if (tail_zero) {
    auto r = solve_unit(explicit_mod, rho0);
    return Bracket::of(r.first, r.second);
  }
  if (N.policy == Truncation::Policy::HeuristicTail) {
    auto r = solve_unit(explicit_mod, rho0);
    Bracket b = Bracket::of(r.first, r.second, Certainty::Heuristic);
    b.diagnostics = "tail ignored beyond " + std::to_string(H);
    return b;
  }

  double sup_t = sup_abs(x, H + 1).upper;
  auto U = Ms.upper_from(H + 1);
  double S = kInf;
  if (U) {
    S = envelope_power_sum(x.tail->upper(H + 1), U->p, H + 1);
    if (x.majorant) S = std::min(S, envelope_power_sum(x.majorant->upper(H + 1), U->p, H + 1));
  }
  auto tail_bound = [&](double rho) -> double {
    if (sup_t / rho <= vb) return 0.0;
    if (!U || !std::isfinite(sup_t)) return kInf;
    if (sup_t / rho > U->t1) return kInf;
    if (U->c == 0.0) return 0.0;
    if (!std::isfinite(S)) return kInf;
    return U->c * std::pow(rho, -U->p) * S;
  };
  auto full = [&](double rho) { return explicit_mod(rho) + tail_bound(rho); };
  auto r = solve_unit(full, std::max(rho0, lower > 0.0 ? lower : rho0));
  Bracket b = Bracket::of(std::min(lower, r.second), r.second);
  if (!std::isfinite(b.upper)) b.diagnostics = "no certified tail bound";
  return b;
}

Bracket luxemburg_norm(const OrliczFunction& M, const SequenceSpec& x, const Truncation& N) {
  return luxemburg_norm(OrliczFamily::constant(M), x, N);
}

// ---------------------------------------------------------------- conjugate

ConjugateResult young_conjugate_generalized_log(const OrliczFunction& N, const OrliczFunction& M, double log_t,
                                                const ConjugateOptions& opt) {
  ConjugateResult res;
  if (log_t == -kInf) {
    res.value = Bracket::exact(0.0);
    return res;
  }
  if (opt.grid < 16) raise(ErrorKind::InvalidArgument, "conjugate grid must have at least 16 points");
  auto nlog = [&](double ls) { return N.log_eval_bounds(log_t + ls); };
  auto mlog = [&](double ls) { return M.log_eval_bounds(ls); };
  // value of N(ts) - M(s) in log form (lower estimate)
  auto gval = [&](double ls) { return log_diff(nlog(ls).first, mlog(ls).second); };

  std::vector<double> cand;
  const int G = opt.grid;
  for (int k = 1; k <= G; ++k) cand.push_back(std::log(static_cast<double>(k) / G));
  double best = -kInf;
  for (double ls : cand) best = std::max(best, gval(ls));
  double xmin = -700.0;
  for (int k = 0; k < 40; ++k) {
    double lo_bound = nlog(xmin).second;
    if (lo_bound < best || lo_bound == -kInf) break;
    // keep scanning deeper while the first cell could still dominate
    // breakpoints above the previous xmin were already evaluated
    double seen = k == 0 ? 0.0 : xmin / 2.0;
    std::vector<double> extra;
    for (int j = 0; j < G; ++j) extra.push_back(xmin * (1.0 - static_cast<double>(j) / G));
    for (double ls : N.log_breakpoints(xmin + log_t))
      if (ls - log_t < seen) extra.push_back(ls - log_t);
    for (double ls : M.log_breakpoints(xmin))
      if (ls < seen) extra.push_back(ls);
    for (double ls : extra)
      if (ls <= 0.0) best = std::max(best, gval(ls));
    xmin *= 2.0;
  }
  for (int j = 0; j < G; ++j) cand.push_back(xmin * (1.0 - static_cast<double>(j) / G));
  for (double ls : N.log_breakpoints(xmin + log_t))
    if (ls - log_t <= 0.0) cand.push_back(ls - log_t);
  for (double ls : M.log_breakpoints(xmin))
    if (ls <= 0.0) cand.push_back(ls);
  cand.push_back(0.0);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::vector<double> gv(cand.size());
  std::vector<std::pair<double, double>> nb(cand.size()), mb(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    nb[i] = nlog(cand[i]);
    mb[i] = mlog(cand[i]);
    gv[i] = log_diff(nb[i].first, mb[i].second);
  }
  best = -kInf;
  double arg = 0.0;
  for (std::size_t i = 0; i < cand.size(); ++i)
    if (gv[i] > best) {
      best = gv[i];
      arg = cand[i];
    }

  // golden-section refinement around the leading candidates
  std::vector<std::size_t> idx(cand.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(std::max(0, opt.refine_top)), idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(top), idx.end(),
                    [&](std::size_t x, std::size_t y) { return gv[x] > gv[y]; });
  const double gr = 0.6180339887498949;
  for (std::size_t k = 0; k < top; ++k) {
    std::size_t i = idx[k];
    if (gv[i] == -kInf) continue;
    double lo = i > 0 ? cand[i - 1] : cand[i] - 1.0;
    double hi = i + 1 < cand.size() ? cand[i + 1] : cand[i];
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = gval(x1), f2 = gval(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = gval(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = gval(x1);
      }
    }
    for (auto [xv, fv] : {std::make_pair(x1, f1), std::make_pair(x2, f2)})
      if (fv > best) {
        best = fv;
        arg = xv;
      }
  }

  // certified cell bounds: N increasing and convex, M increasing and convex
  double upper = nb.empty() ? -kInf : nb[0].second;  // first cell [0, s0]
  for (std::size_t i = 0; i + 1 < cand.size(); ++i) {
    double la = cand[i], lb = cand[i + 1];
    double Ma = mb[i].first;
    double cell = log_diff(nb[i].second, Ma);
    double Lb = Ma;
    if (i > 0 && Ma > -kInf && mb[i - 1].first > -kInf) {
      double a = std::exp(la), b = std::exp(lb), ap = std::exp(cand[i - 1]);
      double r = (b - a) / (a - ap);
      double frac = -std::expm1(mb[i - 1].first - Ma);
      Lb = Ma + std::log1p(r * frac);
    }
    cell = std::max(cell, log_diff(nb[i + 1].second, Lb));
    upper = std::max(upper, cell);
  }
  upper = std::max(upper, best);
  res.log_lower = best;
  res.log_upper = upper;
  res.argmax = std::exp(arg);
  res.value = Bracket::of(best == -kInf ? 0.0 : std::exp(best), upper == -kInf ? 0.0 : std::exp(upper));
  return res;
}

ConjugateResult young_conjugate_generalized(const OrliczFunction& N, const OrliczFunction& M, double t,
                                            const ConjugateOptions& opt) {
  if (!(t >= 0.0)) raise(ErrorKind::InvalidArgument, "conjugate needs t >= 0");
  if (t == 0.0) {
    ConjugateResult r;
    r.value = Bracket::exact(0.0);
    return r;
  }
  return young_conjugate_generalized_log(N, M, std::log(t), opt);
}

// ---------------------------------------------------------------- Δ2

Delta2Report delta2_evidence(const OrliczFunction& M, const std::vector<double>& t_grid, double threshold) {
  if (t_grid.empty()) raise(ErrorKind::InvalidArgument, "delta2 grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0 && t_grid[i] <= 1.0)) raise(ErrorKind::InvalidArgument, "delta2 grid must lie in (0, 1]");
    if (i > 0 && !(t_grid[i] < t_grid[i - 1])) raise(ErrorKind::InvalidArgument, "delta2 grid must be decreasing");
  }
  Delta2Report rep;
  bool increasing = true;
  for (double t : t_grid) {
    double lt = std::log(t);
    double l1 = M.log_eval(lt), l2 = M.log_eval(lt + kLog2);
    double ratio = l1 == -kInf ? (l2 == -kInf ? kInf : kInf) : std::exp(l2 - l1);
    if (!rep.ratios.empty() && !(ratio > rep.ratios.back().second)) increasing = false;
    rep.ratios.emplace_back(t, ratio);
    if (ratio > rep.max_ratio || rep.witness_t == 0.0) {
      if (ratio >= rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.witness_t = t;
      }
    }
  }
  double decades = std::log10(t_grid.front() / t_grid.back());
  bool grows = increasing && rep.ratios.size() >= 3 && decades >= 1.0 &&
               rep.ratios.back().second >= 10.0 * rep.ratios.front().second;
  rep.divergent = rep.max_ratio > threshold || grows;
  return rep;
}

}  // namespace kothe
