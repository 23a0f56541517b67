#include "kothe/rademacher.hpp"

#include <algorithm>
#include <cmath>

namespace kothe {

namespace {

constexpr int kMaxN = 50;
constexpr int kMaxMesh = 24;

void check_n(int n, int max) {
  if (n < 1 || n > max) raise(ErrorKind::InvalidArgument, "Rademacher index must be in 1.." + std::to_string(max));
}

// Sign of r_n on the dyadic cell j of (0,1).
int cell_sign(long long j) { return (j & 1) ? -1 : 1; }

double antiderivative(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) s = s * x + c[j] / static_cast<double>(j + 1);
  return s * x;
}

struct Acc {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double t = s + v;
    c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace

int rademacher(int n, double t) {
  check_n(n, kMaxN);
  if (!(t > 0.0 && t < 1.0)) raise(ErrorKind::InvalidArgument, "Rademacher argument must lie in (0,1)");
  double u = std::ldexp(t, n);
  double f = std::floor(u);
  if (f == u) return 0;
  return std::fmod(f, 2.0) == 0.0 ? 1 : -1;
}

MeasurePartition::MeasurePartition(std::vector<std::pair<double, double>> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) raise(ErrorKind::InvalidArgument, "partition needs at least one piece");
  for (auto& [a, b] : pieces_) {
    if (!std::isfinite(a) || !std::isfinite(b)) raise(ErrorKind::InvalidArgument, "piece endpoints must be finite");
    double len = b - a;
    if (!(len > 0.0 && len <= 1.0)) raise(ErrorKind::InvalidArgument, "piece lengths must lie in (0, 1]");
  }
  std::vector<std::pair<double, double>> s = pieces_;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i].first < s[i - 1].second) raise(ErrorKind::InvalidArgument, "pieces must be pairwise disjoint");
}

int MeasurePartition::locate(double omega) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (omega > pieces_[i].first && omega <= pieces_[i].second) return static_cast<int>(i);
  return -1;
}

double MeasurePartition::measure() const {
  double m = 0.0;
  for (auto& [a, b] : pieces_) m += b - a;
  return m;
}

int glued_rademacher(const MeasurePartition& P, int n, double omega) {
  check_n(n, kMaxN);
  int i = P.locate(omega);
  if (i < 0) raise(ErrorKind::OutsideSupport, "omega lies in no piece of the partition");
  double u = P.map(i, omega);
  if (u >= 1.0) return 0;
  return rademacher(n, u);
}

Integrand Integrand::polynomial(std::vector<double> coeffs) {
  Integrand f;
  f.terms_.push_back({std::move(coeffs), -kInf, kInf});
  f.name_ = "polynomial";
  return f;
}

Integrand Integrand::indicator(double a, double b) {
  if (!(a < b)) raise(ErrorKind::InvalidArgument, "indicator needs a < b");
  Integrand f;
  f.terms_.push_back({{1.0}, a, b});
  f.name_ = "indicator";
  return f;
}

Integrand Integrand::piecewise(std::vector<IntegrandTerm> terms) {
  for (auto& t : terms)
    if (!(t.lo < t.hi)) raise(ErrorKind::InvalidArgument, "term interval needs lo < hi");
  Integrand f;
  f.terms_ = std::move(terms);
  f.name_ = "piecewise";
  return f;
}

Integrand Integrand::custom(std::string name, std::function<double(double)> fn) {
  Integrand f;
  f.kind_ = Kind::Custom;
  f.name_ = std::move(name);
  f.f_ = std::move(fn);
  return f;
}

double Integrand::operator()(double w) const {
  if (kind_ == Kind::Custom) return f_(w);
  double s = 0.0;
  for (auto& t : terms_) {
    if (!(w > t.lo && w < t.hi)) continue;
    double v = 0.0;
    for (std::size_t j = t.coeffs.size(); j-- > 0;) v = v * w + t.coeffs[j];
    s += v;
  }
  return s;
}

double Integrand::integrate(double a, double b) const {
  if (kind_ == Kind::Custom) raise(ErrorKind::UnsupportedIntegrand, "no closed-form integral for " + name_);
  double s = 0.0;
  for (auto& t : terms_) {
    double lo = std::max(a, t.lo), hi = std::min(b, t.hi);
    if (hi > lo) s += antiderivative(t.coeffs, hi) - antiderivative(t.coeffs, lo);
  }
  return s;
}

double rademacher_integral(const std::vector<int>& ns) {
  int top = 0;
  for (int n : ns) {
    check_n(n, kMaxMesh);
    top = std::max(top, n);
  }
  if (top == 0) return 1.0;
  long long cells = 1LL << top;
  long long sum = 0;
  for (long long j = 0; j < cells; ++j) {
    int s = 1;
    for (int n : ns) s *= cell_sign(j >> (top - n));
    sum += s;
  }
  return std::ldexp(static_cast<double>(sum), -top);
}

double glued_integral(const Integrand& f, const MeasurePartition& P, int n) {
  check_n(n, kMaxMesh);
  if (f.kind() == Integrand::Kind::Custom) raise(ErrorKind::UnsupportedIntegrand, "no closed-form integral for " + f.name());
  Acc acc;
  long long cells = 1LL << n;
  double h = std::ldexp(1.0, -n);
  for (auto& [a, b] : P.pieces()) {
    double len = b - a;
    for (long long j = 0; j < cells; ++j) {
      double lo = static_cast<double>(j) * h;
      if (lo >= len) break;
      double hi = std::min(static_cast<double>(j + 1) * h, len);
      acc.add(cell_sign(j) * f.integrate(a + lo, a + hi));
    }
  }
  return acc.value();
}

LemmaReport lemma_r_demo(const Integrand& f, const MeasurePartition& P, int n_max) {
  check_n(n_max, kMaxMesh);
  if (f.kind() == Integrand::Kind::Custom) raise(ErrorKind::UnsupportedIntegrand, "no closed-form integral for " + f.name());
  LemmaReport r;
  for (int n = 1; n <= n_max; ++n) r.values.emplace_back(n, glued_integral(f, P, n));
  r.window = std::min(4, n_max);
  for (std::size_t i = r.values.size() - static_cast<std::size_t>(r.window); i < r.values.size(); ++i)
    r.trailing_max = std::max(r.trailing_max, std::fabs(r.values[i].second));
  return r;
}

}  // namespace kothe
