#include <algorithm>
#include <cmath>

#include "kothe/orlicz.hpp"

namespace kothe {

namespace {

constexpr double kLog4 = 1.3862943611198906;

double log_diff(double a, double b) {
  if (!(a > b)) return -kInf;
  if (b == -kInf) return a;
  return a + std::log(-std::expm1(b - a));
}

// log of ((n+1)^2 t^2 - 4n) / (4 (n!)^2), -inf when non-positive.
double branch_log(long long n, double lt) {
  double d = static_cast<double>(n);
  double A = 2.0 * std::log(d + 1.0) + 2.0 * lt;
  double B = std::log(4.0 * d);
  return log_diff(A, B) - kLog4 - 2.0 * std::lgamma(d + 1.0);
}

std::pair<double, long long> conjugate_argmax(double lt) {
  if (lt == -kInf) return {-kInf, 0};
  double t = std::exp(lt);
  if (t >= appendix_branch_boundary(1)) return {log_diff(2.0 * lt, 0.0), 1};
  double nmin = 1.0;
  if (t < 1.0) {
    if (lt < -300.0) raise(ErrorKind::BranchOverflow, "conjugate argument too small for the branch search");
    double t2 = std::exp(2.0 * lt);
    double nplus = (2.0 - t2 + 2.0 * std::sqrt(1.0 - t2)) / t2;
    if (nplus > 1e15) raise(ErrorKind::BranchOverflow, "conjugate branch index exceeds 1e15");
    nmin = std::max(1.0, std::floor(nplus) - 1.0);
  }
  auto n0 = static_cast<long long>(nmin);
  double best = -kInf;
  long long arg = 0;
  for (long long n = n0; n <= n0 + 10; ++n) {
    double v = branch_log(n, lt);
    if (v > best) {
      best = v;
      arg = n;
    }
  }
  return {best, arg};
}

}  // namespace

double appendix_mtilde(double t) {
  if (!(t >= 0.0)) raise(ErrorKind::InvalidArgument, "mtilde needs t >= 0");
  if (t == 0.0) return 0.0;
  if (t >= 1.0) return t * t;
  double fact = 1.0;  // n!
  long long n = 1;
  // branch n: (n+2)/(2(n+1)!) <= t < (n+1)/(2 n!)
  for (;;) {
    double next = fact * (static_cast<double>(n) + 1.0);
    if (std::isinf(next)) raise(ErrorKind::BranchOverflow, "mtilde branch index exceeds 170");
    if (!((static_cast<double>(n) + 2.0) / (2.0 * next) > t)) break;
    ++n;
    fact = next;
  }
  return (2.0 * t - 1.0 / fact) / fact;
}

double appendix_conjugate_log(double log_t) { return conjugate_argmax(log_t).first; }

double appendix_conjugate(double t) {
  if (!(t >= 0.0)) raise(ErrorKind::InvalidArgument, "conjugate needs t >= 0");
  if (t == 0.0) return 0.0;
  return std::exp(appendix_conjugate_log(std::log(t)));
}

long long appendix_conjugate_branch(double t) {
  if (!(t >= 0.0)) raise(ErrorKind::InvalidArgument, "conjugate needs t >= 0");
  if (t == 0.0) return 0;
  return conjugate_argmax(std::log(t)).second;
}

double appendix_branch_boundary(long long n) {
  if (n < 1) raise(ErrorKind::InvalidArgument, "branch index starts at 1");
  double d = static_cast<double>(n);
  double den = std::pow(d + 1.0, 4) - (d + 2.0) * (d + 2.0);
  return std::sqrt(4.0 * (d + 1.0) * (d * d + d - 1.0) / den);
}

double appendix_epsilon(long long n) {
  if (n < 1) raise(ErrorKind::InvalidArgument, "branch index starts at 1");
  double d = static_cast<double>(n);
  return (d * d + d - 1.0) / (std::pow(d + 1.0, 4) - (d + 2.0) * (d + 2.0));
}

Bracket factorization_ratio_log(const OrliczFunction& M0, const OrliczFunction& M1, double log_t,
                                const OrliczFunction* conj) {
  if (!(log_t < 0.0) || std::isnan(log_t)) raise(ErrorKind::InvalidArgument, "factorization ratio needs 0 < t < 1");
  OrliczFunction C = conj ? *conj : OrliczFunction::conjugate_of(M1, M0);
  if (C.vanishes_below() > 0.0)
    raise(ErrorKind::InverseDomain, "conjugate " + C.name() + " vanishes near zero");
  auto a = M0.log_inverse(log_t);
  auto b = C.log_inverse(log_t);
  auto c = M1.log_inverse(log_t);
  Bracket r = Bracket::of(std::exp(a.first + b.first - c.second), std::exp(a.second + b.second - c.first));
  if (C.kind() == OrliczFunction::Kind::Conjugate) r.diagnostics = "numeric conjugate";
  return r;
}

Bracket factorization_ratio(const OrliczFunction& M0, const OrliczFunction& M1, double t) {
  if (!(t > 0.0 && t < 1.0)) raise(ErrorKind::InvalidArgument, "factorization ratio needs 0 < t < 1");
  return factorization_ratio_log(M0, M1, std::log(t), nullptr);
}

}  // namespace kothe
