#include "kothe/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include "kothe/essnorm.hpp"
#include "kothe/lorentz.hpp"

namespace kothe {

namespace {

using SD = SpaceDescriptor;
using K = SpaceDescriptor::Kind;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// ℓ_p exponent with c0 read as p = ∞.
std::optional<double> lp_like(const SD& S) {
  if (S.kind() == K::C0) return kInf;
  return S.lp_exponent();
}

std::optional<OrliczFunction> as_orlicz(const SD& S) {
  switch (S.kind()) {
    case K::Orlicz:
      return S.orlicz_function();
    case K::Lp:
      if (std::isfinite(S.p())) return OrliczFunction::power(S.p());
      return std::nullopt;
    case K::Nakano:
      if (S.exponents().is_constant() && std::isfinite(S.exponents().at(1)))
        return OrliczFunction::power(S.exponents().at(1));
      return std::nullopt;
    case K::MusielakOrlicz:
      if (S.family().kind() == OrliczFamily::Kind::Constant) return S.family().function();
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<ExponentRule> as_nakano(const SD& S) {
  switch (S.kind()) {
    case K::Nakano:
      return S.exponents();
    case K::Lp:
      if (std::isfinite(S.p())) return ExponentRule::constant(S.p());
      return std::nullopt;
    case K::MusielakOrlicz:
      if (S.family().kind() == OrliczFamily::Kind::Nakano) return S.family().exponents();
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<OrliczFamily> as_family(const SD& S) {
  if (S.kind() == K::MusielakOrlicz) return S.family();
  if (auto M = as_orlicz(S)) return OrliczFamily::constant(*M);
  if (auto p = as_nakano(S)) return OrliczFamily::nakano(*p);
  return std::nullopt;
}

bool power_weight(const ConcaveWeight& f) {
  return f.kind() == ConcaveWeight::Kind::Power;
}

Tri nakano_embeds(const ExponentRule& p, const ExponentRule& q) {
  constexpr long long kCheck = 4096;
  for (long long n = 1; n <= kCheck; ++n)
    if (p.at(n) > q.at(n)) return Tri::Unknown;
  auto pr = p.range_from(kCheck + 1), qr = q.range_from(kCheck + 1);
  if (pr.second <= qr.first) return Tri::Yes;
  return Tri::Unknown;
}

MultiplierResult result(SD d, std::string rule, bool equivalence = false,
                        std::optional<std::pair<double, double>> c = std::nullopt) {
  MultiplierResult r;
  r.descriptor = std::move(d);
  r.rule = std::move(rule);
  r.equivalence = equivalence;
  r.constants = c;
  return r;
}

double hzeta(double s, double q) {
  gsl_sf_result r;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  int status = gsl_sf_hzeta_e(s, q, &r);
  gsl_set_error_handler(old);
  if (status == GSL_EUNDRFLW) return 0.0;
  if (status != GSL_SUCCESS) return std::pow(q, 1.0 - s) / (s - 1.0) + std::pow(q, -s);
  return r.val;
}

// Norm evaluator specialised to vectors of a fixed length, with weights cached.
struct Eval {
  K kind = K::Unknown;
  double p = 1.0;
  std::vector<double> w;
  std::unique_ptr<Eval> base;
  SD fallback;

  double operator()(std::vector<double> x) const {
    switch (kind) {
      case K::Lp: {
        if (std::isinf(p)) return maxabs(x);
        double m = maxabs(x);
        if (m == 0.0) return 0.0;
        double s = 0.0;
        for (double v : x) s += std::pow(std::fabs(v) / m, p);
        return m * std::pow(s, 1.0 / p);
      }
      case K::LInfty:
      case K::C0:
        return maxabs(x);
      case K::Weighted:
        for (std::size_t i = 0; i < x.size(); ++i) x[i] *= w[i];
        return (*base)(std::move(x));
      case K::Symmetrized:
        sort_desc(x);
        return (*base)(std::move(x));
      case K::Lorentz: {
        sort_desc(x);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * w[i];
        return s;
      }
      case K::Marcinkiewicz: {
        // φ(n)/n is non-increasing, so the supremum is attained inside the support
        sort_desc(x);
        double s = 0.0, best = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          s += x[i];
          best = std::max(best, w[i] * s);
        }
        return best;
      }
      case K::Cesaro: {
        // H|x| is S/n beyond the support, summed with the Hurwitz zeta
        double S = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          S += std::fabs(x[i]);
          x[i] = S / static_cast<double>(i + 1);
        }
        double m = maxabs(x);
        if (std::isinf(p)) return m;
        if (m == 0.0) return 0.0;
        double acc = 0.0;
        for (double v : x) acc += std::pow(v / m, p);
        acc += std::pow(S / m, p) * hzeta(p, static_cast<double>(x.size() + 1));
        return m * std::pow(acc, 1.0 / p);
      }
      case K::Tandori: {
        double m = 0.0;
        for (std::size_t i = x.size(); i-- > 0;) {
          m = std::max(m, std::fabs(x[i]));
          x[i] = m;
        }
        return (*base)(std::move(x));
      }
      default:
        return norm(fallback, make_sequence(std::move(x))).mid();
    }
  }

  static double maxabs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
  }
  static void sort_desc(std::vector<double>& x) {
    for (double& v : x) v = std::fabs(v);
    std::sort(x.begin(), x.end(), std::greater<double>());
  }
};

std::unique_ptr<Eval> compile(const SD& S, std::size_t L) {
  auto e = std::make_unique<Eval>();
  e->kind = S.kind();
  e->fallback = S;
  switch (S.kind()) {
    case K::Lp:
      e->p = S.p();
      break;
    case K::LInfty:
    case K::C0:
      break;
    case K::Weighted:
      e->w.resize(L);
      for (std::size_t i = 0; i < L; ++i) e->w[i] = S.weight().at(static_cast<long long>(i) + 1);
      e->base = compile(S.base(), L);
      break;
    case K::Symmetrized:
    case K::Tandori:
      e->base = compile(S.base(), L);
      break;
    case K::Cesaro:
      if (auto q = S.base().lp_exponent(); q && *q > 1.0)
        e->p = *q;
      else
        e->kind = K::Unknown;
      break;
    case K::Lorentz:
      e->w.resize(L);
      for (std::size_t i = 0; i < L; ++i) e->w[i] = S.phi().increment(static_cast<long long>(i) + 1, S.backward());
      break;
    case K::Marcinkiewicz:
      e->w.resize(L);
      for (std::size_t i = 0; i < L; ++i) {
        double n = static_cast<double>(i + 1);
        e->w[i] = S.phi()(n) / n;
      }
      break;
    default:
      e->kind = K::Unknown;
      break;
  }
  if (e->base && e->base->kind == K::Unknown) e->kind = K::Unknown;
  return e;
}

// The dual rule of kothe_dual is isometric, so ‖gh‖_1 <= ‖g‖_E ‖h‖_{E^×}.
bool isometric_dual(const SD& E) {
  switch (E.kind()) {
    case K::Lp:
    case K::LInfty:
    case K::C0:
    case K::Marcinkiewicz:
      return true;
    case K::Lorentz:
      return E.backward();
    case K::Weighted:
      return isometric_dual(E.base());
    case K::Orlicz:
      return E.lp_exponent().has_value();
    case K::Nakano:
      return E.exponents().is_constant();
    default:
      return false;
  }
}

// Exact library norm of a finite vector.
Bracket exact_norm(const SD& S, const std::vector<double>& x) {
  return norm(S, make_sequence(x), Truncation::exact(std::max<long long>(1, static_cast<long long>(x.size()))));
}

struct Support {
  std::vector<long long> idx;
  long long length = 0;
  bool truncated = false;
};

Support support_of(const SequenceSpec& lambda, const Truncation& N, int cap) {
  Support s;
  long long end = lambda.finite_support() ? lambda.support_end() : std::max(N.N, lambda.length());
  if (!lambda.finite_support() || end > N.N) s.truncated = true;
  end = std::min(end, std::max(N.N, 1LL));
  for (long long k = 1; k <= end; ++k) {
    if (lambda.at(k) != 0.0) {
      if (static_cast<int>(s.idx.size()) >= cap) {
        s.truncated = true;
        break;
      }
      s.idx.push_back(k);
    }
  }
  s.length = s.idx.empty() ? 1 : s.idx.back();
  return s;
}

// Multiplicative coordinate ascent of f over nonnegative vectors on m coordinates.
double ascend(const std::function<double(const std::vector<double>&)>& f, std::vector<double>& x, int max_sweeps) {
  double best = f(x);
  if (!std::isfinite(best)) best = 0.0;
  double s = 0.5;
  int sweeps = 0;
  while (s > 1e-9 && sweeps < max_sweeps) {
    ++sweeps;
    bool improved = false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      double old = x[k];
      double top = *std::max_element(x.begin(), x.end());
      double cands[4] = {old * (1.0 + s), old * (1.0 - s), 0.0, old == 0.0 ? s * (top > 0.0 ? top : 1.0) : old};
      double bv = best, bx = old;
      for (double c : cands) {
        if (c == old) continue;
        x[k] = c;
        double v = f(x);
        if (std::isfinite(v) && v > bv * (1.0 + 1e-15)) {
          bv = v;
          bx = c;
        }
      }
      x[k] = bx;
      if (bx != old) {
        best = bv;
        improved = true;
      }
    }
    if (!improved) s *= 0.5;
  }
  return best;
}

std::vector<double> scatter(const Support& S, const std::vector<double>& v) {
  std::vector<double> x(static_cast<std::size_t>(S.length), 0.0);
  for (std::size_t j = 0; j < S.idx.size(); ++j) x[static_cast<std::size_t>(S.idx[j] - 1)] = v[j];
  return x;
}

// Starting points: basis vectors, powers of |λ|, rank powers, seeded random vectors.
std::vector<std::vector<double>> starts(const std::vector<double>& a, int restarts, std::uint64_t seed) {
  std::size_t m = a.size();
  std::vector<std::vector<double>> out;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> e(m, 0.0);
    e[j] = 1.0;
    out.push_back(e);
  }
  for (double g : {0.25, 0.5, 1.0, 2.0}) {
    std::vector<double> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = std::pow(a[j], g);
    out.push_back(v);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] > a[j]; });
  for (double b : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::vector<double> v(m);
    for (std::size_t r = 0; r < m; ++r) v[order[r]] = std::pow(static_cast<double>(r + 1), -b);
    out.push_back(v);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < restarts; ++i) {
    std::vector<double> v(m);
    for (double& t : v) t = u(rng);
    out.push_back(v);
  }
  return out;
}

OracleResult closed_form_lp(double p, double q, const SequenceSpec& lambda, const Support& S) {
  OracleResult r;
  r.closed_form = true;
  std::vector<double> a(S.idx.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::fabs(lambda.at(S.idx[j]));
  SpaceDescriptor X = SD::lp(p), Y = SD::lp(q);
  std::vector<double> v(a.size(), 0.0);
  Bracket exact;
  if (p <= q) {
    exact = sup_abs(lambda);
    if (!a.empty()) v[static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin())] = 1.0;
  } else {
    double rr = std::isinf(p) ? q : 1.0 / (1.0 / q - 1.0 / p);
    exact = norm(SD::lp(rr), lambda);
    for (std::size_t j = 0; j < a.size(); ++j) v[j] = std::isinf(p) ? 1.0 : std::pow(a[j], rr / p);
  }
  if (a.empty()) {
    r.value = Bracket::exact(0.0);
    return r;
  }
  std::vector<double> x = scatter(S, v);
  double nx = exact_norm(X, x).upper;
  for (double& t : x) t /= nx;
  std::vector<double> lx(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) lx[k] = lambda.at(static_cast<long long>(k) + 1) * x[k];
  double lower = exact_norm(Y, lx).lower / exact_norm(X, x).upper;
  r.witness = x;
  r.value = Bracket::of(std::min(lower, exact.upper), std::max(exact.upper, lower), exact.status);
  if (!std::isfinite(exact.upper)) r.value.diagnostics = "lambda not in the multiplier space";
  return r;
}

}  // namespace

Tri embeds(const SD& X, const SD& Y) {
  if (X == Y) return Tri::Yes;
  auto p = lp_like(X), q = lp_like(Y);
  if (p && q) {
    if (X.kind() == K::C0 && Y.kind() == K::LInfty) return Tri::Yes;
    if (X.kind() == K::LInfty && Y.kind() == K::C0) return Tri::No;
    return *p <= *q ? Tri::Yes : Tri::No;
  }
  if (Y.kind() == K::LInfty && X.rearrangement_invariant()) return Tri::Yes;
  if (p && *p == 1.0 && Y.rearrangement_invariant()) return Tri::Yes;
  if (p && Y.kind() == K::Marcinkiewicz && power_weight(Y.phi()))
    return *p <= 1.0 / Y.phi().alpha() ? Tri::Yes : Tri::No;
  if (q && X.kind() == K::Lorentz && power_weight(X.phi()) && !X.phi().bounded())
    return *q >= 1.0 / X.phi().alpha() ? Tri::Yes : Tri::No;
  if (X.kind() == K::Tandori && X.base() == Y) return Tri::Yes;
  if (X.kind() == K::Nakano && Y.kind() == K::Nakano) return nakano_embeds(X.exponents(), Y.exponents());
  return Tri::Unknown;
}

MultiplierResult multiplier_space(const SD& X, const SD& Y) {
  if (X.kind() == K::Unknown || Y.kind() == K::Unknown)
    return result(SD::unknown("unknown input space"), "no rule: unknown input");
  if (X == Y) return result(SD::linfty(), "M(X,X) = l^inf");

  auto p = lp_like(X), q = lp_like(Y);
  if (p && q) {
    if (Y.kind() == K::C0) {
      if (std::isfinite(*p)) return result(SD::linfty(), "l^p embeds in c0: M(l^p, c0) = l^inf");
      return result(SD::c0(), "M(l^inf, c0) = c0");
    }
    if (*p <= *q) return result(SD::linfty(), "M(l^p,l^q) = l^inf for p <= q");
    double r = std::isinf(*p) ? *q : 1.0 / (1.0 / *q - 1.0 / *p);
    return result(SD::lp(r), "M(l^p,l^q) = l^r, 1/r = 1/q - 1/p");
  }

  if (embeds(X, Y) == Tri::Yes && X.rearrangement_invariant() && Y.rearrangement_invariant())
    return result(SD::linfty(), "X embeds in Y: M(X,Y) = l^inf", true);

  auto MX = as_orlicz(X), MY = as_orlicz(Y);
  if (MX && MY) {
    OrliczFunction C = OrliczFunction::conjugate_of(*MY, *MX);
    MultiplierResult r = result(SD::orlicz(C), "M(l_M, l_N) = l_(N (-) M)", true);
    if (C.kind() == OrliczFunction::Kind::Conjugate) r.warning = "conjugate evaluated by brute force";
    return r;
  }
  auto PX = as_nakano(X), PY = as_nakano(Y);
  if (PX && PY) {
    try {
      ExponentRule r = nakano_multiplier_exponents(*PX, *PY);
      return result(SD::nakano(r), "M(l^{p_n}, l^{q_n}) = l^{r_n}, 1/r_n = 1/q_n - 1/p_n", true);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ExponentOrder) throw;
      if (nakano_embeds(*PX, *PY) == Tri::Yes)
        return result(SD::linfty(), "p_n <= q_n: M(l^{p_n}, l^{q_n}) = l^inf", true);
      MultiplierResult u = result(SD::unknown("mixed exponent order"), "no rule: mixed exponent order");
      u.warning = e.what();
      return u;
    }
  }
  auto FX = as_family(X), FY = as_family(Y);
  if (FX && FY)
    return result(SD::musielak_orlicz(OrliczFamily::conjugate(*FY, *FX)), "M(l_{M_n}, l_{N_n}) = l_{N_n (-) M_n}", true);

  std::string warn;
  if (X.kind() == K::Marcinkiewicz) {
    try {
      std::string rule;
      SD d = multiplier_from_marcinkiewicz(X.phi(), Y, rule);
      bool main = d.kind() == K::Symmetrized;
      return result(d, rule, main, main ? std::optional<std::pair<double, double>>({1.0, 2.0}) : std::nullopt);
    } catch (const Error& e) {
      warn = e.what();
    }
  }
  if (Y.kind() == K::Lorentz) {
    try {
      std::string rule;
      SD d = multiplier_into_lorentz(X, Y.phi(), rule);
      return result(d, rule, d.kind() == K::Symmetrized);
    } catch (const Error& e) {
      warn = e.what();
    }
  }
  if (X.kind() == K::Cesaro && Y.kind() == K::Cesaro) return cesaro_multiplier_space(X.base(), Y.base());

  MultiplierResult u = result(SD::unknown("no multiplier rule"), "no rule");
  u.warning = warn;
  return u;
}

OracleResult multiplier_norm_oracle(const SD& X, const SD& Y, const SequenceSpec& lambda, const Truncation& N,
                                    const OracleOptions& opt) {
  lambda.validate();
  if (N.N < 1) raise(ErrorKind::InvalidArgument, "truncation must be >= 1");
  if (opt.restarts < 0 || opt.max_sweeps < 1 || opt.max_support < 1 || !(opt.slack >= 0.0))
    raise(ErrorKind::InvalidArgument, "invalid oracle options");
  Support S = support_of(lambda, N, opt.max_support);
  OracleResult res;
  auto p = lp_like(X), q = lp_like(Y);
  bool lp_pair = p && q && X.kind() != K::C0 && Y.kind() != K::C0;
  if (S.idx.empty()) {
    res.value = Bracket::exact(0.0);
    res.closed_form = true;
    if (S.truncated) res.value = Bracket::of(0.0, kInf, Certainty::Heuristic);
    return res;
  }
  if (lp_pair) {
    res = closed_form_lp(*p, *q, lambda, S);
    if (!opt.force_search) return res;
  } else if (X == Y) {
    res.closed_form = true;
    Bracket s = sup_abs(lambda);
    std::size_t jbest = 0;
    for (std::size_t j = 1; j < S.idx.size(); ++j)
      if (std::fabs(lambda.at(S.idx[j])) > std::fabs(lambda.at(S.idx[jbest]))) jbest = j;
    std::vector<double> e(S.idx.size(), 0.0);
    e[jbest] = 1.0;
    res.witness = scatter(S, e);
    double lo = std::fabs(lambda.at(S.idx[jbest]));
    res.value = Bracket::of(lo, std::max(lo, s.upper), s.status);
    if (!opt.force_search) return res;
  }

  std::size_t L = static_cast<std::size_t>(S.length);
  std::unique_ptr<Eval> ex = compile(X, L), ey = compile(Y, L);
  std::vector<double> lam(L);
  for (std::size_t k = 0; k < L; ++k) lam[k] = lambda.at(static_cast<long long>(k) + 1);
  std::vector<double> a(S.idx.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::fabs(lam[static_cast<std::size_t>(S.idx[j] - 1)]);
  auto ratio = [&](const std::vector<double>& v) {
    std::vector<double> x = scatter(S, v);
    double nx = (*ex)(x);
    if (!(nx > 0.0)) return 0.0;
    for (std::size_t k = 0; k < L; ++k) x[k] *= lam[k];
    return (*ey)(std::move(x)) / nx;
  };
  double best = -1.0;
  std::vector<double> bestv;
  for (auto& v : starts(a, opt.restarts, opt.seed)) {
    double r = ascend(ratio, v, opt.max_sweeps);
    if (r > best) {
      best = r;
      bestv = v;
    }
  }
  std::vector<double> x = scatter(S, bestv);
  double nx = exact_norm(X, x).upper;
  for (double& t : x) t /= nx;
  std::vector<double> lx(L);
  for (std::size_t k = 0; k < L; ++k) lx[k] = lam[k] * x[k];
  double lower = exact_norm(Y, lx).lower / exact_norm(X, x).upper;
  res.search_lower = lower;
  if (res.closed_form) return res;
  res.witness = x;
  res.value = Bracket::of(lower, lower * (1.0 + opt.slack), Certainty::Heuristic);
  res.value.diagnostics = "upper = lower (1 + slack), no closed form";
  if (S.truncated) res.value.diagnostics += "; support truncated";
  return res;
}

std::optional<SD> product_space(const SD& E, const SD& F) {
  auto p = E.lp_exponent(), r = F.lp_exponent();
  if (p && r) {
    double inv = 1.0 / *p + 1.0 / *r;
    if (inv == 0.0) return SD::linfty();
    if (inv <= 1.0) return SD::lp(1.0 / inv);
    return std::nullopt;
  }
  if (F.kind() == K::LInfty) return E;
  if (E.kind() == K::LInfty) return F;
  try {
    if (F == kothe_dual(E)) return SD::lp(1.0);
  } catch (const Error&) {
  }
  try {
    if (E == kothe_dual(F)) return SD::lp(1.0);
  } catch (const Error&) {
  }
  return std::nullopt;
}

ProductResult product_space_norm_oracle(const SD& E, const SD& F, const SequenceSpec& f, const Truncation& N,
                                        const OracleOptions& opt) {
  f.validate();
  if (!f.finite_support()) raise(ErrorKind::UnsupportedTail, "product-space oracle needs finite support");
  if (f.support_end() > N.N) raise(ErrorKind::UnsupportedTail, "support of f exceeds the truncation");
  ProductResult res;
  Support S;
  for (long long k = 1; k <= f.support_end(); ++k)
    if (f.at(k) != 0.0) S.idx.push_back(k);
  S.length = S.idx.empty() ? 1 : S.idx.back();
  if (S.idx.empty()) {
    res.value = Bracket::exact(0.0);
    res.closed_form = true;
    return res;
  }
  std::size_t L = static_cast<std::size_t>(S.length);
  std::vector<double> a(S.idx.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::fabs(f.at(S.idx[j]));
  auto value_at = [&](const std::vector<double>& g) {
    std::vector<double> gx = scatter(S, g), hx(L, 0.0);
    for (std::size_t j = 0; j < S.idx.size(); ++j) hx[static_cast<std::size_t>(S.idx[j] - 1)] = a[j] / g[j];
    return exact_norm(E, gx).upper * exact_norm(F, hx).upper;
  };

  auto p = E.lp_exponent(), r = F.lp_exponent();
  if (p && r) {
    double inv = 1.0 / *p + 1.0 / *r;
    std::vector<double> g(a.size());
    double v;
    if (inv == 0.0) {
      std::fill(g.begin(), g.end(), 1.0);
      v = *std::max_element(a.begin(), a.end());
    } else {
      double qq = 1.0 / inv;
      double m = *std::max_element(a.begin(), a.end()), s = 0.0;
      for (double t : a) s += std::pow(t / m, qq);
      v = m * std::pow(s, inv);
      for (std::size_t j = 0; j < a.size(); ++j) g[j] = std::isinf(*p) ? 1.0 : std::pow(a[j], qq / *p);
    }
    res.closed_form = true;
    res.g = scatter(S, g);
    res.search_upper = value_at(g);
    res.value = Bracket::of(v, std::max(v, res.search_upper));
    if (!opt.force_search) return res;
  } else if (F.kind() == K::LInfty || E.kind() == K::LInfty) {
    std::vector<double> g = F.kind() == K::LInfty ? a : std::vector<double>(a.size(), 1.0);
    double v = exact_norm(F.kind() == K::LInfty ? E : F, f.head(f.support_end())).upper;
    res.closed_form = true;
    res.g = scatter(S, g);
    res.search_upper = value_at(g);
    res.value = Bracket::of(v, std::max(v, res.search_upper));
    if (!opt.force_search) return res;
  }

  std::unique_ptr<Eval> ee = compile(E, L), ef = compile(F, L);
  auto objective = [&](const std::vector<double>& u) {
    std::vector<double> gx(L, 0.0), hx(L, 0.0);
    for (std::size_t j = 0; j < S.idx.size(); ++j) {
      double g = std::exp(u[j]);
      gx[static_cast<std::size_t>(S.idx[j] - 1)] = g;
      hx[static_cast<std::size_t>(S.idx[j] - 1)] = a[j] / g;
    }
    return (*ee)(std::move(gx)) * (*ef)(std::move(hx));
  };
  double best = kInf;
  std::vector<double> bu;
  for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::vector<double> u(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) u[j] = th * std::log(a[j]);
    double cur = objective(u);
    double s = 1.0;
    int sweeps = 0;
    while (s > 1e-10 && sweeps < opt.max_sweeps) {
      ++sweeps;
      bool improved = false;
      for (std::size_t j = 0; j < u.size(); ++j) {
        for (double d : {s, -s}) {
          u[j] += d;
          double v = objective(u);
          if (v < cur * (1.0 - 1e-15)) {
            cur = v;
            improved = true;
            break;
          }
          u[j] -= d;
        }
      }
      if (!improved) s *= 0.5;
    }
    if (cur < best) {
      best = cur;
      bu = u;
    }
  }
  std::vector<double> g(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) g[j] = std::exp(bu[j]);
  double up = value_at(g);
  if (res.closed_form) {
    res.search_upper = std::min(res.search_upper, up);
    return res;
  }
  res.g = scatter(S, g);
  res.search_upper = up;
  double lower = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    std::vector<double> e(L, 0.0);
    e[static_cast<std::size_t>(S.idx[j] - 1)] = 1.0;
    lower = std::max(lower, a[j] * exact_norm(E, e).lower * exact_norm(F, e).lower);
  }
  bool loz = false;
  try {
    loz = (isometric_dual(E) && F == kothe_dual(E)) || (isometric_dual(F) && E == kothe_dual(F));
  } catch (const Error&) {
  }
  if (loz) lower = std::max(lower, std::accumulate(a.begin(), a.end(), 0.0));
  res.value = Bracket::of(std::min(lower, up), up);
  res.value.diagnostics = loz ? "lower bound sum |f_k| from the pairing with the Kothe dual" : "lower bound from single coordinates";
  return res;
}

const char* to_string(Factorization f) {
  switch (f) {
    case Factorization::Holds:
      return "Holds";
    case Factorization::Fails:
      return "Fails";
    case Factorization::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

const char* to_string(Pitt p) {
  switch (p) {
    case Pitt::AllCompact:
      return "AllCompact";
    case Pitt::SomeNonCompact:
      return "SomeNonCompact";
    case Pitt::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

std::vector<SequenceSpec> default_samples() {
  std::vector<SequenceSpec> s;
  for (double b : {0.25, 0.5, 0.75, 1.0, 1.5}) s.push_back(SequenceSpec({}, power_tail(1.0, b)));
  s.push_back(SequenceSpec({}, constant_tail(1.0)));
  s.push_back(make_sequence({1.0}));
  s.push_back(make_sequence({3.0, 1.0, 2.0}));
  return s;
}

// Points -log10 t spaced geometrically from 1e-2 to opt.decades.
std::vector<double> decade_grid(const FactorizationOptions& opt) {
  std::vector<double> g;
  double ratio = std::pow(2.0, 1.0 / opt.points_per_octave);
  for (double x = 1e-2; x < opt.decades * (1.0 - 1e-9); x *= ratio) g.push_back(x);
  g.push_back(opt.decades);
  return g;
}

bool orlicz_route(const SD& X, const SD& Y, const FactorizationOptions& opt, FactorizationReport& rep) {
  auto M0 = as_orlicz(X), M1 = as_orlicz(Y);
  if (!M0 || !M1) return false;
  OrliczFunction C = OrliczFunction::conjugate_of(*M1, *M0);
  if (C.vanishes_below() > 0.0) return false;
  rep.route = "orlicz";
  std::vector<double> grid = decade_grid(opt);
  double lo = kInf, hi = 0.0;
  std::vector<double> vals;
  for (double x : grid) {
    Bracket r = factorization_ratio_log(*M0, *M1, -x * std::log(10.0), &C);
    rep.ratios.emplace_back(-x, r);
    vals.push_back(r.mid());
    lo = std::min(lo, r.lower);
    hi = std::max(hi, r.upper);
  }
  rep.spread = hi / lo - 1.0;
  std::size_t nb = 4, bs = vals.size() / nb;
  std::vector<double> block(nb, kInf);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    std::size_t b = std::min(nb - 1, i / std::max<std::size_t>(1, bs));
    block[b] = std::min(block[b], vals[i]);
  }
  rep.decay = block[0] / *std::min_element(block.begin(), block.end());
  bool still_falling = block[nb - 1] < block[nb - 2];
  std::ostringstream os;
  os << "R over " << grid.size() << " points, -log10 t in [" << grid.front() << ", " << grid.back()
     << "]: spread " << fmt(rep.spread) << ", decay of the running infimum " << fmt(rep.decay);
  if (rep.decay >= opt.decay_factor && still_falling) {
    rep.verdict = Factorization::Fails;
    os << " >= " << fmt(opt.decay_factor) << " and still decreasing";
  } else if (hi / lo <= opt.max_spread) {
    rep.verdict = Factorization::Holds;
    os << "; ratio within a factor " << fmt(hi / lo) << " <= " << fmt(opt.max_spread);
  } else {
    rep.verdict = Factorization::Inconclusive;
  }
  rep.reason = os.str();
  return true;
}

}  // namespace

FactorizationReport factorization_check(const SD& X, const SD& Y, const std::vector<SequenceSpec>& sample_fs,
                                        const FactorizationOptions& opt) {
  if (!(opt.max_spread >= 1.0) || !(opt.decay_factor > 1.0) || !(opt.decades > 0.0) || opt.points_per_octave < 1)
    raise(ErrorKind::InvalidArgument, "invalid factorization options");
  FactorizationReport rep;
  try {
    if (orlicz_route(X, Y, opt, rep)) return rep;
  } catch (const Error& e) {
    rep = FactorizationReport{};
    rep.reason = std::string("orlicz route abandoned: ") + e.what() + "; ";
  }
  rep.route = "generic";
  MultiplierResult M = multiplier_space(X, Y);
  if (!M.known()) {
    rep.reason += "M(X,Y) unknown";
    return rep;
  }
  std::optional<SD> P = product_space(X, M.descriptor);
  if (P && *P == Y) {
    rep.verdict = Factorization::Holds;
    rep.reason += "X (.) M(X,Y) = " + P->name() + " = Y";
    return rep;
  }
  std::vector<SequenceSpec> samples = sample_fs.empty() ? default_samples() : sample_fs;
  if (P) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      std::string ry, rp;
      Tri iy = in_space(Y, samples[i], ry);
      Tri ip = in_space(*P, samples[i], rp);
      if (iy == Tri::Yes && ip == Tri::No) {
        rep.verdict = Factorization::Fails;
        rep.reason += "X (.) M(X,Y) = " + P->name() + "; sample " + std::to_string(i) + " lies in " + Y.name() +
                      " (" + ry + ") but not in " + P->name() + " (" + rp + ")";
        return rep;
      }
    }
  }
  // empirical comparison on finitely supported samples
  double lo = kInf, hi = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (long long len : {4LL, 16LL, 64LL}) {
      SequenceSpec f = make_sequence(samples[i].head(len));
      if (f.support_end() < 1) continue;
      try {
        ProductResult pr = product_space_norm_oracle(X, M.descriptor, f, Truncation::exact(len));
        double ny = norm(Y, f).mid();
        if (!(ny > 0.0)) continue;
        Bracket b = Bracket::of(pr.value.lower / ny, pr.value.upper / ny, pr.value.status);
        rep.ratios.emplace_back(static_cast<double>(i), b);
        lo = std::min(lo, b.lower);
        hi = std::max(hi, b.upper);
      } catch (const Error&) {
      }
      if (samples[i].finite_support()) break;
    }
  }
  if (rep.ratios.empty()) {
    rep.reason += "no evaluable samples";
    return rep;
  }
  rep.spread = hi / lo - 1.0;
  if (hi / lo > opt.max_spread) {
    rep.verdict = Factorization::Fails;
    rep.reason += "product norm / Y norm spread " + fmt(hi / lo) + " exceeds " + fmt(opt.max_spread);
  } else {
    rep.reason += "product norm / Y norm within a factor " + fmt(hi / lo) + " on finite samples";
  }
  return rep;
}

PittReport pitt_predicate(const SD& X, const SD& Y) {
  PittReport rep;
  MultiplierResult M = multiplier_space(X, Y);
  if (!M.known()) {
    rep.reason = "M(X,Y) unknown: " + M.rule;
    return rep;
  }
  OcStatus oc = is_order_continuous(M.descriptor);
  std::string head = "M(X,Y) = " + M.descriptor.name() + " [" + M.rule + "]; ";
  if (oc.status == Tri::Yes) {
    rep.verdict = Pitt::AllCompact;
    rep.reason = head + "order continuous: " + oc.rule;
  } else if (oc.status == Tri::No) {
    rep.verdict = Pitt::SomeNonCompact;
    rep.reason = head + "not order continuous: " + oc.rule;
  } else {
    rep.reason = head + oc.rule;
  }
  return rep;
}

}  // namespace kothe
