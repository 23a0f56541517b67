#include "kothe/essnorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kothe {

namespace {

using SD = SpaceDescriptor;
using K = SpaceDescriptor::Kind;

constexpr double kZeroTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Tri reflexive(const SD& X) {
  auto p = X.lp_exponent();
  if (p) return *p > 1.0 && std::isfinite(*p) ? Tri::Yes : Tri::No;
  switch (X.kind()) {
    case K::C0:
    case K::LInfty:
    case K::Marcinkiewicz:
    case K::Lorentz:
      return Tri::No;
    default:
      return Tri::Unknown;
  }
}

Verdict from_limit(const Bracket& L) {
  if (L.certified() && L.upper <= kZeroTol) return Verdict::Compact;
  if (L.certified() && L.lower > kZeroTol) return Verdict::NonCompact;
  return Verdict::Inconclusive;
}

void monotone_uppers(std::vector<std::pair<long long, Bracket>>& t) {
  for (std::size_t i = 1; i < t.size(); ++i) t[i].second.upper = std::min(t[i].second.upper, t[i - 1].second.upper);
  for (auto& [n, b] : t) b.lower = std::min(b.lower, b.upper);
}

std::vector<long long> sorted_grid(std::vector<long long> g) {
  if (g.empty()) g = default_n_grid();
  for (long long n : g)
    if (n < 1) raise(ErrorKind::InvalidArgument, "n grid entries must be >= 1");
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

EssNormReport essential_norm(const SD& X, const SD& Y, const SequenceSpec& lambda, const std::vector<long long>& n_grid,
                             const OracleOptions& opt) {
  lambda.validate();
  std::vector<long long> grid = sorted_grid(n_grid);
  EssNormReport rep;
  if (reflexive(X) != Tri::Yes && is_order_continuous(Y).status != Tri::Yes)
    rep.warnings.push_back("neither X reflexive nor Y order continuous: only the upper estimate is guaranteed");
  MultiplierResult M = multiplier_space(X, Y);
  if (M.known()) {
    std::string why;
    Tri in = in_space(M.descriptor, lambda, why);
    if (in == Tri::No) raise(ErrorKind::NotBounded, "lambda is not in M(X,Y) = " + M.descriptor.name() + ": " + why);
    if (in == Tri::Unknown) rep.warnings.push_back("boundedness of M_lambda assumed: " + why);
    OcReport oc = oc_membership(M.descriptor, lambda, grid);
    double c = 1.0, C = 1.0;
    if (M.constants) {
      c = M.constants->first;
      C = M.constants->second;
    }
    rep.tail_norms = oc.tail_norms;
    for (auto& [n, b] : rep.tail_norms) {
      b.lower *= c;
      b.upper *= C;
    }
    rep.limit = oc.limit;
    rep.limit.lower *= c;
    rep.limit.upper *= C;
    rep.certificate = "tail norms in " + M.descriptor.name() + " [" + M.rule + "]; " + oc.rule;
    if (M.equivalence && !M.constants)
      rep.certificate += "; equivalent norm with unquantified constants, zero limit preserved";
    else if (M.constants)
      rep.certificate += "; scaled by the equivalence constants [" + fmt(c) + ", " + fmt(C) + "]";
    if (!M.warning.empty()) rep.warnings.push_back(M.warning);
    if (oc.verdict == Membership::Member)
      rep.verdict = Verdict::Compact;
    else if (oc.verdict == Membership::NonMember)
      rep.verdict = Verdict::NonCompact;
    else
      rep.verdict = Verdict::Inconclusive;
    return rep;
  }
  rep.warnings.push_back("M(X,Y) unknown: tail norms from the search oracle");
  for (long long n : grid) {
    SequenceSpec t = tail_restrict(lambda, n);
    OracleResult o = multiplier_norm_oracle(X, Y, t, Truncation::certified(n + 64), opt);
    rep.tail_norms.emplace_back(n, o.value);
  }
  monotone_uppers(rep.tail_norms);
  const Bracket& last = rep.tail_norms.back().second;
  if (lambda.finite_support() && lambda.support_end() < grid.back()) {
    rep.limit = Bracket::exact(0.0);
    rep.verdict = Verdict::Compact;
    rep.certificate = "finite support";
    return rep;
  }
  rep.limit = Bracket::of(0.0, last.upper, Certainty::Heuristic);
  rep.verdict = Verdict::Inconclusive;
  rep.certificate = "search oracle on truncated tails; no tail certificate";
  return rep;
}

EssNormReport essential_norm(const SD& X, const SD& Y, const SequenceSpec& lambda) {
  return essential_norm(X, Y, lambda, default_n_grid());
}

EssNormReport essential_norm_self(const SD& X, const SequenceSpec& lambda, const std::vector<long long>& n_grid) {
  lambda.validate();
  std::vector<long long> grid = sorted_grid(n_grid);
  EssNormReport rep;
  OcStatus oc = is_order_continuous(X);
  if (oc.status != Tri::Yes) rep.warnings.push_back("X not known to be order continuous: " + oc.rule);
  Bracket L = limsup_abs(lambda);
  if (std::isinf(L.lower)) raise(ErrorKind::NotBounded, "lambda is unbounded");
  for (long long n : grid) {
    Bracket b = sup_abs(lambda, n);
    if (L.certified()) b.lower = std::max(b.lower, L.lower);
    rep.tail_norms.emplace_back(n, b);
  }
  monotone_uppers(rep.tail_norms);
  rep.limit = L;
  if (!rep.tail_norms.empty()) rep.limit.upper = std::min(rep.limit.upper, rep.tail_norms.back().second.upper);
  rep.limit.lower = std::min(rep.limit.lower, rep.limit.upper);
  rep.verdict = from_limit(rep.limit);
  rep.certificate = "limsup |lambda_n| from tail suprema";
  return rep;
}

EssNormReport essential_norm_self(const SD& X, const SequenceSpec& lambda) {
  return essential_norm_self(X, lambda, default_n_grid());
}

Bracket distance_to_oc_part(const SD& Z, const SequenceSpec& z) { return oc_membership(Z, z).limit; }

std::vector<std::pair<long long, Bracket>> approximation_numbers(const SequenceSpec& lambda, double q, double p,
                                                                 const std::vector<long long>& n_grid) {
  lambda.validate();
  if (!(p >= 1.0) || !(q > p)) raise(ErrorKind::ExponentOrder, "approximation numbers need 1 <= p < q");
  double r = std::isinf(q) ? p : 1.0 / (1.0 / p - 1.0 / q);
  std::vector<long long> grid = sorted_grid(n_grid);
  SequenceSpec ls = decreasing_rearrangement(lambda, Truncation::certified(4096));
  SD R = SD::lp(r);
  std::vector<std::pair<long long, Bracket>> out;
  for (long long n : grid) {
    try {
      out.emplace_back(n, norm(R, tail_restrict(ls, n)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotInSpace) throw;
      Bracket b = Bracket::of(kInf, kInf);
      b.diagnostics = "lambda* not in l^" + fmt(r);
      out.emplace_back(n, b);
    }
  }
  monotone_uppers(out);
  return out;
}

MultiplierResult cesaro_multiplier_space(const SD& X, const SD& Y) {
  MultiplierResult res;
  auto p = X.lp_exponent(), q = Y.lp_exponent();
  if (p && q && std::isfinite(*p) && std::isfinite(*q) && *p > 1.0 && *q > 1.0) {
    if (*p < *q) {
      double a = 1.0 / *p - 1.0 / *q;
      res.descriptor = SD::weighted(SD::linfty(), SequenceSpec({}, power_tail(1.0, a)), "n^(-" + fmt(a) + ")");
      res.rule = "M(ces_p, ces_q) = l^inf(n^(1/q - 1/p))";
      res.equivalence = true;
      return res;
    }
    if (*p == *q) {
      res.descriptor = SD::linfty();
      res.rule = "M(CX, CX) = l^inf";
      return res;
    }
  }
  if (!X.rearrangement_invariant() || !Y.rearrangement_invariant()) {
    res.descriptor = SD::unknown("Cesaro rule needs rearrangement invariant X and Y");
    res.rule = "no rule";
    res.warning = "X and Y must be rearrangement invariant";
    return res;
  }
  MultiplierResult M = multiplier_space(X, Y);
  if (!M.known()) {
    res.descriptor = SD::unknown("M(X,Y) unknown");
    res.rule = "no rule";
    res.warning = "M(X,Y) unknown";
    return res;
  }
  FactorizationReport f = factorization_check(X, Y);
  if (f.verdict != Factorization::Holds) {
    res.descriptor = SD::unknown("factorization X (.) M(X,Y) = Y not established");
    res.rule = "no rule";
    res.warning = std::string("factorization ") + to_string(f.verdict) + ": " + f.reason;
    return res;
  }
  res.descriptor = SD::tandori(M.descriptor);
  res.rule = "X (.) M(X,Y) = Y: M(CX, CY) = tilde M(X,Y)";
  res.equivalence = true;
  return res;
}

EssNormReport fourier_multiplier_essnorm(const SD& E, const SequenceSpec& lambda) {
  std::vector<std::string> warn;
  if (is_order_continuous(E).status != Tri::Yes) warn.push_back("E not known to be order continuous");
  if (!E.has_fatou()) warn.push_back("E lacks the Fatou property");
  EssNormReport rep = essential_norm(SD::lp(2.0), E, lambda);
  rep.warnings.insert(rep.warnings.end(), warn.begin(), warn.end());
  return rep;
}

}  // namespace kothe
