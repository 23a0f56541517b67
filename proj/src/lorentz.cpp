#include "kothe/lorentz.hpp"

#include <cmath>

namespace kothe {

namespace {

constexpr double kIdxTol = 1e-9;
constexpr double kZeroTol = 1e-12;

double growth(const ConcaveWeight& f) {
  switch (f.kind()) {
    case ConcaveWeight::Kind::Power:
    case ConcaveWeight::Kind::Table:
      return f.alpha();
    case ConcaveWeight::Kind::Rational:
      return 0.0;
    case ConcaveWeight::Kind::Affine:
      return f.a1() > 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

// Both indices of c t^a equal 1/a; bounded rules have index inf.
double rule_index(const ConcaveWeight& phi) {
  double g = growth(phi);
  return g > 0.0 ? 1.0 / g : kInf;
}

Tri in_c0(const SequenceSpec& x, std::string& reason) {
  if (x.finite_support()) {
    reason = "finite support";
    return Tri::Yes;
  }
  Bracket L = limsup_abs(x);
  if (L.certified() && L.upper <= kZeroTol) {
    reason = "limsup = 0";
    return Tri::Yes;
  }
  if (L.certified() && L.lower > kZeroTol) {
    reason = "limsup >= " + std::to_string(L.lower);
    return Tri::No;
  }
  reason = "limsup not certified";
  return Tri::Unknown;
}

Tri in_oc_part(const SpaceDescriptor& S, const SequenceSpec& x, std::string& reason) {
  Tri in = in_space(S, x, reason);
  if (in != Tri::Yes) return in;
  OcReport r = oc_membership(S, x);
  reason = r.rule;
  if (r.verdict == Membership::Member) return Tri::Yes;
  if (r.verdict == Membership::NonMember) return Tri::No;
  return Tri::Unknown;
}

Verdict from_member(Tri t) {
  if (t == Tri::Yes) return Verdict::Compact;
  if (t == Tri::No) return Verdict::NonCompact;
  return Verdict::Inconclusive;
}

Tri reflexive(const SpaceDescriptor& X) {
  auto p = X.lp_exponent();
  if (p) return *p > 1.0 && std::isfinite(*p) ? Tri::Yes : Tri::No;
  if (X.kind() == SpaceDescriptor::Kind::LInfty || X.kind() == SpaceDescriptor::Kind::C0) return Tri::No;
  if (X.kind() == SpaceDescriptor::Kind::Marcinkiewicz) return Tri::No;
  if (X.kind() == SpaceDescriptor::Kind::Lorentz) return Tri::No;
  return Tri::Unknown;
}

}  // namespace

IndexCheck lower_index_above_one(const ConcaveWeight& phi) {
  IndexCheck r;
  DilationIndices d = dilation_indices(phi);
  r.index = d.p_lower;
  double ip = rule_index(phi);
  if (ip > 1.0 + kIdxTol) {
    r.holds = Tri::Yes;
    r.reason = "p_phi = " + std::to_string(ip);
  } else {
    r.holds = Tri::No;
    r.reason = "p_phi = 1";
  }
  return r;
}

IndexCheck upper_index_finite(const ConcaveWeight& phi) {
  IndexCheck r;
  DilationIndices d = dilation_indices(phi);
  r.index = d.q_upper;
  double iq = rule_index(phi);
  if (std::isfinite(iq)) {
    r.holds = Tri::Yes;
    r.reason = "q_phi = " + std::to_string(iq);
  } else {
    r.holds = Tri::No;
    r.reason = "q_phi = inf";
  }
  return r;
}

Tri ratio_unbounded(const ConcaveWeight& num, const ConcaveWeight& den) {
  double a = growth(num), b = growth(den);
  // every built-in rule is asymptotically c t^a, so equal exponents give a bounded ratio
  return a > b ? Tri::Yes : Tri::No;
}

SpaceDescriptor multiplier_from_marcinkiewicz(const ConcaveWeight& phi, const SpaceDescriptor& Y, std::string& rule) {
  if (phi.bounded()) {
    rule = "phi bounded: M(m_phi, Y) = M(l^inf, Y) = Y";
    return Y;
  }
  if (!Y.rearrangement_invariant()) raise(ErrorKind::HypothesisUnmet, "Y must be rearrangement invariant");
  IndexCheck h = lower_index_above_one(phi);
  if (h.holds != Tri::Yes) raise(ErrorKind::HypothesisUnmet, "needs 1 < p_phi: " + h.reason);
  std::string why;
  Tri in = in_space(Y, phi.reciprocal(), why);
  if (in == Tri::Yes) {
    rule = "1/phi in Y: M(m_phi, Y) = l^inf";
    return SpaceDescriptor::linfty();
  }
  if (in == Tri::Unknown) raise(ErrorKind::HypothesisUnmet, "membership of 1/phi in Y undecided: " + why);
  rule = "M(m_phi, Y) = [Y(1/phi)]^(*)";
  return SpaceDescriptor::symmetrized(SpaceDescriptor::weighted(Y, phi.reciprocal(), "1/" + phi.name()));
}

SpaceDescriptor multiplier_from_marcinkiewicz(const ConcaveWeight& phi, const SpaceDescriptor& Y) {
  std::string r;
  return multiplier_from_marcinkiewicz(phi, Y, r);
}

SpaceDescriptor multiplier_into_lorentz(const SpaceDescriptor& X, const ConcaveWeight& phi, std::string& rule) {
  if (phi.bounded()) {
    rule = "phi bounded: lambda_phi = l^inf and M(X, l^inf) = l^inf";
    return SpaceDescriptor::linfty();
  }
  if (!X.rearrangement_invariant()) raise(ErrorKind::HypothesisUnmet, "X must be rearrangement invariant");
  IndexCheck h = upper_index_finite(phi);
  if (h.holds != Tri::Yes) raise(ErrorKind::HypothesisUnmet, "needs q_phi < inf: " + h.reason);
  SpaceDescriptor Xd = kothe_dual(X);
  SequenceSpec w = phi.over_n();
  std::string why;
  Tri in = in_space(Xd, w, why);
  if (in == Tri::Yes) {
    rule = "phi(n)/n in X^x: M(X, lambda_phi) = l^inf";
    return SpaceDescriptor::linfty();
  }
  if (in == Tri::Unknown) raise(ErrorKind::HypothesisUnmet, "membership of phi(n)/n in X^x undecided: " + why);
  rule = "M(X, lambda_phi) = [X^x(phi(t)/t)]^(*)";
  return SpaceDescriptor::symmetrized(SpaceDescriptor::weighted(Xd, w, phi.name() + "/t"));
}

SpaceDescriptor multiplier_into_lorentz(const SpaceDescriptor& X, const ConcaveWeight& phi) {
  std::string r;
  return multiplier_into_lorentz(X, phi, r);
}

const char* to_string(LorentzCase c) {
  switch (c) {
    case LorentzCase::I:
      return "i";
    case LorentzCase::II:
      return "ii";
    case LorentzCase::III:
      return "iii";
    case LorentzCase::IV:
      return "iv";
    case LorentzCase::V:
      return "v";
  }
  return "?";
}

LorentzCaseReport lorentz_case_check(LorentzCase c, const LorentzCaseParams& P, const SequenceSpec& lambda) {
  LorentzCaseReport rep;
  auto fail = [&](const std::string& why) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = why;
    return rep;
  };
  auto degenerate = [&](const std::string& why) {
    rep.branch = "degenerate";
    rep.target = "c0";
    std::string r;
    rep.member = in_c0(lambda, r);
    rep.verdict = from_member(rep.member);
    rep.reason = why + "; lambda in c0: " + r;
    return rep;
  };
  try {
    lambda.validate();
    Truncation T = Truncation::certified(4096);
    SequenceSpec ls = decreasing_rearrangement(lambda, T);
    switch (c) {
      case LorentzCase::I:
      case LorentzCase::III: {
        const SpaceDescriptor& X = P.space;
        if (!X.rearrangement_invariant() || !X.has_fatou()) return fail("space must be rearrangement invariant with Fatou");
        if (c == LorentzCase::I && reflexive(X) != Tri::Yes) return fail("X must be reflexive");
        IndexCheck h = upper_index_finite(P.phi);
        if (h.holds != Tri::Yes) return fail("needs q_phi < inf: " + h.reason);
        SpaceDescriptor Xd = kothe_dual(X);
        std::string why;
        Tri w_in = in_space(Xd, P.phi.over_n(), why);
        if (w_in == Tri::Unknown) return fail("membership of phi(n)/n in the dual undecided: " + why);
        if (w_in == Tri::Yes) return degenerate("phi(n)/n in X^x");
        rep.branch = "main";
        SequenceSpec d = pointwise_product(P.phi.over_n(), ls);
        std::string r;
        if (c == LorentzCase::I) {
          rep.target = Xd.name();
          rep.member = in_space(Xd, d, r);
        } else {
          rep.target = "(" + Xd.name() + ")_o";
          rep.member = in_oc_part(Xd, d, r);
        }
        rep.verdict = from_member(rep.member);
        rep.reason = "phi(n)/n lambda*_n in " + rep.target + ": " + r;
        return rep;
      }
      case LorentzCase::II: {
        const SpaceDescriptor& Y = P.space;
        if (!Y.rearrangement_invariant() || !Y.has_fatou()) return fail("space must be rearrangement invariant with Fatou");
        if (is_order_continuous(Y).status != Tri::Yes) return fail("Y must be order continuous");
        IndexCheck h = lower_index_above_one(P.phi);
        if (h.holds != Tri::Yes) return fail("needs 1 < p_phi: " + h.reason);
        std::string why;
        Tri w_in = in_space(Y, P.phi.reciprocal(), why);
        if (w_in == Tri::Unknown) return fail("membership of 1/phi in Y undecided: " + why);
        if (w_in == Tri::Yes) return degenerate("1/phi in Y");
        rep.branch = "main";
        rep.target = Y.name();
        std::string r;
        rep.member = in_space(Y, pointwise_product(P.phi.reciprocal(), ls), r);
        rep.verdict = from_member(rep.member);
        rep.reason = "lambda*_n / phi(n) in " + rep.target + ": " + r;
        return rep;
      }
      case LorentzCase::IV: {
        if (ratio_unbounded(P.psi, P.phi) != Tri::Yes) return fail("needs limsup psi/phi = inf");
        IndexCheck h = lower_index_above_one(P.phi);
        if (h.holds != Tri::Yes) return fail("needs 1 < p_phi: " + h.reason);
        rep.branch = "main";
        rep.target = "l^1";
        SequenceSpec d = pointwise_product(pointwise_product(P.psi.increments(false), P.phi.reciprocal()), ls);
        std::string r;
        rep.member = in_space(SpaceDescriptor::lp(1.0), d, r);
        rep.verdict = from_member(rep.member);
        rep.reason = "(psi(n+1) - psi(n))/phi(n) lambda*_n in l^1: " + r;
        return rep;
      }
      case LorentzCase::V: {
        if (ratio_unbounded(P.phi, P.psi) != Tri::Yes) return fail("needs limsup phi/psi = inf");
        IndexCheck h = upper_index_finite(P.phi);
        if (h.holds != Tri::Yes) return fail("needs q_phi < inf: " + h.reason);
        rep.branch = "main";
        rep.target = "c0";
        SequenceSpec d = pointwise_product(pointwise_product(P.phi.sequence(), P.psi.reciprocal()), ls);
        std::string r;
        rep.member = in_c0(d, r);
        rep.verdict = from_member(rep.member);
        rep.reason = "phi(n)/psi(n) lambda*_n in c0: " + r;
        return rep;
      }
    }
  } catch (const Error& e) {
    return fail(std::string(to_string(e.kind())) + ": " + e.what());
  }
  return fail("unknown case");
}

}  // namespace kothe
