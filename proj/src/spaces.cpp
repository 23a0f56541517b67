#include "kothe/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kothe {

struct SpaceDescriptor::Node {
  Kind kind = Kind::Unknown;
  double p = 1.0;
  std::shared_ptr<const SpaceDescriptor> base;
  SequenceSpec w;
  std::string wlabel;
  OrliczFunction M;
  OrliczFamily fam = OrliczFamily::constant(OrliczFunction::power(1.0));
  ExponentRule ps;
  ConcaveWeight phi;
  bool backward = false;
  std::string reason;
};

namespace {

using Node = SpaceDescriptor::Node;
using K = SpaceDescriptor::Kind;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check_weight(const SequenceSpec& w) {
  w.validate();
  for (double v : w.prefix)
    if (!(v > 0.0) || !std::isfinite(v)) raise(ErrorKind::InvalidArgument, "weight must be strictly positive");
  if (w.finite_support()) {
    if (w.length() == 0) raise(ErrorKind::InvalidArgument, "weight must be strictly positive");
    raise(ErrorKind::InvalidArgument, "weight must be strictly positive beyond its prefix");
  }
  long long L = w.length();
  std::vector<long long> idx;
  for (long long n = L + 1; n <= L + 64; ++n) idx.push_back(n);
  for (int e = 7; e <= 40; ++e) idx.push_back(L + (1LL << e));
  for (long long n : idx) {
    double v = w.at(n);
    if (!(v > 0.0) || !std::isfinite(v)) raise(ErrorKind::InvalidArgument, "weight must be strictly positive");
  }
}

bool same_sequence(const SequenceSpec& a, const SequenceSpec& b) {
  if (a.finite_support() != b.finite_support()) return false;
  long long H = std::max<long long>({a.length(), b.length(), 64});
  for (long long n = 1; n <= H; ++n)
    if (a.at(n) != b.at(n)) return false;
  for (int e = 7; e <= 30; e += 3)
    if (a.at(1LL << e) != b.at(1LL << e)) return false;
  return true;
}

// Neumaier summation.
struct Acc {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double t = s + v;
    if (std::fabs(s) >= std::fabs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

long long horizon(const SequenceSpec& x, const Truncation& T) {
  if (x.finite_support()) return x.length();
  return std::max(T.N, x.length());
}

Truncation inner(const Truncation& T, const SequenceSpec& y) {
  if (T.policy == Truncation::Policy::ZeroTailExact && !y.finite_support())
    return Truncation{T.N, Truncation::Policy::CertifiedTail};
  return T;
}

Bracket sup_norm(const SequenceSpec& y) {
  Bracket b = sup_abs(y);
  if (std::isinf(b.lower)) raise(ErrorKind::NotInSpace, "sequence is unbounded");
  return b;
}

Bracket lp_core(const SequenceSpec& y, double p, const Truncation& T) {
  if (std::isinf(p)) return sup_norm(y);
  long long H = horizon(y, T);
  std::vector<double> head = y.head(H);
  double m = 0.0;
  for (double v : head) m = std::max(m, std::fabs(v));
  Acc acc;
  if (m > 0.0)
    for (double v : head) acc.add(std::pow(std::fabs(v) / m, p));
  double s = acc.value();
  double tail_up = 0.0;
  if (!y.finite_support()) {
    Bracket tb = power_sum(y, p, H + 1);
    if (std::isinf(tb.lower)) raise(ErrorKind::NotInSpace, "sum |x_n|^" + fmt(p) + " diverges");
    tail_up = tb.upper;
  }
  double lower = m * std::pow(s, 1.0 / p);
  double upper;
  if (std::isinf(tail_up))
    upper = kInf;
  else if (m > 0.0)
    upper = m * std::pow(s + tail_up / std::pow(m, p), 1.0 / p);
  else
    upper = std::pow(tail_up, 1.0 / p);
  Bracket r = Bracket::of(lower, std::max(lower, upper));
  if (std::isinf(upper)) r.diagnostics = "no summable tail envelope";
  return r;
}

Bracket norm_impl(const SpaceDescriptor& S, const SequenceSpec& x, const Truncation& T);

SequenceSpec rearranged(const SequenceSpec& x, const Truncation& T) { return decreasing_rearrangement(x, T); }

Bracket norm_impl(const SpaceDescriptor& S, const SequenceSpec& x, const Truncation& T) {
  switch (S.kind()) {
    case K::Lp:
      return lp_core(x, S.p(), T);
    case K::LInfty:
      return sup_norm(x);
    case K::C0: {
      Bracket L = limsup_abs(x);
      if (L.lower > 0.0) raise(ErrorKind::NotInSpace, "sequence does not tend to zero");
      Bracket b = sup_norm(x);
      if (L.upper > 0.0) b.diagnostics = "membership in c0 not certified";
      return b;
    }
    case K::Weighted: {
      SequenceSpec y = pointwise_product(x, S.weight());
      return norm_impl(S.base(), y, inner(T, y));
    }
    case K::Orlicz:
      if (x.finite_support()) return luxemburg_norm(S.orlicz_function(), rearranged(x, T), T);
      return luxemburg_norm(S.orlicz_function(), x, T);
    case K::MusielakOrlicz:
      return luxemburg_norm(S.family(), x, T);
    case K::Nakano:
      return luxemburg_norm(OrliczFamily::nakano(S.exponents()), x, T);
    case K::Lorentz: {
      SequenceSpec xs = rearranged(x, T);
      SequenceSpec y = pointwise_product(xs, S.phi().increments(S.backward()));
      return lp_core(y, 1.0, inner(T, y));
    }
    case K::Marcinkiewicz: {
      SequenceSpec xs = rearranged(x, T);
      SequenceSpec h = hardy(xs, inner(T, xs));
      SequenceSpec y = pointwise_product(S.phi().sequence(), h);
      return sup_norm(y);
    }
    case K::Symmetrized: {
      SequenceSpec xs = rearranged(x, T);
      return norm_impl(S.base(), xs, inner(T, xs));
    }
    case K::Cesaro: {
      SequenceSpec a = absolute(x);
      SequenceSpec h = hardy(a, inner(T, a));
      return norm_impl(S.base(), h, inner(T, h));
    }
    case K::Tandori: {
      SequenceSpec m = decreasing_majorant(x, T);
      return norm_impl(S.base(), m, inner(T, m));
    }
    case K::Unknown:
      break;
  }
  raise(ErrorKind::InvalidArgument, "norm of an unknown space: " + S.reason());
}

ExponentRule conjugate_exponents(const ExponentRule& r) {
  auto conj = [](double p) { return p == 1.0 ? kInf : (std::isinf(p) ? 1.0 : p / (p - 1.0)); };
  switch (r.kind()) {
    case ExponentRule::Kind::Constant:
      if (std::isinf(conj(r.value()))) break;
      return ExponentRule::constant(conj(r.value()));
    case ExponentRule::Kind::TableTail: {
      std::vector<double> v;
      for (double p : r.values()) v.push_back(conj(p));
      bool finite = std::isfinite(conj(r.tail()));
      for (double p : v) finite = finite && std::isfinite(p);
      if (!finite) break;
      return ExponentRule::table(v, conj(r.tail()));
    }
    default:
      break;
  }
  raise(ErrorKind::UnknownDual, "no conjugate exponent rule");
}

}  // namespace

// ------------------------------------------------------------------ descriptor

SpaceDescriptor::SpaceDescriptor() {
  static const auto unknown = std::make_shared<const Node>();
  node_ = unknown;
}

SpaceDescriptor::SpaceDescriptor(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

SpaceDescriptor SpaceDescriptor::lp(double p) {
  if (!(p >= 1.0)) raise(ErrorKind::InvalidArgument, "l^p needs p >= 1");
  if (std::isinf(p)) return linfty();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lp;
  n->p = p;
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::c0() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::C0;
  n->p = kInf;
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::linfty() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LInfty;
  n->p = kInf;
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::weighted(SpaceDescriptor base, SequenceSpec w, std::string label) {
  check_weight(w);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Weighted;
  n->base = std::make_shared<const SpaceDescriptor>(std::move(base));
  n->w = std::move(w);
  n->wlabel = std::move(label);
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::orlicz(OrliczFunction M) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Orlicz;
  n->M = std::move(M);
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::musielak_orlicz(OrliczFamily Ms) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::MusielakOrlicz;
  n->fam = std::move(Ms);
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::nakano(ExponentRule p) {
  p.validate(true);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Nakano;
  n->ps = std::move(p);
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::lorentz(ConcaveWeight phi, bool backward) {
  phi.validate();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lorentz;
  n->phi = std::move(phi);
  n->backward = backward;
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::marcinkiewicz(ConcaveWeight phi) {
  phi.validate();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Marcinkiewicz;
  n->phi = std::move(phi);
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::symmetrized(SpaceDescriptor base) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symmetrized;
  n->base = std::make_shared<const SpaceDescriptor>(std::move(base));
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::cesaro(SpaceDescriptor base) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cesaro;
  n->base = std::make_shared<const SpaceDescriptor>(std::move(base));
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::tandori(SpaceDescriptor base) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tandori;
  n->base = std::make_shared<const SpaceDescriptor>(std::move(base));
  return SpaceDescriptor(n);
}

SpaceDescriptor SpaceDescriptor::unknown(std::string reason) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unknown;
  n->reason = std::move(reason);
  return SpaceDescriptor(n);
}

SpaceDescriptor::Kind SpaceDescriptor::kind() const { return node_->kind; }
double SpaceDescriptor::p() const { return node_->p; }

const SpaceDescriptor& SpaceDescriptor::base() const {
  if (!node_->base) raise(ErrorKind::InvalidArgument, std::string(to_string(kind())) + " has no base space");
  return *node_->base;
}

const SequenceSpec& SpaceDescriptor::weight() const { return node_->w; }
const std::string& SpaceDescriptor::weight_label() const { return node_->wlabel; }
const OrliczFunction& SpaceDescriptor::orlicz_function() const { return node_->M; }
const OrliczFamily& SpaceDescriptor::family() const { return node_->fam; }
const ExponentRule& SpaceDescriptor::exponents() const { return node_->ps; }
const ConcaveWeight& SpaceDescriptor::phi() const { return node_->phi; }
bool SpaceDescriptor::backward() const { return node_->backward; }
const std::string& SpaceDescriptor::reason() const { return node_->reason; }

std::string SpaceDescriptor::name() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Lp:
      return "l^" + fmt(n.p);
    case Kind::C0:
      return "c0";
    case Kind::LInfty:
      return "l^inf";
    case Kind::Weighted:
      return n.base->name() + "(" + n.wlabel + ")";
    case Kind::Orlicz:
      return "l_{" + n.M.name() + "}";
    case Kind::MusielakOrlicz:
      return "musielak-orlicz";
    case Kind::Nakano: {
      if (n.ps.is_constant()) return "nakano(" + fmt(n.ps.at(1)) + ")";
      return "nakano";
    }
    case Kind::Lorentz:
      return std::string(n.backward ? "lorentz*(" : "lorentz(") + n.phi.name() + ")";
    case Kind::Marcinkiewicz:
      return "marcinkiewicz(" + n.phi.name() + ")";
    case Kind::Symmetrized:
      return "[" + n.base->name() + "]^(*)";
    case Kind::Cesaro:
      return "ces(" + n.base->name() + ")";
    case Kind::Tandori:
      return "tandori(" + n.base->name() + ")";
    case Kind::Unknown:
      return "unknown(" + n.reason + ")";
  }
  return "?";
}

bool SpaceDescriptor::has_fatou() const {
  switch (kind()) {
    case Kind::C0:
    case Kind::Unknown:
      return false;
    case Kind::Weighted:
    case Kind::Symmetrized:
    case Kind::Cesaro:
    case Kind::Tandori:
      return base().has_fatou();
    default:
      return true;
  }
}

OcStatus SpaceDescriptor::oc_status() const { return is_order_continuous(*this); }

bool SpaceDescriptor::rearrangement_invariant() const {
  switch (kind()) {
    case Kind::Lp:
    case Kind::C0:
    case Kind::LInfty:
    case Kind::Orlicz:
    case Kind::Lorentz:
    case Kind::Marcinkiewicz:
    case Kind::Symmetrized:
      return true;
    case Kind::Nakano:
      return exponents().is_constant();
    case Kind::MusielakOrlicz:
      return family().kind() == OrliczFamily::Kind::Constant;
    default:
      return false;
  }
}

std::optional<double> SpaceDescriptor::lp_exponent() const {
  switch (kind()) {
    case Kind::Lp:
      return p();
    case Kind::LInfty:
      return kInf;
    case Kind::Orlicz:
      if (orlicz_function().kind() == OrliczFunction::Kind::Power && orlicz_function().c() == 1.0)
        return orlicz_function().p();
      return std::nullopt;
    case Kind::Nakano:
      if (exponents().is_constant()) return exponents().at(1);
      return std::nullopt;
    case Kind::MusielakOrlicz:
      if (family().kind() == OrliczFamily::Kind::Constant) return orlicz(family().function()).lp_exponent();
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

bool SpaceDescriptor::operator==(const SpaceDescriptor& o) const {
  if (node_ == o.node_) return true;
  const Node& a = *node_;
  const Node& b = *o.node_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Lp:
      return a.p == b.p;
    case Kind::C0:
    case Kind::LInfty:
      return true;
    case Kind::Weighted:
      return *a.base == *b.base && a.wlabel == b.wlabel && same_sequence(a.w, b.w);
    case Kind::Orlicz:
      return a.M == b.M;
    case Kind::MusielakOrlicz:
      return a.fam == b.fam;
    case Kind::Nakano:
      return a.ps == b.ps;
    case Kind::Lorentz:
      return a.phi == b.phi && a.backward == b.backward;
    case Kind::Marcinkiewicz:
      return a.phi == b.phi;
    case Kind::Symmetrized:
    case Kind::Cesaro:
    case Kind::Tandori:
      return *a.base == *b.base;
    case Kind::Unknown:
      return a.reason == b.reason;
  }
  return false;
}

const char* to_string(SpaceDescriptor::Kind k) {
  switch (k) {
    case K::Lp:
      return "lp";
    case K::C0:
      return "c0";
    case K::LInfty:
      return "linfty";
    case K::Weighted:
      return "weighted";
    case K::Orlicz:
      return "orlicz";
    case K::MusielakOrlicz:
      return "musielak_orlicz";
    case K::Nakano:
      return "nakano";
    case K::Lorentz:
      return "lorentz";
    case K::Marcinkiewicz:
      return "marcinkiewicz";
    case K::Symmetrized:
      return "symmetrized";
    case K::Cesaro:
      return "cesaro";
    case K::Tandori:
      return "tandori";
    case K::Unknown:
      return "unknown";
  }
  return "?";
}

// ------------------------------------------------------------------ operations

Bracket norm(const SpaceDescriptor& space, const SequenceSpec& x, const Truncation& N) {
  x.validate();
  N.validate(x);
  Bracket b = norm_impl(space, x, N);
  if (N.policy == Truncation::Policy::HeuristicTail) {
    b.status = Certainty::Heuristic;
    if (std::isinf(b.upper)) {
      b.upper = b.lower;
      b.diagnostics = "tail beyond the horizon ignored";
    }
  }
  return b;
}

Bracket norm(const SpaceDescriptor& space, const SequenceSpec& x) {
  Truncation T = x.finite_support() ? Truncation::exact(std::max(1LL, x.length())) : Truncation::certified(4096);
  return norm(space, x, T);
}

Tri in_space(const SpaceDescriptor& space, const SequenceSpec& x, std::string& reason) {
  try {
    Bracket b = norm(space, x);
    if (b.certified() && std::isfinite(b.upper)) {
      reason = "norm <= " + fmt(b.upper);
      return Tri::Yes;
    }
    reason = "no certified finite norm bound";
    return Tri::Unknown;
  } catch (const Error& e) {
    reason = e.what();
    switch (e.kind()) {
      case ErrorKind::NotInSpace:
      case ErrorKind::ModularDivergent:
        return Tri::No;
      default:
        return Tri::Unknown;
    }
  }
}

Tri in_space(const SpaceDescriptor& space, const SequenceSpec& x) {
  std::string r;
  return in_space(space, x, r);
}

SequenceSpec reciprocal_weight(const SequenceSpec& w) {
  std::vector<double> p;
  for (double v : w.prefix) {
    if (!(v > 0.0)) raise(ErrorKind::InvalidArgument, "weight must be strictly positive");
    p.push_back(1.0 / v);
  }
  if (w.finite_support()) raise(ErrorKind::InvalidArgument, "weight must be strictly positive beyond its prefix");
  const auto* pt = dynamic_cast<const PatternTail*>(w.tail.get());
  if (pt) {
    bool flat = pt->term_flat();
    if (flat) {
      std::vector<double> v;
      for (double c : pt->v()) v.push_back(1.0 / (pt->a() + c));
      return SequenceSpec(p, periodic_tail(v));
    }
    if (pt->a() == 0.0) {
      std::vector<double> v;
      for (double c : pt->v()) v.push_back(1.0 / c);
      return SequenceSpec(p, pattern_tail(0.0, v, pt->shift(), -pt->beta(), -pt->gamma()));
    }
  }
  raise(ErrorKind::UnsupportedTail, "reciprocal needs a power-type weight tail");
}

SpaceDescriptor kothe_dual(const SpaceDescriptor& S) {
  switch (S.kind()) {
    case K::Lp:
      if (S.p() == 1.0) return SpaceDescriptor::linfty();
      return SpaceDescriptor::lp(S.p() / (S.p() - 1.0));
    case K::LInfty:
    case K::C0:
      return SpaceDescriptor::lp(1.0);
    case K::Weighted:
      return SpaceDescriptor::weighted(kothe_dual(S.base()), reciprocal_weight(S.weight()), "1/(" + S.weight_label() + ")");
    case K::Orlicz: {
      auto p = S.lp_exponent();
      if (p) return kothe_dual(SpaceDescriptor::lp(*p));
      break;
    }
    case K::Nakano: {
      if (S.exponents().is_constant()) return kothe_dual(SpaceDescriptor::lp(S.exponents().at(1)));
      return SpaceDescriptor::nakano(conjugate_exponents(S.exponents()));
    }
    case K::Lorentz:
      return SpaceDescriptor::marcinkiewicz(S.phi().dual());
    case K::Marcinkiewicz:
      return SpaceDescriptor::lorentz(S.phi().dual(), true);
    case K::Cesaro:
      return SpaceDescriptor::tandori(kothe_dual(S.base()));
    case K::Tandori:
      return SpaceDescriptor::cesaro(kothe_dual(S.base()));
    default:
      break;
  }
  raise(ErrorKind::UnknownDual, "no duality rule for " + S.name());
}

double fundamental_function(const SpaceDescriptor& space, long long n) {
  if (n < 1) raise(ErrorKind::InvalidArgument, "fundamental function needs n >= 1");
  SequenceSpec one(std::vector<double>(static_cast<std::size_t>(n), 1.0));
  return norm(space, one, Truncation::exact(n)).mid();
}

OcStatus is_order_continuous(const SpaceDescriptor& S) {
  switch (S.kind()) {
    case K::Lp:
      return {Tri::Yes, "l^p with p < inf"};
    case K::C0:
      return {Tri::Yes, "c0"};
    case K::LInfty:
      return {Tri::No, "l^inf"};
    case K::Weighted: {
      OcStatus b = is_order_continuous(S.base());
      return {b.status, "weighted " + b.rule};
    }
    case K::Orlicz: {
      Tri d = S.orlicz_function().delta2();
      if (d == Tri::Yes) return {Tri::Yes, "Orlicz function satisfies delta2 at zero"};
      if (d == Tri::No) return {Tri::No, "Orlicz function fails delta2 at zero"};
      return {Tri::Unknown, "delta2 at zero not decided"};
    }
    case K::MusielakOrlicz: {
      const OrliczFamily& f = S.family();
      if (f.kind() == OrliczFamily::Kind::Constant) return is_order_continuous(SpaceDescriptor::orlicz(f.function()));
      if (f.kind() == OrliczFamily::Kind::Nakano) return is_order_continuous(SpaceDescriptor::nakano(f.exponents()));
      return {Tri::Unknown, "no order continuity rule for this Musielak-Orlicz family"};
    }
    case K::Nakano: {
      const ExponentRule& r = S.exponents();
      if (std::isfinite(r.range_from(1).second)) return {Tri::Yes, "sup p_n < inf"};
      if (std::isfinite(r.range_from(1LL << 40).second)) return {Tri::Yes, "p_n = inf only on finitely many n"};
      return {Tri::No, "p_n = inf on an infinite set"};
    }
    case K::Lorentz:
      if (S.phi().bounded()) return {Tri::No, "phi(inf) < inf gives lambda_phi = l^inf"};
      return {Tri::Yes, "lambda_phi is separable when phi(inf) = inf"};
    case K::Marcinkiewicz: {
      const ConcaveWeight& f = S.phi();
      bool linear = f.kind() == ConcaveWeight::Kind::Affine ||
                    ((f.kind() == ConcaveWeight::Kind::Power || f.kind() == ConcaveWeight::Kind::Table) && f.alpha() == 1.0);
      if (linear) return {Tri::Yes, "phi(n)/n bounded below: m_phi = l^1"};
      return {Tri::No, "Marcinkiewicz spaces m_phi are never separable"};
    }
    case K::Symmetrized: {
      OcStatus b = is_order_continuous(S.base());
      return {b.status, "[X(w)^(*)]_o = [X_o(w)]^(*): " + b.rule};
    }
    case K::Cesaro: {
      OcStatus b = is_order_continuous(S.base());
      if (b.status == Tri::Yes) return {Tri::Yes, "CX is order continuous when X is: " + b.rule};
      if (S.base().kind() == K::LInfty) return {Tri::No, "ces_inf"};
      return {Tri::Unknown, "no order continuity rule for CX with X not order continuous"};
    }
    case K::Tandori: {
      OcStatus b = is_order_continuous(S.base());
      return {b.status, "(tilde X)_o = tilde(X_o): " + b.rule};
    }
    case K::Unknown:
      break;
  }
  return {Tri::Unknown, "unknown space"};
}

TailLimit tail_norm_limit(const SpaceDescriptor& S, const SequenceSpec& x) {
  x.validate();
  if (x.finite_support()) return {Bracket::exact(0.0), "finite support"};
  auto generic = [&]() -> TailLimit {
    OcStatus oc = is_order_continuous(S);
    Bracket nb = norm(S, x, Truncation::certified(4096));
    if (oc.status == Tri::Yes && std::isfinite(nb.upper)) return {Bracket::exact(0.0), "order continuous: " + oc.rule};
    Bracket b = Bracket::of(0.0, nb.upper, Certainty::Heuristic);
    return {b, "no tail rule for " + S.name()};
  };
  switch (S.kind()) {
    case K::LInfty:
      return {sup_norm(x).upper < kInf ? limsup_abs(x) : Bracket::of(kInf, kInf), "limsup |x_n|"};
    case K::C0: {
      Bracket L = limsup_abs(x);
      if (L.lower > 0.0) raise(ErrorKind::NotInSpace, "sequence does not tend to zero");
      return {L, "limsup |x_n|"};
    }
    case K::Weighted: {
      TailLimit t = tail_norm_limit(S.base(), pointwise_product(x, S.weight()));
      t.rule = "weighted: " + t.rule;
      return t;
    }
    case K::Orlicz: {
      double v = S.orlicz_function().vanishes_below();
      if (v > 0.0) {
        sup_norm(x);
        Bracket L = limsup_abs(x);
        return {Bracket::of(L.lower / v, L.upper / v, L.status), "limsup |x_n| / sup{t : M(t) = 0}"};
      }
      TailLimit g = generic();
      if (g.value.certified()) return g;
      if (auto ub = S.orlicz_function().upper_at_zero()) {
        Bracket ps = power_sum(x, ub->p, 1);
        if (std::isfinite(ps.upper)) return {Bracket::exact(0.0), "sum |x_n|^p < inf with M(t) <= c t^p near zero"};
      }
      return g;
    }
    case K::Nakano: {
      const ExponentRule& r = S.exponents();
      auto tr = r.range_from(std::max(1LL, x.length()) + 1);
      if (std::isinf(tr.first)) {
        sup_norm(x);
        return {limsup_abs(x), "p_n = inf on the tail: limsup |x_n|"};
      }
      return generic();
    }
    case K::Lorentz: {
      const ConcaveWeight& f = S.phi();
      if (f.bounded()) {
        sup_norm(x);
        Bracket L = limsup_abs(x);
        double c = f.limit() - (S.backward() ? 0.0 : f(1.0));
        return {Bracket::of(L.lower * c, L.upper * c, L.status), "phi bounded: limsup |x_n| (phi(inf) - phi(1))"};
      }
      return generic();
    }
    case K::Marcinkiewicz: {
      const ConcaveWeight& f = S.phi();
      if (f.bounded()) {
        sup_norm(x);
        Bracket L = limsup_abs(x);
        double c = f.limit();
        return {Bracket::of(L.lower * c, L.upper * c, L.status), "phi bounded: limsup |x_n| phi(inf)"};
      }
      if (is_order_continuous(S).status == Tri::Yes) return generic();
      Truncation T = Truncation::certified(4096);
      SequenceSpec xs = decreasing_rearrangement(x, T);
      SequenceSpec y = pointwise_product(f.sequence(), hardy(xs, T));
      sup_norm(y);
      return {limsup_abs(y), "limsup phi(n)/n sum_{k<=n} x*_k"};
    }
    case K::Symmetrized: {
      const SpaceDescriptor& B = S.base();
      if (is_order_continuous(B).status == Tri::Yes) return generic();
      if (B.kind() == K::Weighted && B.base().kind() == K::LInfty) {
        Truncation T = Truncation::certified(4096);
        SequenceSpec xs = decreasing_rearrangement(x, T);
        SequenceSpec y = pointwise_product(xs, B.weight());
        sup_norm(y);
        return {limsup_abs(y), "limsup w_n x*_n"};
      }
      if (B.kind() == K::LInfty) {
        sup_norm(x);
        return {limsup_abs(x), "limsup |x_n|"};
      }
      return generic();
    }
    case K::Tandori:
      if (S.base().kind() == K::LInfty) {
        sup_norm(x);
        return {limsup_abs(x), "limsup |x_n|"};
      }
      return generic();
    default:
      return generic();
  }
}

std::vector<long long> default_n_grid() {
  std::vector<long long> g;
  for (int e = 0; e <= 14; ++e) g.push_back(1LL << e);
  return g;
}

OcReport oc_membership(const SpaceDescriptor& S, const SequenceSpec& x, const std::vector<long long>& n_grid, double tol) {
  OcReport rep;
  TailLimit L = tail_norm_limit(S, x);
  rep.limit = L.value;
  rep.rule = L.rule;
  std::vector<long long> grid = n_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (long long n : grid) {
    if (n < 1) raise(ErrorKind::InvalidArgument, "n grid entries must be >= 1");
    SequenceSpec t = tail_restrict(x, n);
    Truncation T = t.finite_support() ? Truncation::exact(std::max(1LL, t.length()))
                                      : Truncation::certified(n + 4096);
    Bracket b = norm(S, t, T);
    rep.tail_norms.emplace_back(n, b);
  }
  // t_n is non-increasing in n and bounded below by its limit
  for (std::size_t i = 1; i < rep.tail_norms.size(); ++i)
    rep.tail_norms[i].second.upper = std::min(rep.tail_norms[i].second.upper, rep.tail_norms[i - 1].second.upper);
  for (std::size_t i = rep.tail_norms.size(); i-- > 1;)
    rep.tail_norms[i - 1].second.lower = std::max(rep.tail_norms[i - 1].second.lower, rep.tail_norms[i].second.lower);
  if (L.value.certified())
    for (auto& [n, b] : rep.tail_norms) b.lower = std::min(b.upper, std::max(b.lower, L.value.lower));
  if (!rep.tail_norms.empty()) {
    double last = rep.tail_norms.back().second.upper;
    if (last < rep.limit.upper) rep.limit.upper = last;
    if (rep.limit.lower > rep.limit.upper) rep.limit.lower = rep.limit.upper;
  }
  if (rep.limit.certified() && rep.limit.upper <= tol)
    rep.verdict = Membership::Member;
  else if (rep.limit.certified() && rep.limit.lower > tol)
    rep.verdict = Membership::NonMember;
  else
    rep.verdict = Membership::Inconclusive;
  return rep;
}

OcReport oc_membership(const SpaceDescriptor& S, const SequenceSpec& x) {
  return oc_membership(S, x, default_n_grid());
}

}  // namespace kothe
