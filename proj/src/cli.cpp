#include "kothe/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kothe/essnorm.hpp"
#include "kothe/verify.hpp"

namespace kothe {

namespace {

using SD = SpaceDescriptor;

[[noreturn]] void bad(const std::string& what) { raise(ErrorKind::InvalidArgument, what); }

const Json& req(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) bad(ctx + ": missing field '" + key + "'");
  return j.at(key);
}

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& ctx) {
  if (!j.is_object()) bad(ctx + ": expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad(ctx + ": unknown field '" + it.key() + "'");
}

double num(const Json& j, const std::string& ctx) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
  }
  bad(ctx + ": expected a number");
}

double num(const Json& j, const char* key, const std::string& ctx) { return num(req(j, key, ctx), ctx + "." + key); }

double num_or(const Json& j, const char* key, double dflt, const std::string& ctx) {
  return j.contains(key) ? num(j.at(key), ctx + "." + key) : dflt;
}

long long integer(const Json& j, const std::string& ctx) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (v == std::floor(v) && std::fabs(v) < 9e15) return static_cast<long long>(v);
  }
  bad(ctx + ": expected an integer");
}

long long int_or(const Json& j, const char* key, long long dflt, const std::string& ctx) {
  return j.contains(key) ? integer(j.at(key), ctx + "." + key) : dflt;
}

std::vector<double> nums(const Json& j, const std::string& ctx) {
  if (!j.is_array()) bad(ctx + ": expected an array");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(num(j[i], ctx + "[" + std::to_string(i) + "]"));
  return v;
}

std::string kind_of(const Json& j, const std::string& ctx) {
  const Json& k = req(j, "kind", ctx);
  if (!k.is_string()) bad(ctx + ".kind: expected a string");
  return k.get<std::string>();
}

Json jnum(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json jnums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

void in_range(bool ok, const std::string& what) {
  if (!ok) bad(what);
}

const char* policy_name(Truncation::Policy p) {
  switch (p) {
    case Truncation::Policy::ZeroTailExact:
      return "exact";
    case Truncation::Policy::CertifiedTail:
      return "certified";
    case Truncation::Policy::HeuristicTail:
      return "heuristic";
  }
  return "certified";
}

LorentzCase parse_case(const std::string& s) {
  for (LorentzCase c : {LorentzCase::I, LorentzCase::II, LorentzCase::III, LorentzCase::IV, LorentzCase::V})
    if (s == to_string(c)) return c;
  bad("compact.case must be one of i, ii, iii, iv, v");
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Norm:
      return "norm";
    case Command::Dual:
      return "dual";
    case Command::MultSpace:
      return "mult-space";
    case Command::MultNorm:
      return "mult-norm";
    case Command::EssNorm:
      return "ess-norm";
    case Command::CompactCheck:
      return "compact-check";
    case Command::Conjugate:
      return "conjugate";
    case Command::FactorizeCheck:
      return "factorize-check";
    case Command::LemmaR:
      return "lemma-r";
    case Command::VerifyPaper:
      return "verify-paper";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::Norm, Command::Dual, Command::MultSpace, Command::MultNorm, Command::EssNorm,
                    Command::CompactCheck, Command::Conjugate, Command::FactorizeCheck, Command::LemmaR,
                    Command::VerifyPaper})
    if (name == to_string(c)) return c;
  bad("unknown command '" + name + "'");
}

// ---------------------------------------------------------------- serialization

Json to_json(const TailPtr& t) {
  auto p = std::dynamic_pointer_cast<const PatternTail>(t);
  if (!p) bad("tail has no JSON form");
  const std::string& l = p->label();
  const auto& v = p->v();
  if (l == "zero") return {{"kind", "zero"}};
  if (l == "power") return {{"kind", "power"}, {"c", jnum(v[0])}, {"alpha", jnum(-p->beta())}};
  if (l == "constant") return {{"kind", "constant"}, {"c", jnum(p->a())}};
  if (l == "periodic") return {{"kind", "periodic"}, {"values", jnums(v)}};
  if (l == "power_log")
    return {{"kind", "power_log"}, {"c", jnum(v[0])}, {"beta", jnum(p->beta())}, {"gamma", jnum(p->gamma())}};
  if (l == "affine_power")
    return {{"kind", "affine_power"}, {"a", jnum(p->a())}, {"b", jnum(v[0])}, {"alpha", jnum(-p->beta())}};
  return {{"kind", "pattern"},          {"a", jnum(p->a())},         {"v", jnums(v)},
          {"shift", jnum(p->shift())}, {"beta", jnum(p->beta())}, {"gamma", jnum(p->gamma())}};
}

TailPtr tail_from_json(const Json& j) {
  const std::string ctx = "tail";
  std::string k = kind_of(j, ctx);
  if (k == "zero") {
    only_keys(j, {"kind"}, ctx);
    return zero_tail();
  }
  if (k == "power") {
    only_keys(j, {"kind", "c", "alpha"}, ctx);
    return power_tail(num_or(j, "c", 1.0, ctx), num(j, "alpha", ctx));
  }
  if (k == "constant") {
    only_keys(j, {"kind", "c"}, ctx);
    return constant_tail(num(j, "c", ctx));
  }
  if (k == "periodic") {
    only_keys(j, {"kind", "values"}, ctx);
    auto v = nums(req(j, "values", ctx), ctx + ".values");
    if (v.empty()) bad("periodic tail needs at least one value");
    return periodic_tail(v);
  }
  if (k == "power_log") {
    only_keys(j, {"kind", "c", "beta", "gamma"}, ctx);
    return power_log_tail(num_or(j, "c", 1.0, ctx), num(j, "beta", ctx), num_or(j, "gamma", 0.0, ctx));
  }
  if (k == "affine_power") {
    only_keys(j, {"kind", "a", "b", "alpha"}, ctx);
    return affine_power_tail(num(j, "a", ctx), num(j, "b", ctx), num(j, "alpha", ctx));
  }
  if (k == "pattern") {
    only_keys(j, {"kind", "a", "v", "shift", "beta", "gamma"}, ctx);
    auto v = nums(req(j, "v", ctx), ctx + ".v");
    if (v.empty()) bad("pattern tail needs at least one value");
    return pattern_tail(num_or(j, "a", 0.0, ctx), v, num_or(j, "shift", 0.0, ctx), num_or(j, "beta", 0.0, ctx),
                        num_or(j, "gamma", 0.0, ctx));
  }
  bad("unknown tail kind '" + k + "'");
}

Json to_json(const SequenceSpec& x) {
  Json j = {{"prefix", jnums(x.prefix)}, {"tail", to_json(x.tail)}};
  if (x.majorant) j["majorant"] = to_json(x.majorant);
  return j;
}

SequenceSpec sequence_from_json(const Json& j) {
  only_keys(j, {"prefix", "tail", "majorant"}, "sequence");
  std::vector<double> p = j.contains("prefix") ? nums(j.at("prefix"), "sequence.prefix") : std::vector<double>{};
  TailPtr t = j.contains("tail") ? tail_from_json(j.at("tail")) : zero_tail();
  TailPtr m = j.contains("majorant") ? tail_from_json(j.at("majorant")) : nullptr;
  SequenceSpec s(p, t, m);
  s.validate();
  return s;
}

Json to_json(const ConcaveWeight& w) {
  switch (w.kind()) {
    case ConcaveWeight::Kind::Power:
      return {{"kind", "power"}, {"alpha", jnum(w.alpha())}, {"c", jnum(w.c())}};
    case ConcaveWeight::Kind::Table:
      return {{"kind", "table"}, {"values", jnums(w.values())}, {"alpha", jnum(w.alpha())}};
    case ConcaveWeight::Kind::Rational:
      return {{"kind", "rational"}, {"A", jnum(w.A())}, {"B", jnum(w.B())}};
    case ConcaveWeight::Kind::Affine:
      return {{"kind", "affine"}, {"a0", jnum(w.a0())}, {"a1", jnum(w.a1())}};
  }
  bad("weight has no JSON form");
}

ConcaveWeight weight_from_json(const Json& j) {
  const std::string ctx = "weight";
  std::string k = kind_of(j, ctx);
  ConcaveWeight w;
  if (k == "power") {
    only_keys(j, {"kind", "alpha", "c"}, ctx);
    w = ConcaveWeight::power(num(j, "alpha", ctx), num_or(j, "c", 1.0, ctx));
  } else if (k == "table") {
    only_keys(j, {"kind", "values", "alpha"}, ctx);
    w = ConcaveWeight::table(nums(req(j, "values", ctx), ctx + ".values"), num(j, "alpha", ctx));
  } else if (k == "rational") {
    only_keys(j, {"kind", "A", "B"}, ctx);
    w = ConcaveWeight::rational(num(j, "A", ctx), num(j, "B", ctx));
  } else if (k == "affine") {
    only_keys(j, {"kind", "a0", "a1"}, ctx);
    w = ConcaveWeight::affine(num(j, "a0", ctx), num(j, "a1", ctx));
  } else {
    bad("unknown weight kind '" + k + "'");
  }
  w.validate();
  return w;
}

Json to_json(const OrliczFunction& M) {
  switch (M.kind()) {
    case OrliczFunction::Kind::Power:
      return {{"kind", "power"}, {"p", jnum(M.p())}, {"c", jnum(M.c())}};
    case OrliczFunction::Kind::Mtilde:
      return {{"kind", "mtilde"}};
    case OrliczFunction::Kind::MtildeConjugate:
      return {{"kind", "mtilde_conjugate"}};
    case OrliczFunction::Kind::PowerConjugate:
      return {{"kind", "power_conjugate"}, {"a", jnum(M.a())}, {"b", jnum(M.b())}};
    case OrliczFunction::Kind::Conjugate:
      return {{"kind", "conjugate"}, {"N", to_json(*M.conj_N())}, {"M", to_json(*M.conj_M())}, {"grid", M.grid()}};
    case OrliczFunction::Kind::Custom:
      break;
  }
  bad("Orlicz function '" + M.name() + "' has no JSON form");
}

OrliczFunction orlicz_from_json(const Json& j) {
  const std::string ctx = "orlicz";
  std::string k = kind_of(j, ctx);
  if (k == "power") {
    only_keys(j, {"kind", "p", "c"}, ctx);
    return OrliczFunction::power(num(j, "p", ctx), num_or(j, "c", 1.0, ctx));
  }
  if (k == "mtilde") {
    only_keys(j, {"kind"}, ctx);
    return OrliczFunction::mtilde();
  }
  if (k == "mtilde_conjugate") {
    only_keys(j, {"kind"}, ctx);
    return OrliczFunction::mtilde_conjugate();
  }
  if (k == "power_conjugate") {
    only_keys(j, {"kind", "a", "b"}, ctx);
    return OrliczFunction::power_conjugate(num(j, "a", ctx), num(j, "b", ctx));
  }
  if (k == "conjugate") {
    only_keys(j, {"kind", "N", "M", "grid"}, ctx);
    long long g = int_or(j, "grid", 4096, ctx);
    in_range(g >= 16 && g <= (1 << 20), "orlicz.grid must lie in [16, 2^20]");
    return OrliczFunction::conjugate(orlicz_from_json(req(j, "N", ctx)), orlicz_from_json(req(j, "M", ctx)),
                                     static_cast<int>(g));
  }
  bad("unknown Orlicz function kind '" + k + "'");
}

Json to_json(const ExponentRule& r) {
  switch (r.kind()) {
    case ExponentRule::Kind::Constant:
      return {{"kind", "constant"}, {"p", jnum(r.value())}};
    case ExponentRule::Kind::TableTail:
      return {{"kind", "table"}, {"values", jnums(r.values())}, {"tail", jnum(r.tail())}};
    case ExponentRule::Kind::Formula:
      return {{"kind", "formula"}, {"c0", jnum(r.c0())}, {"c1", jnum(r.c1())}, {"e", jnum(r.e())}};
    case ExponentRule::Kind::Derived:
      break;
  }
  bad("derived exponent rules have no JSON form");
}

ExponentRule exponents_from_json(const Json& j) {
  const std::string ctx = "exponents";
  std::string k = kind_of(j, ctx);
  if (k == "constant") {
    only_keys(j, {"kind", "p"}, ctx);
    return ExponentRule::constant(num(j, "p", ctx));
  }
  if (k == "table") {
    only_keys(j, {"kind", "values", "tail"}, ctx);
    return ExponentRule::table(nums(req(j, "values", ctx), ctx + ".values"), num(j, "tail", ctx));
  }
  if (k == "formula") {
    only_keys(j, {"kind", "c0", "c1", "e"}, ctx);
    return ExponentRule::formula(num(j, "c0", ctx), num(j, "c1", ctx), num(j, "e", ctx));
  }
  bad("unknown exponent rule kind '" + k + "'");
}

Json to_json(const OrliczFamily& f) {
  switch (f.kind()) {
    case OrliczFamily::Kind::Constant:
      return {{"kind", "constant"}, {"M", to_json(f.function())}};
    case OrliczFamily::Kind::Table: {
      Json h = Json::array();
      for (const OrliczFunction& M : f.head()) h.push_back(to_json(M));
      return {{"kind", "table"}, {"head", h}, {"tail", to_json(f.function())}};
    }
    case OrliczFamily::Kind::Nakano:
      return {{"kind", "nakano"}, {"p", to_json(f.exponents())}};
    case OrliczFamily::Kind::Conjugate:
      return {{"kind", "conjugate"}, {"N", to_json(*f.conj_N())}, {"M", to_json(*f.conj_M())}};
  }
  bad("family has no JSON form");
}

OrliczFamily family_from_json(const Json& j) {
  const std::string ctx = "family";
  std::string k = kind_of(j, ctx);
  if (k == "constant") {
    only_keys(j, {"kind", "M"}, ctx);
    return OrliczFamily::constant(orlicz_from_json(req(j, "M", ctx)));
  }
  if (k == "table") {
    only_keys(j, {"kind", "head", "tail"}, ctx);
    const Json& h = req(j, "head", ctx);
    if (!h.is_array()) bad("family.head: expected an array");
    std::vector<OrliczFunction> head;
    for (const Json& e : h) head.push_back(orlicz_from_json(e));
    return OrliczFamily::table(head, orlicz_from_json(req(j, "tail", ctx)));
  }
  if (k == "nakano") {
    only_keys(j, {"kind", "p"}, ctx);
    return OrliczFamily::nakano(exponents_from_json(req(j, "p", ctx)));
  }
  if (k == "conjugate") {
    only_keys(j, {"kind", "N", "M"}, ctx);
    return OrliczFamily::conjugate(family_from_json(req(j, "N", ctx)), family_from_json(req(j, "M", ctx)));
  }
  bad("unknown family kind '" + k + "'");
}

Json to_json(const SpaceDescriptor& s) {
  using K = SD::Kind;
  switch (s.kind()) {
    case K::Lp:
      return {{"kind", "lp"}, {"p", jnum(s.p())}};
    case K::C0:
      return {{"kind", "c0"}};
    case K::LInfty:
      return {{"kind", "linfty"}};
    case K::Weighted:
      return {{"kind", "weighted"}, {"base", to_json(s.base())}, {"weight", to_json(s.weight())},
              {"label", s.weight_label()}};
    case K::Orlicz:
      return {{"kind", "orlicz"}, {"M", to_json(s.orlicz_function())}};
    case K::MusielakOrlicz:
      return {{"kind", "musielak_orlicz"}, {"family", to_json(s.family())}};
    case K::Nakano:
      return {{"kind", "nakano"}, {"p", to_json(s.exponents())}};
    case K::Lorentz:
      return {{"kind", "lorentz"}, {"phi", to_json(s.phi())}, {"backward", s.backward()}};
    case K::Marcinkiewicz:
      return {{"kind", "marcinkiewicz"}, {"phi", to_json(s.phi())}};
    case K::Symmetrized:
      return {{"kind", "symmetrized"}, {"base", to_json(s.base())}};
    case K::Cesaro:
      return {{"kind", "cesaro"}, {"base", to_json(s.base())}};
    case K::Tandori:
      return {{"kind", "tandori"}, {"base", to_json(s.base())}};
    case K::Unknown:
      break;
  }
  bad("space '" + s.name() + "' has no JSON form");
}

SpaceDescriptor space_from_json(const Json& j) {
  const std::string ctx = "space";
  std::string k = kind_of(j, ctx);
  if (k == "lp") {
    only_keys(j, {"kind", "p"}, ctx);
    return SD::lp(num(j, "p", ctx));
  }
  if (k == "c0" || k == "linfty") {
    only_keys(j, {"kind"}, ctx);
    return k == "c0" ? SD::c0() : SD::linfty();
  }
  if (k == "weighted") {
    only_keys(j, {"kind", "base", "weight", "label"}, ctx);
    std::string label = "w";
    if (j.contains("label")) {
      if (!j.at("label").is_string()) bad("space.label: expected a string");
      label = j.at("label").get<std::string>();
    }
    return SD::weighted(space_from_json(req(j, "base", ctx)), sequence_from_json(req(j, "weight", ctx)), label);
  }
  if (k == "orlicz") {
    only_keys(j, {"kind", "M"}, ctx);
    return SD::orlicz(orlicz_from_json(req(j, "M", ctx)));
  }
  if (k == "musielak_orlicz") {
    only_keys(j, {"kind", "family"}, ctx);
    return SD::musielak_orlicz(family_from_json(req(j, "family", ctx)));
  }
  if (k == "nakano") {
    only_keys(j, {"kind", "p"}, ctx);
    return SD::nakano(exponents_from_json(req(j, "p", ctx)));
  }
  if (k == "lorentz") {
    only_keys(j, {"kind", "phi", "backward"}, ctx);
    bool back = false;
    if (j.contains("backward")) {
      if (!j.at("backward").is_boolean()) bad("space.backward: expected a boolean");
      back = j.at("backward").get<bool>();
    }
    return SD::lorentz(weight_from_json(req(j, "phi", ctx)), back);
  }
  if (k == "marcinkiewicz") {
    only_keys(j, {"kind", "phi"}, ctx);
    return SD::marcinkiewicz(weight_from_json(req(j, "phi", ctx)));
  }
  if (k == "symmetrized" || k == "cesaro" || k == "tandori") {
    only_keys(j, {"kind", "base"}, ctx);
    SD b = space_from_json(req(j, "base", ctx));
    if (k == "symmetrized") return SD::symmetrized(b);
    return k == "cesaro" ? SD::cesaro(b) : SD::tandori(b);
  }
  bad("unknown space kind '" + k + "'");
}

Json to_json(const Integrand& f) {
  if (f.kind() == Integrand::Kind::Custom) bad("integrand '" + f.name() + "' has no JSON form");
  const auto& T = f.terms();
  if (f.name() == "polynomial" && T.size() == 1) return {{"kind", "polynomial"}, {"coeffs", jnums(T[0].coeffs)}};
  if (f.name() == "indicator" && T.size() == 1)
    return {{"kind", "indicator"}, {"a", jnum(T[0].lo)}, {"b", jnum(T[0].hi)}};
  Json terms = Json::array();
  for (const IntegrandTerm& t : T) terms.push_back({{"coeffs", jnums(t.coeffs)}, {"lo", jnum(t.lo)}, {"hi", jnum(t.hi)}});
  return {{"kind", "piecewise"}, {"terms", terms}};
}

Integrand integrand_from_json(const Json& j) {
  const std::string ctx = "integrand";
  std::string k = kind_of(j, ctx);
  if (k == "polynomial") {
    only_keys(j, {"kind", "coeffs"}, ctx);
    return Integrand::polynomial(nums(req(j, "coeffs", ctx), ctx + ".coeffs"));
  }
  if (k == "indicator") {
    only_keys(j, {"kind", "a", "b"}, ctx);
    return Integrand::indicator(num(j, "a", ctx), num(j, "b", ctx));
  }
  if (k == "piecewise") {
    only_keys(j, {"kind", "terms"}, ctx);
    const Json& a = req(j, "terms", ctx);
    if (!a.is_array()) bad("integrand.terms: expected an array");
    std::vector<IntegrandTerm> terms;
    for (const Json& t : a) {
      only_keys(t, {"coeffs", "lo", "hi"}, "integrand.term");
      terms.push_back({nums(req(t, "coeffs", "integrand.term"), "integrand.term.coeffs"),
                       num_or(t, "lo", -kInf, "integrand.term"), num_or(t, "hi", kInf, "integrand.term")});
    }
    return Integrand::piecewise(terms);
  }
  bad("unknown integrand kind '" + k + "'");
}

// ---------------------------------------------------------------- job config

void JobConfig::validate() const {
  in_range(truncation.N >= 1 && truncation.N <= (1LL << 24), "truncation.N must lie in [1, 2^24]");
  for (std::size_t i = 0; i < n_grid.size(); ++i)
    in_range(n_grid[i] >= 1 && (i == 0 || n_grid[i] > n_grid[i - 1]), "n_grid must be positive and increasing");
  in_range(tolerance > 0.0 && tolerance < 1.0, "tolerance must lie in (0, 1)");
  in_range(oracle.restarts >= 0 && oracle.restarts <= 10000, "oracle.restarts must lie in [0, 10000]");
  in_range(oracle.max_sweeps >= 1 && oracle.max_sweeps <= 100000, "oracle.max_sweeps must lie in [1, 100000]");
  in_range(oracle.max_support >= 1 && oracle.max_support <= 4096, "oracle.max_support must lie in [1, 4096]");
  in_range(oracle.slack >= 0.0 && oracle.slack <= 1.0, "oracle.slack must lie in [0, 1]");
  in_range(factorization.max_spread > 0.0, "factorization.max_spread must be positive");
  in_range(factorization.decay_factor > 1.0, "factorization.decay_factor must exceed 1");
  in_range(factorization.decades > 0.0 && factorization.decades <= 1e5, "factorization.decades must lie in (0, 1e5]");
  in_range(factorization.points_per_octave >= 1 && factorization.points_per_octave <= 64,
           "factorization.points_per_octave must lie in [1, 64]");
  in_range(conjugate.t_min > 0.0 && conjugate.t_min <= conjugate.t_max && std::isfinite(conjugate.t_max),
           "conjugate needs 0 < t_min <= t_max < inf");
  in_range(conjugate.points >= 1 && conjugate.points <= 100000, "conjugate.points must lie in [1, 100000]");
  in_range(conjugate.options.grid >= 16 && conjugate.options.grid <= (1 << 20),
           "conjugate.grid must lie in [16, 2^20]");
  in_range(conjugate.options.refine_top >= 0 && conjugate.options.refine_top <= 64,
           "conjugate.refine_top must lie in [0, 64]");
  in_range(lemma.n_max >= 1 && lemma.n_max <= 24, "lemma_r.n_max must lie in [1, 24]");

  auto need = [&](bool ok, const char* what) {
    if (!ok) bad(std::string(to_string(command)) + " needs " + what);
  };
  switch (command) {
    case Command::Norm:
      need(X && x, "'space' and 'x'");
      truncation.validate(*x);
      break;
    case Command::Dual:
      need(X.has_value(), "'space'");
      break;
    case Command::MultSpace:
    case Command::FactorizeCheck:
      need(X && Y, "'X' and 'Y'");
      break;
    case Command::MultNorm:
      need(X && Y && lambda, "'X', 'Y' and 'lambda'");
      truncation.validate(*lambda);
      break;
    case Command::EssNorm:
      need(X && lambda, "'X' and 'lambda'");
      break;
    case Command::CompactCheck:
      need(lambda.has_value(), "'lambda'");
      need(compact.lorentz_case || X, "'X' or 'compact.case'");
      if (compact.lorentz_case) {
        bool psi = *compact.lorentz_case == LorentzCase::IV || *compact.lorentz_case == LorentzCase::V;
        need(compact.phi.has_value(), "'compact.phi'");
        need(!psi || compact.psi, "'compact.psi'");
        need(psi || compact.space, "'compact.space'");
      }
      break;
    case Command::Conjugate:
      need(conjugate.N && conjugate.M, "'conjugate.N' and 'conjugate.M'");
      break;
    case Command::LemmaR:
      need(lemma.integrand.has_value(), "'lemma_r.integrand'");
      break;
    case Command::VerifyPaper:
      break;
  }
}

JobConfig parse_config(const Json& j) {
  try {
    only_keys(j,
              {"command", "space", "X", "Y", "x", "lambda", "truncation", "n_grid", "tolerance", "seed", "oracle",
               "factorization", "conjugate", "lemma_r", "compact", "output"},
              "config");
    JobConfig c;
    const Json& cmd = req(j, "command", "config");
    if (!cmd.is_string()) bad("config.command: expected a string");
    c.command = parse_command(cmd.get<std::string>());
    if (j.contains("space") && j.contains("X")) bad("config: give either 'space' or 'X'");
    if (j.contains("space")) c.X = space_from_json(j.at("space"));
    if (j.contains("X")) c.X = space_from_json(j.at("X"));
    if (j.contains("Y")) c.Y = space_from_json(j.at("Y"));
    if (j.contains("x")) c.x = sequence_from_json(j.at("x"));
    if (j.contains("lambda")) c.lambda = sequence_from_json(j.at("lambda"));
    if (j.contains("truncation")) {
      const Json& t = j.at("truncation");
      only_keys(t, {"N", "policy"}, "truncation");
      c.truncation.N = int_or(t, "N", c.truncation.N, "truncation");
      if (t.contains("policy")) {
        std::string p = t.at("policy").is_string() ? t.at("policy").get<std::string>() : "";
        if (p == "exact")
          c.truncation.policy = Truncation::Policy::ZeroTailExact;
        else if (p == "certified")
          c.truncation.policy = Truncation::Policy::CertifiedTail;
        else if (p == "heuristic")
          c.truncation.policy = Truncation::Policy::HeuristicTail;
        else
          bad("truncation.policy must be exact, certified or heuristic");
      }
    }
    if (j.contains("n_grid")) {
      const Json& g = j.at("n_grid");
      if (!g.is_array()) bad("n_grid: expected an array");
      for (std::size_t i = 0; i < g.size(); ++i) c.n_grid.push_back(integer(g[i], "n_grid"));
    }
    c.tolerance = num_or(j, "tolerance", c.tolerance, "config");
    if (j.contains("seed")) {
      const Json& s = j.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        bad("seed: expected a non-negative 64-bit integer");
      c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("oracle")) {
      const Json& o = j.at("oracle");
      only_keys(o, {"restarts", "max_sweeps", "max_support", "slack", "force_search"}, "oracle");
      c.oracle.restarts = static_cast<int>(int_or(o, "restarts", c.oracle.restarts, "oracle"));
      c.oracle.max_sweeps = static_cast<int>(int_or(o, "max_sweeps", c.oracle.max_sweeps, "oracle"));
      c.oracle.max_support = static_cast<int>(int_or(o, "max_support", c.oracle.max_support, "oracle"));
      c.oracle.slack = num_or(o, "slack", c.oracle.slack, "oracle");
      if (o.contains("force_search")) {
        if (!o.at("force_search").is_boolean()) bad("oracle.force_search: expected a boolean");
        c.oracle.force_search = o.at("force_search").get<bool>();
      }
    }
    c.oracle.seed = c.seed;
    if (j.contains("factorization")) {
      const Json& f = j.at("factorization");
      only_keys(f, {"max_spread", "decay_factor", "decades", "points_per_octave"}, "factorization");
      c.factorization.max_spread = num_or(f, "max_spread", c.factorization.max_spread, "factorization");
      c.factorization.decay_factor = num_or(f, "decay_factor", c.factorization.decay_factor, "factorization");
      c.factorization.decades = num_or(f, "decades", c.factorization.decades, "factorization");
      c.factorization.points_per_octave =
          static_cast<int>(int_or(f, "points_per_octave", c.factorization.points_per_octave, "factorization"));
    }
    if (j.contains("conjugate")) {
      const Json& f = j.at("conjugate");
      only_keys(f, {"N", "M", "t_min", "t_max", "points", "grid", "refine_top"}, "conjugate");
      if (f.contains("N")) c.conjugate.N = orlicz_from_json(f.at("N"));
      if (f.contains("M")) c.conjugate.M = orlicz_from_json(f.at("M"));
      c.conjugate.t_min = num_or(f, "t_min", c.conjugate.t_min, "conjugate");
      c.conjugate.t_max = num_or(f, "t_max", c.conjugate.t_max, "conjugate");
      c.conjugate.points = static_cast<int>(int_or(f, "points", c.conjugate.points, "conjugate"));
      c.conjugate.options.grid = static_cast<int>(int_or(f, "grid", c.conjugate.options.grid, "conjugate"));
      c.conjugate.options.refine_top =
          static_cast<int>(int_or(f, "refine_top", c.conjugate.options.refine_top, "conjugate"));
    }
    if (j.contains("lemma_r")) {
      const Json& f = j.at("lemma_r");
      only_keys(f, {"integrand", "partition", "n_max"}, "lemma_r");
      if (f.contains("integrand")) c.lemma.integrand = integrand_from_json(f.at("integrand"));
      if (f.contains("partition")) {
        const Json& p = f.at("partition");
        if (!p.is_array()) bad("lemma_r.partition: expected an array of [a, b] pairs");
        std::vector<std::pair<double, double>> pieces;
        for (const Json& e : p) {
          auto ab = nums(e, "lemma_r.partition");
          if (ab.size() != 2) bad("lemma_r.partition: expected [a, b] pairs");
          pieces.emplace_back(ab[0], ab[1]);
        }
        c.lemma.partition = MeasurePartition(pieces);
      }
      c.lemma.n_max = static_cast<int>(int_or(f, "n_max", c.lemma.n_max, "lemma_r"));
    }
    if (j.contains("compact")) {
      const Json& f = j.at("compact");
      only_keys(f, {"case", "space", "phi", "psi"}, "compact");
      if (f.contains("case")) {
        if (!f.at("case").is_string()) bad("compact.case: expected a string");
        c.compact.lorentz_case = parse_case(f.at("case").get<std::string>());
      }
      if (f.contains("space")) c.compact.space = space_from_json(f.at("space"));
      if (f.contains("phi")) c.compact.phi = weight_from_json(f.at("phi"));
      if (f.contains("psi")) c.compact.psi = weight_from_json(f.at("psi"));
    }
    if (j.contains("output")) {
      const Json& o = j.at("output");
      only_keys(o, {"format", "path"}, "output");
      if (o.contains("format")) {
        std::string f = o.at("format").is_string() ? o.at("format").get<std::string>() : "";
        if (f == "table")
          c.format = OutputFormat::Table;
        else if (f == "csv")
          c.format = OutputFormat::Csv;
        else
          bad("output.format must be table or csv");
      }
      if (o.contains("path")) {
        if (!o.at("path").is_string()) bad("output.path: expected a string");
        c.out = o.at("path").get<std::string>();
      }
    }
    c.validate();
    return c;
  } catch (const Error& e) {
    if (e.is_validation()) throw;
    raise(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  } catch (const Json::exception& e) {
    raise(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
}

JobConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    raise(ErrorKind::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

Json to_json(const JobConfig& c) {
  Json j;
  j["command"] = to_string(c.command);
  if (c.X) j["X"] = to_json(*c.X);
  if (c.Y) j["Y"] = to_json(*c.Y);
  if (c.x) j["x"] = to_json(*c.x);
  if (c.lambda) j["lambda"] = to_json(*c.lambda);
  j["truncation"] = {{"N", c.truncation.N}, {"policy", policy_name(c.truncation.policy)}};
  j["n_grid"] = c.n_grid;
  j["tolerance"] = jnum(c.tolerance);
  j["seed"] = c.seed;
  j["oracle"] = {{"restarts", c.oracle.restarts},
                 {"max_sweeps", c.oracle.max_sweeps},
                 {"max_support", c.oracle.max_support},
                 {"slack", jnum(c.oracle.slack)},
                 {"force_search", c.oracle.force_search}};
  j["factorization"] = {{"max_spread", jnum(c.factorization.max_spread)},
                        {"decay_factor", jnum(c.factorization.decay_factor)},
                        {"decades", jnum(c.factorization.decades)},
                        {"points_per_octave", c.factorization.points_per_octave}};
  Json cj = {{"t_min", jnum(c.conjugate.t_min)},
             {"t_max", jnum(c.conjugate.t_max)},
             {"points", c.conjugate.points},
             {"grid", c.conjugate.options.grid},
             {"refine_top", c.conjugate.options.refine_top}};
  if (c.conjugate.N) cj["N"] = to_json(*c.conjugate.N);
  if (c.conjugate.M) cj["M"] = to_json(*c.conjugate.M);
  j["conjugate"] = cj;
  Json parts = Json::array();
  for (auto& [a, b] : c.lemma.partition.pieces()) parts.push_back({jnum(a), jnum(b)});
  Json lj = {{"partition", parts}, {"n_max", c.lemma.n_max}};
  if (c.lemma.integrand) lj["integrand"] = to_json(*c.lemma.integrand);
  j["lemma_r"] = lj;
  Json kj = Json::object();
  if (c.compact.lorentz_case) kj["case"] = to_string(*c.compact.lorentz_case);
  if (c.compact.space) kj["space"] = to_json(*c.compact.space);
  if (c.compact.phi) kj["phi"] = to_json(*c.compact.phi);
  if (c.compact.psi) kj["psi"] = to_json(*c.compact.psi);
  j["compact"] = kj;
  j["output"] = {{"format", c.format == OutputFormat::Csv ? "csv" : "table"}, {"path", c.out}};
  return j;
}

// ---------------------------------------------------------------- formatting

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_pow10(double x) {
  if (x == -kInf) return "0";
  if (!std::isfinite(x)) return format_number(x > 0 ? kInf : std::nan(""));
  if (x > -300.0 && x < 300.0) return format_number(std::pow(10.0, x));
  double e = std::floor(x);
  double m = std::pow(10.0, x - e);
  if (m >= 10.0) {
    m /= 10.0;
    e += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12ge%.0f", m, e);
  return buf;
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"') o += '"';
    o += ch;
  }
  return o + "\"";
}

std::string bracket_text(const Bracket& b) {
  return "[" + format_number(b.lower) + ", " + format_number(b.upper) + "] " +
         (b.certified() ? "certified" : "heuristic");
}

void add(Report& r, std::string k, std::string v) { r.fields.emplace_back(std::move(k), std::move(v)); }

void tail_rows(Report& r, const std::vector<std::pair<long long, Bracket>>& rows) {
  r.columns = {"n", "lower", "upper"};
  for (auto& [n, b] : rows) r.rows.push_back({std::to_string(n), format_number(b.lower), format_number(b.upper)});
}

std::vector<long long> grid_of(const JobConfig& c) { return c.n_grid.empty() ? default_n_grid() : c.n_grid; }

int verdict_status(Verdict v) { return v == Verdict::NotBounded ? 3 : 0; }

int run_norm(const JobConfig& c, Report& r) {
  Bracket b = norm(*c.X, *c.x, c.truncation);
  add(r, "space", c.X->name());
  add(r, "value", format_number(b.mid()));
  add(r, "lower", format_number(b.lower));
  add(r, "upper", format_number(b.upper));
  add(r, "status", b.certified() ? "certified" : "heuristic");
  if (!b.diagnostics.empty()) r.notes.push_back(b.diagnostics);
  return 0;
}

int run_dual(const JobConfig& c, Report& r) {
  SD d = kothe_dual(*c.X);
  add(r, "space", c.X->name());
  add(r, "dual", d.name());
  add(r, "descriptor", to_json(d).dump());
  return 0;
}

int run_mult_space(const JobConfig& c, Report& r) {
  MultiplierResult m = multiplier_space(*c.X, *c.Y);
  add(r, "X", c.X->name());
  add(r, "Y", c.Y->name());
  add(r, "M(X,Y)", m.descriptor.name());
  add(r, "rule", m.rule);
  add(r, "equivalence", m.equivalence ? "yes" : "no");
  if (m.constants) add(r, "constants", format_number(m.constants->first) + ", " + format_number(m.constants->second));
  if (m.known()) add(r, "descriptor", to_json(m.descriptor).dump());
  if (!m.warning.empty()) r.notes.push_back(m.warning);
  return 0;
}

int run_mult_norm(const JobConfig& c, Report& r) {
  OracleResult o = multiplier_norm_oracle(*c.X, *c.Y, *c.lambda, c.truncation, c.oracle);
  add(r, "X", c.X->name());
  add(r, "Y", c.Y->name());
  add(r, "lower", format_number(o.value.lower));
  add(r, "upper", format_number(o.value.upper));
  add(r, "status", o.value.certified() ? "certified" : "heuristic");
  add(r, "closed_form", o.closed_form ? "yes" : "no");
  add(r, "search_lower", format_number(o.search_lower));
  r.columns = {"n", "witness"};
  for (std::size_t k = 0; k < o.witness.size(); ++k) r.rows.push_back({std::to_string(k + 1), format_number(o.witness[k])});
  if (!o.value.diagnostics.empty()) r.notes.push_back(o.value.diagnostics);
  return 0;
}

int ess_report(const EssNormReport& e, Report& r) {
  add(r, "limit", bracket_text(e.limit));
  add(r, "verdict", to_string(e.verdict));
  if (!e.certificate.empty()) add(r, "certificate", e.certificate);
  for (const std::string& w : e.warnings) r.notes.push_back(w);
  tail_rows(r, e.tail_norms);
  return verdict_status(e.verdict);
}

int run_ess_norm(const JobConfig& c, Report& r) {
  add(r, "X", c.X->name());
  if (!c.Y || *c.Y == *c.X) {
    add(r, "Y", c.X->name());
    return ess_report(essential_norm_self(*c.X, *c.lambda, grid_of(c)), r);
  }
  add(r, "Y", c.Y->name());
  return ess_report(essential_norm(*c.X, *c.Y, *c.lambda, grid_of(c), c.oracle), r);
}

int run_compact(const JobConfig& c, Report& r) {
  if (c.compact.lorentz_case) {
    LorentzCaseParams p;
    if (c.compact.space) p.space = *c.compact.space;
    p.phi = *c.compact.phi;
    if (c.compact.psi) p.psi = *c.compact.psi;
    LorentzCaseReport q = lorentz_case_check(*c.compact.lorentz_case, p, *c.lambda);
    add(r, "case", to_string(*c.compact.lorentz_case));
    add(r, "verdict", to_string(q.verdict));
    add(r, "branch", q.branch);
    add(r, "target", q.target);
    add(r, "member", to_string(q.member));
    add(r, "reason", q.reason);
    return verdict_status(q.verdict);
  }
  add(r, "X", c.X->name());
  if (c.Y && c.X->kind() == SD::Kind::Nakano && c.Y->kind() == SD::Kind::Nakano) {
    add(r, "Y", c.Y->name());
    NakanoReport n = nakano_compactness(*c.lambda, c.X->exponents(), c.Y->exponents());
    add(r, "route", "nakano");
    add(r, "verdict", to_string(n.verdict));
    if (!n.reason.empty()) add(r, "reason", n.reason);
    r.columns = {"ell", "k", "lower", "upper"};
    for (const NakanoCell& cell : n.cells)
      r.rows.push_back({format_number(cell.ell), format_number(cell.k), format_number(cell.sum.lower),
                        format_number(cell.sum.upper)});
    return verdict_status(n.verdict);
  }
  add(r, "Y", c.Y ? c.Y->name() : c.X->name());
  add(r, "route", "essential norm");
  PittReport pitt = pitt_predicate(*c.X, c.Y ? *c.Y : *c.X);
  add(r, "pitt", to_string(pitt.verdict));
  if (!c.Y || *c.Y == *c.X) return ess_report(essential_norm_self(*c.X, *c.lambda, grid_of(c)), r);
  return ess_report(essential_norm(*c.X, *c.Y, *c.lambda, grid_of(c), c.oracle), r);
}

int run_conjugate(const JobConfig& c, Report& r) {
  const OrliczFunction &N = *c.conjugate.N, &M = *c.conjugate.M;
  OrliczFunction closed = OrliczFunction::conjugate_of(N, M, c.conjugate.options.grid);
  bool has_closed = closed.kind() != OrliczFunction::Kind::Conjugate;
  add(r, "N", N.name());
  add(r, "M", M.name());
  add(r, "closed_form", has_closed ? closed.name() : "none (brute force in both columns)");
  r.columns = {"t", "closed_form", "brute_force", "rel_err"};
  double worst = 0.0;
  const int P = c.conjugate.points;
  for (int i = 0; i < P; ++i) {
    double t = P == 1 ? c.conjugate.t_min
                      : c.conjugate.t_min + (c.conjugate.t_max - c.conjugate.t_min) * i / static_cast<double>(P - 1);
    double lt = std::log(t);
    double lc = closed.log_eval(lt);
    double lb = young_conjugate_generalized_log(N, M, lt, c.conjugate.options).log_lower;
    double rel = (lc == -kInf && lb == -kInf) ? 0.0 : std::fabs(std::expm1(lc - lb));
    worst = std::max(worst, rel);
    r.rows.push_back({format_number(t), format_pow10(lc / std::log(10.0)), format_pow10(lb / std::log(10.0)),
                      format_number(rel)});
  }
  add(r, "max_rel_err", format_number(worst));
  return 0;
}

int run_factorize(const JobConfig& c, Report& r) {
  FactorizationReport f = factorization_check(*c.X, *c.Y, {}, c.factorization);
  add(r, "X", c.X->name());
  add(r, "Y", c.Y->name());
  add(r, "verdict", to_string(f.verdict));
  add(r, "route", f.route);
  add(r, "reason", f.reason);
  add(r, "spread", format_number(f.spread));
  add(r, "decay", format_number(f.decay));
  add(r, "max_spread", format_number(c.factorization.max_spread));
  add(r, "decay_factor", format_number(c.factorization.decay_factor));
  bool orl = f.route == "orlicz";
  r.columns = {orl ? "t" : "sample", "ratio_lower", "ratio_upper"};
  for (auto& [x, b] : f.ratios)
    r.rows.push_back({orl ? format_pow10(x) : format_number(x), format_number(b.lower), format_number(b.upper)});
  return 0;
}

int run_lemma(const JobConfig& c, Report& r) {
  LemmaReport l = lemma_r_demo(*c.lemma.integrand, c.lemma.partition, c.lemma.n_max);
  add(r, "integrand", c.lemma.integrand->name());
  add(r, "measure", format_number(c.lemma.partition.measure()));
  add(r, "window", std::to_string(l.window));
  add(r, "trailing_max", format_number(l.trailing_max));
  r.columns = {"n", "value"};
  for (auto& [n, v] : l.values) r.rows.push_back({std::to_string(n), format_number(v)});
  return 0;
}

int run_verify(const JobConfig& c, Report& r) {
  std::vector<CriterionResult> all = verify_all(c.seed);
  bool ok = true;
  double total = 0.0;
  r.columns = {"criterion", "pass", "seconds", "detail"};
  for (const CriterionResult& k : all) {
    ok = ok && k.pass();
    total += k.seconds;
    std::string detail;
    for (const Check& ch : k.checks) {
      if (!detail.empty()) detail += "; ";
      detail += (ch.pass ? "ok " : "FAILED ") + ch.name + (ch.detail.empty() ? "" : " (" + ch.detail + ")");
    }
    r.rows.push_back({k.id, k.pass() ? "pass" : "fail", format_number(k.seconds), detail});
    for (const std::string& i : k.info) r.notes.push_back(k.id + ": " + i);
  }
  add(r, "all_pass", ok ? "yes" : "no");
  add(r, "seconds", format_number(total));
  return ok ? 0 : 1;
}

}  // namespace

RunResult run(const JobConfig& config) {
  RunResult res;
  res.report.command = config.command;
  try {
    config.validate();
    Report& r = res.report;
    switch (config.command) {
      case Command::Norm:
        res.status = run_norm(config, r);
        break;
      case Command::Dual:
        res.status = run_dual(config, r);
        break;
      case Command::MultSpace:
        res.status = run_mult_space(config, r);
        break;
      case Command::MultNorm:
        res.status = run_mult_norm(config, r);
        break;
      case Command::EssNorm:
        res.status = run_ess_norm(config, r);
        break;
      case Command::CompactCheck:
        res.status = run_compact(config, r);
        break;
      case Command::Conjugate:
        res.status = run_conjugate(config, r);
        break;
      case Command::FactorizeCheck:
        res.status = run_factorize(config, r);
        break;
      case Command::LemmaR:
        res.status = run_lemma(config, r);
        break;
      case Command::VerifyPaper:
        res.status = run_verify(config, r);
        break;
    }
    if (res.status == 3) res.report.error = "NotBounded: the multiplier is not bounded";
  } catch (const Error& e) {
    res.status = e.is_validation() ? 2 : 3;
    res.report.error = e.what();
  } catch (const std::exception& e) {
    res.status = 3;
    res.report.error = e.what();
  }
  return res;
}

std::string report_stem(const Report& r) { return to_string(r.command); }

std::string format_table(const Report& r) {
  std::ostringstream os;
  os << "command: " << to_string(r.command) << "\n";
  if (!r.error.empty()) os << "error: " << r.error << "\n";
  std::size_t kw = 0;
  for (auto& [k, v] : r.fields) kw = std::max(kw, k.size());
  for (auto& [k, v] : r.fields) os << k << std::string(kw - k.size(), ' ') << "  " << v << "\n";
  if (!r.columns.empty()) {
    std::vector<std::size_t> w(r.columns.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = r.columns[i].size();
    for (auto& row : r.rows)
      for (std::size_t i = 0; i < row.size() && i < w.size(); ++i) w[i] = std::max(w[i], row[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        os << cells[i];
        if (i + 1 < cells.size()) os << std::string(w[i] - cells[i].size() + 2, ' ');
      }
      os << "\n";
    };
    os << "\n";
    line(r.columns);
    for (auto& row : r.rows) line(row);
  }
  for (const std::string& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string format_csv(const Report& r) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
    os << "\n";
  };
  if (!r.columns.empty()) {
    line(r.columns);
    for (auto& row : r.rows) line(row);
    return os.str();
  }
  line({"key", "value"});
  if (!r.error.empty()) line({"error", r.error});
  for (auto& [k, v] : r.fields) line({k, v});
  return os.str();
}

namespace {
void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write to " + path + " failed");
}
}  // namespace

void emit_csv(const Report& r, const std::string& path) { write_file(path, format_csv(r)); }

void emit_table(const Report& r, const std::string& path) { write_file(path, format_table(r)); }

}  // namespace kothe
