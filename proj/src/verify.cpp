#include "kothe/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "kothe/essnorm.hpp"
#include "kothe/lorentz.hpp"
#include "kothe/multipliers.hpp"
#include "kothe/rademacher.hpp"

namespace kothe {

namespace {

using SD = SpaceDescriptor;
using Clock = std::chrono::steady_clock;

std::string g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <class F>
CriterionResult timed(std::string id, std::string title, double limit, F body) {
  CriterionResult r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.time_limit = limit;
  auto t0 = Clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.checks.push_back({"runtime < " + g(limit) + " s", r.seconds < limit, g(r.seconds) + " s"});
  return r;
}

void check(CriterionResult& r, std::string name, bool ok, std::string detail = {}) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

std::vector<double> random_vec(std::mt19937_64& rng, int max_len, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(1 + rng() % static_cast<unsigned>(max_len));
  for (double& x : v) x = u(rng);
  return v;
}

double nrm(const SD& S, const std::vector<double>& v) {
  return norm(S, make_sequence(v), Truncation::exact(static_cast<long long>(v.size()))).mid();
}

Bracket nrmb(const SD& S, const std::vector<double>& v) {
  return norm(S, make_sequence(v), Truncation::exact(static_cast<long long>(v.size())));
}

std::vector<SD> battery_spaces() {
  auto sq = ConcaveWeight::power(0.5);
  return {
      SD::lp(1.0),
      SD::lp(2.0),
      SD::lp(3.5),
      SD::linfty(),
      SD::c0(),
      SD::weighted(SD::lp(2.0), SequenceSpec({}, power_log_tail(1.0, 0.5, 0.0)), "n^0.5"),
      SD::orlicz(OrliczFunction::mtilde()),
      SD::orlicz(OrliczFunction::power(3.0)),
      SD::nakano(ExponentRule::table({1.5, 3.0, 2.0}, 4.0)),
      SD::lorentz(sq),
      SD::marcinkiewicz(sq),
      SD::symmetrized(SD::weighted(SD::linfty(), sq.sequence(), "sqrt")),
      SD::cesaro(SD::lp(2.0)),
      SD::tandori(SD::lp(2.0)),
  };
}

struct Battery {
  explicit Battery(std::string n) : name(std::move(n)) {}
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first;
  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
  void report(CriterionResult& r) const {
    check(r, name + ": 0 failures over " + std::to_string(cases),
          failures == 0 && cases >= 1000,
          std::to_string(failures) + " failures" + (first.empty() ? "" : ", first: " + first));
  }
};

constexpr int kCases = 1000;

}  // namespace

bool CriterionResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string CriterionResult::summary() const {
  std::ostringstream os;
  os << id << (pass() ? " PASS " : " FAIL ") << title;
  for (const Check& c : checks)
    if (!c.pass) os << " | failed: " << c.name << " [" << c.detail << "]";
  os << " (" << g(seconds) << " s)";
  return os.str();
}

CriterionResult verify_holder_closed_form(std::uint64_t seed) {
  return timed("AC-1", "Holder multiplier closed form (4,2)", 2.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(seed + 101);
    double worst = 0.0;
    bool closed = true;
    for (int i = 0; i < 100; ++i) {
      auto lam = random_vec(rng, 12, -1.0, 1.0);
      long double s = 0.0L;
      for (double v : lam) s += std::pow(static_cast<long double>(std::fabs(v)), 4.0L);
      double ref = static_cast<double>(std::pow(s, 0.25L));
      OracleResult o = multiplier_norm_oracle(SD::lp(4.0), SD::lp(2.0), make_sequence(lam),
                                              Truncation::exact(static_cast<long long>(lam.size())));
      closed = closed && o.closed_form;
      worst = std::max({worst, std::fabs(o.value.lower - ref) / ref, std::fabs(o.value.upper - ref) / ref});
    }
    check(r, "relative error <= 1e-6", worst <= 1e-6, "max " + g(worst));
    check(r, "closed-form path", closed);
  });
}

CriterionResult verify_self_essential_norm(std::uint64_t) {
  return timed("AC-2", "self essential norm of 1 + (-1)^n/2", 0.1, [&](CriterionResult& r) {
    SequenceSpec lam({}, periodic_tail({0.5, 1.5}));
    EssNormReport e = essential_norm_self(SD::lp(2.0), lam);
    double err = std::max(std::fabs(e.limit.lower - 1.5), std::fabs(e.limit.upper - 1.5));
    check(r, "limit = 1.5 +- 1e-12", err <= 1e-12, "[" + g(e.limit.lower) + ", " + g(e.limit.upper) + "]");
    check(r, "verdict NonCompact", e.verdict == Verdict::NonCompact, to_string(e.verdict));
  });
}

CriterionResult verify_pitt(std::uint64_t) {
  return timed("AC-3", "Pitt predicate", 0.5, [&](CriterionResult& r) {
    Pitt a = pitt_predicate(SD::lp(4.0), SD::lp(2.0)).verdict;
    Pitt b = pitt_predicate(SD::lp(2.0), SD::lp(4.0)).verdict;
    Pitt c = pitt_predicate(SD::orlicz(OrliczFunction::mtilde()), SD::lp(2.0)).verdict;
    check(r, "(l4, l2) AllCompact", a == Pitt::AllCompact, to_string(a));
    check(r, "(l2, l4) SomeNonCompact", b == Pitt::SomeNonCompact, to_string(b));
    check(r, "(l_Mtilde, l2) SomeNonCompact", c == Pitt::SomeNonCompact, to_string(c));
  });
}

CriterionResult verify_appendix_conjugate(std::uint64_t) {
  return timed("AC-4", "appendix conjugate closed form vs brute force", 5.0, [&](CriterionResult& r) {
    auto N = OrliczFunction::power(2.0), M = OrliczFunction::mtilde();
    double worst = 0.0;
    long long bmin = kNever, bmax = 0;
    for (int i = 0; i < 200; ++i) {
      double t = 0.05 + 0.95 * i / 199.0;
      // values reach e^-20000 near t = 0.05, so the relative error is taken in log space
      double cf = appendix_conjugate_log(std::log(t));
      double bf = young_conjugate_generalized(N, M, t).log_lower;
      worst = std::max(worst, std::fabs(std::expm1(cf - bf)));
      long long b = appendix_conjugate_branch(t);
      bmin = std::min(bmin, b);
      bmax = std::max(bmax, b);
    }
    check(r, "max relative error <= 1e-4", worst <= 1e-4, "max " + g(worst));
    r.info.push_back("active branches n = " + std::to_string(bmin) + ".." + std::to_string(bmax));
  });
}

CriterionResult verify_appendix_factorization(std::uint64_t) {
  return timed("AC-5", "appendix factorization failure", 5.0, [&](CriterionResult& r) {
    auto Mt = OrliczFunction::mtilde(), t2 = OrliczFunction::power(2.0);
    std::vector<Bracket> R;
    double fact = 1.0;
    for (int n = 1; n <= 7; ++n) {
      fact *= n;
      if (n >= 2) R.push_back(factorization_ratio(Mt, t2, 1.0 / (fact * fact)));
    }
    bool dec = true;
    std::string vals;
    for (std::size_t i = 0; i < R.size(); ++i) {
      if (i > 0 && !(R[i].upper < R[i - 1].lower)) dec = false;
      vals += (i ? ", " : "") + g(R[i].mid());
    }
    check(r, "R(1/(n!)^2) strictly decreasing for n = 2..7", dec, vals);
    double ratio = R.back().upper / R.front().lower;
    check(r, "R(n=7) <= 0.5 R(n=2)", R.back().upper <= 0.5 * R.front().lower, "R7/R2 = " + g(ratio));
    FactorizationReport m = factorization_check(SD::orlicz(Mt), SD::lp(2.0));
    check(r, "factorization_check(l_Mtilde, l2) Fails", m.verdict == Factorization::Fails,
          std::string(to_string(m.verdict)) + ", decay " + g(m.decay));
    FactorizationOptions six;
    six.decades = 6.0;
    FactorizationReport h = factorization_check(SD::lp(4.0), SD::lp(2.0), {}, six);
    check(r, "factorization_check(l4, l2) Holds", h.verdict == Factorization::Holds, to_string(h.verdict));
    check(r, "l4 ratio spread <= 1e-3 across 6 decades", h.spread <= 1e-3, g(h.spread));
  });
}

CriterionResult verify_nakano(std::uint64_t) {
  return timed("AC-6", "Nakano compactness", 2.0, [&](CriterionResult& r) {
    auto p4 = ExponentRule::constant(4.0), p2 = ExponentRule::constant(2.0);
    Verdict a = nakano_compactness(SequenceSpec({}, power_tail(1.0, 0.5)), p4, p2).verdict;
    Verdict b = nakano_compactness(SequenceSpec({}, power_tail(1.0, 0.25)), p4, p2).verdict;
    Verdict c = nakano_compactness(SequenceSpec({}, constant_tail(1.0)), p2, p2).verdict;
    check(r, "(4,2), n^(-1/2) Compact", a == Verdict::Compact, to_string(a));
    check(r, "(4,2), n^(-1/4) NotBounded", b == Verdict::NotBounded, to_string(b));
    check(r, "p = q, lambda = 1 NonCompact", c == Verdict::NonCompact, to_string(c));
  });
}

CriterionResult verify_cesaro(std::uint64_t) {
  return timed("AC-7", "Cesaro multipliers", 1.0, [&](CriterionResult& r) {
    SD c2 = SD::cesaro(SD::lp(2.0)), c4 = SD::cesaro(SD::lp(4.0));
    MultiplierResult a = multiplier_space(c2, c4);
    bool weight_ok = a.descriptor.kind() == SD::Kind::Weighted && a.descriptor.base() == SD::linfty();
    if (weight_ok)
      for (long long n : {1LL, 2LL, 7LL, 100LL, 1LL << 20})
        weight_ok = weight_ok &&
                    std::fabs(a.descriptor.weight().at(n) - std::pow(static_cast<double>(n), -0.25)) <= 1e-14;
    check(r, "M(ces2, ces4) = l^inf(n^(-1/4))", weight_ok, a.descriptor.name());
    MultiplierResult b = multiplier_space(SD::cesaro(SD::lp(4.0)), c2);
    check(r, "M(ces4, ces2) = Tandori(l4)", b.descriptor == SD::tandori(SD::lp(4.0)), b.descriptor.name());
    Verdict k = essential_norm(c2, c4, SequenceSpec({}, power_log_tail(1.0, 0.25, -1.0))).verdict;
    Verdict n = essential_norm(c2, c4, SequenceSpec({}, power_log_tail(1.0, 0.25, 0.0))).verdict;
    check(r, "n^(1/4)/log(n+1) Compact", k == Verdict::Compact, to_string(k));
    check(r, "n^(1/4) NonCompact", n == Verdict::NonCompact, to_string(n));
  });
}

CriterionResult verify_rademacher(std::uint64_t) {
  return timed("AC-8", "Rademacher integrals", 1.0, [&](CriterionResult& r) {
    MeasurePartition one = MeasurePartition::unit();
    Integrand t = Integrand::polynomial({0.0, 1.0});
    double worst = 0.0;
    for (int n = 1; n <= 12; ++n)
      worst = std::max(worst, std::fabs(glued_integral(t, one, n) + std::ldexp(1.0, -(n + 1))));
    check(r, "int t r_n = -2^-(n+1) to 1e-14", worst <= 1e-14, "max " + g(worst));
    double orth = 0.0;
    for (int n = 1; n <= 12; ++n)
      for (int m = 1; m <= 12; ++m)
        orth = std::max(orth, std::fabs(rademacher_integral({n, m}) - (n == m ? 1.0 : 0.0)));
    check(r, "orthonormal to 1e-12", orth <= 1e-12, "max " + g(orth));
  });
}

CriterionResult verify_marcinkiewicz_bracket(std::uint64_t seed) {
  return timed("AC-9", "Lorentz/Marcinkiewicz multiplier bracket", 10.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(seed + 909);
    auto sq = ConcaveWeight::power(0.5);
    SD Y = SD::lp(2.0);
    SD X = SD::symmetrized(SD::weighted(SD::linfty(), sq.sequence(), "sqrt"));
    SD D = multiplier_from_marcinkiewicz(sq, Y);
    SD kps = SD::marcinkiewicz(sq);
    double lo = kInf, hi = 0.0, klo = kInf, khi = 0.0;
    int bad = 0;
    for (int i = 0; i < 50; ++i) {
      auto lam = random_vec(rng, 8, -1.0, 1.0);
      auto N = Truncation::exact(static_cast<long long>(lam.size()));
      double s = nrm(D, lam);
      OracleResult o = multiplier_norm_oracle(X, Y, make_sequence(lam), N);
      double v = o.value.lower;
      if (!(v >= s * (1.0 - 1e-12) && v <= 2.0 * s + 1e-6)) ++bad;
      lo = std::min(lo, v / s);
      hi = std::max(hi, v / s);
      if (i < 10) {
        double k = multiplier_norm_oracle(kps, Y, make_sequence(lam), N).value.lower / s;
        klo = std::min(klo, k);
        khi = std::max(khi, k);
      }
    }
    check(r, "formula <= oracle <= 2 formula + 1e-6 on 50 cases", bad == 0,
          std::to_string(bad) + " violations, oracle/formula in [" + g(lo) + ", " + g(hi) + "]");
    r.info.push_back("oracle/formula with the sup_n x*_n phi(n) norm: [" + g(lo) + ", " + g(hi) + "]");
    r.info.push_back("oracle/formula with the sup_n phi(n)/n sum_{k<=n} x*_k norm (10 cases): [" + g(klo) + ", " +
                     g(khi) + "]");
  });
}

CriterionResult verify_properties(std::uint64_t seed) {
  return timed("AC-10", "property suites", 20.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(seed + 1010);
    std::uniform_real_distribution<double> u01(0.0, 1.0), sc(-3.0, 3.0);
    std::vector<SD> spaces = battery_spaces();

    Battery axioms("norm axioms"), ideal("ideal property"), ri("rearrangement invariance");
    Battery tails("tail-norm monotonicity"), commute("majorant/restriction commutation");
    Battery approx("a_n monotone and convergent");

    for (int i = 0; i < kCases; ++i) {
      const SD& S = spaces[static_cast<std::size_t>(i) % spaces.size()];
      auto x = random_vec(rng, 32, -2.0, 2.0), y = random_vec(rng, 32, -2.0, 2.0);
      double c = sc(rng);
      std::vector<double> cx = x, s(std::max(x.size(), y.size()), 0.0);
      for (double& v : cx) v *= c;
      for (std::size_t k = 0; k < x.size(); ++k) s[k] += x[k];
      for (std::size_t k = 0; k < y.size(); ++k) s[k] += y[k];
      Bracket bx = nrmb(S, x), by = nrmb(S, y);
      double nx = bx.mid(), ncx = nrm(S, cx);
      bool ok = std::fabs(ncx - std::fabs(c) * nx) <= 1e-11 * std::max(1.0, std::fabs(c) * nx);
      ok = ok && nrmb(S, s).lower <= bx.upper + by.upper + 1e-9;
      bool nonzero = std::any_of(x.begin(), x.end(), [](double v) { return v != 0.0; });
      ok = ok && (!nonzero || bx.lower > 0.0) && nrm(S, {0.0}) == 0.0;
      ++axioms.cases;
      if (!ok) axioms.fail(S.name());
    }

    for (int i = 0; i < kCases; ++i) {
      const SD& S = spaces[static_cast<std::size_t>(i) % spaces.size()];
      auto x = random_vec(rng, 32, -2.0, 2.0);
      std::vector<double> y = x;
      for (double& v : y) v *= u01(rng);
      double nx = nrm(S, x);
      ++ideal.cases;
      if (!(nrm(S, y) <= nx + 1e-12 * std::max(1.0, nx))) ideal.fail(S.name());
    }

    auto sq = ConcaveWeight::power(0.5);
    std::vector<SD> ris = {SD::lp(1.5), SD::lp(4.0), SD::orlicz(OrliczFunction::mtilde()), SD::lorentz(sq),
                           SD::marcinkiewicz(sq), SD::symmetrized(SD::cesaro(SD::lp(2.0)))};
    for (int i = 0; i < kCases; ++i) {
      const SD& S = ris[static_cast<std::size_t>(i) % ris.size()];
      auto x = random_vec(rng, 32, -2.0, 2.0);
      auto y = x;
      std::shuffle(y.begin(), y.end(), rng);
      double nx = nrm(S, x);
      ++ri.cases;
      if (!S.rearrangement_invariant() || !(std::fabs(nx - nrm(S, y)) <= 1e-12 * std::max(1.0, nx))) ri.fail(S.name());
    }

    for (int i = 0; i < kCases; ++i) {
      const SD& S = spaces[static_cast<std::size_t>(i) % spaces.size()];
      auto x = random_vec(rng, 32, -2.0, 2.0);
      SequenceSpec xs = make_sequence(x);
      long long L = xs.length();
      std::vector<long long> ns;
      for (int k = 0; k < 4; ++k) ns.push_back(1 + static_cast<long long>(rng() % static_cast<unsigned>(L + 1)));
      std::sort(ns.begin(), ns.end());
      bool ok = true;
      Bracket prev = Bracket::exact(kInf);
      for (long long n : ns) {
        Bracket t = norm(S, tail_restrict(xs, n), Truncation::exact(L));
        if (!(t.lower <= prev.upper + 1e-12 * std::max(1.0, t.lower))) ok = false;
        prev = t;
      }
      ++tails.cases;
      if (!ok) tails.fail(S.name());
    }

    for (int i = 0; i < kCases; ++i) {
      auto p = random_vec(rng, 16, -2.0, 2.0);
      TailPtr tail = (i % 4 == 0) ? zero_tail() : power_tail(sc(rng), 0.2 + 1.5 * u01(rng));
      SequenceSpec xs(p, tail);
      long long n = 1 + static_cast<long long>(rng() % 24);
      Truncation T = Truncation::certified(64);
      SequenceSpec a = decreasing_majorant(tail_restrict(xs, n), T), b = decreasing_majorant(xs, T);
      bool ok = true;
      for (long long k = n; k < n + 48; ++k) ok = ok && a.at(k) == b.at(k);
      ++commute.cases;
      if (!ok) commute.fail("n = " + std::to_string(n));
    }

    const std::vector<long long> grid = default_n_grid();
    for (int i = 0; i < kCases; ++i) {
      auto p = random_vec(rng, 12, 0.1, 1.0);
      for (double& v : p)
        if (rng() & 1) v = -v;
      bool unbounded = i % 8 == 0;
      double c = 0.5 + 0.5 * u01(rng), al = 0.3 + 1.2 * u01(rng);
      SequenceSpec lam(p, unbounded ? constant_tail(c) : power_tail(c, al));
      auto a = approximation_numbers(lam, 4.0, 2.0, grid);
      bool ok = true;
      if (unbounded) {
        for (auto& [n, b] : a) ok = ok && std::isinf(b.lower);
        try {
          essential_norm(SD::lp(4.0), SD::lp(2.0), lam);
          ok = false;
        } catch (const Error& err) {
          ok = ok && err.kind() == ErrorKind::NotBounded;
        }
      } else {
        EssNormReport e = essential_norm(SD::lp(4.0), SD::lp(2.0), lam);
        for (std::size_t k = 0; k < a.size(); ++k) {
          ok = ok && a[k].second.lower <= a[k].second.upper;
          if (k > 0) ok = ok && a[k].second.upper <= a[k - 1].second.upper;
          double n = static_cast<double>(a[k].first);
          // ranks past the prefix: λ*_n <= c (n − 12)^{-α}
          if (n >= 14.0) {
            double bound = std::pow(std::pow(c, 4.0) * std::pow(n - 13.0, 1.0 - 4.0 * al) / (4.0 * al - 1.0), 0.25);
            ok = ok && a[k].second.lower <= bound * (1.0 + 1e-9);
          }
        }
        ok = ok && e.limit.lower == 0.0 && e.limit.upper == 0.0 && e.verdict == Verdict::Compact;
      }
      ++approx.cases;
      if (!ok) approx.fail("case " + std::to_string(i));
    }

    for (const Battery* b : {&axioms, &ideal, &ri, &tails, &commute, &approx}) b->report(r);
  });
}

std::vector<CriterionResult> verify_all(std::uint64_t seed) {
  return {verify_holder_closed_form(seed),     verify_self_essential_norm(seed), verify_pitt(seed),
          verify_appendix_conjugate(seed),     verify_appendix_factorization(seed), verify_nakano(seed),
          verify_cesaro(seed),                 verify_rademacher(seed),            verify_marcinkiewicz_bracket(seed),
          verify_properties(seed)};
}

}  // namespace kothe
