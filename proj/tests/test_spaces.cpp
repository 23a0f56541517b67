#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "kothe/spaces.hpp"

using namespace kothe;
using SD = SpaceDescriptor;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, bool signed_values = true) {
  std::uniform_int_distribution<int> len(1, 32);
  std::uniform_real_distribution<double> u(signed_values ? -2.0 : 0.0, 2.0);
  std::vector<double> v(static_cast<std::size_t>(len(rng)));
  for (double& x : v) x = u(rng);
  return v;
}

std::vector<SD> all_spaces() {
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

Bracket nrmb(const SD& s, const std::vector<double>& v) {
  return norm(s, make_sequence(v), Truncation::exact(static_cast<long long>(v.size())));
}

double nrm(const SD& s, const std::vector<double>& v) { return nrmb(s, v).mid(); }

}  // namespace

TEST_CASE("norm examples") {
  CHECK(nrm(SD::lp(2.0), {3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(nrm(SD::lorentz(ConcaveWeight::power(1.0)), {1.0, 2.0}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(nrm(SD::marcinkiewicz(ConcaveWeight::power(1.0)), {1.0, 2.0}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(nrm(SD::cesaro(SD::linfty()), {1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nrm(SD::lp(1.0), {1.0, -2.0, 3.0}) == doctest::Approx(6.0));
  CHECK(nrm(SD::linfty(), {1.0, -7.0, 3.0}) == doctest::Approx(7.0));
  CHECK(nrm(SD::lp(kInf), {0.5, -1.5}) == doctest::Approx(1.5));
  CHECK(nrm(SD::tandori(SD::lp(1.0)), {0.0, 0.0, 2.0}) == doctest::Approx(6.0));
  // hardy of (1,1) is (1, 1, 2/3, 2/4, ...)
  Bracket h = norm(SD::cesaro(SD::lp(2.0)), make_sequence({1.0, 1.0}));
  CHECK(h.contains(std::sqrt(2.0 + 4.0 * (M_PI * M_PI / 6.0 - 1.25)), 1e-12));
  CHECK_THROWS_AS(norm(SD::cesaro(SD::lp(1.0)), make_sequence({1.0})), Error);
}

TEST_CASE("norms with infinite tails") {
  SequenceSpec inv({}, power_tail(1.0, 1.0));
  Bracket b = norm(SD::lp(2.0), inv, Truncation::certified(4096));
  CHECK(b.contains(M_PI / std::sqrt(6.0), 1e-12));
  CHECK(b.width() < 1e-3);
  CHECK_THROWS_AS(norm(SD::lp(1.0), inv, Truncation::certified(4096)), Error);
  try {
    norm(SD::lp(1.0), inv, Truncation::certified(4096));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInSpace);
  }
  Bracket s = norm(SD::linfty(), inv);
  CHECK(s.lower == doctest::Approx(1.0));
  SequenceSpec one({}, constant_tail(1.0));
  CHECK_THROWS_AS(norm(SD::c0(), one), Error);
  Bracket m = norm(SD::marcinkiewicz(ConcaveWeight::power(0.5)), SequenceSpec({}, power_tail(1.0, 0.5)));
  CHECK(m.lower <= 2.0 + 1e-12);
  CHECK(m.upper >= 1.0);
  CHECK(std::isfinite(m.upper));
}

TEST_CASE("kothe duals") {
  CHECK(kothe_dual(SD::lp(2.0)) == SD::lp(2.0));
  CHECK(kothe_dual(SD::lp(3.0)) == SD::lp(1.5));
  CHECK(kothe_dual(SD::lp(1.0)) == SD::linfty());
  CHECK(kothe_dual(SD::linfty()) == SD::lp(1.0));
  auto sq = ConcaveWeight::power(0.5);
  SD d = kothe_dual(SD::lorentz(sq));
  CHECK(d.kind() == SD::Kind::Marcinkiewicz);
  CHECK(d.phi()(16.0) == doctest::Approx(4.0));
  CHECK(d.phi()(9.0) == doctest::Approx(3.0));
  CHECK(kothe_dual(SD::cesaro(SD::lp(2.0))) == SD::tandori(SD::lp(2.0)));
  CHECK(kothe_dual(SD::tandori(SD::lp(3.0))) == SD::cesaro(SD::lp(1.5)));
  CHECK_THROWS_AS(kothe_dual(SD::symmetrized(SD::lp(2.0))), Error);
  SD w = kothe_dual(SD::weighted(SD::lp(2.0), SequenceSpec({}, power_log_tail(1.0, 0.5, 0.0))));
  CHECK(w.weight().at(100) == doctest::Approx(0.1));
}

TEST_CASE("fundamental functions") {
  CHECK(fundamental_function(SD::lp(2.0), 4) == doctest::Approx(2.0));
  for (long long n : {1, 5, 100}) CHECK(fundamental_function(SD::linfty(), n) == 1.0);
  SD X = SD::lp(3.0);
  SD Xd = kothe_dual(X);
  for (long long n = 1; n <= 32; ++n) {
    double prod = fundamental_function(X, n) * fundamental_function(Xd, n);
    CHECK(std::fabs(prod - static_cast<double>(n)) <= 1e-12 * n);
  }
  auto sq = ConcaveWeight::power(0.5);
  double prev = 0.0;
  for (long long n = 1; n <= 40; ++n) {
    double v = fundamental_function(SD::marcinkiewicz(sq), n);
    CHECK(v >= prev - 1e-15);
    CHECK(v == doctest::Approx(std::sqrt(static_cast<double>(n))));
    prev = v;
    // backward increments reproduce phi(n); the forward ones fall short
    CHECK(fundamental_function(SD::lorentz(sq, true), n) == doctest::Approx(std::sqrt(static_cast<double>(n))));
    CHECK(fundamental_function(SD::lorentz(sq), n) == doctest::Approx(std::sqrt(n + 1.0) - 1.0));
  }
}

TEST_CASE("order continuity") {
  CHECK(is_order_continuous(SD::lp(4.0)).status == Tri::Yes);
  CHECK(is_order_continuous(SD::linfty()).status == Tri::No);
  CHECK(is_order_continuous(SD::marcinkiewicz(ConcaveWeight::power(0.5))).status == Tri::No);
  CHECK(is_order_continuous(SD::marcinkiewicz(ConcaveWeight::power(1.0))).status == Tri::Yes);
  CHECK(is_order_continuous(SD::lorentz(ConcaveWeight::rational(2.0, 1.0))).status == Tri::No);
  CHECK(is_order_continuous(SD::lorentz(ConcaveWeight::power(0.5))).status == Tri::Yes);
  CHECK(is_order_continuous(SD::tandori(SD::linfty())).status == Tri::No);
  CHECK(is_order_continuous(SD::tandori(SD::lp(2.0))).status == Tri::Yes);
  CHECK(is_order_continuous(SD::orlicz(OrliczFunction::mtilde())).status == Tri::No);
  CHECK(is_order_continuous(SD::orlicz(OrliczFunction::power(2.0))).status == Tri::Yes);
  CHECK(is_order_continuous(SD::nakano(ExponentRule::formula(2.0, 1.0, 0.5))).status == Tri::Yes);
  CHECK(is_order_continuous(SD::cesaro(SD::linfty())).status == Tri::No);
  CHECK(SD::lp(2.0).has_fatou());
  CHECK_FALSE(SD::c0().has_fatou());
  CHECK(SD::lorentz(ConcaveWeight::power(0.5)).rearrangement_invariant());
  CHECK_FALSE(SD::cesaro(SD::lp(2.0)).rearrangement_invariant());
}

TEST_CASE("order continuous part membership") {
  SequenceSpec inv({}, power_tail(1.0, 1.0));
  OcReport a = oc_membership(SD::linfty(), inv);
  CHECK(a.verdict == Membership::Member);
  for (auto& [n, b] : a.tail_norms) CHECK(b.contains(1.0 / static_cast<double>(n), 1e-12));

  OcReport b = oc_membership(SD::linfty(), SequenceSpec({}, constant_tail(1.0)));
  CHECK(b.verdict == Membership::NonMember);
  for (auto& [n, t] : b.tail_norms) CHECK(t.lower == doctest::Approx(1.0));

  OcReport c = oc_membership(SD::marcinkiewicz(ConcaveWeight::power(0.5)), SequenceSpec({}, power_tail(1.0, 0.5)));
  CHECK(c.verdict == Membership::NonMember);
  CHECK(c.limit.lower == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(c.limit.upper == doctest::Approx(2.0).epsilon(1e-9));

  OcReport d = oc_membership(SD::lp(2.0), inv);
  CHECK(d.verdict == Membership::Member);

  OcReport e = oc_membership(SD::symmetrized(SD::weighted(SD::linfty(), ConcaveWeight::power(0.5).sequence())),
                             SequenceSpec({}, power_tail(1.0, 0.5)));
  CHECK(e.verdict == Membership::NonMember);
  CHECK(e.limit.lower == doctest::Approx(1.0));

  for (const OcReport* r : {&a, &b, &c, &d, &e})
    for (std::size_t i = 1; i < r->tail_norms.size(); ++i)
      CHECK(r->tail_norms[i].second.upper <= r->tail_norms[i - 1].second.upper);
}

TEST_CASE("norm axioms on every constructor") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> sc(-3.0, 3.0);
  for (const SD& S : all_spaces()) {
    CAPTURE(S.name());
    for (int trial = 0; trial < 200; ++trial) {
      auto x = random_vec(rng);
      auto y = random_vec(rng);
      double c = sc(rng);
      std::vector<double> cx = x;
      for (double& v : cx) v *= c;
      double nx = nrm(S, x);
      double ncx = nrm(S, cx);
      CHECK(std::fabs(ncx - std::fabs(c) * nx) <= 1e-12 * std::max(1.0, std::fabs(c) * nx) * 10.0);
      std::vector<double> s(std::max(x.size(), y.size()), 0.0);
      for (std::size_t i = 0; i < x.size(); ++i) s[i] += x[i];
      for (std::size_t i = 0; i < y.size(); ++i) s[i] += y[i];
      CHECK(nrmb(S, s).lower <= nrmb(S, x).upper + nrmb(S, y).upper + 1e-9);
    }
  }
}

TEST_CASE("ideal property") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const SD& S : all_spaces()) {
    CAPTURE(S.name());
    for (int trial = 0; trial < 200; ++trial) {
      auto x = random_vec(rng);
      std::vector<double> y = x;
      for (double& v : y) v *= u(rng);
      CHECK(nrm(S, y) <= nrm(S, x) + 1e-12);
    }
  }
}

TEST_CASE("rearrangement invariance") {
  std::mt19937_64 rng(5);
  auto sq = ConcaveWeight::power(0.5);
  std::vector<SD> ri = {SD::lp(1.5), SD::lp(4.0), SD::orlicz(OrliczFunction::mtilde()), SD::lorentz(sq),
                        SD::marcinkiewicz(sq), SD::symmetrized(SD::cesaro(SD::lp(2.0)))};
  for (const SD& S : ri) {
    CAPTURE(S.name());
    CHECK(S.rearrangement_invariant());
    for (int trial = 0; trial < 100; ++trial) {
      auto x = random_vec(rng);
      auto y = x;
      std::shuffle(y.begin(), y.end(), rng);
      CHECK(nrm(S, x) == nrm(S, y));
    }
  }
}

TEST_CASE("lorentz marcinkiewicz sandwich") {
  std::mt19937_64 rng(11);
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    auto phi = ConcaveWeight::power(1.0 / p);
    SD m = SD::marcinkiewicz(phi);
    SD l = SD::lorentz(phi, true);
    for (int trial = 0; trial < 200; ++trial) {
      auto x = random_vec(rng);
      double a = nrm(m, x), b = nrm(SD::lp(p), x), c = nrm(l, x);
      CHECK(a <= b + 1e-10);
      CHECK(b <= c + 1e-10);
    }
  }
}

TEST_CASE("marcinkiewicz against symmetrized weighted linfty") {
  std::mt19937_64 rng(3);
  for (double p : {1.5, 2.0, 4.0}) {
    auto phi = ConcaveWeight::power(1.0 / p);
    SD m = SD::marcinkiewicz(phi);
    SD s = SD::symmetrized(SD::weighted(SD::linfty(), phi.sequence(), "phi"));
    double K = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
      auto x = random_vec(rng, false);
      double a = nrm(s, x), b = nrm(m, x);
      CHECK(a <= b + 1e-12);
      K = std::max(K, b / a);
    }
    // the extremal x_n = n^{-1/p} stays within the constant too
    std::vector<double> ext;
    for (int n = 1; n <= 32; ++n) ext.push_back(std::pow(n, -1.0 / p));
    K = std::max(K, nrm(m, ext) / nrm(s, ext));
    CHECK(K <= p / (p - 1.0) + 0.05);
    CHECK(K >= 1.0);
  }
}

TEST_CASE("weights and reciprocals") {
  CHECK_THROWS_AS(SD::weighted(SD::lp(2.0), make_sequence({1.0, 0.0, 2.0}, constant_tail(1.0))), Error);
  CHECK_THROWS_AS(SD::weighted(SD::lp(2.0), make_sequence({1.0, 2.0})), Error);
  SequenceSpec w({2.0, 4.0}, power_log_tail(3.0, 0.5, 1.0));
  SequenceSpec r = reciprocal_weight(w);
  for (long long n : {1LL, 2LL, 3LL, 10LL, 1000LL}) CHECK(r.at(n) * w.at(n) == doctest::Approx(1.0));
  SequenceSpec per({}, periodic_tail({1.0, 2.0}));
  SequenceSpec rp = reciprocal_weight(per);
  CHECK(rp.at(1) == doctest::Approx(1.0));
  CHECK(rp.at(2) == doctest::Approx(0.5));
}

TEST_CASE("descriptor equality and names") {
  CHECK(SD::lp(2.0) == SD::lp(2.0));
  CHECK(SD::lp(2.0) != SD::lp(3.0));
  CHECK(SD::lp(kInf) == SD::linfty());
  CHECK(SD::cesaro(SD::lp(2.0)).name() == "ces(l^2)");
  CHECK(SD::tandori(SD::lp(4.0)).name() == "tandori(l^4)");
  CHECK(SD().kind() == SD::Kind::Unknown);
  CHECK_THROWS_AS(SD::lp(0.5), Error);
}
