#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kothe/essnorm.hpp"

using namespace kothe;
using SD = SpaceDescriptor;

namespace {

SequenceSpec pw(double a, double c = 1.0) { return SequenceSpec({}, power_tail(c, a)); }

void check_monotone(const EssNormReport& r) {
  for (std::size_t i = 1; i < r.tail_norms.size(); ++i)
    CHECK(r.tail_norms[i].second.upper <= r.tail_norms[i - 1].second.upper);
  CHECK(r.limit.lower >= 0.0);
  if (!r.tail_norms.empty()) CHECK(r.limit.upper <= r.tail_norms.back().second.upper);
}

}  // namespace

TEST_CASE("essential norm examples") {
  SequenceSpec a({}, affine_power_tail(1.0, 1.0, 1.0));
  REQUIRE(a.at(4) == doctest::Approx(1.25));
  EssNormReport r = essential_norm(SD::lp(2.0), SD::lp(2.0), a);
  CHECK(r.limit.lower == doctest::Approx(1.0));
  CHECK(r.limit.upper == doctest::Approx(1.0));
  CHECK(r.verdict == Verdict::NonCompact);
  CHECK(r.tail_norms.front().second.upper == doctest::Approx(2.0));
  CHECK(r.tail_norms[2].second.upper == doctest::Approx(1.25));
  check_monotone(r);

  EssNormReport f = essential_norm(SD::lp(4.0), SD::lp(2.0), make_sequence({1.0, 1.0}));
  CHECK(f.limit.upper == 0.0);
  CHECK(f.verdict == Verdict::Compact);

  EssNormReport h = essential_norm(SD::lp(4.0), SD::lp(2.0), pw(0.5));
  CHECK(h.limit.upper == 0.0);
  CHECK(h.verdict == Verdict::Compact);
  check_monotone(h);
  // ℓ_4 tail of n^{-1/2} at n is about (n - 1/2)^{-1/4}
  double t64 = h.tail_norms[6].second.mid();
  CHECK(t64 == doctest::Approx(std::pow(63.5, -0.25)).epsilon(0.01));

  CHECK_THROWS_AS(essential_norm(SD::lp(4.0), SD::lp(2.0), pw(0.25)), Error);
  try {
    essential_norm(SD::lp(4.0), SD::lp(2.0), pw(0.25));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotBounded);
  }
}

TEST_CASE("essential norm warnings and oracle fallback") {
  EssNormReport w = essential_norm(SD::lp(1.0), SD::linfty(), pw(1.0));
  CHECK_FALSE(w.warnings.empty());
  SD X = SD::cesaro(SD::lp(2.0));
  SD Y = SD::lorentz(ConcaveWeight::power(0.5));
  EssNormReport u = essential_norm(X, Y, make_sequence({1.0, 0.5}), {1, 2, 4, 8});
  CHECK(u.verdict == Verdict::Compact);
  CHECK(u.limit.upper == 0.0);
  OracleOptions o;
  o.restarts = 2;
  o.max_support = 16;
  EssNormReport v = essential_norm(X, Y, pw(0.5), {1, 2, 4}, o);
  CHECK(v.verdict == Verdict::Inconclusive);
  CHECK_FALSE(v.limit.certified());
  check_monotone(v);
}

TEST_CASE("essential norm on the order continuous part") {
  std::vector<long long> g = default_n_grid();
  auto sq = ConcaveWeight::power(0.5);
  SD D = SD::symmetrized(SD::weighted(SD::lp(2.0), sq.reciprocal()));
  EssNormReport m = essential_norm(SD::marcinkiewicz(sq), SD::lp(2.0), pw(0.25));
  CHECK(m.verdict == Verdict::Compact);
  // scaled by the equivalence constants (1, 2)
  EssNormReport c = essential_norm(SD::marcinkiewicz(sq), SD::lp(2.0), make_sequence({1.0, 1.0}), {1});
  double s = norm(D, make_sequence({1.0, 1.0})).mid();
  CHECK(c.tail_norms[0].second.lower == doctest::Approx(s));
  CHECK(c.tail_norms[0].second.upper == doctest::Approx(2.0 * s));
}

TEST_CASE("self essential norm") {
  EssNormReport a = essential_norm_self(SD::lp(2.0), SequenceSpec({}, periodic_tail({1.0, -1.0})));
  CHECK(a.limit.lower == 1.0);
  CHECK(a.limit.upper == 1.0);
  CHECK(a.verdict == Verdict::NonCompact);

  EssNormReport b = essential_norm_self(SD::lp(2.0), SequenceSpec({}, affine_power_tail(2.0, -1.0, 1.0)));
  CHECK(b.limit.lower == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.limit.upper == doctest::Approx(2.0).epsilon(1e-12));

  EssNormReport c = essential_norm_self(SD::lp(2.0), pw(0.5));
  CHECK(c.limit.upper == 0.0);
  CHECK(c.verdict == Verdict::Compact);

  EssNormReport d = essential_norm_self(SD::lp(2.0), SequenceSpec({}, periodic_tail({0.5, 1.5})));
  CHECK(std::fabs(d.limit.lower - 1.5) <= 1e-12);
  CHECK(std::fabs(d.limit.upper - 1.5) <= 1e-12);
  check_monotone(d);

  CHECK_FALSE(essential_norm_self(SD::linfty(), pw(1.0)).warnings.empty());
  CHECK_THROWS_AS(essential_norm_self(SD::lp(2.0), SequenceSpec({}, power_log_tail(1.0, 0.5, 0.0))), Error);
}

TEST_CASE("self and pair essential norms agree") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0), a(0.0, 1.5), c(0.1, 3.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> pre(rng() % 6);
    for (double& v : pre) v = u(rng);
    double alpha = a(rng);
    TailPtr tail = (t % 5 == 0) ? constant_tail(c(rng)) : power_tail(c(rng), alpha + 0.05);
    SequenceSpec lam(pre, tail);
    for (double p : {2.0, 3.0}) {
      EssNormReport s = essential_norm_self(SD::lp(p), lam);
      EssNormReport e = essential_norm(SD::lp(p), SD::lp(p), lam);
      CHECK(s.verdict == e.verdict);
      CHECK(std::fabs(s.limit.upper - e.limit.upper) <= 1e-9);
      CHECK(std::fabs(s.limit.lower - e.limit.lower) <= 1e-9);
    }
  }
}

TEST_CASE("essential norm is at most the multiplier norm") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.3, 2.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> pre(1 + rng() % 5);
    for (double& v : pre) v = u(rng);
    SequenceSpec lam(pre, power_tail(0.5, a(rng)));
    EssNormReport e = essential_norm(SD::lp(4.0), SD::lp(2.0), lam);
    Bracket full = norm(SD::lp(4.0), lam);
    CHECK(e.limit.upper <= full.upper + 1e-9);
    check_monotone(e);
    Bracket d = distance_to_oc_part(multiplier_space(SD::lp(4.0), SD::lp(2.0)).descriptor, lam);
    CHECK(std::fabs(d.upper - e.limit.upper) <= 1e-9);
  }
}

TEST_CASE("distance to the order continuous part") {
  CHECK(distance_to_oc_part(SD::linfty(), SequenceSpec({}, constant_tail(1.0))).lower == 1.0);
  Bracket b = distance_to_oc_part(SD::linfty(), SequenceSpec({}, affine_power_tail(1.0, 1.0, 1.0)));
  CHECK(b.lower == doctest::Approx(1.0));
  CHECK(b.upper == doctest::Approx(1.0));
  CHECK(distance_to_oc_part(SD::linfty(), pw(1.0)).upper == 0.0);
  CHECK(distance_to_oc_part(SD::lp(2.0), pw(1.0)).upper == 0.0);
}

TEST_CASE("approximation numbers") {
  auto a = approximation_numbers(make_sequence({3.0, 2.0, 1.0}), 4.0, 2.0, {1, 2, 3, 4, 100});
  REQUIRE(a.size() == 5);
  CHECK(a[0].second.mid() == doctest::Approx(std::pow(98.0, 0.25)).epsilon(1e-14));
  CHECK(a[1].second.mid() == doctest::Approx(std::pow(17.0, 0.25)).epsilon(1e-14));
  CHECK(a[2].second.mid() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a[3].second.mid() == 0.0);
  CHECK(a[4].second.mid() == 0.0);
  auto b = approximation_numbers(make_sequence({1.0, 3.0, 2.0}), 4.0, 2.0, {1, 2});
  CHECK(b[1].second.mid() == doctest::Approx(std::pow(17.0, 0.25)).epsilon(1e-14));
  auto c = approximation_numbers(SequenceSpec({}, constant_tail(1.0)), 4.0, 2.0, {1, 8});
  CHECK(std::isinf(c[0].second.lower));
  CHECK(std::isinf(c[1].second.lower));
  CHECK_THROWS_AS(approximation_numbers(make_sequence({1.0}), 2.0, 4.0, {1}), Error);
  try {
    approximation_numbers(make_sequence({1.0}), 2.0, 2.0, {1});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ExponentOrder);
  }
}

TEST_CASE("approximation numbers converge to the essential norm") {
  for (double al : {0.3, 0.5, 1.0}) {
    SequenceSpec lam({2.0, 0.1}, power_tail(1.0, al));
    auto a = approximation_numbers(lam, 4.0, 2.0, default_n_grid());
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i].second.upper <= a[i - 1].second.upper);
    EssNormReport e = essential_norm(SD::lp(4.0), SD::lp(2.0), lam);
    CHECK(e.limit.upper == 0.0);
    CHECK(a.back().second.upper <= 3.0 * std::pow(static_cast<double>(a.back().first), 0.25 - al));
  }
  SequenceSpec lam({}, constant_tail(0.5));
  auto a = approximation_numbers(lam, kInf, 2.0, {1, 4});
  CHECK(std::isinf(a[1].second.lower));
}

TEST_CASE("cesaro multipliers") {
  MultiplierResult a = cesaro_multiplier_space(SD::lp(4.0), SD::lp(2.0));
  CHECK(a.descriptor == SD::tandori(SD::lp(4.0)));
  CHECK(a.equivalence);
  MultiplierResult b = cesaro_multiplier_space(SD::lp(2.0), SD::lp(4.0));
  REQUIRE(b.descriptor.kind() == SD::Kind::Weighted);
  CHECK(b.descriptor.base() == SD::linfty());
  CHECK(b.descriptor.weight().at(16) == doctest::Approx(0.5));
  CHECK(b.rule == "M(ces_p, ces_q) = l^inf(n^(1/q - 1/p))");
  MultiplierResult m = cesaro_multiplier_space(SD::orlicz(OrliczFunction::mtilde()), SD::lp(2.0));
  CHECK_FALSE(m.known());
  CHECK_FALSE(m.warning.empty());
  MultiplierResult w = cesaro_multiplier_space(SD::cesaro(SD::lp(2.0)), SD::lp(2.0));
  CHECK_FALSE(w.known());

  SD c2 = SD::cesaro(SD::lp(2.0)), c4 = SD::cesaro(SD::lp(4.0));
  EssNormReport k = essential_norm(c2, c4, SequenceSpec({}, power_log_tail(1.0, 0.25, -1.0)));
  CHECK(k.verdict == Verdict::Compact);
  EssNormReport n = essential_norm(c2, c4, SequenceSpec({}, power_log_tail(1.0, 0.25, 0.0)));
  CHECK(n.verdict == Verdict::NonCompact);
}

TEST_CASE("fourier multiplier essential norm") {
  EssNormReport a = fourier_multiplier_essnorm(SD::lp(1.0), pw(1.0));
  CHECK(a.verdict == Verdict::Compact);
  CHECK(a.limit.upper == 0.0);
  EssNormReport b = fourier_multiplier_essnorm(SD::lp(4.0), SequenceSpec({}, constant_tail(1.0)));
  CHECK(b.verdict == Verdict::NonCompact);
  CHECK(b.limit.lower == 1.0);
  EssNormReport c = fourier_multiplier_essnorm(SD::lp(1.0), make_sequence({1.0, 2.0}));
  CHECK(c.limit.upper == 0.0);
  CHECK_FALSE(fourier_multiplier_essnorm(SD::linfty(), pw(1.0)).warnings.empty());
}
