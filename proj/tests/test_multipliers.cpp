#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kothe/lorentz.hpp"
#include "kothe/multipliers.hpp"

using namespace kothe;
using SD = SpaceDescriptor;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int max_len, bool positive = false) {
  std::uniform_real_distribution<double> u(positive ? 0.01 : -1.0, 1.0);
  std::vector<double> v(1 + rng() % max_len);
  for (double& x : v) x = u(rng);
  return v;
}

double exact(const SD& S, const std::vector<double>& x) { return norm(S, make_sequence(x)).mid(); }

double ratio_at(const SD& X, const SD& Y, const SequenceSpec& lam, const std::vector<double>& x) {
  std::vector<double> lx(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) lx[k] = lam.at(static_cast<long long>(k) + 1) * x[k];
  return norm(Y, make_sequence(lx)).lower / norm(X, make_sequence(x)).upper;
}

}  // namespace

TEST_CASE("rule table") {
  MultiplierResult a = multiplier_space(SD::lp(4.0), SD::lp(2.0));
  CHECK(a.descriptor == SD::lp(4.0));
  CHECK(a.rule == "M(l^p,l^q) = l^r, 1/r = 1/q - 1/p");
  CHECK_FALSE(a.equivalence);
  CHECK(multiplier_space(SD::lp(2.0), SD::lp(4.0)).descriptor == SD::linfty());
  SD L = SD::lorentz(ConcaveWeight::power(0.5));
  MultiplierResult s = multiplier_space(L, L);
  CHECK(s.descriptor == SD::linfty());
  CHECK(s.rule == "M(X,X) = l^inf");
  CHECK(multiplier_space(SD::linfty(), SD::lp(3.0)).descriptor == SD::lp(3.0));
  CHECK(multiplier_space(SD::lp(3.0), SD::c0()).descriptor == SD::linfty());
  CHECK(multiplier_space(SD::linfty(), SD::c0()).descriptor == SD::c0());
  CHECK(multiplier_space(SD::lp(6.0), SD::lp(3.0)).descriptor == SD::lp(6.0));

  MultiplierResult e = multiplier_space(SD::lp(2.0), SD::marcinkiewicz(ConcaveWeight::power(0.5)));
  CHECK(e.descriptor == SD::linfty());
  CHECK(e.rule == "X embeds in Y: M(X,Y) = l^inf");

  MultiplierResult o = multiplier_space(SD::orlicz(OrliczFunction::mtilde()), SD::lp(2.0));
  CHECK(o.descriptor.kind() == SD::Kind::Orlicz);
  CHECK(o.descriptor.orlicz_function().kind() == OrliczFunction::Kind::MtildeConjugate);
  CHECK(o.equivalence);

  MultiplierResult n = multiplier_space(SD::nakano(ExponentRule::formula(4.0, 1.0, 1.0)), SD::lp(2.0));
  CHECK(n.descriptor.kind() == SD::Kind::Nakano);
  CHECK(n.descriptor.exponents().at(1) == doctest::Approx(1.0 / (0.5 - 0.2)));
  MultiplierResult nn = multiplier_space(SD::lp(2.0), SD::nakano(ExponentRule::formula(3.0, 1.0, 1.0)));
  CHECK(nn.descriptor == SD::linfty());

  MultiplierResult m = multiplier_space(SD::marcinkiewicz(ConcaveWeight::power(0.5)), SD::lp(2.0));
  CHECK(m.descriptor.kind() == SD::Kind::Symmetrized);
  REQUIRE(m.constants);
  CHECK(m.constants->first == 1.0);
  CHECK(m.constants->second == 2.0);

  MultiplierResult t = multiplier_space(SD::lp(2.0), SD::lorentz(ConcaveWeight::power(0.5)));
  CHECK(t.descriptor.kind() == SD::Kind::Symmetrized);
  CHECK(t.equivalence);

  MultiplierResult c = multiplier_space(SD::cesaro(SD::lp(4.0)), SD::cesaro(SD::lp(2.0)));
  CHECK(c.descriptor == SD::tandori(SD::lp(4.0)));

  CHECK_FALSE(multiplier_space(SD::cesaro(SD::lp(2.0)), SD::lorentz(ConcaveWeight::power(0.5))).known());
  CHECK_FALSE(multiplier_space(SD::unknown("x"), SD::lp(2.0)).known());
}

TEST_CASE("embedding table") {
  CHECK(embeds(SD::lp(2.0), SD::lp(4.0)) == Tri::Yes);
  CHECK(embeds(SD::lp(4.0), SD::lp(2.0)) == Tri::No);
  CHECK(embeds(SD::lp(4.0), SD::c0()) == Tri::Yes);
  CHECK(embeds(SD::c0(), SD::linfty()) == Tri::Yes);
  CHECK(embeds(SD::linfty(), SD::c0()) == Tri::No);
  CHECK(embeds(SD::lp(3.0), SD::marcinkiewicz(ConcaveWeight::power(0.5))) == Tri::No);
  CHECK(embeds(SD::lorentz(ConcaveWeight::power(0.5)), SD::lp(2.0)) == Tri::Yes);
  CHECK(embeds(SD::lorentz(ConcaveWeight::power(0.5)), SD::lp(1.5)) == Tri::No);
  CHECK(embeds(SD::lp(1.0), SD::lorentz(ConcaveWeight::power(0.5))) == Tri::Yes);
  CHECK(embeds(SD::cesaro(SD::lp(2.0)), SD::lorentz(ConcaveWeight::power(0.5))) == Tri::Unknown);
}

TEST_CASE("oracle examples") {
  auto T = Truncation::exact(16);
  OracleResult a = multiplier_norm_oracle(SD::lp(2.0), SD::lp(2.0), make_sequence({1.0}), T);
  CHECK(a.value.lower == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.value.upper == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.closed_form);

  OracleResult b = multiplier_norm_oracle(SD::lp(4.0), SD::lp(2.0), make_sequence({1.0, 1.0}), T);
  CHECK(b.value.lower == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
  REQUIRE(b.witness.size() == 2);
  CHECK(b.witness[0] == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));
  CHECK(b.witness[1] == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));

  OracleOptions o;
  o.force_search = true;
  OracleResult bs = multiplier_norm_oracle(SD::lp(4.0), SD::lp(2.0), make_sequence({1.0, 1.0}), T, o);
  CHECK(bs.search_lower == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-8));

  SD L = SD::lorentz(ConcaveWeight::power(0.5));
  OracleResult c = multiplier_norm_oracle(L, L, make_sequence({3.0, 1.0, 2.0}), T, o);
  CHECK(c.value.lower == 3.0);
  CHECK(c.value.upper == 3.0);
  CHECK(c.search_lower == doctest::Approx(3.0).epsilon(1e-12));

  OracleResult z = multiplier_norm_oracle(SD::lp(4.0), SD::lp(2.0), make_sequence({0.0, 0.0}), T);
  CHECK(z.value.upper == 0.0);

  // infinite support: sup |λ| certified from the tail
  OracleResult inf = multiplier_norm_oracle(SD::lp(2.0), SD::lp(4.0), SequenceSpec({}, power_tail(1.0, 0.5)), T);
  CHECK(inf.value.upper == doctest::Approx(1.0));
  CHECK(inf.value.certified());
}

TEST_CASE("oracle agrees with the holder closed form") {
  std::mt19937_64 rng(101);
  for (auto [p, q] : {std::pair{4.0, 2.0}, {3.0, 1.5}, {8.0, 2.0}, {kInf, 2.0}}) {
    for (int t = 0; t < 100; ++t) {
      std::vector<double> l = random_vec(rng, 12);
      SequenceSpec lam = make_sequence(l);
      double r = std::isinf(p) ? q : 1.0 / (1.0 / q - 1.0 / p);
      double ref = exact(SD::lp(r), l);
      OracleResult o = multiplier_norm_oracle(SD::lp(p), SD::lp(q), lam, Truncation::exact(12));
      CAPTURE(p);
      CHECK(std::fabs(o.value.lower - ref) <= 1e-12 * ref);
      CHECK(std::fabs(o.value.upper - ref) <= 1e-12 * ref);
    }
  }
}

TEST_CASE("oracle search stays below the closed form and approaches it") {
  std::mt19937_64 rng(7);
  OracleOptions o;
  o.force_search = true;
  o.restarts = 8;
  for (int t = 0; t < 30; ++t) {
    std::vector<double> l = random_vec(rng, 6);
    OracleResult r = multiplier_norm_oracle(SD::lp(4.0), SD::lp(2.0), make_sequence(l), Truncation::exact(8), o);
    CHECK(r.search_lower <= r.value.upper * (1.0 + 1e-12));
    CHECK(r.search_lower >= r.value.upper * (1.0 - 1e-6));
  }
}

TEST_CASE("oracle lower bounds are feasible") {
  std::mt19937_64 rng(11);
  auto sq = ConcaveWeight::power(0.5);
  std::vector<std::pair<SD, SD>> pairs = {
      {SD::marcinkiewicz(sq), SD::lp(2.0)},
      {SD::lp(2.0), SD::lorentz(sq)},
      {SD::lorentz(sq, true), SD::lp(3.0)},
      {SD::tandori(SD::lp(2.0)), SD::lp(1.0)},
      {SD::symmetrized(SD::weighted(SD::linfty(), sq.sequence())), SD::lp(2.0)},
      {SD::orlicz(OrliczFunction::mtilde()), SD::lp(2.0)},
  };
  OracleOptions o;
  o.restarts = 4;
  for (auto& [X, Y] : pairs) {
    for (int t = 0; t < 6; ++t) {
      SequenceSpec lam = make_sequence(random_vec(rng, 5));
      OracleResult r = multiplier_norm_oracle(X, Y, lam, Truncation::exact(8), o);
      CAPTURE(X.name());
      CHECK_FALSE(r.value.certified());
      double v = ratio_at(X, Y, lam, r.witness);
      CHECK(std::fabs(v - r.value.lower) <= 1e-12 * std::max(1.0, v));
      CHECK(r.value.upper == doctest::Approx(r.value.lower * (1.0 + o.slack)));
    }
  }
}

TEST_CASE("holder inequality") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> e(1.0, 8.0);
  for (int t = 0; t < 1000; ++t) {
    double p = e(rng), r = e(rng);
    double q = 1.0 / (1.0 / p + 1.0 / r);
    if (q < 1.0) continue;
    std::vector<double> x = random_vec(rng, 10), y(x.size());
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : y) v = u(rng);
    std::vector<double> xy(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) xy[k] = x[k] * y[k];
    CHECK(exact(SD::lp(q), xy) <= exact(SD::lp(p), x) * exact(SD::lp(r), y) + 1e-12);
  }
}

TEST_CASE("multiplier norms are monotone under embeddings") {
  std::mt19937_64 rng(13);
  SD Z1 = SD::lorentz(ConcaveWeight::power(0.5));
  SD Z2 = SD::lp(3.0);
  REQUIRE(embeds(SD::lp(2.0), SD::lp(4.0)) == Tri::Yes);
  OracleOptions o;
  o.restarts = 4;
  for (int t = 0; t < 20; ++t) {
    SequenceSpec lam = make_sequence(random_vec(rng, 5));
    for (const SD& Z : {Z1, Z2}) {
      double big = multiplier_norm_oracle(SD::lp(4.0), Z, lam, Truncation::exact(8), o).value.lower;
      double small = multiplier_norm_oracle(SD::lp(2.0), Z, lam, Truncation::exact(8), o).value.lower;
      CHECK(big >= small - 1e-9);
    }
  }
}

TEST_CASE("product space") {
  CHECK(*product_space(SD::lp(4.0), SD::lp(4.0)) == SD::lp(2.0));
  CHECK(*product_space(SD::lp(2.0), SD::linfty()) == SD::lp(2.0));
  SD L = SD::lorentz(ConcaveWeight::power(0.5));
  CHECK(*product_space(L, SD::linfty()) == L);
  CHECK(*product_space(L, kothe_dual(L)) == SD::lp(1.0));
  CHECK_FALSE(product_space(SD::lp(1.5), SD::lp(1.5)));
  CHECK_FALSE(product_space(L, SD::lp(2.0)));

  auto T = Truncation::exact(16);
  ProductResult a = product_space_norm_oracle(SD::lp(4.0), SD::lp(4.0), make_sequence({1.0, 1.0}), T);
  CHECK(a.value.lower == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(a.closed_form);
  OracleOptions o;
  o.force_search = true;
  ProductResult as = product_space_norm_oracle(SD::lp(4.0), SD::lp(4.0), make_sequence({1.0, 1.0}), T, o);
  CHECK(std::fabs(as.search_upper - std::sqrt(2.0)) <= 1e-6);

  SD Lb = SD::lorentz(ConcaveWeight::power(0.5), true);
  for (const SD& E : {SD::lp(3.0), Lb, SD::marcinkiewicz(ConcaveWeight::power(0.5))}) {
    ProductResult e1 = product_space_norm_oracle(E, SD::lp(2.0), make_sequence({1.0}), T);
    CHECK(e1.value.lower == doctest::Approx(1.0));
    CHECK(e1.value.upper == doctest::Approx(1.0));
  }
  ProductResult z = product_space_norm_oracle(SD::lp(2.0), SD::lp(2.0), make_sequence({1.0, 2.0, 2.0}), T);
  CHECK(z.value.lower == doctest::Approx(5.0).epsilon(1e-14));
  CHECK_THROWS_AS(product_space_norm_oracle(SD::lp(2.0), SD::lp(2.0), SequenceSpec({}, power_tail(1.0, 1.0)), T), Error);
}

TEST_CASE("lozanovskii factorization") {
  std::mt19937_64 rng(17);
  SD X = SD::lp(2.0);
  SD Xd = kothe_dual(X);
  OracleOptions o;
  o.force_search = true;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> f = random_vec(rng, 8, true);
    double one = exact(SD::lp(1.0), f);
    ProductResult r = product_space_norm_oracle(X, Xd, make_sequence(f), Truncation::exact(8), o);
    CHECK(r.value.lower >= one * (1.0 - 1e-12));
    CHECK(r.value.upper <= one * (1.0 + 1e-4));
    CHECK(r.search_upper >= one * (1.0 - 1e-12));
    CHECK(r.search_upper <= one * (1.0 + 1e-4));
  }
  SD L = SD::lorentz(ConcaveWeight::power(0.5), true);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> f = random_vec(rng, 5, true);
    double one = exact(SD::lp(1.0), f);
    ProductResult r = product_space_norm_oracle(L, kothe_dual(L), make_sequence(f), Truncation::exact(8));
    CHECK(r.value.lower >= one * (1.0 - 1e-12));
    CHECK(r.value.upper >= one * (1.0 - 1e-12));
    CHECK(r.value.upper <= one * (1.0 + 1e-3));
  }
}

TEST_CASE("factorization checks") {
  FactorizationReport a = factorization_check(SD::lp(4.0), SD::lp(2.0));
  CHECK(a.verdict == Factorization::Holds);
  CHECK(a.route == "orlicz");
  CHECK(a.spread <= 1e-6);
  FactorizationReport b = factorization_check(SD::lp(2.0), SD::marcinkiewicz(ConcaveWeight::power(0.5)));
  CHECK(b.verdict == Factorization::Fails);
  CHECK(b.route == "generic");
  FactorizationReport c = factorization_check(SD::orlicz(OrliczFunction::mtilde()), SD::lp(2.0));
  CHECK(c.verdict == Factorization::Fails);
  CHECK(c.decay >= 10.0);
  FactorizationReport d = factorization_check(SD::lp(2.0), SD::lp(4.0));
  CHECK(d.route == "generic");
  CHECK(d.verdict == Factorization::Fails);
  FactorizationReport e = factorization_check(SD::lp(3.0), SD::lp(3.0));
  CHECK(e.verdict == Factorization::Holds);
  FactorizationOptions shallow;
  shallow.decades = 6.0;
  FactorizationReport s = factorization_check(SD::orlicz(OrliczFunction::mtilde()), SD::lp(2.0), {}, shallow);
  CHECK(s.verdict != Factorization::Fails);
  CHECK(factorization_check(SD::cesaro(SD::lp(2.0)), SD::lorentz(ConcaveWeight::power(0.5))).verdict ==
        Factorization::Inconclusive);
}

TEST_CASE("pitt predicate") {
  CHECK(pitt_predicate(SD::lp(4.0), SD::lp(2.0)).verdict == Pitt::AllCompact);
  CHECK(pitt_predicate(SD::lp(2.0), SD::lp(4.0)).verdict == Pitt::SomeNonCompact);
  CHECK(pitt_predicate(SD::orlicz(OrliczFunction::mtilde()), SD::lp(2.0)).verdict == Pitt::SomeNonCompact);
  CHECK(pitt_predicate(SD::marcinkiewicz(ConcaveWeight::power(0.5)), SD::lp(2.0)).verdict == Pitt::AllCompact);
  CHECK(pitt_predicate(SD::unknown("?"), SD::lp(2.0)).verdict == Pitt::Unknown);
}

TEST_CASE("marcinkiewicz bracket") {
  std::mt19937_64 rng(23);
  auto sq = ConcaveWeight::power(0.5);
  SD X = SD::symmetrized(SD::weighted(SD::linfty(), sq.sequence(), "phi"));
  SD D = multiplier_from_marcinkiewicz(sq, SD::lp(2.0));
  for (int t = 0; t < 20; ++t) {
    std::vector<double> l = random_vec(rng, 8);
    double s = exact(D, l);
    OracleResult o = multiplier_norm_oracle(X, SD::lp(2.0), make_sequence(l), Truncation::exact(8));
    CHECK(o.value.lower >= s * (1.0 - 1e-12));
    CHECK(o.value.lower <= 2.0 * s + 1e-6);
  }
}
