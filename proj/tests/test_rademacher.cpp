#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kothe/rademacher.hpp"

using namespace kothe;

TEST_CASE("standard rademacher values") {
  CHECK(rademacher(1, 0.25) == 1);
  CHECK(rademacher(1, 0.75) == -1);
  CHECK(rademacher(2, 0.375) == -1);
  CHECK(rademacher(1, 0.5) == 0);
  CHECK(rademacher(3, 0.125) == 0);
  CHECK(rademacher(50, 0.3) != 0);
  CHECK_THROWS_AS(rademacher(0, 0.5), Error);
  CHECK_THROWS_AS(rademacher(51, 0.5), Error);
  CHECK_THROWS_AS(rademacher(1, 1.0), Error);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    double x = u(rng);
    if (x == 0.0) continue;
    for (int n = 1; n <= 20; ++n) {
      double s = std::sin(std::ldexp(M_PI * x, n));
      // away from breakpoints the sign of the sine is reliable
      if (std::fabs(s) > 1e-6) CHECK(rademacher(n, x) == (s > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("partitions and glued systems") {
  MeasurePartition one = MeasurePartition::unit();
  for (double w : {0.1, 0.3, 0.6, 0.9})
    for (int n = 1; n <= 5; ++n) CHECK(glued_rademacher(one, n, w) == rademacher(n, w));
  MeasurePartition two({{0.0, 1.0}, {1.0, 2.0}});
  CHECK(glued_rademacher(two, 1, 1.25) == 1);
  CHECK(glued_rademacher(two, 1, 1.75) == -1);
  CHECK(two.measure() == 2.0);
  CHECK_THROWS_AS(glued_rademacher(two, 1, 2.5), Error);
  try {
    glued_rademacher(two, 1, -1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutsideSupport);
  }
  CHECK_THROWS_AS(MeasurePartition({{0.0, 1.0}, {0.5, 1.5}}), Error);
  CHECK_THROWS_AS(MeasurePartition({{0.0, 2.0}}), Error);
  CHECK_THROWS_AS(MeasurePartition(std::vector<std::pair<double, double>>{}), Error);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  double s = 0.0;
  int N = 1 << 12;
  for (int i = 0; i < N; ++i) {
    double w = u(rng);
    if (w == 0.0) w = 1.0;
    s += glued_rademacher(two, 3, w);
  }
  CHECK(std::fabs(s / N) <= 0.05);
}

TEST_CASE("rademacher integrals") {
  for (int n = 1; n <= 12; ++n) CHECK(rademacher_integral({n}) == 0.0);
  for (int n = 1; n <= 12; ++n)
    for (int m = 1; m <= 12; ++m) CHECK(std::fabs(rademacher_integral({n, m}) - (n == m ? 1.0 : 0.0)) <= 1e-12);
  CHECK(rademacher_integral({1, 2, 3}) == 0.0);
  CHECK(rademacher_integral({}) == 1.0);
}

TEST_CASE("lemma r demonstrations") {
  MeasurePartition one = MeasurePartition::unit();
  LemmaReport a = lemma_r_demo(Integrand::indicator(0.0, 1.0), one, 12);
  for (auto& [n, v] : a.values) CHECK(v == 0.0);
  LemmaReport b = lemma_r_demo(Integrand::polynomial({0.0, 1.0}), one, 12);
  for (auto& [n, v] : b.values) CHECK(std::fabs(v + std::ldexp(1.0, -(n + 1))) <= 1e-14);
  for (std::size_t i = 1; i < b.values.size(); ++i)
    CHECK(std::fabs(b.values[i].second) <= std::fabs(b.values[i - 1].second) / 2.0 + 1e-12);
  CHECK(b.trailing_max == doctest::Approx(std::ldexp(1.0, -10)));
  MeasurePartition two({{0.0, 1.0}, {1.0, 2.0}});
  LemmaReport c = lemma_r_demo(Integrand::polynomial({0.0, 1.0}), two, 12);
  for (auto& [n, v] : c.values) CHECK(std::fabs(v + std::ldexp(1.0, -n)) <= 1e-14);
  CHECK(c.trailing_max == doctest::Approx(std::ldexp(1.0, -9)));
  // a piece shorter than one and a quadratic on part of it
  MeasurePartition half({{0.0, 0.5}});
  LemmaReport d = lemma_r_demo(Integrand::piecewise({{{0.0, 0.0, 1.0}, 0.1, 0.4}}), half, 16);
  CHECK(d.trailing_max < 1e-4);
  CHECK(std::fabs(d.values.back().second) < std::fabs(d.values.front().second));
  CHECK_THROWS_AS(lemma_r_demo(Integrand::custom("exp", [](double x) { return std::exp(x); }), one, 4), Error);
  try {
    glued_integral(Integrand::custom("exp", [](double x) { return std::exp(x); }), one, 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedIntegrand);
  }
}

TEST_CASE("exact integration agrees with midpoint sums") {
  Integrand f = Integrand::piecewise({{{1.0, -2.0, 3.0}, 0.0, 0.7}, {{0.5}, 0.2, 1.0}});
  MeasurePartition one = MeasurePartition::unit();
  for (int n : {1, 3, 6}) {
    double exact = glued_integral(f, one, n);
    int M = 1 << 16;
    double s = 0.0;
    for (int i = 0; i < M; ++i) {
      double t = (i + 0.5) / M;
      s += f(t) * rademacher(n, t);
    }
    CHECK(std::fabs(exact - s / M) <= 1e-4);
  }
}
