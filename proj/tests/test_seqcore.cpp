#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "kothe/seqcore.hpp"

using namespace kothe;

namespace {

std::vector<double> values(const SequenceSpec& s, long long n) { return s.head(n); }

void check_eq(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-15) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol));
}

const Truncation T8 = Truncation::exact(8);

}  // namespace

TEST_CASE("rearrangement examples") {
  check_eq(values(decreasing_rearrangement(make_sequence({3, 1, 2}), T8), 3), {3, 2, 1});
  check_eq(values(decreasing_rearrangement(make_sequence({0, 0, 0}), T8), 3), {0, 0, 0});
  check_eq(values(decreasing_rearrangement(make_sequence({1, 1, 2}), T8), 3), {2, 1, 1});
  check_eq(values(decreasing_rearrangement(make_sequence({-4, 1, 2}), T8), 4), {4, 2, 1, 0});
}

TEST_CASE("rearrangement merges a power tail") {
  // prefix 0.3 sits between tail values 1/3 and 1/4
  SequenceSpec x({0.3, 5.0}, power_tail(1.0, 1.0));
  auto r = decreasing_rearrangement(x, Truncation::certified(4));
  check_eq(values(r, 8), {5.0, 1.0 / 3, 0.3, 0.25, 0.2, 1.0 / 6, 1.0 / 7, 0.125});
  CHECK(r.tail->nonincreasing_from() == 1);
}

TEST_CASE("rearrangement of a periodic tail is its maximum") {
  SequenceSpec x({2.0, 0.1}, periodic_tail({0.5, -1.5}));
  auto r = decreasing_rearrangement(x, Truncation::certified(3));
  check_eq(values(r, 5), {2.0, 1.5, 1.5, 1.5, 1.5});
}

TEST_CASE("rearrangement rejects non-monotone tails") {
  SequenceSpec x({}, pattern_tail(0.0, {1.0, 2.0}, 0.0, -1.0, 0.0));
  CHECK_THROWS_AS(decreasing_rearrangement(x, Truncation::certified(4)), Error);
  try {
    decreasing_rearrangement(x, Truncation::certified(4));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotoneTail);
  }
}

TEST_CASE("rearrangement is permutation invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 64;
    std::vector<double> v(n);
    for (auto& a : v) a = U(rng);
    auto w = v;
    std::shuffle(w.begin(), w.end(), rng);
    auto a = decreasing_rearrangement(make_sequence(v), T8).prefix;
    auto b = decreasing_rearrangement(make_sequence(w), T8).prefix;
    CHECK(a == b);
    auto aa = decreasing_rearrangement(make_sequence(a), T8).prefix;
    CHECK(aa == a);
  }
}

TEST_CASE("majorant examples") {
  check_eq(values(decreasing_majorant(make_sequence({1, 3, 2}), T8), 3), {3, 3, 2});
  check_eq(values(decreasing_majorant(make_sequence({3, 2, 1}), T8), 3), {3, 2, 1});
  auto x = make_sequence({5, 1, 4, 2});
  auto a = tail_restrict(decreasing_majorant(tail_restrict(x, 3), T8), 3);
  auto b = tail_restrict(decreasing_majorant(x, T8), 3);
  check_eq(values(a, 4), {0, 0, 4, 2});
  check_eq(values(b, 4), {0, 0, 4, 2});
}

TEST_CASE("majorant properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 40;
    std::vector<double> v(n);
    for (auto& a : v) a = U(rng);
    auto x = make_sequence(v);
    auto m = decreasing_majorant(x, T8);
    for (long long i = 1; i <= static_cast<long long>(n); ++i) CHECK(m.at(i) >= std::fabs(x.at(i)));
    CHECK(decreasing_majorant(m, T8).prefix == m.prefix);
    for (long long k = 1; k <= static_cast<long long>(n); ++k) {
      auto a = tail_restrict(decreasing_majorant(tail_restrict(x, k), T8), k);
      auto b = tail_restrict(m, k);
      CHECK(a.head(n) == b.head(n));
    }
  }
}

TEST_CASE("majorant of tails") {
  SequenceSpec x({0.1}, affine_power_tail(2.0, -1.0, 1.0));  // 2 - 1/n increases to 2
  auto m = decreasing_majorant(x, Truncation::certified(4));
  check_eq(values(m, 6), {2, 2, 2, 2, 2, 2});
  SequenceSpec y({0.1, 0.0}, power_tail(1.0, 0.5));
  auto my = decreasing_majorant(y, Truncation::certified(4));
  CHECK(my.at(1) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(my.at(10) == doctest::Approx(1.0 / std::sqrt(10.0)));
  SequenceSpec z({}, power_log_tail(1.0, 0.5, 0.0));
  CHECK_THROWS_AS(decreasing_majorant(z, Truncation::certified(4)), Error);
}

TEST_CASE("hardy examples") {
  check_eq(values(hardy(make_sequence({1, 1, 1}), Truncation::certified(3)), 3), {1, 1, 1});
  check_eq(values(hardy(make_sequence({1, 0, 0}), Truncation::certified(3)), 3), {1, 0.5, 1.0 / 3});
  check_eq(values(hardy(make_sequence({1, 2, 3}), Truncation::certified(3)), 3), {1, 1.5, 2});
  // finite support leaves a c/n tail
  CHECK(hardy(make_sequence({1, 2}), T8).at(10) == doctest::Approx(0.3));
}

TEST_CASE("hardy of a constant tail keeps the mean") {
  SequenceSpec x({}, constant_tail(2.0));
  auto h = hardy(x, Truncation::certified(16));
  CHECK(h.at(100) == doctest::Approx(2.0));
  Bracket l = limsup_abs(h);
  CHECK(l.lower == 2.0);
  CHECK(l.upper == 2.0);
}

TEST_CASE("hardy of a power tail") {
  SequenceSpec x({}, power_tail(1.0, 0.5));
  auto h = hardy(x, Truncation::certified(64));
  double s = 0;
  for (int k = 1; k <= 500; ++k) s += 1.0 / std::sqrt(k);
  CHECK(h.at(500) == doctest::Approx(s / 500).epsilon(1e-12));
  Envelope e = h.tail->upper(65);
  for (long long m : {65LL, 100LL, 1000LL, 20000LL, 50000LL}) CHECK(std::fabs(h.at(m)) <= e(m) * (1 + 1e-12));
  CHECK(h.tail->nonincreasing_from() != kNever);
}

TEST_CASE("copson examples and adjoint identity") {
  check_eq(values(copson(make_sequence({1, 0, 0}), T8), 3), {1, 0, 0});
  check_eq(values(copson(make_sequence({1, 1, 0}), T8), 3), {1.5, 0.5, 0});
  auto hx = hardy(make_sequence({1, 2}), T8);
  auto cy = copson(make_sequence({3, 4}), T8);
  double lhs = hx.at(1) * 3 + hx.at(2) * 4;
  double rhs = 1 * cy.at(1) + 2 * cy.at(2);
  CHECK(lhs == doctest::Approx(9.0));
  CHECK(rhs == doctest::Approx(9.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 30;
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = U(rng);
    for (auto& v : b) v = U(rng);
    auto H = hardy(make_sequence(a), T8);
    auto C = copson(make_sequence(b), T8);
    double l = 0, r = 0, scale = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      l += H.at(i) * b[i - 1];
      r += a[i - 1] * C.at(i);
      scale += std::fabs(H.at(i) * b[i - 1]);
    }
    CHECK(std::fabs(l - r) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("copson of power and constant tails") {
  SequenceSpec x({}, power_tail(1.0, 1.0));
  auto c = copson(x, Truncation::certified(8));
  // sum_{k>=1} 1/k^2
  CHECK(c.at(1) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-12));
  double direct = 0;
  for (int k = 5; k < 2000000; ++k) direct += 1.0 / (double(k) * k);
  CHECK(c.at(5) == doctest::Approx(direct).epsilon(1e-6));
  SequenceSpec y({}, constant_tail(1.0));
  try {
    copson(y, Truncation::certified(8));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivergentTail);
  }
}

TEST_CASE("maximal function examples") {
  check_eq(values(maximal_function(make_sequence({1, 0, 0}), T8), 3), {1, 0.5, 1.0 / 3});
  check_eq(values(maximal_function(make_sequence({1, 1, 1}), T8), 3), {1, 1, 1});
  check_eq(values(maximal_function(make_sequence({0, 2, 0}), T8), 3), {2, 1, 2.0 / 3});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1 + rng() % 20);
    for (auto& a : v) a = U(rng);
    auto x = make_sequence(v);
    auto m = maximal_function(x, T8);
    auto r = decreasing_rearrangement(x, T8);
    for (long long i = 1; i <= 24; ++i) {
      CHECK(m.at(i) >= r.at(i) - 1e-15);
      CHECK(m.at(i + 1) <= m.at(i) + 1e-15);
    }
  }
}

TEST_CASE("dilation") {
  check_eq(values(dilate2(make_sequence({1, 2, 3}), T8), 6), {1, 1, 2, 2, 3, 3});
  CHECK(dilate2(make_sequence({}), T8).finite_support());
  auto d = dilate2(make_sequence({3, 2, 1}), T8);
  for (long long i = 1; i < 6; ++i) CHECK(d.at(i + 1) <= d.at(i));
  SequenceSpec p({}, power_tail(1.0, 1.0));
  auto dp = dilate2(p, Truncation::certified(8));
  CHECK(dp.at(7) == doctest::Approx(0.25));
  Envelope e = dp.tail->upper(1);
  for (long long m = 1; m < 200; ++m) CHECK(dp.at(m) <= e(m) * (1 + 1e-12));
}

TEST_CASE("products and restriction") {
  check_eq(values(pointwise_product(make_sequence({1, 2}), make_sequence({3, 4})), 2), {3, 8});
  check_eq(values(tail_restrict(make_sequence({5, 6, 7}), 2), 3), {0, 6, 7});
  auto z = pointwise_product(make_sequence({1, 2, 3}, power_tail(1.0, 1.0)), make_sequence({}));
  CHECK(z.finite_support());
  for (long long i = 1; i < 10; ++i) CHECK(z.at(i) == 0.0);
  auto pq = pointwise_product(SequenceSpec({}, power_tail(2.0, 1.0)), SequenceSpec({}, power_tail(3.0, 0.5)));
  CHECK(pq.at(4) == doctest::Approx(6.0 / 8.0));
  CHECK(dynamic_cast<const PatternTail*>(pq.tail.get()) != nullptr);
}

TEST_CASE("envelope power sums bound explicit sums") {
  struct C {
    double K, b, g, p;
    long long M;
  };
  for (C c : {C{1, -1, 0, 2, 1}, C{2, -0.5, 0, 4, 3}, C{1, -1, -1, 2, 1}, C{1, -1, 1, 1.5, 2}, C{1, -0.6, 0.5, 2, 10},
              C{1, -1, -0.75, 2, 1}}) {
    Envelope e{c.K, c.b, c.g};
    double bound = envelope_power_sum(e, c.p, c.M);
    double direct = 0;
    for (long long m = c.M; m < c.M + 3000000; ++m) direct += std::pow(e(m), c.p);
    CHECK(std::isfinite(bound));
    CHECK(bound >= direct);
  }
  CHECK(std::isinf(envelope_power_sum(Envelope{1, -0.5, 0}, 2, 1)));
  CHECK(std::isinf(envelope_power_sum(Envelope{1, -1, 0}, 1, 1)));
}

TEST_CASE("tail sums detect divergence") {
  SequenceSpec x({}, power_tail(1.0, 0.25));
  Bracket b = power_sum(x, 4.0, 1);
  CHECK(std::isinf(b.lower));
  SequenceSpec y({}, power_tail(1.0, 0.5));
  Bracket c = power_sum(y, 4.0, 1);
  CHECK(c.lower == 0.0);
  CHECK(c.upper >= M_PI * M_PI / 6);
  CHECK(c.upper <= 2.0 + 1e-12);
}

TEST_CASE("sup and limsup") {
  SequenceSpec a({}, periodic_tail({0.5, 1.5}));
  Bracket l = limsup_abs(a);
  CHECK(l.lower == 1.5);
  CHECK(l.upper == 1.5);
  CHECK(sup_abs(a, 10).lower == 1.5);
  SequenceSpec b({}, affine_power_tail(2.0, -1.0, 1.0));
  Bracket s = sup_abs(b, 3);
  CHECK(s.lower == 2.0);
  CHECK(s.upper == 2.0);
  SequenceSpec c({9.0}, power_tail(1.0, 1.0));
  CHECK(sup_abs(c, 1).upper == 9.0);
  CHECK(sup_abs(c, 2).upper == 0.5);
}

TEST_CASE("majorant certificate is validated") {
  CHECK_THROWS_AS(SequenceSpec({}, power_tail(1.0, 0.5), power_tail(1.0, 1.0)), Error);
  SequenceSpec ok({}, pattern_tail(0.0, {1.0, 0.5}, 0.0, -1.0, 0.0), power_tail(1.0, 1.0));
  Bracket s = sup_abs(ok, 5);
  CHECK(s.upper <= 0.2 + 1e-15);
}

TEST_CASE("truncation validation") {
  SequenceSpec x({1.0}, power_tail(1.0, 1.0));
  CHECK_THROWS_AS(Truncation::exact(4).validate(x), Error);
  CHECK_THROWS_AS(Truncation::certified(0).validate(x), Error);
  CHECK_NOTHROW(Truncation::exact(4).validate(make_sequence({1.0})));
}
