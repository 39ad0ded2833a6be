#include <doctest.h>

#include <cmath>
#include <random>

#include "zsiglab/dynamics.hpp"
#include "zsiglab/error.hpp"
#include "zsiglab/heights.hpp"

using namespace zsig;

namespace {

const NumberField Q;

UnicriticalMap m(long gamma, long c, int d = 2) { return UnicriticalMap::make(Q, d, gamma, c); }

std::vector<FieldElement> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("iterate examples") {
  CHECK(iterate(m(0, 1), 0, 5).values == ints({0, 1, 2, 5, 26, 677}));
  CHECK(iterate(m(-4, -2), -4, 2).values == ints({-4, -2, 2}));
  CHECK(iterate(m(0, -1), 0, 4).values == ints({0, -1, 0, -1, 0}));
}

TEST_CASE("digit cap stops iteration and at() refuses past it") {
  const auto t = iterate(m(0, 1), 0, 40, 50);
  REQUIRE(t.overflow_at.has_value());
  CHECK(t.last_level() == *t.overflow_at - 1);
  CHECK(digit_size(t.at(t.last_level())) <= 50);
  try {
    t.at(*t.overflow_at);
    FAIL("expected OperandOverflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OperandOverflow);
  }
}

TEST_CASE("map parsing") {
  const auto f = UnicriticalMap::parse(Q, "3;-2;-1");
  CHECK(f.d == 3);
  CHECK(f.gamma == FieldElement(-2));
  CHECK(f(0) == FieldElement(7));
  CHECK_THROWS_AS(UnicriticalMap::parse(Q, "1;0;1"), Error);
  CHECK_THROWS_AS(UnicriticalMap::parse(Q, "2;0"), Error);
  const NumberField Qi = NumberField::imaginary_quadratic(1);
  const auto g = UnicriticalMap::parse(Qi, "2;i;1 - i");
  CHECK(g(FieldElement(Qi, 0, 1)) == FieldElement(Qi, 1, -1));
}

TEST_CASE("nu") {
  CHECK(nu(m(0, 2)).nu == 0.0);
  CHECK(nu(m(-4, -2)).nu == doctest::Approx(std::log(4.0)));
  CHECK(nu(m(-38, -36)).nu == doctest::Approx(std::log(38.0)));
  CHECK(log_plus(0.5) == 0.0);
  CHECK(log_plus(std::exp(2.0)) == doctest::Approx(2.0));
}

TEST_CASE("conjugate_by_shift") {
  const auto g = conjugate_by_shift(m(0, 1), 26);
  CHECK(g.gamma == FieldElement(-26));
  CHECK(g.c == FieldElement(-25));
  CHECK(conjugate_by_shift(m(3, 5), 0) == m(3, 5));
  const auto f2 = conjugate_by_shift(m(0, 2), 4);
  CHECK(f2.gamma == FieldElement(-4));
  CHECK(f2.c == FieldElement(-2));
}

TEST_CASE("conjugation identity on random data") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long> u(-6, 6), dd(2, 4);
  for (int k = 0; k < 60; ++k) {
    const auto f = m(u(rng), u(rng), static_cast<int>(dd(rng)));
    const FieldElement t = FieldElement::rational(mpq_class(u(rng), 1 + (k % 3)));
    const FieldElement alpha = u(rng);
    const auto g = conjugate_by_shift(f, t);
    const auto of = iterate(f, alpha, 5), og = iterate(g, alpha - t, 5);
    for (int n = 0; n <= 5; ++n) CHECK(og.at(n) == of.at(n) - t);
  }
}

TEST_CASE("periodicity verdicts") {
  auto a = detect_periodicity(m(0, -1), 0);
  CHECK(a.status == PeriodicityVerdict::Status::PCF);
  CHECK(a.preperiod == 0);
  CHECK(a.period == 2);

  auto b = detect_periodicity(m(0, 1), 0);
  CHECK(b.status == PeriodicityVerdict::Status::Wandering);
  // brute force: first k with h(f^k(0)) above the threshold
  const double thr = escape_threshold(m(0, 1));
  const auto o = iterate(m(0, 1), 0, 10);
  int first = -1;
  for (int k = 0; k <= 10 && first < 0; ++k)
    if (h(o.at(k)) > thr) first = k;
  CHECK(b.escape_level == first);

  // orbit 0, -2, 2, 2: preperiod 2 in the usual indexing
  auto c = detect_periodicity(m(0, -2), 0);
  CHECK(c.status == PeriodicityVerdict::Status::PCF);
  CHECK(c.preperiod == 2);
  CHECK(c.period == 1);

  auto u = detect_periodicity(m(0, 1), 0, 2);
  CHECK(u.status == PeriodicityVerdict::Status::Unknown);
}

TEST_CASE("wandering certificates are sound") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> u(-5, 5);
  int seen = 0;
  for (int k = 0; k < 200 && seen < 40; ++k) {
    const auto f = m(u(rng), u(rng));
    const FieldElement alpha = FieldElement::rational(mpq_class(u(rng), 1 + k % 2));
    const auto v = detect_periodicity(f, alpha);
    if (v.status != PeriodicityVerdict::Status::Wandering) continue;
    ++seen;
    const auto o = iterate(f, alpha, v.escape_level + 10, 2'000'000);
    REQUIRE(o.last_level() == v.escape_level + 10);
    for (int n = v.escape_level; n < v.escape_level + 10; ++n) CHECK(h(o.at(n + 1)) > h(o.at(n)));
  }
  CHECK(seen >= 30);
}

TEST_CASE("taunec family") {
  const auto f = taunec_family(Q, 2, 2, 3);
  CHECK(f.gamma == FieldElement(-38));
  CHECK(f.c == FieldElement(-36));
  const auto f1 = taunec_family(Q, 2, 2, 1);
  CHECK(f1.c.is_zero());
  CHECK_FALSE(f1.in_Pd());
  const auto g = taunec_family(Q, 3, 1, 2);
  CHECK(g.gamma == FieldElement(-2));
  CHECK(g.c == FieldElement(-1));
  CHECK_THROWS_AS(taunec_family(Q, 2, -2, 3), Error);  // x^2 - 2 is PCF
  for (int N = 1; N <= 8; ++N) {
    const auto t = taunec_family(Q, 2, 2, N);
    CHECK(iterate(t, t.gamma, N).at(N).is_zero());
  }
}

TEST_CASE("example family") {
  CHECK(example_family(2).gamma == FieldElement(-4));
  CHECK(example_family(2).c == FieldElement(-2));
  CHECK(example_family(3).gamma == FieldElement(-20));
  CHECK(example_family(3).c == FieldElement(-18));
  CHECK(example_family(4).gamma == FieldElement(-724));
  CHECK(example_family(4).c == FieldElement(-722));
  for (int i = 2; i <= 6; ++i) {
    const auto f = example_family(i);
    const auto o = iterate(f, f.gamma, i);
    CHECK(o.at(1) == -o.at(i));
  }
}

TEST_CASE("symbolic iterates are capped") {
  CHECK(m(0, 1).iterate_polynomial(4).degree() == 16);
  CHECK(m(0, 1, 3).iterate_polynomial(3).degree() == 27);
  CHECK_THROWS_AS(m(0, 1).iterate_polynomial(5), Error);
  CHECK(m(0, 1).iterate_polynomial(2).evaluate(3) == FieldElement(101));
}

TEST_CASE("sampling is seeded and only returns wandering pairs") {
  SampleSpec spec;
  spec.d_max = 3;
  const auto a = sample_wandering(spec, 25, 42), b = sample_wandering(spec, 25, 42);
  REQUIRE(a.size() == 25);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].f == b[k].f);
    CHECK(a[k].alpha == b[k].alpha);
    CHECK_FALSE(a[k].f.c.is_zero());
    CHECK(detect_periodicity(a[k].f, a[k].alpha).status == PeriodicityVerdict::Status::Wandering);
  }
}
