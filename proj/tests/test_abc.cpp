#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "zsiglab/abc.hpp"
#include "zsiglab/dynamics.hpp"
#include "zsiglab/error.hpp"

using namespace zsig;

namespace {

const NumberField Q;

UnicriticalMap m(long gamma, long c, int d = 2) { return UnicriticalMap::make(Q, d, gamma, c); }

}  // namespace

TEST_CASE("orbit triples") {
  const auto t2 = orbit_abc_triple(m(0, 1), 0, 2);
  CHECK(t2.a == FieldElement(1));
  CHECK(t2.b == FieldElement(1));
  CHECK(t2.s == FieldElement(2));
  CHECK(t2.h_proj == doctest::Approx(std::log(2.0)));
  CHECK(t2.rad == doctest::Approx(std::log(2.0)));
  CHECK(t2.quality == doctest::Approx(1.0));

  const auto t4 = orbit_abc_triple(m(0, 1), 0, 4);
  CHECK(t4.a == FieldElement(25));
  CHECK(t4.h_proj == doctest::Approx(std::log(26.0)));
  CHECK(t4.rad == doctest::Approx(std::log(130.0)));

  try {
    orbit_abc_triple(m(0, 2), 0, 1);
    FAIL("expected DegenerateTriple");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateTriple);
  }
}

TEST_CASE("sum identity, scaling invariance and radical cross-check") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> u(-6, 6);
  for (int k = 0; k < 30; ++k) {
    const auto f = m(u(rng), u(rng));
    const FieldElement alpha = u(rng);
    for (int n = 1; n <= 4; ++n) {
      AbcTriple t;
      try {
        t = orbit_abc_triple(f, alpha, n);
      } catch (const Error&) {
        continue;
      }
      CHECK(t.a + t.b == t.s);
      const FieldElement lam = FieldElement::rational(mpq_class(7, 3));
      CHECK(tuple_height({t.a * lam, t.b * lam, t.s * lam}).value == doctest::Approx(t.h_proj).epsilon(1e-12));
      CHECK(radical({t.a * lam, t.b * lam, t.s * lam}) == doctest::Approx(t.rad).epsilon(1e-12));
      // gcd-1 integral triples: rad = log of the product of distinct primes of a*b*s
      const mpz_class A = t.a.a().get_num(), B = t.b.a().get_num(), S = t.s.a().get_num();
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
      if (g == 1 && abs(A) < mpz_class("1000000000000000000") && abs(S) < mpz_class("1000000000000000000")) {
        std::map<oracle::u64, int> all;
        for (const mpz_class& x : {A, B, S})
          for (auto [p, e] : oracle::factor(x.get_si())) all[p] += e;
        double expect = 0;
        for (auto [p, e] : all) expect += std::log(static_cast<double>(p));
        CHECK(t.rad == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("rad lower bound") {
  const auto r = check_rad_lower_bound(m(0, 3), 0, 3, 0.5);
  CHECK(r.lhs == doctest::Approx(std::log(21.0)));
  CHECK(r.rhs == doctest::Approx(0.5 * std::log(12.0)));
  CHECK(r.holds);
  const auto z = check_rad_lower_bound(m(0, 1), 0, 2, 1.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.holds);
  const auto f = check_rad_lower_bound(m(0, 1), 0, 5, 0.5);
  CHECK(f.lhs == doctest::Approx(std::log(677.0)));
  CHECK(f.rhs == doctest::Approx(0.5 * std::log(26.0)));
}

TEST_CASE("rad margins are monotone in epsilon") {
  const auto f = m(1, 2);
  for (int n = 2; n <= 7; ++n) {
    double prev = -1e300;
    bool held = false;
    for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto r = check_rad_lower_bound(f, 0, n, eps);
      CHECK(r.margin >= prev);
      if (held) CHECK(r.holds);
      held = r.holds;
      prev = r.margin;
    }
  }
}

TEST_CASE("imprimitive bound") {
  const auto a = check_imprimitive_bound(m(0, 1), 0, 4, 0.25);
  CHECK(a.lhs == doctest::Approx(std::log(2.0)));
  CHECK(a.rhs == doctest::Approx(0.25 * std::log(26.0)));
  CHECK(a.holds);
  CHECK(check_imprimitive_bound(m(0, 1), 0, 3, 0.01).holds);
  const auto c = check_imprimitive_bound(m(0, 1), 0, 6, 0.1);
  CHECK(c.rhs == doctest::Approx(0.1 * std::log(458330.0)));
}

TEST_CASE("quality scan") {
  const auto s = quality_scan(m(0, 1), 0, 2, 6);
  CHECK(s.triples.size() == 5);
  for (std::size_t k = 1; k < s.triples.size(); ++k) CHECK(s.triples[k - 1].quality >= s.triples[k].quality);

  // orbit of 0 under x^2 + 2 is 0, 2, 6, 38, 1446
  const auto t = quality_scan(m(0, 2), 0, 2, 4);
  REQUIRE(t.triples.size() == 3);
  std::vector<long> as, ss;
  for (const auto& x : t.triples) {
    as.push_back(x.a.a().get_num().get_si());
    ss.push_back(x.s.a().get_num().get_si());
    CHECK(x.b == FieldElement(2));
  }
  std::sort(as.begin(), as.end());
  std::sort(ss.begin(), ss.end());
  CHECK(as == std::vector<long>{4, 36, 1444});
  CHECK(ss == std::vector<long>{6, 38, 1446});

  CHECK(quality_scan(m(0, 1), 0, 5, 4).triples.empty());
  const auto d = quality_scan(m(0, 2), 0, 1, 2);
  CHECK(d.skipped.size() == 1);
  CHECK(d.skipped[0].first == 1);
}
