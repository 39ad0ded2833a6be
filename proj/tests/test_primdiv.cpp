#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "zsiglab/dynamics.hpp"
#include "zsiglab/error.hpp"
#include "zsiglab/heights.hpp"
#include "zsiglab/primdiv.hpp"

using namespace zsig;

namespace {

const NumberField Q;

UnicriticalMap m(long gamma, long c, int d = 2) { return UnicriticalMap::make(Q, d, gamma, c); }

std::vector<long> rational_primes(const PrimeExponents& ps) {
  std::vector<long> out;
  for (const auto& [P, e] : ps) out.push_back(P.rational_prime.get_si());
  return out;
}

}  // namespace

TEST_CASE("positive support") {
  auto s = positive_support(FieldElement::rational(mpq_class(26, 5)));
  CHECK(rational_primes(s.entries) == std::vector<long>{2, 13});
  CHECK(s.status == FactorStatus::Exact);
  CHECK(positive_support(FieldElement::rational(mpq_class(1, 7))).entries.empty());
  const NumberField Qi = NumberField::imaginary_quadratic(1);
  CHECK(positive_support(FieldElement(Qi, 5)).entries.size() == 2);
}

TEST_CASE("primitive part by gcd sieve") {
  const auto o = iterate(m(0, 1), 0, 8);
  CHECK(primitive_part(o, 4) == FieldElement(13));
  CHECK(primitive_part(o, 2) == FieldElement(2));
  CHECK(primitive_part(o, 8) == FieldElement::integer(Q, mpz_class("1697226451765622153377")));

  const auto g = conjugate_by_shift(m(0, 1), 26);
  const auto og = iterate(g, -26, 5);
  CHECK(og.at(5) == FieldElement(651));
  CHECK(primitive_part(og, 5) == FieldElement(31));
  CHECK_THROWS_AS(primitive_part(og, 4), Error);
}

TEST_CASE("primitive prime divisors") {
  const auto o = iterate(m(0, 1), 0, 4);
  auto p4 = primitive_prime_divisors(o, 4);
  REQUIRE(p4.primes.size() == 1);
  CHECK(p4.primes[0].first.rational_prime == 13);
  CHECK(p4.primes[0].second == 1);
  CHECK(rational_primes(primitive_prime_divisors(o, 3).primes) == std::vector<long>{5});
  CHECK(primitive_prime_divisors(iterate(m(-4, -2), -4, 2), 2).primes.empty());
}

TEST_CASE("earlier denominators do not disqualify a prime") {
  // alpha = 1/2 under x^2 + 1: f(1/2) = 5/4 has 2 only in the denominator
  const auto o = iterate(m(0, 1), FieldElement::rational(mpq_class(1, 2)), 4);
  for (int n = 2; n <= 4; ++n) {
    const auto p = primitive_prime_divisors(o, n);
    for (const auto& [P, e] : p.primes) {
      CHECK(e > 0);
      for (int k = 1; k < n; ++k)
        if (!o.at(k).is_zero()) CHECK(valuation(o.at(k), P) <= 0);
    }
  }
}

TEST_CASE("zsigmondy set for x^2 + 1 from 0") {
  const auto z = zsigmondy_set(m(0, 1), 0, 8);
  CHECK(z.members().empty());
  CHECK(z.all_exact());
  const std::vector<long> witnesses{2, 5, 13, 677, 45833, 41, 7121};
  REQUIRE(z.levels.size() == 7);
  for (std::size_t k = 0; k < witnesses.size(); ++k) {
    REQUIRE(z.levels[k].mult_one_witness.has_value());
    CHECK(z.levels[k].mult_one_witness->rational_prime == witnesses[k]);
  }
  CHECK(z.level_one == FieldElement(1));
}

TEST_CASE("zsigmondy set of the shifted orbit contains the zero level") {
  const auto g = conjugate_by_shift(m(0, 1), 26);
  const auto z = zsigmondy_set(g, -26, 8);
  const auto mem = z.members();
  CHECK(std::find(mem.begin(), mem.end(), 4) != mem.end());
  CHECK(z.levels[2].zero_value);
}

TEST_CASE("multiplicity and primitivity re-verified by valuation") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> u(-7, 7);
  for (int k = 0; k < 25; ++k) {
    const auto f = m(u(rng), u(rng));
    const FieldElement alpha = u(rng);
    if (detect_periodicity(f, alpha).status != PeriodicityVerdict::Status::Wandering) continue;
    const auto o = iterate(f, alpha, 6);
    for (int n = 2; n <= 6; ++n) {
      if (o.at(n).is_zero()) continue;
      const auto p = primitive_prime_divisors(o, n);
      for (const auto& [P, e] : p.primes) {
        CHECK(valuation(o.at(n), P) == e);
        for (int j = 1; j < n; ++j)
          if (!o.at(j).is_zero()) CHECK(valuation(o.at(j), P) <= 0);
      }
    }
  }
}

TEST_CASE("sieve agrees with brute-force oracle below 1e18") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> u(-9, 9);
  int orbits = 0;
  for (int k = 0; k < 400 && orbits < 30; ++k) {
    const auto f = m(u(rng), u(rng));
    const FieldElement alpha = u(rng);
    if (detect_periodicity(f, alpha).status != PeriodicityVerdict::Status::Wandering) continue;
    const auto o = iterate(f, alpha, 12);
    int top = 1;
    while (top < 12 && abs(o.at(top + 1).a()) < mpq_class(mpz_class("1000000000000000000"))) ++top;
    if (top < 4) continue;
    ++orbits;
    for (int n = 2; n <= top; ++n) {
      if (o.at(n).is_zero()) continue;
      std::map<oracle::u64, int> earlier;
      for (int j = 1; j < n; ++j) {
        const long long v = o.at(j).a().get_num().get_si();
        if (v != 0)
          for (auto [p, e] : oracle::factor(v)) earlier[p] += e;
      }
      mpz_class expect = 1;
      for (auto [p, e] : oracle::factor(o.at(n).a().get_num().get_si()))
        if (!earlier.count(p))
          for (int r = 0; r < e; ++r) expect *= static_cast<unsigned long>(p);
      CHECK(primitive_part(o, n) == FieldElement::integer(Q, expect));
    }
  }
  CHECK(orbits >= 30);
}

TEST_CASE("membership does not depend on the factoring budget") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> u(-10, 10);
  ZsigmondyOptions only;
  only.list_primes = false;
  only.find_witness = false;
  int cases = 0;
  for (int k = 0; k < 300 && cases < 20; ++k) {
    const auto f = m(u(rng), u(rng));
    const FieldElement alpha = u(rng);
    if (detect_periodicity(f, alpha).status != PeriodicityVerdict::Status::Wandering) continue;
    ++cases;
    const auto full = zsigmondy_set(f, alpha, 9, FactorBudget{}, only);
    const auto weak = zsigmondy_set(f, alpha, 9, FactorBudget::crippled(), only);
    CHECK(full.members() == weak.members());
  }
}

TEST_CASE("support classification") {
  const auto o3 = iterate(m(0, 3), 0, 3);
  const auto s = classify_support(o3, 3);
  CHECK(rational_primes(s.Y1) == std::vector<long>{3});
  CHECK(rational_primes(s.Y2) == std::vector<long>{7});
  CHECK(s.Y3plus.empty());
  const auto o1 = iterate(m(0, 1), 0, 4);
  CHECK(rational_primes(classify_support(o1, 2).Y1) == std::vector<long>{2});
  CHECK(rational_primes(classify_support(o1, 4).Y1) == std::vector<long>{2, 13});
  // sum v_p N_p over the support stays below the height
  CHECK(s.mass1 + 2 * s.mass2 <= h(o3.at(3)) + 1e-10);
}

TEST_CASE("imprimitive mass") {
  const auto o = iterate(m(0, 1), 0, 4);
  CHECK(imprimitive_mass(o, 4) == doctest::Approx(std::log(2.0)));
  CHECK(imprimitive_mass(o, 3) == 0.0);
  CHECK(imprimitive_mass(o, 2) == 0.0);
}

TEST_CASE("jobs do not change results") {
  const auto f = m(1, 3);
  const auto a = zsigmondy_set(f, 0, 9, FactorBudget{}, ZsigmondyOptions{true, true, 1});
  const auto b = zsigmondy_set(f, 0, 9, FactorBudget{}, ZsigmondyOptions{true, true, 4});
  REQUIRE(a.levels.size() == b.levels.size());
  for (std::size_t k = 0; k < a.levels.size(); ++k) {
    CHECK(a.levels[k].primitive == b.levels[k].primitive);
    CHECK(a.levels[k].mult_one_witness.has_value() == b.levels[k].mult_one_witness.has_value());
  }
  std::vector<int> out(100);
  parallel_for(out.size(), 8, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i >= 10) throw Error(ErrorKind::Precondition, std::to_string(i));
    });
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(": 10") != std::string::npos);
  }
}
