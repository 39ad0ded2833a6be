#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zsiglab/dynamics.hpp"
#include "zsiglab/factor.hpp"
#include "zsiglab/numfield.hpp"

namespace zsig {

enum class FactorStatus { Exact, Partial };
const char* to_string(FactorStatus s);

using PrimeExponents = std::vector<std::pair<PrimeOfK, long>>;

struct PositiveSupport {
  PrimeExponents entries;             // primes with v_p(x) > 0, ascending
  FactorStatus status = FactorStatus::Exact;
  FieldElement unfactored;            // numerator content left over (a unit when Exact)
  bool probable = false;
};

PositiveSupport positive_support(const FieldElement& x, const FactorBudget& budget = {}, FactorCache* cache = nullptr);

// Primitive content of f^n(alpha) by gcd removal against the numerator
// contents of f^m(alpha), 1 <= m < n, f^m(alpha) != 0. No factoring.
// Throws ZeroIterate when f^n(alpha) = 0.
FieldElement primitive_part(const OrbitTable& orbit, int n);

struct PrimitivePrimes {
  PrimeExponents primes;  // multiplicities are v_p(f^n(alpha))
  FactorStatus status = FactorStatus::Exact;
  FieldElement unfactored;
  bool probable = false;
};
PrimitivePrimes primitive_prime_divisors(const OrbitTable& orbit, int n, const FactorBudget& budget = {},
                                         FactorCache* cache = nullptr);

struct ZsigmondyLevel {
  int n = 0;
  FieldElement value;
  bool zero_value = false;
  FieldElement primitive;                 // primitive part (0 when value is 0)
  std::optional<PrimitivePrimes> primes;  // absent when only membership was requested
  bool in_zsigmondy = false;
  std::optional<PrimeOfK> mult_one_witness;
  // Exact when the witness question is settled: a witness was found, or the
  // primitive part factored completely without one.
  FactorStatus status = FactorStatus::Exact;
};

struct ZsigmondyOptions {
  bool list_primes = true;
  bool find_witness = true;
  int jobs = 1;
};

struct ZsigmondyReport {
  UnicriticalMap map;
  FieldElement start;
  int n_max = 0;
  FieldElement level_one;  // f(alpha), informational only
  std::vector<ZsigmondyLevel> levels;  // n = 2 .. n_max

  std::vector<int> members() const;
  bool all_exact() const;
};

// Membership is always exact; the witness search may come back Partial.
ZsigmondyReport zsigmondy_set(const UnicriticalMap& f, const FieldElement& alpha, int n_max,
                              const FactorBudget& budget = {}, const ZsigmondyOptions& options = {},
                              FactorCache* cache = nullptr);
ZsigmondyLevel zsigmondy_level(const OrbitTable& orbit, int n, const FactorBudget& budget,
                               const ZsigmondyOptions& options, FactorCache* cache);

struct SupportClassification {
  PrimeExponents Y1, Y2, Y3plus;
  double mass1 = 0, mass2 = 0, mass3 = 0;
};
// Throws BudgetExceeded unless f^n(alpha) factors completely.
SupportClassification classify_support(const OrbitTable& orbit, int n, const FactorBudget& budget = {},
                                       FactorCache* cache = nullptr);

// Sum of N_p over primes of f^n(alpha) that already divide some f^m(alpha), 1 <= m < n.
double imprimitive_mass(const OrbitTable& orbit, int n, const FactorBudget& budget = {},
                        FactorCache* cache = nullptr);

// Runs body(i) for i in [0, count) on up to `jobs` threads. Results must be
// written by index so output order never depends on scheduling.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace zsig
