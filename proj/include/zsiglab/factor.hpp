#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

namespace zsig {

// Effort limits for integer factorization. Trial division runs over all
// primes <= trial_bound; Pollard-rho (Brent) may spend at most
// rho_iterations polynomial steps in total per factor_integer call.
struct FactorBudget {
  std::uint64_t trial_bound = 1'000'000;
  std::uint64_t rho_iterations = 10'000'000;
  // Accept strong probable primes above the deterministic Miller-Rabin range.
  bool allow_probable_prime = true;

  static FactorBudget crippled() { return {100, 0, true}; }
};

struct PrimePower {
  mpz_class prime;
  unsigned long exponent = 0;
  bool probable = false;  // prime certified only by random-base Miller-Rabin
};

// Factorization of |n|. When the budget runs out the unfactored part is left
// in `cofactor` (> 1); it may be composite or a prime that could not be
// certified.
struct IntegerFactorization {
  std::vector<PrimePower> factors;  // ascending by prime
  mpz_class cofactor = 1;

  bool complete() const { return cofactor == 1; }
  bool relies_on_probable_prime() const;
};

// Miller-Rabin with the first 13 prime bases, deterministic below
// kDeterministicLimit (about 3.3e24). Above the limit 64 extra bases are drawn
// from a fixed-seed generator, so results are reproducible.
extern const mpz_class kDeterministicLimit;

enum class Primality { Composite, Prime, ProbablePrime };
Primality primality(const mpz_class& n);

// Thread-safe memo of completed factorizations keyed by value and budget.
class FactorCache {
 public:
  bool lookup(const std::string& key, IntegerFactorization& out) const;
  void insert(const std::string& key, const IntegerFactorization& value);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, IntegerFactorization> table_;
};

// Throws Error(ZeroElement) for n == 0. The sign of n is ignored.
IntegerFactorization factor_integer(const mpz_class& n, const FactorBudget& budget,
                                    FactorCache* cache = nullptr);

// Primes <= bound, shared and computed once per bound.
const std::vector<std::uint32_t>& small_primes(std::uint64_t bound);

// Square root of a modulo an odd prime p, for a quadratic residue a.
mpz_class sqrt_mod_prime(const mpz_class& a, const mpz_class& p);

}  // namespace zsig
