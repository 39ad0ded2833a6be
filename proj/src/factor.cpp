#include "zsiglab/factor.hpp"

#include <algorithm>
#include <array>
#include <memory>

#include "zsiglab/error.hpp"

namespace zsig {

const mpz_class kDeterministicLimit("3317044064679887385961981");

namespace {

constexpr std::array<unsigned long, 13> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr int kRandomRounds = 64;
constexpr unsigned long kWitnessSeed = 0x5a51'6d0dUL;
constexpr std::size_t kPrimesPerBlock = 512;

bool strong_probable_prime(const mpz_class& n, const mpz_class& base, const mpz_class& d,
                           unsigned long s) {
  mpz_class x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const mpz_class n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

struct TrialTable {
  std::vector<std::uint32_t> primes;
  std::vector<mpz_class> block_products;  // product of each run of kPrimesPerBlock primes
};

const TrialTable& trial_table(std::uint64_t bound) {
  static std::mutex mutex;
  static std::map<std::uint64_t, std::unique_ptr<TrialTable>> tables;
  std::lock_guard lock(mutex);
  auto& slot = tables[bound];
  if (!slot) {
    slot = std::make_unique<TrialTable>();
    if (bound >= 2) {
      std::vector<bool> composite(bound + 1, false);
      for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        slot->primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
      }
    }
    for (std::size_t i = 0; i < slot->primes.size(); i += kPrimesPerBlock) {
      mpz_class product = 1;
      const std::size_t end = std::min(slot->primes.size(), i + kPrimesPerBlock);
      for (std::size_t j = i; j < end; ++j) product *= slot->primes[j];
      slot->block_products.push_back(product);
    }
  }
  return *slot;
}

// If n = r^k for some k >= 2, returns the smallest such root.
bool perfect_power_root(const mpz_class& n, mpz_class& root) {
  if (mpz_perfect_power_p(n.get_mpz_t()) == 0 || n < 4) return false;
  const unsigned long bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned long k = bits; k >= 2; --k) {
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) return true;
  }
  return false;
}

// Pollard rho with Brent's cycle detection and batched gcds. Returns a
// nontrivial factor or 0 when the iteration allowance is spent.
mpz_class brent_rho(const mpz_class& n, std::uint64_t& allowance) {
  const std::uint64_t batch = 128;
  for (unsigned long c = 1; allowance > 0; ++c) {
    mpz_class y = 2, x, ys, q = 1, g = 1, diff;
    auto step = [&](mpz_class& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    std::uint64_t r = 1;
    bool out_of_budget = false;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) {
        if (allowance == 0) { out_of_budget = true; break; }
        step(y);
        --allowance;
      }
      if (out_of_budget) break;
      for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
        ys = y;
        const std::uint64_t m = std::min(batch, r - k);
        for (std::uint64_t i = 0; i < m; ++i) {
          if (allowance == 0) { out_of_budget = true; break; }
          step(y);
          --allowance;
          diff = x - y;
          q = q * diff % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        if (out_of_budget) break;
      }
      if (out_of_budget && (g == 1 || g == n)) break;
      r *= 2;
    }
    if (g == n) {
      // Batch overshot: walk back from ys one step at a time.
      do {
        step(ys);
        diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
    if (out_of_budget) break;
  }
  return 0;
}

std::string cache_key(const mpz_class& n, const FactorBudget& budget) {
  return n.get_str(16) + "|" + std::to_string(budget.trial_bound) + "|" +
         std::to_string(budget.rho_iterations) + "|" + (budget.allow_probable_prime ? "p" : "c");
}

}  // namespace

bool IntegerFactorization::relies_on_probable_prime() const {
  return std::any_of(factors.begin(), factors.end(), [](const PrimePower& pp) { return pp.probable; });
}

Primality primality(const mpz_class& n) {
  if (n < 2) return Primality::Composite;
  for (unsigned long b : kBases) {
    if (n == b) return Primality::Prime;
    if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return Primality::Composite;
  }
  mpz_class d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned long b : kBases) {
    if (!strong_probable_prime(n, mpz_class(b), d, s)) return Primality::Composite;
  }
  if (n < kDeterministicLimit) return Primality::Prime;

  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(kWitnessSeed);
  const mpz_class span = n - 3;
  for (int i = 0; i < kRandomRounds; ++i) {
    mpz_class base = rng.get_z_range(span) + 2;
    if (!strong_probable_prime(n, base, d, s)) return Primality::Composite;
  }
  return Primality::ProbablePrime;
}

bool FactorCache::lookup(const std::string& key, IntegerFactorization& out) const {
  std::shared_lock lock(mutex_);
  auto it = table_.find(key);
  if (it == table_.end()) return false;
  out = it->second;
  return true;
}

void FactorCache::insert(const std::string& key, const IntegerFactorization& value) {
  std::unique_lock lock(mutex_);
  table_.emplace(key, value);
}

std::size_t FactorCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

const std::vector<std::uint32_t>& small_primes(std::uint64_t bound) {
  return trial_table(bound).primes;
}

IntegerFactorization factor_integer(const mpz_class& n_in, const FactorBudget& budget,
                                    FactorCache* cache) {
  if (n_in == 0) throw Error(ErrorKind::ZeroElement, "factor_integer(0)");
  mpz_class n = abs(n_in);

  std::string key;
  if (cache) {
    key = cache_key(n, budget);
    IntegerFactorization hit;
    if (cache->lookup(key, hit)) return hit;
  }

  std::map<mpz_class, PrimePower> found;
  auto record = [&](const mpz_class& p, unsigned long e, bool probable) {
    auto& slot = found[p];
    slot.prime = p;
    slot.exponent += e;
    slot.probable = slot.probable || probable;
  };

  // Trial division, one gcd per block of primes to skip blocks that miss.
  const TrialTable& table = trial_table(budget.trial_bound);
  mpz_class g;
  for (std::size_t block = 0; block < table.block_products.size() && n > 1; ++block) {
    const std::size_t first = block * kPrimesPerBlock;
    if (mpz_class(table.primes[first]) * table.primes[first] > n) break;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), table.block_products[block].get_mpz_t());
    if (g == 1) continue;
    const std::size_t end = std::min(table.primes.size(), first + kPrimesPerBlock);
    for (std::size_t j = first; j < end; ++j) {
      const unsigned long p = table.primes[j];
      if (!mpz_divisible_ui_p(g.get_mpz_t(), p)) continue;
      mpz_class pz = p;
      const unsigned long e = mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t());
      record(pz, e, false);
    }
  }

  IntegerFactorization result;
  result.cofactor = 1;
  if (n > 1) {
    const mpz_class last = table.primes.empty() ? mpz_class(1) : mpz_class(table.primes.back());
    std::uint64_t allowance = budget.rho_iterations;
    // Pending composites with their multiplicity in the original n.
    std::vector<std::pair<mpz_class, unsigned long>> pending{{n, 1}};
    while (!pending.empty()) {
      auto [m, mult] = pending.back();
      pending.pop_back();
      if (m == 1) continue;
      if (m <= last * last) {  // no prime factor <= trial bound, so m is prime
        record(m, mult, false);
        continue;
      }
      const Primality kind = primality(m);
      if (kind == Primality::Prime) { record(m, mult, false); continue; }
      if (kind == Primality::ProbablePrime) {
        if (budget.allow_probable_prime) {
          record(m, mult, true);
        } else {
          mpz_class power;
          mpz_pow_ui(power.get_mpz_t(), m.get_mpz_t(), mult);
          result.cofactor *= power;
        }
        continue;
      }
      mpz_class root;
      if (perfect_power_root(m, root)) {
        mpz_class rest = m;
        const unsigned long k = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), root.get_mpz_t());
        pending.emplace_back(root, mult * k);
        pending.emplace_back(rest, mult);
        continue;
      }
      mpz_class factor = brent_rho(m, allowance);
      if (factor == 0) {
        mpz_class power;
        mpz_pow_ui(power.get_mpz_t(), m.get_mpz_t(), mult);
        result.cofactor *= power;
        continue;
      }
      pending.emplace_back(factor, mult);
      pending.emplace_back(m / factor, mult);
    }
  }

  // A prime may have been reached along two different split paths.
  for (auto& [p, pp] : found) result.factors.push_back(pp);
  if (cache) cache->insert(key, result);
  return result;
}

mpz_class sqrt_mod_prime(const mpz_class& a_in, const mpz_class& p) {
  mpz_class a = a_in % p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  mpz_class r;
  if (p % 4 == 3) {
    mpz_class e = (p + 1) / 4;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  }
  // Tonelli-Shanks.
  mpz_class q = p - 1;
  const unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
  mpz_class z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  mpz_class c, t, b, exp;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  exp = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), exp.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    mpz_class t2 = t;
    while (t2 != 1) {
      t2 = t2 * t2 % p;
      ++i;
    }
    b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
    r = r * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return r;
}

}  // namespace zsig
