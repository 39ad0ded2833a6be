#include "zsiglab/primdiv.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "zsiglab/error.hpp"

namespace zsig {

namespace {

PrimeExponents positive_entries(const PartialFactorization& pf) {
  PrimeExponents out;
  for (const auto& e : pf.entries)
    if (e.second > 0) out.push_back(e);
  return out;
}

const FieldElement& nonzero_level(const OrbitTable& orbit, int n) {
  if (n < 1 || n > orbit.last_level()) orbit.at(n);  // throws with the usual message
  const FieldElement& v = orbit.at(n);
  if (v.is_zero()) throw Error(ErrorKind::ZeroIterate, "f^" + std::to_string(n) + "(alpha) = 0");
  return v;
}

// Primitive part N and imprimitive content Q with numerator content = N * Q.
std::pair<FieldElement, FieldElement> sieve(const OrbitTable& orbit, int n) {
  const FieldElement& value = nonzero_level(orbit, n);
  const FieldElement full = numerator_content(value);
  FieldElement N = full;
  for (int m = 1; m < n; ++m) {
    const FieldElement& earlier = orbit.at(m);
    if (earlier.is_zero()) continue;
    const FieldElement Nm = numerator_content(earlier);
    if (is_unit(Nm)) continue;
    while (true) {
      const FieldElement g = ok_gcd(N, Nm);
      if (is_unit(g)) break;
      N = *exact_divide(N, g);
    }
    if (is_unit(N)) break;
  }
  N = canonical_associate(N);
  return {N, canonical_associate(*exact_divide(full, N))};
}

}  // namespace

const char* to_string(FactorStatus s) { return s == FactorStatus::Exact ? "Exact" : "Partial"; }

PositiveSupport positive_support(const FieldElement& x, const FactorBudget& budget, FactorCache* cache) {
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "positive_support(0)");
  const PartialFactorization pf = factor_element_partial(numerator_content(x), budget, cache);
  PositiveSupport out;
  out.entries = positive_entries(pf);
  out.status = pf.complete ? FactorStatus::Exact : FactorStatus::Partial;
  out.unfactored = pf.remainder;
  out.probable = pf.probable;
  return out;
}

FieldElement primitive_part(const OrbitTable& orbit, int n) {
  if (n < 2) throw Error(ErrorKind::Precondition, "primitive parts are defined for n >= 2");
  return sieve(orbit, n).first;
}

PrimitivePrimes primitive_prime_divisors(const OrbitTable& orbit, int n, const FactorBudget& budget,
                                         FactorCache* cache) {
  const FieldElement prim = primitive_part(orbit, n);
  const FieldElement& value = orbit.at(n);
  PrimitivePrimes out;
  if (is_unit(prim)) {
    out.unfactored = FieldElement(prim.field(), 1);
    return out;
  }
  const PartialFactorization pf = factor_element_partial(prim, budget, cache);
  for (const auto& [P, e] : positive_entries(pf)) out.primes.emplace_back(P, valuation(value, P));
  out.status = pf.complete ? FactorStatus::Exact : FactorStatus::Partial;
  out.unfactored = pf.remainder;
  out.probable = pf.probable;
  return out;
}

std::vector<int> ZsigmondyReport::members() const {
  std::vector<int> out;
  for (const auto& l : levels)
    if (l.in_zsigmondy) out.push_back(l.n);
  return out;
}

bool ZsigmondyReport::all_exact() const {
  return std::all_of(levels.begin(), levels.end(), [](const ZsigmondyLevel& l) { return l.status == FactorStatus::Exact; });
}

ZsigmondyLevel zsigmondy_level(const OrbitTable& orbit, int n, const FactorBudget& budget,
                               const ZsigmondyOptions& options, FactorCache* cache) {
  ZsigmondyLevel lv;
  lv.n = n;
  lv.value = orbit.at(n);
  if (lv.value.is_zero()) {
    lv.zero_value = true;
    lv.in_zsigmondy = true;
    lv.primitive = lv.value;
    return lv;
  }
  lv.primitive = primitive_part(orbit, n);
  lv.in_zsigmondy = is_unit(lv.primitive);
  if (lv.in_zsigmondy || (!options.list_primes && !options.find_witness)) return lv;

  auto first_witness = [&](const PrimeExponents& ps) -> std::optional<PrimeOfK> {
    for (const auto& [P, e] : ps) {
      if (e != 1) continue;
      // re-verify primitivity directly
      bool ok = true;
      for (int m = 1; m < n && ok; ++m)
        if (!orbit.at(m).is_zero() && valuation(orbit.at(m), P) > 0) ok = false;
      if (ok) return P;
    }
    return std::nullopt;
  };

  if (options.find_witness && !options.list_primes) {
    // cheap pass: trial division only
    FactorBudget trial = budget;
    trial.rho_iterations = 0;
    const PartialFactorization quick = factor_element_partial(lv.primitive, trial, cache);
    PrimeExponents found;
    for (const auto& [P, e] : positive_entries(quick)) found.emplace_back(P, valuation(lv.value, P));
    if ((lv.mult_one_witness = first_witness(found))) return lv;
  }

  PrimitivePrimes pp = primitive_prime_divisors(orbit, n, budget, cache);
  if (options.find_witness) lv.mult_one_witness = first_witness(pp.primes);
  lv.status = (lv.mult_one_witness || pp.status == FactorStatus::Exact) ? FactorStatus::Exact : FactorStatus::Partial;
  if (options.list_primes) {
    lv.primes = std::move(pp);
    if (lv.primes->status == FactorStatus::Partial) lv.status = FactorStatus::Partial;
  }
  return lv;
}

ZsigmondyReport zsigmondy_set(const UnicriticalMap& f, const FieldElement& alpha, int n_max, const FactorBudget& budget,
                              const ZsigmondyOptions& options, FactorCache* cache) {
  if (n_max < 2) throw Error(ErrorKind::Precondition, "n_max must be at least 2");
  const OrbitTable orbit = iterate(f, alpha, n_max);
  if (orbit.overflow_at)
    throw Error(ErrorKind::OperandOverflow, "orbit exceeds digit cap at level " + std::to_string(*orbit.overflow_at));
  FactorCache local;
  if (!cache) cache = &local;
  ZsigmondyReport rep;
  rep.map = f;
  rep.start = orbit.start;
  rep.n_max = n_max;
  rep.level_one = orbit.at(1);
  rep.levels.resize(static_cast<std::size_t>(n_max - 1));
  parallel_for(rep.levels.size(), options.jobs, [&](std::size_t k) {
    rep.levels[k] = zsigmondy_level(orbit, static_cast<int>(k) + 2, budget, options, cache);
  });
  return rep;
}

SupportClassification classify_support(const OrbitTable& orbit, int n, const FactorBudget& budget, FactorCache* cache) {
  const FieldElement& value = nonzero_level(orbit, n);
  const PositiveSupport sup = positive_support(value, budget, cache);
  if (sup.status != FactorStatus::Exact)
    throw Error(ErrorKind::BudgetExceeded, "f^" + std::to_string(n) + "(alpha) not fully factored");
  SupportClassification out;
  for (const auto& [P, e] : sup.entries) {
    if (e == 1) {
      out.Y1.emplace_back(P, e);
      out.mass1 += P.weight();
    } else if (e == 2) {
      out.Y2.emplace_back(P, e);
      out.mass2 += P.weight();
    } else {
      out.Y3plus.emplace_back(P, e);
      out.mass3 += P.weight();
    }
  }
  return out;
}

double imprimitive_mass(const OrbitTable& orbit, int n, const FactorBudget& budget, FactorCache* cache) {
  if (n < 2) {
    nonzero_level(orbit, n);
    return 0;  // nothing earlier to recur from
  }
  const FieldElement imprim = sieve(orbit, n).second;
  if (is_unit(imprim)) return 0;
  const PartialFactorization pf = factor_element_partial(imprim, budget, cache);
  if (!pf.complete) throw Error(ErrorKind::BudgetExceeded, "imprimitive part of level " + std::to_string(n) + " not factored");
  double mass = 0;
  for (const auto& [P, e] : positive_entries(pf)) mass += P.weight();
  return mass;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  // one slot per index, so the error rethrown is the lowest-index one regardless of timing
  std::vector<std::exception_ptr> failures(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace zsig
