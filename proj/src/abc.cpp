#include "zsiglab/abc.hpp"

#include <algorithm>

#include "zsiglab/error.hpp"
#include "zsiglab/primdiv.hpp"

namespace zsig {

void AbcTriple::recompute_quality() {
  infinite_quality = rad <= 0;
  quality = infinite_quality ? 0 : h_proj / rad;
}

AbcTriple orbit_abc_triple(const UnicriticalMap& f, const FieldElement& alpha, int n, const FactorBudget& budget,
                           FactorCache* cache) {
  if (n < 1) throw Error(ErrorKind::Precondition, "n must be positive");
  const OrbitTable orbit = iterate(f, alpha, n);
  const FieldElement& x = orbit.at(n - 1);
  AbcTriple t;
  t.n = n;
  t.a = (x - f.gamma).pow(static_cast<unsigned long>(f.d));
  t.b = f.c;
  t.s = orbit.at(n);
  if (t.a.is_zero()) throw Error(ErrorKind::DegenerateTriple, "f^(n-1)(alpha) = gamma");
  if (t.b.is_zero()) throw Error(ErrorKind::DegenerateTriple, "c = 0");
  if (t.s.is_zero()) throw Error(ErrorKind::DegenerateTriple, "f^n(alpha) = 0");
  t.h_proj = tuple_height({t.a, t.b, t.s}).value;
  t.rad = radical({t.a, t.b, t.s}, budget, cache);
  t.recompute_quality();
  return t;
}

BoundCheck check_rad_lower_bound(const UnicriticalMap& f, const FieldElement& alpha, int n, double epsilon,
                                 const FactorBudget& budget, FactorCache* cache, double slack) {
  if (n < 1) throw Error(ErrorKind::Precondition, "n must be positive");
  const OrbitTable orbit = iterate(f, alpha, n);
  const FieldElement& value = orbit.at(n);
  if (value.is_zero()) throw Error(ErrorKind::ZeroIterate, "f^n(alpha) = 0");
  const PositiveSupport sup = positive_support(value, budget, cache);
  if (sup.status != FactorStatus::Exact)
    throw Error(ErrorKind::BudgetExceeded, "f^" + std::to_string(n) + "(alpha) not fully factored");
  double lhs = 0;
  for (const auto& [P, e] : sup.entries) lhs += P.weight();
  return greater_check(lhs, (f.d - 1 - epsilon) * h(orbit.at(n - 1)), slack);
}

BoundCheck check_imprimitive_bound(const UnicriticalMap& f, const FieldElement& alpha, int n, double delta,
                                   const FactorBudget& budget, FactorCache* cache, double slack) {
  const OrbitTable orbit = iterate(f, alpha, n);
  const FieldElement& value = orbit.at(n);
  if (value.is_zero()) throw Error(ErrorKind::ZeroIterate, "f^n(alpha) = 0");
  return at_most_check(imprimitive_mass(orbit, n, budget, cache), delta * h(value), slack);
}

QualityScan quality_scan(const UnicriticalMap& f, const FieldElement& alpha, int n_from, int n_to,
                         const FactorBudget& budget, FactorCache* cache) {
  QualityScan scan;
  for (int n = std::max(1, n_from); n <= n_to; ++n) {
    try {
      scan.triples.push_back(orbit_abc_triple(f, alpha, n, budget, cache));
    } catch (const Error& e) {
      scan.skipped.emplace_back(n, e.what());
    }
  }
  std::stable_sort(scan.triples.begin(), scan.triples.end(), [](const AbcTriple& x, const AbcTriple& y) {
    if (x.infinite_quality != y.infinite_quality) return x.infinite_quality;
    return x.quality > y.quality;
  });
  return scan;
}

}  // namespace zsig
