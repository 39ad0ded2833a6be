#pragma once

#include <string>
#include <vector>

#include "zsiglab/dynamics.hpp"
#include "zsiglab/heights.hpp"

namespace zsig {

// a + b = s, all nonzero.
struct AbcTriple {
  int n = 0;
  FieldElement a, b, s;
  double h_proj = 0;
  double rad = 0;
  double quality = 0;
  bool infinite_quality = false;  // rad = 0

  void recompute_quality();
};

// a = (f^(n-1)(alpha) - gamma)^d, b = c, s = f^n(alpha). Throws DegenerateTriple
// if any part is zero.
AbcTriple orbit_abc_triple(const UnicriticalMap& f, const FieldElement& alpha, int n, const FactorBudget& budget = {},
                           FactorCache* cache = nullptr);

// sum over v_p(f^n) > 0 of N_p  >  (d - 1 - eps) h(f^(n-1)(alpha))
BoundCheck check_rad_lower_bound(const UnicriticalMap& f, const FieldElement& alpha, int n, double epsilon,
                                 const FactorBudget& budget = {}, FactorCache* cache = nullptr, double slack = 1e-9);
// imprimitive mass  <=  delta h(f^n(alpha))
BoundCheck check_imprimitive_bound(const UnicriticalMap& f, const FieldElement& alpha, int n, double delta,
                                   const FactorBudget& budget = {}, FactorCache* cache = nullptr,
                                   double slack = 1e-9);

struct QualityScan {
  std::vector<AbcTriple> triples;                 // by quality, descending
  std::vector<std::pair<int, std::string>> skipped;  // level, reason
};
QualityScan quality_scan(const UnicriticalMap& f, const FieldElement& alpha, int n_from, int n_to,
                         const FactorBudget& budget = {}, FactorCache* cache = nullptr);

}  // namespace zsig
