#pragma once

#include <vector>

#include "zsiglab/dynamics.hpp"
#include "zsiglab/heights.hpp"
#include "zsiglab/polynomial.hpp"

namespace zsig {

// f^n(alpha) = u * d_part * y^l, with S the primes where alpha, gamma or c has
// negative valuation. In a PID the S-part of f^n(alpha) goes entirely into u.
struct SUnitDecomposition {
  FieldElement u;       // S-unit
  FieldElement d_part;  // in O_K, exponents in [0, l-1] off S, 0 on S
  FieldElement y;       // canonical associate, in O_K
  int l = 2;
  std::vector<PrimeOfK> S;
  FieldElement value;   // f^n(alpha)

  FieldElement reconstruct() const { return u * d_part * y.pow(static_cast<unsigned long>(l)); }
  // Checks the reconstruction and both exponent windows.
  bool valid() const;
};

SUnitDecomposition decompose(const UnicriticalMap& f, const FieldElement& alpha, int n, int l,
                             const FactorBudget& budget = {}, FactorCache* cache = nullptr);

// h(u) <= C (l-1)^2 (h(alpha) + h(gamma) + h(c))
BoundCheck check_unit_height_bound(const SUnitDecomposition& dec, const UnicriticalMap& f, const FieldElement& alpha,
                                   double C, double slack = 1e-9);

// Y^2 = F(X) with F = u d f^3(X) and the point (f^(n-3)(alpha), u d y).
struct WitnessCurve {
  Polynomial F;
  FieldElement x, y;
  FieldElement disc;
  bool disc_nonzero = false;

  bool on_curve() const { return y * y == F.evaluate(x); }
};
WitnessCurve heightunif_witness(const UnicriticalMap& f, const FieldElement& alpha, int n,
                                const FactorBudget& budget = {}, FactorCache* cache = nullptr);

// Y1 mass > eps h(f^n(alpha)), d = 2 only.
BoundCheck check_Y1_mass(const UnicriticalMap& f, const FieldElement& alpha, int n, double epsilon,
                         const FactorBudget& budget = {}, FactorCache* cache = nullptr, double slack = 1e-9);

}  // namespace zsig
