#pragma once

// Logarithmic heights. Everything is in natural-log units.

#include <vector>

#include "zsiglab/dynamics.hpp"
#include "zsiglab/numfield.hpp"

namespace zsig {

struct HeightValue {
  double value = 0;
  double error_bound = 0;  // nonzero only for canonical-height estimates
};

struct BoundCheckConfig {
  double epsilon = 0.5;
  double delta = 0.25;
  double tau = 0;
  double slack = 1e-9;
};

// margin > 0 means the inequality holds with room to spare, whichever
// direction it points. holds = margin > -slack.
struct BoundCheck {
  bool holds = false;
  double margin = 0;
  double lhs = 0;
  double rhs = 0;
};

BoundCheck greater_check(double lhs, double rhs, double slack);  // lhs > rhs
BoundCheck at_most_check(double lhs, double rhs, double slack);  // lhs <= rhs

// Sum over places with local degrees; the finite part is log N of the
// denominator ideal, so no factorization is needed.
HeightValue weil_height(const FieldElement& x);
// Sum of -min{v_p, 0} N_p over factored denominator primes plus the
// per-embedding archimedean sum.
HeightValue weil_height_by_valuations(const FieldElement& x, const FactorBudget& budget = {},
                                      FactorCache* cache = nullptr);
double h(const FieldElement& x);  // shorthand for weil_height(x).value

// Projective height of (z_1 : ... : z_n); throws AllZero.
HeightValue tuple_height(const std::vector<FieldElement>& z);

// Sum of N_p over primes where the coordinates' valuations are not all equal.
double radical(const std::vector<FieldElement>& z, const FactorBudget& budget = {}, FactorCache* cache = nullptr);

// Sum of v_p(x) N_p over v_p(x) > 0, as (1/[K:Q]) log N(numerator ideal).
double positive_divisor_mass(const FieldElement& x);
// positive_divisor_mass(x) <= h(x)
BoundCheck check_divisor_height(const FieldElement& x, double slack = 1e-9);

// h(f~^n(alpha - gamma)) / d^n with the certified tail (h(c-gamma)+log 2)/((d-1) d^n).
HeightValue canonical_height(const UnicriticalMap& f, const FieldElement& alpha, int n_iter,
                             std::size_t digit_cap = kDefaultDigitCap);

// h(sum) <= log n + sum h(alpha_i)
BoundCheck check_triangle(const std::vector<FieldElement>& alphas, double slack = 1e-9);

struct OrbitBoundsCheck {
  BoundCheck lower;
  BoundCheck upper;
  double height = 0;  // h(f^n(alpha))
  bool shifted = false;  // gamma != 0, so the shift terms are included
};
// Lower and upper orbit-height bounds at level n. When gamma = 0 the
// h(gamma) + log 2 shift terms are dropped.
OrbitBoundsCheck check_orbit_bounds(const UnicriticalMap& f, const FieldElement& alpha, int n,
                                    double slack = 1e-9);

// max_i h(a_i)
double polynomial_height(const Polynomial& p);
// h(f^n(alpha)) > C1 h(f^i) + C2
BoundCheck check_height_growth(const UnicriticalMap& f, const FieldElement& alpha, int n, int i, double C1,
                               double C2, double slack = 1e-9);

struct SqueezeCheck {
  BoundCheck lower;  // (1-eps) h(f^n) <= 2 h(f^(n-1))
  BoundCheck upper;  // 2 h(f^(n-1)) <= (1+eps) h(f^n)
  bool holds() const { return lower.holds && upper.holds; }
};
SqueezeCheck check_height_squeeze(const UnicriticalMap& f, const FieldElement& alpha, int n, double epsilon,
                                  double slack = 1e-9);

// Observed h(f^n(alpha)) / (d^n max{1, h(c - gamma)}).
double empirical_kappa(const UnicriticalMap& f, const FieldElement& alpha, int n);

}  // namespace zsig
