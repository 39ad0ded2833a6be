#include "zsiglab/quadratic.hpp"

#include <algorithm>
#include <set>

#include "zsiglab/error.hpp"
#include "zsiglab/primdiv.hpp"

namespace zsig {

namespace {

// Primes with negative valuation in any of xs (all found from denominators).
std::vector<PrimeOfK> denominator_primes(const std::vector<FieldElement>& xs, const NumberField& K,
                                         const FactorBudget& budget, FactorCache* cache) {
  std::set<mpz_class> rational;
  for (const auto& x : xs) {
    const mpz_class m = x.denominator();
    if (m == 1) continue;
    const IntegerFactorization fm = factor_integer(m, budget, cache);
    if (!fm.complete()) throw Error(ErrorKind::BudgetExceeded, "denominator " + m.get_str() + " not factored");
    for (const auto& pp : fm.factors) rational.insert(pp.prime);
  }
  std::vector<PrimeOfK> S;
  for (const auto& p : rational)
    for (const PrimeOfK& P : primes_above(K, p))
      if (std::any_of(xs.begin(), xs.end(), [&](const FieldElement& x) { return !x.is_zero() && valuation(x, P) < 0; }))
        S.push_back(P);
  return S;
}

FieldElement power(const PrimeOfK& P, long e) {
  const FieldElement base = P.generator.pow(static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? base.inverse() : base;
}

}  // namespace

bool SUnitDecomposition::valid() const {
  if (!(reconstruct() == value)) return false;
  if (!d_part.is_integral() || !y.is_integral()) return false;
  auto in_S = [&](const PrimeOfK& P) { return std::find(S.begin(), S.end(), P) != S.end(); };
  const ValuationTable dt = factor_element(d_part);
  for (const auto& [P, e] : dt.entries) {
    if (in_S(P)) return false;
    if (e < 0 || e > l - 1) return false;
  }
  // u is an S-unit: no support off S
  const ValuationTable ut = factor_element(u);
  for (const auto& [P, e] : ut.entries)
    if (!in_S(P)) return false;
  return true;
}

SUnitDecomposition decompose(const UnicriticalMap& f, const FieldElement& alpha, int n, int l,
                             const FactorBudget& budget, FactorCache* cache) {
  if (l < 2) throw Error(ErrorKind::Precondition, "l must be at least 2");
  const OrbitTable orbit = iterate(f, alpha, n);
  const FieldElement& value = orbit.at(n);
  if (value.is_zero()) throw Error(ErrorKind::ZeroIterate, "f^n(alpha) = 0");
  const NumberField& K = f.K;

  SUnitDecomposition dec;
  dec.l = l;
  dec.value = value;
  dec.S = denominator_primes({orbit.start, f.gamma, f.c}, K, budget, cache);
  const ValuationTable t = factor_element(value, budget, cache);
  FieldElement d_part(K, 1), y(K, 1);
  for (const auto& [P, e] : t.entries) {
    if (std::find(dec.S.begin(), dec.S.end(), P) != dec.S.end()) continue;
    if (e < 0) throw Error(ErrorKind::Precondition, "negative valuation off S at " + P.to_string());
    d_part *= power(P, e % l);
    y *= power(P, e / l);
  }
  dec.d_part = canonical_associate(d_part);
  dec.y = canonical_associate(y);
  dec.u = value / (dec.d_part * dec.y.pow(static_cast<unsigned long>(l)));
  return dec;
}

BoundCheck check_unit_height_bound(const SUnitDecomposition& dec, const UnicriticalMap& f, const FieldElement& alpha,
                                   double C, double slack) {
  const double lm1 = dec.l - 1;
  return at_most_check(h(dec.u), C * lm1 * lm1 * (h(alpha) + h(f.gamma) + h(f.c)), slack);
}

WitnessCurve heightunif_witness(const UnicriticalMap& f, const FieldElement& alpha, int n, const FactorBudget& budget,
                                FactorCache* cache) {
  if (f.d != 2) throw Error(ErrorKind::DegreeMismatch, "witness curves are built for d = 2");
  if (n < 3) throw Error(ErrorKind::Precondition, "witness curves need n >= 3");
  const SUnitDecomposition dec = decompose(f, alpha, n, 2, budget, cache);
  const FieldElement ud = dec.u * dec.d_part;
  WitnessCurve w;
  w.F = f.iterate_polynomial(3) * ud;
  w.x = iterate(f, alpha, n - 3).at(n - 3);
  w.y = ud * dec.y;
  w.disc = discriminant(w.F);
  w.disc_nonzero = !w.disc.is_zero();
  if (!w.disc_nonzero) throw Error(ErrorKind::DegenerateDiscriminant, "disc(u d f^3) = 0 for " + f.to_string());
  return w;
}

BoundCheck check_Y1_mass(const UnicriticalMap& f, const FieldElement& alpha, int n, double epsilon,
                         const FactorBudget& budget, FactorCache* cache, double slack) {
  if (f.d != 2) throw Error(ErrorKind::DegreeMismatch, "Y1 mass check is stated for d = 2");
  const OrbitTable orbit = iterate(f, alpha, n);
  const SupportClassification cls = classify_support(orbit, n, budget, cache);
  return greater_check(cls.mass1, epsilon * h(orbit.at(n)), slack);
}

}  // namespace zsig
