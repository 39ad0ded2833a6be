#include "zsiglab/heights.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "zsiglab/error.hpp"

namespace zsig {

namespace {

const double kLog2 = std::log(2.0);

// Scale z to integral coordinates with coprime ideal: w_i = M z_i / G.
struct PrimitiveVector {
  std::vector<FieldElement> w;  // zero coordinates kept as zero
  mpz_class M;                  // common denominator
  FieldElement G;               // gcd of the M z_i
};

PrimitiveVector make_primitive(const std::vector<FieldElement>& z) {
  NumberField K;
  for (const auto& x : z)
    if (!x.field().is_rational()) K = x.field();
  PrimitiveVector out;
  out.M = 1;
  for (const auto& x : z) {
    const mpz_class den = x.denominator();
    mpz_lcm(out.M.get_mpz_t(), out.M.get_mpz_t(), den.get_mpz_t());
  }
  const FieldElement scale = FieldElement::integer(K, out.M);
  FieldElement g(K, 0);
  std::vector<FieldElement> y;
  for (const auto& x : z) {
    y.push_back(x * scale);
    g = ok_gcd(g, y.back());
  }
  if (g.is_zero()) throw Error(ErrorKind::AllZero, "all coordinates are zero");
  out.G = g;
  for (auto& v : y) out.w.push_back(v.is_zero() ? v : *exact_divide(v, g));
  return out;
}

}  // namespace

BoundCheck greater_check(double lhs, double rhs, double slack) {
  return BoundCheck{lhs - rhs > -slack, lhs - rhs, lhs, rhs};
}

BoundCheck at_most_check(double lhs, double rhs, double slack) {
  return BoundCheck{rhs - lhs > -slack, rhs - lhs, lhs, rhs};
}

HeightValue weil_height(const FieldElement& x) {
  if (x.is_zero()) return {};
  if (x.field().is_rational()) {
    // one place per rational prime plus the real place
    const mpq_class& q = x.a();
    return {log_abs(q.get_den()) + std::max(0.0, log_abs(q)), 0};
  }
  // Finite places: sum of log #k_p * max(0, -v_p) is log N(denominator ideal).
  // The single complex place has local degree 2.
  const FieldElement den = denominator_content(x);
  const double finite = log_abs(integral_norm(den)) / 2;
  const double archimedean = std::max(0.0, log_abs(x.norm()) / 2);
  return {finite + archimedean, 0};
}

double h(const FieldElement& x) { return weil_height(x).value; }

HeightValue weil_height_by_valuations(const FieldElement& x, const FactorBudget& budget, FactorCache* cache) {
  if (x.is_zero()) return {};
  const NumberField& K = x.field();
  double finite = 0;
  const mpz_class m = x.denominator();
  if (m != 1) {
    const IntegerFactorization fm = factor_integer(m, budget, cache);
    if (!fm.complete()) throw Error(ErrorKind::BudgetExceeded, "denominator " + m.get_str() + " not factored");
    for (const auto& pp : fm.factors)
      for (const PrimeOfK& P : primes_above(K, pp.prime)) {
        const long v = valuation(x, P);
        if (v < 0) finite -= static_cast<double>(v) * P.weight();
      }
  }
  double archimedean = 0;
  for (double l : archimedean_logs(x)) archimedean += std::max(l, 0.0);
  return {finite + archimedean / K.degree(), 0};
}

HeightValue tuple_height(const std::vector<FieldElement>& z) {
  const PrimitiveVector pv = make_primitive(z);
  // With coprime integral w_i the finite part vanishes and the height is the
  // largest archimedean size.
  if (pv.G.field().is_rational()) {
    mpz_class best = 0;
    for (const auto& w : pv.w) best = std::max(best, mpz_class(abs(w.a().get_num())));
    return {log_abs(best), 0};
  }
  mpz_class best = 0;
  for (const auto& w : pv.w)
    if (!w.is_zero()) best = std::max(best, integral_norm(w));
  return {log_abs(best) / 2, 0};
}

double radical(const std::vector<FieldElement>& z, const FactorBudget& budget, FactorCache* cache) {
  for (const auto& x : z)
    if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "radical with a zero coordinate");
  if (z.empty()) return 0;
  const PrimitiveVector pv = make_primitive(z);
  const NumberField K = pv.G.field();
  // Valuations differ at p exactly when p divides some w_i (the w_i have no common prime).
  std::set<mpz_class> rational_primes;
  for (const auto& w : pv.w) {
    const mpz_class n = K.is_rational() ? mpz_class(w.a().get_num()) : integral_norm(w);
    if (abs(n) == 1) continue;
    const IntegerFactorization f = factor_integer(n, budget, cache);
    if (!f.complete()) throw Error(ErrorKind::BudgetExceeded, "radical: norm " + n.get_str() + " not factored");
    for (const auto& pp : f.factors) rational_primes.insert(pp.prime);
  }
  double total = 0;
  for (const auto& p : rational_primes)
    for (const PrimeOfK& P : primes_above(K, p))
      for (const auto& w : pv.w)
        if (valuation(w, P) > 0) {
          total += P.weight();
          break;
        }
  return total;
}

double positive_divisor_mass(const FieldElement& x) {
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "positive_divisor_mass(0)");
  const FieldElement num = numerator_content(x);
  if (x.field().is_rational()) return log_abs(num.a());
  return log_abs(integral_norm(num)) / 2;
}

BoundCheck check_divisor_height(const FieldElement& x, double slack) {
  return at_most_check(positive_divisor_mass(x), h(x), slack);
}

HeightValue canonical_height(const UnicriticalMap& f, const FieldElement& alpha, int n_iter, std::size_t digit_cap) {
  if (n_iter < 1) throw Error(ErrorKind::Precondition, "n_iter must be positive");
  const OrbitTable orbit = iterate(f, alpha, n_iter, digit_cap);
  if (orbit.overflow_at)
    throw Error(ErrorKind::OperandOverflow, "orbit exceeds digit cap at level " + std::to_string(*orbit.overflow_at));
  const double scale = std::pow(static_cast<double>(f.d), n_iter);
  // f~^n(alpha - gamma) = f^n(alpha) - gamma
  const double est = h(orbit.at(n_iter) - f.gamma) / scale;
  const double tail = (h(f.shift()) + kLog2) / ((f.d - 1) * scale);
  return {est, tail};
}

BoundCheck check_triangle(const std::vector<FieldElement>& alphas, double slack) {
  FieldElement sum;
  double rhs = alphas.empty() ? 0.0 : std::log(static_cast<double>(alphas.size()));
  for (const auto& a : alphas) {
    sum += a;
    rhs += h(a);
  }
  return at_most_check(h(sum), rhs, slack);
}

OrbitBoundsCheck check_orbit_bounds(const UnicriticalMap& f, const FieldElement& alpha, int n, double slack) {
  if (n < 1) throw Error(ErrorKind::Precondition, "n must be positive");
  const OrbitTable orbit = iterate(f, alpha, n);
  OrbitBoundsCheck out;
  out.height = h(orbit.at(n));
  out.shifted = !f.gamma.is_zero();
  const double dn = std::pow(static_cast<double>(f.d), n);
  const double hcg = h(f.shift());
  const double hag = h(orbit.start - f.gamma);
  const double shift_terms = out.shifted ? h(f.gamma) + kLog2 : 0.0;
  const double lower = dn * (hag - 2.0 / (f.d - 1) * std::max(1.0, hcg)) - shift_terms;
  const double upper = dn / (f.d - 1) * (kLog2 + hcg) + dn * hag + shift_terms;
  out.lower = greater_check(out.height, lower, slack);
  // strict "<" upstairs; reported as lhs <= rhs with the same margin sign
  out.upper = at_most_check(out.height, upper, slack);
  return out;
}

double polynomial_height(const Polynomial& p) {
  double best = 0;
  for (const auto& a : p.coefficients()) best = std::max(best, h(a));
  return best;
}

BoundCheck check_height_growth(const UnicriticalMap& f, const FieldElement& alpha, int n, int i, double C1, double C2,
                               double slack) {
  if (n < 1 || i < 1) throw Error(ErrorKind::Precondition, "n and i must be positive");
  const double hfi = polynomial_height(f.iterate_polynomial(i));
  const OrbitTable orbit = iterate(f, alpha, n);
  return greater_check(h(orbit.at(n)), C1 * hfi + C2, slack);
}

SqueezeCheck check_height_squeeze(const UnicriticalMap& f, const FieldElement& alpha, int n, double epsilon,
                                  double slack) {
  if (f.d != 2) throw Error(ErrorKind::DegreeMismatch, "height squeeze is stated for d = 2");
  if (n < 2) throw Error(ErrorKind::Precondition, "n must be at least 2");
  const OrbitTable orbit = iterate(f, alpha, n);
  const double hn = h(orbit.at(n));
  const double hprev2 = 2 * h(orbit.at(n - 1));
  return SqueezeCheck{at_most_check((1 - epsilon) * hn, hprev2, slack), at_most_check(hprev2, (1 + epsilon) * hn, slack)};
}

double empirical_kappa(const UnicriticalMap& f, const FieldElement& alpha, int n) {
  const OrbitTable orbit = iterate(f, alpha, n);
  return h(orbit.at(n)) / (std::pow(static_cast<double>(f.d), n) * std::max(1.0, h(f.shift())));
}

}  // namespace zsig
