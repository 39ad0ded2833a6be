#include "zsiglab/galois.hpp"

#include <algorithm>
#include <cmath>

#include "zsiglab/error.hpp"
#include "zsiglab/primdiv.hpp"

namespace zsig {

namespace {

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  return mpq_class(n, d);
}

mpz_class pow_z(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

FieldElement abs_norm_sign(const FieldElement& x) { return sgn(x.a()) < 0 ? -x : x; }

bool equal_up_to_sign(const FieldElement& x, const FieldElement& y) { return x == y || x == -y; }

// d^(d^i) as an exact integer.
mpz_class leading_power(int d, int i) { return pow_z(d, pow_z(d, static_cast<unsigned long>(i)).get_ui()); }

}  // namespace

QuadExtElement QuadExtElement::operator*(const QuadExtElement& o) const {
  return QuadExtElement{D, a * o.a + b * o.b * D, a * o.b + b * o.a};
}

std::string QuadExtElement::to_string() const {
  std::string out = a.get_str();
  if (sgn(b) != 0) out += (sgn(b) < 0 ? " - " : " + ") + mpq_class(abs(b)).get_str() + "*sqrt(" + D.get_str() + ")";
  return out;
}

DiscComparison disc_compare(const UnicriticalMap& f, int i) {
  if (i < 1) throw Error(ErrorKind::Precondition, "iterate index must be positive");
  const NumberField& K = f.K;
  DiscComparison out;
  out.direct = discriminant(f.iterate_polynomial(i));
  const FieldElement prev_direct = i == 1 ? FieldElement(K, 1) : discriminant(f.iterate_polynomial(i - 1));
  const FieldElement prev_rec = i == 1 ? FieldElement(K, 1) : disc_recursive_abs(f, i - 1);
  const FieldElement fi_gamma = iterate(f, f.gamma, i).at(i);
  const FieldElement lead = FieldElement::integer(K, leading_power(f.d, i));
  const FieldElement tail = fi_gamma.pow(static_cast<unsigned long>(f.d - 1));
  out.recursive = lead * prev_rec.pow(static_cast<unsigned long>(f.d)) * tail;
  out.literal = lead * prev_direct * tail;
  out.agree_up_to_sign = equal_up_to_sign(out.direct, out.recursive);
  if (out.agree_up_to_sign) out.recursive = out.direct;
  out.literal_agrees = equal_up_to_sign(out.direct, out.literal);
  return out;
}

FieldElement disc_recursive_abs(const UnicriticalMap& f, int i) {
  const NumberField& K = f.K;
  const OrbitTable orbit = iterate(f, f.gamma, i);
  FieldElement disc(K, 1);
  for (int k = 1; k <= i; ++k) {
    disc = FieldElement::integer(K, leading_power(f.d, k)) * disc.pow(static_cast<unsigned long>(f.d)) *
           orbit.at(k).pow(static_cast<unsigned long>(f.d - 1));
    disc = abs_norm_sign(disc);
  }
  return disc;
}

FieldElement disc_iterate(const UnicriticalMap& f, int i) {
  const DiscComparison cmp = disc_compare(f, i);
  if (!cmp.agree_up_to_sign)
    throw Error(ErrorKind::Precondition, "discriminant recursion disagrees with the resultant at i = " +
                                             std::to_string(i) + " for " + f.to_string());
  return cmp.direct;
}

std::optional<FieldElement> sqrt_in_field(const FieldElement& x) {
  const NumberField& K = x.field();
  if (x.is_zero()) return x;
  if (K.is_rational()) {
    auto r = rational_sqrt(x.a());
    if (!r) return std::nullopt;
    return FieldElement::rational(*r);
  }
  // rewrite in the basis {1, sqrt(-D)}
  const long D = K.radicand();
  const bool half = K.omega_trace() == 1;
  const mpq_class A = half ? x.a() + x.b() / 2 : x.a();
  const mpq_class B = half ? x.b() / 2 : x.b();
  const auto r = rational_sqrt(A * A + B * B * D);
  if (!r) return std::nullopt;
  const auto X = rational_sqrt((*r + A) / 2);
  auto Y = rational_sqrt((*r - A) / (2 * D));
  if (!X || !Y) return std::nullopt;
  if (sgn(B) < 0) *Y = -*Y;
  // X + Y sqrt(-D) back in the {1, w} basis
  const FieldElement root = half ? FieldElement(K, *X - *Y, 2 * *Y) : FieldElement(K, *X, *Y);
  if (!(root * root == x)) return std::nullopt;
  return root;
}

mpz_class squarefree_core(const mpq_class& q, const FactorBudget& budget) {
  if (sgn(q) == 0) throw Error(ErrorKind::ZeroElement, "squarefree core of 0");
  const mpz_class n = q.get_num() * q.get_den();
  const IntegerFactorization fz = factor_integer(n, budget);
  if (!fz.complete()) throw Error(ErrorKind::BudgetExceeded, "squarefree core: " + n.get_str() + " not factored");
  mpz_class core = sgn(n);
  for (const auto& pp : fz.factors)
    if (pp.exponent % 2 == 1) core *= pp.prime;
  return core;
}

std::string StabilityReport::to_string() const {
  std::string s;
  switch (status) {
    case Status::StableUpTo: s = "StableUpTo(" + std::to_string(checked_up_to) + ")"; break;
    case Status::Failed: s = "Failed(" + std::to_string(failed_at) + ")"; break;
    case Status::Reducible: s = "Reducible"; break;
  }
  if (critical_orbit_pcf) s += " [PCF]";
  return s;
}

StabilityReport stability_test(const UnicriticalMap& f, int n_max) {
  if (f.d != 2) throw Error(ErrorKind::DegreeMismatch, "stability test is for d = 2");
  StabilityReport rep;
  rep.critical_orbit_pcf = detect_periodicity(f, f.gamma).status == PeriodicityVerdict::Status::PCF;
  // roots gamma +- sqrt(-c)
  if (auto r = sqrt_in_field(-f.c)) {
    rep.status = StabilityReport::Status::Reducible;
    rep.square_root = *r;
    return rep;
  }
  const OrbitTable orbit = iterate(f, f.gamma, n_max);
  rep.checked_up_to = std::min(n_max, orbit.last_level());
  for (int n = 2; n <= rep.checked_up_to; ++n) {
    if (auto r = sqrt_in_field(orbit.at(n))) {
      rep.status = StabilityReport::Status::Failed;
      rep.failed_at = n;
      rep.square_root = *r;
      rep.checked_up_to = n;
      return rep;
    }
  }
  return rep;
}

std::string MaximalityVerdict::to_string() const {
  switch (kind) {
    case Kind::Maximal:
      return witness_prime ? "Maximal(" + witness_prime->to_string() + ")" : "Maximal";
    case Kind::NotMaximal:
      return "NotMaximal";
    case Kind::Inconclusive:
      break;
  }
  return "Inconclusive";
}

bool contains_roots_of_unity(const NumberField& K, int d) {
  int mu = 2;
  if (K.radicand() == 1) mu = 4;
  if (K.radicand() == 3) mu = 6;
  return d >= 1 && mu % d == 0;
}

MaximalityVerdict maximality_sufficient(const UnicriticalMap& f, int n, const FactorBudget& budget, FactorCache* cache) {
  if (n < 2) throw Error(ErrorKind::Precondition, "the sufficient criterion starts at n = 2");
  MaximalityVerdict v;
  if (!contains_roots_of_unity(f.K, f.d)) {
    v.note = "K has no primitive " + std::to_string(f.d) + "-th root of unity";
    return v;
  }
  if (f.d != 2) {
    v.note = "stability is only tested for d = 2";
    return v;
  }
  const StabilityReport st = stability_test(f, n);
  if (st.status != StabilityReport::Status::StableUpTo || st.checked_up_to < n) {
    v.note = "stability not established up to n: " + st.to_string();
    return v;
  }
  const OrbitTable orbit = iterate(f, f.gamma, n);
  if (orbit.at(n).is_zero()) {
    v.note = "f^n(gamma) = 0";
    return v;
  }
  const PrimitivePrimes pp = primitive_prime_divisors(orbit, n, budget, cache);
  const mpz_class d = f.d;
  for (const auto& [P, e] : pp.primes) {
    if (e != 1) continue;
    if (mpz_divisible_p(d.get_mpz_t(), P.rational_prime.get_mpz_t())) continue;
    if (!f.c.is_zero() && valuation(f.c, P) < 0) continue;
    if (!f.gamma.is_zero() && valuation(f.gamma, P) < 0) continue;
    bool earlier = false;
    for (int i = 1; i < n && !earlier; ++i)
      earlier = !orbit.at(i).is_zero() && valuation(orbit.at(i), P) > 0;
    if (earlier) continue;
    v.kind = MaximalityVerdict::Kind::Maximal;
    v.witness_prime = P;
    v.note = "v_p(f^n(gamma)) = 1 at a primitive prime coprime to d";
    return v;
  }
  v.budget_exhausted = pp.status == FactorStatus::Partial;
  v.note = v.budget_exhausted ? "no witness among the primes found before the budget ran out"
                              : "no multiplicity-1 primitive prime coprime to d";
  return v;
}

bool is_square_in_quadratic(const mpq_class& D, const mpq_class& z) {
  if (sgn(z) == 0) return true;
  return rational_sqrt(z).has_value() || rational_sqrt(z * D).has_value();
}

std::optional<QuadExtElement> sqrt_in_quadratic(const mpz_class& D, const mpq_class& z) {
  if (auto q = rational_sqrt(z)) return QuadExtElement{D, *q, 0};
  // z = (q/D)^2 * D when zD = q^2
  if (auto q = rational_sqrt(z * D)) return QuadExtElement{D, 0, *q / D};
  return std::nullopt;
}

MaximalityVerdict maximality_level2_oracle(const UnicriticalMap& f, const FactorBudget& budget) {
  if (f.d != 2) throw Error(ErrorKind::DegreeMismatch, "the level-2 oracle is for d = 2");
  if (!f.K.is_rational()) throw Error(ErrorKind::Precondition, "the level-2 oracle works over Q");
  const FieldElement disc = discriminant(f.polynomial());
  if (rational_sqrt(disc.a())) throw Error(ErrorKind::ReducibleBase, "Disc(f) = " + disc.to_string() + " is a square");
  const mpz_class D = squarefree_core(disc.a(), budget);
  const FieldElement z = iterate(f, f.gamma, 2).at(2);
  if (z.is_zero()) throw Error(ErrorKind::Precondition, "f^2(gamma) = 0");
  MaximalityVerdict v;
  v.witness_value = z;
  if (auto w = sqrt_in_quadratic(D, z.a())) {
    if (!((*w) * (*w) == QuadExtElement{D, z.a(), 0})) throw Error(ErrorKind::Precondition, "square witness failed");
    v.kind = MaximalityVerdict::Kind::NotMaximal;
    v.witness_root = *w;
    v.note = "f^2(gamma) = (" + w->to_string() + ")^2 in Q(sqrt(" + D.get_str() + "))";
  } else {
    v.kind = MaximalityVerdict::Kind::Maximal;
    v.note = "neither " + z.to_string() + " nor " + (z * FieldElement::integer(f.K, D)).to_string() +
             " is a rational square, so f^2(gamma) is not a square in Q(sqrt(" + D.get_str() + "))";
  }
  return v;
}

bool FamilyCheck::all_hold() const {
  bool ok = identity_a && valuation_b && congruence_c && disc_d && witness_e;
  if (level2) ok = ok && level2->kind == MaximalityVerdict::Kind::NotMaximal;
  return ok && stability.status == StabilityReport::Status::StableUpTo;
}

std::vector<FamilyCheck> verify_example_family(int i_max) {
  if (i_max < 2) throw Error(ErrorKind::Precondition, "i_max must be at least 2");
  constexpr int kValuationLevels = 12;
  const UnicriticalMap base = UnicriticalMap::make(NumberField(), 2, 0, 2);
  const OrbitTable base_orbit = iterate(base, 0, i_max);
  std::vector<FamilyCheck> out;
  for (int i = 2; i <= i_max; ++i) {
    FamilyCheck fc;
    fc.i = i;
    fc.map = example_family(i);
    const mpz_class half = (base_orbit.at(i).a().get_num() - 2) / 2;
    fc.t = 2 + half;
    const OrbitTable orbit = iterate(fc.map, fc.map.gamma, std::max(i, kValuationLevels));
    fc.f_gamma = orbit.at(1);
    fc.f_i_gamma = orbit.at(i);
    fc.identity_a = fc.f_gamma == -fc.f_i_gamma;
    fc.valuation_b = true;
    const mpz_class two = 2;
    for (int n = 1; n <= kValuationLevels; ++n) {
      const mpq_class& q = orbit.at(n).a();
      mpz_class num = q.get_num();
      const bool odd_den = mpz_odd_p(q.get_den_mpz_t());
      const long v = num == 0 ? -1 : static_cast<long>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), two.get_mpz_t()));
      if (!odd_den || v != 1) fc.valuation_b = false;
    }
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), half.get_mpz_t(), 8);
    fc.congruence_c = r == 2;
    fc.disc = discriminant(fc.map.polynomial());
    fc.disc_d = -fc.f_gamma == fc.disc / 4;
    // f_i^i(gamma) = -f_i(gamma) = Disc/4, a square in K_1 = Q(sqrt(Disc))
    const mpz_class D = squarefree_core(fc.disc.a());
    if (auto w = sqrt_in_quadratic(D, fc.f_i_gamma.a())) {
      fc.witness_root = *w;
      fc.witness_e = (*w) * (*w) == QuadExtElement{D, fc.f_i_gamma.a(), 0};
    }
    if (i == 2) fc.level2 = maximality_level2_oracle(fc.map);
    fc.stability = stability_test(fc.map, kValuationLevels);
    out.push_back(std::move(fc));
  }
  return out;
}

TowerReport tower_report(const UnicriticalMap& f, int n_max, const FactorBudget& budget, int jobs, FactorCache* cache) {
  if (n_max < 1) throw Error(ErrorKind::Precondition, "n_max must be positive");
  TowerReport rep;
  rep.map = f;
  const bool quadratic = f.d == 2;
  if (quadratic) {
    rep.stability = stability_test(f, n_max);
  } else {
    rep.stability.checked_up_to = 0;
  }
  FactorCache local;
  if (!cache) cache = &local;
  rep.levels.resize(static_cast<std::size_t>(n_max));
  parallel_for(rep.levels.size(), jobs, [&](std::size_t k) {
    TowerLevel& lv = rep.levels[k];
    lv.n = static_cast<int>(k) + 1;
    const auto& st = rep.stability;
    if (!quadratic) {
      lv.stability = "not checked (d != 2)";
    } else if (st.status == StabilityReport::Status::Reducible) {
      lv.stability = "Failed(1)";
    } else if (st.status == StabilityReport::Status::Failed && st.failed_at <= lv.n) {
      lv.stability = "Failed(" + std::to_string(st.failed_at) + ")";
    } else {
      lv.stability = "Irreducible-so-far";
    }
    if (lv.n >= 2) {
      lv.sufficient = maximality_sufficient(f, lv.n, budget, cache);
    } else {
      lv.sufficient.note = "the sufficient criterion starts at n = 2";
    }
    if (lv.n == 2 && quadratic && f.K.is_rational()) {
      try {
        lv.oracle = maximality_level2_oracle(f, budget);
      } catch (const Error&) {
        // reducible base or degenerate level: no oracle verdict
      }
    }
    if (std::pow(static_cast<double>(f.d), lv.n) <= kMaxSymbolicDegree) lv.disc = disc_iterate(f, lv.n);
  });
  return rep;
}

}  // namespace zsig
