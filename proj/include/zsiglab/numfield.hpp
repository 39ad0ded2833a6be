#pragma once

// Exact arithmetic in K = Q or one of the nine imaginary quadratic fields of
// class number one, written over the integral basis {1, w} of O_K.
//
// Real-valued outputs (logs, prime weights) are doubles. log|x| of an
// arbitrary-precision integer is computed from its top 53 bits and binary
// exponent, so each log carries relative error around 1e-16; sums over a few
// hundred primes stay well inside the 1e-10 tolerances used downstream.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zsiglab/factor.hpp"

namespace zsig {

class NumberField {
 public:
  // Q.
  NumberField() = default;

  static NumberField rationals() { return NumberField(); }
  // Q(sqrt(-D)); D must be one of 1, 2, 3, 7, 11, 19, 43, 67, 163.
  static NumberField imaginary_quadratic(int D);
  // Accepts "Q", "Qi", "Q(i)", "Q(-D)", "Q(sqrt(-D))".
  static NumberField parse(std::string_view text);
  static const std::array<int, 9>& class_number_one_radicands();

  bool is_rational() const { return radicand_ == 0; }
  int radicand() const { return radicand_; }
  int degree() const { return is_rational() ? 1 : 2; }
  // w satisfies w^2 = trace*w - norm. For Q these are unused (0, 0).
  long omega_trace() const;
  long omega_norm() const;
  // Discriminant of O_K: -D when -D = 1 mod 4, otherwise -4D. 1 for Q.
  long discriminant() const;
  std::string name() const;

  bool operator==(const NumberField&) const = default;

 private:
  explicit NumberField(int D) : radicand_(D) {}
  int radicand_ = 0;
};

class FieldElement {
 public:
  // Zero of Q.
  FieldElement() = default;
  FieldElement(const NumberField& K, mpq_class a, mpq_class b = 0);
  // Convenience for rationals.
  FieldElement(long n) : a_(n) {}  // NOLINT: implicit from integers is intended
  static FieldElement rational(const mpq_class& q) { return FieldElement(NumberField(), q); }
  static FieldElement integer(const NumberField& K, const mpz_class& n) { return FieldElement(K, mpq_class(n)); }
  static FieldElement omega(const NumberField& K);
  // "a/b" over Q, "a/b + c/d*w" over quadratic fields ("i" is accepted for w in Q(i)).
  static FieldElement parse(const NumberField& K, std::string_view text);

  const NumberField& field() const { return field_; }
  const mpq_class& a() const { return a_; }
  const mpq_class& b() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_integral() const { return a_.get_den() == 1 && b_.get_den() == 1; }
  // Least positive integer m with m*x in O_K.
  mpz_class denominator() const;
  mpq_class norm() const;
  mpq_class trace() const;
  FieldElement conj() const;
  FieldElement inverse() const;
  FieldElement pow(unsigned long e) const;
  std::string to_string() const;

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  friend FieldElement operator+(FieldElement x, const FieldElement& y) { return x += y; }
  friend FieldElement operator-(FieldElement x, const FieldElement& y) { return x -= y; }
  friend FieldElement operator*(FieldElement x, const FieldElement& y) { return x *= y; }
  friend FieldElement operator/(FieldElement x, const FieldElement& y) { return x /= y; }
  FieldElement operator-() const;
  // Elements of Q compare equal to the same rational viewed inside K.
  friend bool operator==(const FieldElement& x, const FieldElement& y) {
    return (x.field_ == y.field_ || x.field_.is_rational() || y.field_.is_rational()) &&
           x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  // Adopts o's field when this element is a plain rational; Q embeds in K.
  void unify_field(const FieldElement& o);

  NumberField field_;
  mpq_class a_ = 0;
  mpq_class b_ = 0;
};

// log|n| and log|q| for nonzero arguments of any size.
double log_abs(const mpz_class& n);
double log_abs(const mpq_class& q);

// ---- O_K helpers --------------------------------------------------------

const std::vector<FieldElement>& units(const NumberField& K);
bool is_unit(const FieldElement& x);
// Canonical representative of x up to units: smallest |b|, then a > 0, then
// b > 0 (so 3, 1+i, 2+i and 2-i are canonical in Q(i)).
FieldElement canonical_associate(const FieldElement& x);
bool associates(const FieldElement& x, const FieldElement& y);
// Integer norm of an integral element.
mpz_class integral_norm(const FieldElement& x);
// Quotient in O_K if b divides a there.
std::optional<FieldElement> exact_divide(const FieldElement& a, const FieldElement& b);
// Generator of the ideal (a, b) of O_K, canonical associate. Inputs integral.
FieldElement ok_gcd(const FieldElement& a, const FieldElement& b);
// Integral elements n, m with x = n/m and (n) + (m) = O_K, both canonical.
// n carries exactly the primes with v_p(x) > 0.
FieldElement numerator_content(const FieldElement& x);
FieldElement denominator_content(const FieldElement& x);

// ---- primes ------------------------------------------------------------

struct PrimeOfK {
  FieldElement generator;   // canonical associate
  mpz_class rational_prime;
  mpz_class residue_size;   // p or p^2
  int ramification = 1;     // v_P(p)
  int field_degree = 1;     // [K:Q]

  // N_p = log(#k_p) / [K:Q].
  double weight() const;
  std::string to_string() const { return generator.to_string(); }

  friend bool operator==(const PrimeOfK& x, const PrimeOfK& y) { return x.generator == y.generator; }
  friend bool operator<(const PrimeOfK& x, const PrimeOfK& y);
};

// All primes of O_K above the rational prime p.
std::vector<PrimeOfK> primes_above(const NumberField& K, const mpz_class& p);
double prime_weight(const PrimeOfK& p);

// v_p(x); throws ZeroElement for x = 0.
long valuation(const FieldElement& x, const PrimeOfK& p);

struct ValuationTable {
  std::vector<std::pair<PrimeOfK, long>> entries;  // sorted, no zero exponents
  FieldElement unit;

  long exponent(const PrimeOfK& p) const;
  FieldElement reconstruct() const;
  bool operator==(const ValuationTable&) const = default;
};

// Factorization that may stop early: `remainder` = x / prod(p^e) is a unit
// exactly when `complete` holds, otherwise it carries the unfactored part
// whose integer norm is `unfactored_norm`.
struct PartialFactorization {
  std::vector<std::pair<PrimeOfK, long>> entries;
  FieldElement remainder;
  mpz_class unfactored_norm = 1;
  bool complete = true;
  bool probable = false;
};

PartialFactorization factor_element_partial(const FieldElement& x, const FactorBudget& budget,
                                            FactorCache* cache = nullptr);
// Throws ZeroElement on 0 and BudgetExceeded when the norm factorization is
// incomplete.
ValuationTable factor_element(const FieldElement& x, const FactorBudget& budget = {},
                              FactorCache* cache = nullptr);

// log|sigma(x)| for each embedding sigma: K -> C (both conjugates listed).
std::vector<double> archimedean_logs(const FieldElement& x);

}  // namespace zsig
