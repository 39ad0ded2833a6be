#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zsiglab/dynamics.hpp"
#include "zsiglab/factor.hpp"
#include "zsiglab/polynomial.hpp"

namespace zsig {

// a + b sqrt(D) with D a squarefree integer other than 0, 1.
struct QuadExtElement {
  mpz_class D;
  mpq_class a, b;

  QuadExtElement operator*(const QuadExtElement& o) const;
  bool operator==(const QuadExtElement&) const = default;
  std::string to_string() const;
};

// Disc(f^i) as (-1)^(m(m-1)/2) Res(F, F')/lc(F), after checking it against the
// recursion up to sign. Throws ExpansionCap past the symbolic degree cap.
FieldElement disc_iterate(const UnicriticalMap& f, int i);

struct DiscComparison {
  FieldElement direct;
  FieldElement recursive;  // +-d^(d^i) Disc(f^(i-1))^d f^i(gamma)^(d-1), sign taken from direct
  FieldElement literal;    // the same without the exponent d on Disc(f^(i-1))
  bool agree_up_to_sign = false;
  bool literal_agrees = false;
};
DiscComparison disc_compare(const UnicriticalMap& f, int i);
// Recursion only; no symbolic expansion, so any i is fine. Magnitude is exact,
// sign is not tracked (returned positive).
FieldElement disc_recursive_abs(const UnicriticalMap& f, int i);

// Square root in K when x is a square there.
std::optional<FieldElement> sqrt_in_field(const FieldElement& x);
// Squarefree part of a nonzero rational (sign kept), e.g. 8 -> 2, -4 -> -1, 3/4 -> 3.
mpz_class squarefree_core(const mpq_class& q, const FactorBudget& budget = {});

struct StabilityReport {
  enum class Status { StableUpTo, Failed, Reducible };
  Status status = Status::StableUpTo;
  int checked_up_to = 0;
  int failed_at = 0;                    // Failed: level whose f^n(gamma) is a square
  std::optional<FieldElement> square_root;  // witness for Reducible / Failed
  bool critical_orbit_pcf = false;      // flagged separately, never folded into status

  std::string to_string() const;
};
// d = 2: f irreducible (disc not a square in K) and f^n(gamma) not a square for 2 <= n <= n_max.
StabilityReport stability_test(const UnicriticalMap& f, int n_max);

struct MaximalityVerdict {
  enum class Kind { Maximal, NotMaximal, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::optional<PrimeOfK> witness_prime;          // Maximal
  std::optional<QuadExtElement> witness_root;     // NotMaximal: witness_root^2 = witness_value
  std::optional<FieldElement> witness_value;
  std::string note;
  bool budget_exhausted = false;

  std::string to_string() const;
};

// True when K holds a primitive d-th root of unity.
bool contains_roots_of_unity(const NumberField& K, int d);

// Maximal(p) from a multiplicity-1 primitive prime of f^n(gamma) coprime to d
// with v_p(c), v_p(gamma) >= 0; otherwise Inconclusive. Never NotMaximal.
MaximalityVerdict maximality_sufficient(const UnicriticalMap& f, int n, const FactorBudget& budget = {},
                                        FactorCache* cache = nullptr);

// z = w^2 for some w in Q(sqrt(D)); D not a rational square, z != 0.
bool is_square_in_quadratic(const mpq_class& D, const mpq_class& z);
std::optional<QuadExtElement> sqrt_in_quadratic(const mpz_class& D, const mpq_class& z);

// Exact level-2 verdict for d = 2 over Q. Throws ReducibleBase if Disc(f) is a square.
MaximalityVerdict maximality_level2_oracle(const UnicriticalMap& f, const FactorBudget& budget = {});

struct FamilyCheck {
  int i = 0;
  UnicriticalMap map;
  mpz_class t;
  FieldElement f_gamma, f_i_gamma;  // f_i(gamma), f_i^i(gamma)
  FieldElement disc;
  bool identity_a = false;     // f_i(gamma) = -f_i^i(gamma)
  bool valuation_b = false;    // v_2(f_i^n(gamma)) = 1, 1 <= n <= 12
  bool congruence_c = false;   // (f^i(0) - 2)/2 = 2 mod 8
  bool disc_d = false;         // -f_i(gamma) = Disc(f_i)/4
  bool witness_e = false;      // f_i^i(gamma) is a square in Q(sqrt(Disc))
  std::optional<QuadExtElement> witness_root;
  std::optional<MaximalityVerdict> level2;  // i = 2 only
  StabilityReport stability;

  bool all_hold() const;
};
std::vector<FamilyCheck> verify_example_family(int i_max);

struct TowerLevel {
  int n = 0;
  std::string stability;  // "Irreducible-so-far" or "Failed(n)"
  MaximalityVerdict sufficient;
  std::optional<MaximalityVerdict> oracle;  // level 2 over Q only
  std::optional<FieldElement> disc;         // within the symbolic cap
};
struct TowerReport {
  UnicriticalMap map;
  StabilityReport stability;
  std::vector<TowerLevel> levels;  // n = 1 .. n_max
};
TowerReport tower_report(const UnicriticalMap& f, int n_max, const FactorBudget& budget = {}, int jobs = 1,
                         FactorCache* cache = nullptr);

}  // namespace zsig
