#pragma once

// Dense univariate polynomials over K, coefficients stored low degree first.

#include <string>
#include <vector>

#include "zsiglab/numfield.hpp"

namespace zsig {

class Polynomial {
 public:
  explicit Polynomial(NumberField K = NumberField()) : field_(K) {}
  Polynomial(NumberField K, std::vector<FieldElement> coeffs);
  static Polynomial constant(const NumberField& K, const FieldElement& c);
  static Polynomial x(const NumberField& K);

  const NumberField& field() const { return field_; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<FieldElement>& coefficients() const { return coeffs_; }
  FieldElement coeff(int i) const;
  FieldElement leading() const;

  FieldElement evaluate(const FieldElement& x) const;
  Polynomial derivative() const;
  // this(q(x))
  Polynomial compose(const Polynomial& q) const;
  Polynomial pow(unsigned e) const;
  // Quotient and remainder over K.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& b) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const FieldElement& s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, const FieldElement& s) { return a *= s; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string() const;

 private:
  void trim();
  NumberField field_;
  std::vector<FieldElement> coeffs_;
};

// Res(a, b) by the Euclidean remainder sequence.
FieldElement resultant(const Polynomial& a, const Polynomial& b);
// (-1)^(m(m-1)/2) Res(F, F') / lc(F).
FieldElement discriminant(const Polynomial& f);

}  // namespace zsig
