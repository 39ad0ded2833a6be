#include "zsiglab/polynomial.hpp"

#include "zsiglab/error.hpp"

namespace zsig {

Polynomial::Polynomial(NumberField K, std::vector<FieldElement> coeffs) : field_(K), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c *= FieldElement(K, 1);  // lift rationals into K
  trim();
}

Polynomial Polynomial::constant(const NumberField& K, const FieldElement& c) { return Polynomial(K, {c}); }

Polynomial Polynomial::x(const NumberField& K) { return Polynomial(K, {FieldElement(K, 0), FieldElement(K, 1)}); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FieldElement Polynomial::coeff(int i) const {
  if (i < 0 || i > degree()) return FieldElement(field_, 0);
  return coeffs_[i];
}

FieldElement Polynomial::leading() const {
  if (is_zero()) return FieldElement(field_, 0);
  return coeffs_.back();
}

FieldElement Polynomial::evaluate(const FieldElement& x) const {
  FieldElement acc(field_, 0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<FieldElement> out;
  for (int i = 1; i <= degree(); ++i) out.push_back(coeffs_[i] * FieldElement(i));
  return Polynomial(field_, std::move(out));
}

Polynomial Polynomial::compose(const Polynomial& q) const {
  Polynomial acc(field_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= q;
    acc += constant(field_, *it);
  }
  return acc;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(field_, FieldElement(field_, 1));
  Polynomial base = *this;
  while (e) {
    if (e & 1U) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& b) const {
  if (b.is_zero()) throw Error(ErrorKind::ZeroElement, "polynomial division by zero");
  Polynomial r = *this;
  std::vector<FieldElement> q(std::max(0, degree() - b.degree() + 1), FieldElement(field_, 0));
  const FieldElement lead_inv = b.leading().inverse();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const int shift = r.degree() - b.degree();
    const FieldElement t = r.leading() * lead_inv;
    q[shift] = t;
    for (int i = 0; i <= b.degree(); ++i) r.coeffs_[i + shift] -= t * b.coeffs_[i];
    r.coeffs_.pop_back();  // leading term cancels exactly
    r.trim();
  }
  return {Polynomial(field_, std::move(q)), r};
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), FieldElement(field_, 0));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), FieldElement(field_, 0));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  if (is_zero() || o.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<FieldElement> out(coeffs_.size() + o.coeffs_.size() - 1, FieldElement(field_, 0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const FieldElement& s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    if (coeffs_[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coeffs_[i].to_string() + ")";
    if (i >= 1) out += "*X";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

FieldElement resultant(const Polynomial& a_in, const Polynomial& b_in) {
  const NumberField K = a_in.field();
  if (a_in.is_zero() || b_in.is_zero()) return FieldElement(K, 0);
  Polynomial a = a_in, b = b_in;
  FieldElement acc(K, 1);
  while (true) {
    const int m = a.degree(), n = b.degree();
    if (n == 0) return acc * b.leading().pow(static_cast<unsigned long>(m));
    Polynomial r = a.divmod(b).second;
    if (r.is_zero()) return FieldElement(K, 0);
    const int rd = r.degree();
    // Res(A, B) = (-1)^(mn) lc(B)^(m - r) Res(B, A mod B)
    if ((static_cast<long>(m) * n) % 2 != 0) acc = -acc;
    acc *= b.leading().pow(static_cast<unsigned long>(m - rd));
    a = std::move(b);
    b = std::move(r);
  }
}

FieldElement discriminant(const Polynomial& f) {
  const int m = f.degree();
  if (m < 1) throw Error(ErrorKind::Precondition, "discriminant of a constant");
  FieldElement d = resultant(f, f.derivative()) / f.leading();
  if ((static_cast<long>(m) * (m - 1) / 2) % 2 != 0) d = -d;
  return d;
}

}  // namespace zsig
