#include "zsiglab/numfield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "zsiglab/error.hpp"

namespace zsig {

namespace {

constexpr std::array<int, 9> kRadicands = {1, 2, 3, 7, 11, 19, 43, 67, 163};

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  return out;
}

mpz_class lcm(const mpz_class& x, const mpz_class& y) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return r;
}

// Integer coordinates of an integral element, and its norm form.
struct Vec2 {
  mpz_class x, y;
};

struct NormForm {
  mpz_class t, n;
  mpz_class value(const Vec2& v) const { return v.x * v.x + t * v.x * v.y + n * v.y * v.y; }
  // Twice the associated bilinear form.
  mpz_class twice_pair(const Vec2& u, const Vec2& v) const {
    return 2 * u.x * v.x + t * (u.x * v.y + u.y * v.x) + 2 * n * u.y * v.y;
  }
};

// Z-basis of the lattice spanned by `rows` (rank 2 assumed), in echelon form.
std::pair<Vec2, Vec2> echelon_basis(std::vector<Vec2> rows) {
  Vec2 pivot{0, 0};
  mpz_class g2 = 0;
  for (auto& r : rows) {
    while (r.x != 0) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), pivot.x.get_mpz_t(), r.x.get_mpz_t());
      pivot.x -= q * r.x;
      pivot.y -= q * r.y;
      std::swap(pivot, r);
    }
    mpz_gcd(g2.get_mpz_t(), g2.get_mpz_t(), r.y.get_mpz_t());
  }
  if (pivot.x < 0) {
    pivot.x = -pivot.x;
    pivot.y = -pivot.y;
  }
  if (g2 != 0) mpz_fdiv_r(pivot.y.get_mpz_t(), pivot.y.get_mpz_t(), g2.get_mpz_t());
  return {pivot, Vec2{0, g2}};
}

// Lagrange-Gauss reduction; returns a vector of minimal norm in the lattice.
Vec2 shortest_vector(Vec2 u, Vec2 v, const NormForm& form) {
  while (true) {
    if (form.value(v) < form.value(u)) std::swap(u, v);
    const mpz_class num = form.twice_pair(u, v);
    const mpz_class den = 2 * form.value(u);
    mpz_class mu;
    mpz_class shifted = 2 * num + den;
    const mpz_class twice_den = 2 * den;
    mpz_fdiv_q(mu.get_mpz_t(), shifted.get_mpz_t(), twice_den.get_mpz_t());
    if (mu == 0) return u;
    v.x -= mu * u.x;
    v.y -= mu * u.y;
  }
}

NormForm norm_form(const NumberField& K) { return {K.omega_trace(), K.omega_norm()}; }

Vec2 coords(const FieldElement& x) { return {x.a().get_num(), x.b().get_num()}; }

FieldElement from_coords(const NumberField& K, const Vec2& v) {
  return FieldElement(K, mpq_class(v.x), mpq_class(v.y));
}

auto associate_key(const FieldElement& x) {
  return std::make_tuple(abs(x.b()), sgn(x.a()) <= 0, sgn(x.b()) < 0, abs(x.a()), x.a(), x.b());
}

// Divides y by the prime element pi as long as the quotient stays integral.
long strip_prime(FieldElement& y, const PrimeOfK& p) {
  long count = 0;
  if (y.field().is_rational()) {
    mpz_class num = y.a().get_num();
    count = mpz_remove(num.get_mpz_t(), num.get_mpz_t(), p.rational_prime.get_mpz_t());
    y = FieldElement::rational(mpq_class(num));
    return count;
  }
  const FieldElement pi_bar = p.generator.conj();
  const mpz_class pi_norm = integral_norm(p.generator);
  while (!y.is_zero()) {
    FieldElement t = y * pi_bar;
    const mpz_class& ta = t.a().get_num();
    const mpz_class& tb = t.b().get_num();
    if (!mpz_divisible_p(ta.get_mpz_t(), pi_norm.get_mpz_t()) ||
        !mpz_divisible_p(tb.get_mpz_t(), pi_norm.get_mpz_t()))
      break;
    y = FieldElement(y.field(), mpq_class(ta / pi_norm), mpq_class(tb / pi_norm));
    ++count;
  }
  return count;
}

// Rational prime factors (with multiplicities) of an integer, budgeted.
void collect_rational_primes(const mpz_class& n, const FactorBudget& budget, FactorCache* cache,
                             std::set<mpz_class>& primes, mpz_class& unfactored, bool& probable) {
  if (abs(n) <= 1) return;
  IntegerFactorization f = factor_integer(n, budget, cache);
  for (const auto& pp : f.factors) primes.insert(pp.prime);
  unfactored *= f.cofactor;
  probable = probable || f.relies_on_probable_prime();
}

}  // namespace

// ---- NumberField ----------------------------------------------------------

NumberField NumberField::imaginary_quadratic(int D) {
  if (std::find(kRadicands.begin(), kRadicands.end(), D) == kRadicands.end())
    throw Error(ErrorKind::InvalidField,
                "Q(sqrt(-" + std::to_string(D) + ")) is not a class-number-one imaginary quadratic field");
  return NumberField(D);
}

const std::array<int, 9>& NumberField::class_number_one_radicands() { return kRadicands; }

NumberField NumberField::parse(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (s == "Q") return rationals();
  if (s == "Qi" || s == "Q(i)") return imaginary_quadratic(1);
  std::string inner;
  if (s.rfind("Q(sqrt(-", 0) == 0 && s.size() > 10 && s.substr(s.size() - 2) == "))")
    inner = s.substr(8, s.size() - 10);
  else if (s.rfind("Q(-", 0) == 0 && s.back() == ')')
    inner = s.substr(3, s.size() - 4);
  if (inner.empty() || !std::all_of(inner.begin(), inner.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    throw Error(ErrorKind::Parse, "unrecognized field '" + std::string(text) + "'");
  if (inner.size() > 6) throw Error(ErrorKind::InvalidField, "radicand out of range");
  return imaginary_quadratic(std::stoi(inner));
}

long NumberField::omega_trace() const {
  if (is_rational()) return 0;
  return radicand_ % 4 == 3 ? 1 : 0;
}

long NumberField::omega_norm() const {
  if (is_rational()) return 0;
  return radicand_ % 4 == 3 ? (1 + radicand_) / 4 : radicand_;
}

long NumberField::discriminant() const {
  if (is_rational()) return 1;
  return radicand_ % 4 == 3 ? -radicand_ : -4L * radicand_;
}

std::string NumberField::name() const {
  if (is_rational()) return "Q";
  if (radicand_ == 1) return "Qi";
  return "Q(-" + std::to_string(radicand_) + ")";
}

// ---- FieldElement ---------------------------------------------------------

FieldElement::FieldElement(const NumberField& K, mpq_class a, mpq_class b)
    : field_(K), a_(std::move(a)), b_(std::move(b)) {
  a_.canonicalize();
  b_.canonicalize();
  if (K.is_rational() && sgn(b_) != 0)
    throw Error(ErrorKind::FieldMismatch, "nonzero w-coordinate for an element of Q");
}

FieldElement FieldElement::omega(const NumberField& K) {
  if (K.is_rational()) throw Error(ErrorKind::FieldMismatch, "Q has no generator w");
  return FieldElement(K, 0, 1);
}

FieldElement FieldElement::parse(const NumberField& K, std::string_view text) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw Error(ErrorKind::Parse, "empty element");
  mpq_class a = 0, b = 0;
  std::size_t pos = 0;
  auto fail = [&]() { return Error(ErrorKind::Parse, "bad element '" + std::string(text) + "'"); };
  auto is_gen = [&](char ch) { return ch == 'w' || (ch == 'i' && K.radicand() == 1); };
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw fail();
    }
    first = false;
    mpq_class coef = 1;
    bool have_number = false;
    std::size_t start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
    if (pos > start) {
      const std::string num = s.substr(start, pos - start);
      if (num.front() == '/' || num.back() == '/' || std::count(num.begin(), num.end(), '/') > 1) throw fail();
      if (coef.set_str(num, 10) != 0) throw fail();
      if (coef.get_den() == 0) throw fail();
      coef.canonicalize();
      have_number = true;
    }
    bool generator = false;
    if (pos < s.size() && s[pos] == '*') {
      if (!have_number) throw fail();
      ++pos;
      if (pos >= s.size() || !is_gen(s[pos])) throw fail();
      generator = true;
      ++pos;
    } else if (pos < s.size() && is_gen(s[pos])) {
      generator = true;
      ++pos;
    } else if (!have_number) {
      throw fail();
    }
    if (generator && K.is_rational()) throw fail();
    (generator ? b : a) += sign * coef;
  }
  return FieldElement(K, a, b);
}

mpz_class FieldElement::denominator() const { return lcm(a_.get_den(), b_.get_den()); }

mpq_class FieldElement::norm() const {
  if (field_.is_rational()) return a_;
  return a_ * a_ + a_ * b_ * field_.omega_trace() + b_ * b_ * field_.omega_norm();
}

mpq_class FieldElement::trace() const {
  if (field_.is_rational()) return a_;
  return 2 * a_ + b_ * field_.omega_trace();
}

FieldElement FieldElement::conj() const {
  if (field_.is_rational()) return *this;
  return FieldElement(field_, a_ + b_ * field_.omega_trace(), -b_);
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorKind::ZeroElement, "inverse of zero");
  if (field_.is_rational()) return FieldElement(field_, 1 / a_);
  const mpq_class n = norm();
  const FieldElement c = conj();
  return FieldElement(field_, c.a_ / n, c.b_ / n);
}

FieldElement FieldElement::pow(unsigned long e) const {
  FieldElement result(field_, 1);
  FieldElement base = *this;
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::string FieldElement::to_string() const {
  if (field_.is_rational() || sgn(b_) == 0) return a_.get_str();
  std::string gen;
  const mpq_class mag = abs(b_);
  gen = mag == 1 ? "w" : mag.get_str() + "*w";
  if (sgn(a_) == 0) return (sgn(b_) < 0 ? "-" : "") + gen;
  return a_.get_str() + (sgn(b_) < 0 ? " - " : " + ") + gen;
}

void FieldElement::unify_field(const FieldElement& o) {
  if (field_ == o.field_) return;
  if (field_.is_rational()) {
    field_ = o.field_;
    return;
  }
  if (o.field_.is_rational()) return;
  throw Error(ErrorKind::FieldMismatch, field_.name() + " vs " + o.field_.name());
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  unify_field(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  unify_field(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  unify_field(o);
  if (field_.is_rational() || (sgn(b_) == 0 && sgn(o.b_) == 0)) {
    a_ *= o.a_;
    return *this;
  }
  // (a + bw)(c + dw) with w^2 = t w - n.
  const mpq_class bd = b_ * o.b_;
  mpq_class na = a_ * o.a_ - bd * field_.omega_norm();
  mpq_class nb = a_ * o.b_ + b_ * o.a_ + bd * field_.omega_trace();
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  unify_field(o);
  if (o.is_zero()) throw Error(ErrorKind::ZeroElement, "division by zero");
  if (field_.is_rational() || sgn(o.b_) == 0) {
    a_ /= o.a_;
    b_ /= o.a_;
    return *this;
  }
  return *this *= o.inverse();
}

FieldElement FieldElement::operator-() const { return FieldElement(field_, -a_, -b_); }

// ---- logs -------------------------------------------------------------------

double log_abs(const mpz_class& n) {
  if (n == 0) throw Error(ErrorKind::ZeroElement, "log of zero");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_abs(const mpq_class& q) { return log_abs(q.get_num()) - log_abs(q.get_den()); }

// ---- O_K helpers ------------------------------------------------------------

const std::vector<FieldElement>& units(const NumberField& K) {
  static const auto table = [] {
    std::map<int, std::vector<FieldElement>> t;
    t[0] = {FieldElement(1), FieldElement(-1)};
    for (int D : kRadicands) {
      const NumberField F = NumberField::imaginary_quadratic(D);
      std::vector<FieldElement> us;
      if (D == 1 || D == 3) {
        // i has order 4; w = (1 + sqrt(-3))/2 has order 6.
        const FieldElement w = FieldElement::omega(F);
        FieldElement u(F, 1);
        do {
          us.push_back(u);
          u *= w;
        } while (!(u == FieldElement(F, 1)));
      } else {
        us = {FieldElement(F, 1), FieldElement(F, -1)};
      }
      t[D] = us;
    }
    return t;
  }();
  return table.at(K.radicand());
}

bool is_unit(const FieldElement& x) {
  if (!x.is_integral() || x.is_zero()) return false;
  return abs(x.norm()) == 1;
}

FieldElement canonical_associate(const FieldElement& x) {
  if (x.is_zero()) return x;
  const auto& us = units(x.field());
  FieldElement best = x * us.front();
  for (std::size_t i = 1; i < us.size(); ++i) {
    FieldElement cand = x * us[i];
    if (associate_key(cand) < associate_key(best)) best = std::move(cand);
  }
  return best;
}

bool associates(const FieldElement& x, const FieldElement& y) {
  return canonical_associate(x) == canonical_associate(y);
}

mpz_class integral_norm(const FieldElement& x) {
  const mpq_class n = x.norm();
  if (n.get_den() != 1) throw Error(ErrorKind::Precondition, "integral_norm of non-integral element");
  return n.get_num();
}

std::optional<FieldElement> exact_divide(const FieldElement& a, const FieldElement& b) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroElement, "exact_divide by zero");
  FieldElement q = a / b;
  if (!q.is_integral()) return std::nullopt;
  return q;
}

FieldElement ok_gcd(const FieldElement& a, const FieldElement& b) {
  if (a.is_zero()) return canonical_associate(b);
  if (b.is_zero()) return canonical_associate(a);
  FieldElement x = a, y = b;
  x *= FieldElement(y.field(), 1);  // settle the common field
  y *= FieldElement(x.field(), 1);
  const NumberField K = x.field();
  if (K.is_rational() || (sgn(x.b()) == 0 && sgn(y.b()) == 0)) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x.a().get_num_mpz_t(), y.a().get_num_mpz_t());
    return FieldElement::integer(K, g);
  }
  const FieldElement w = FieldElement::omega(K);
  auto [u, v] = echelon_basis({coords(x), coords(x * w), coords(y), coords(y * w)});
  return canonical_associate(from_coords(K, shortest_vector(u, v, norm_form(K))));
}

FieldElement numerator_content(const FieldElement& x) {
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "numerator_content(0)");
  if (x.field().is_rational()) return FieldElement::integer(x.field(), abs(x.a().get_num()));
  const mpz_class m = x.denominator();
  const FieldElement y = x * FieldElement::integer(x.field(), m);
  const FieldElement g = ok_gcd(y, FieldElement::integer(x.field(), m));
  return canonical_associate(y / g);
}

FieldElement denominator_content(const FieldElement& x) {
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "denominator_content(0)");
  if (x.field().is_rational()) return FieldElement::integer(x.field(), x.a().get_den());
  const mpz_class m = x.denominator();
  const FieldElement mk = FieldElement::integer(x.field(), m);
  const FieldElement g = ok_gcd(x * mk, mk);
  return canonical_associate(mk / g);
}

// ---- primes -----------------------------------------------------------------

double PrimeOfK::weight() const { return log_abs(residue_size) / field_degree; }

bool operator<(const PrimeOfK& x, const PrimeOfK& y) {
  if (x.rational_prime != y.rational_prime) return x.rational_prime < y.rational_prime;
  return std::make_tuple(x.generator.a(), x.generator.b()) < std::make_tuple(y.generator.a(), y.generator.b());
}

double prime_weight(const PrimeOfK& p) { return p.weight(); }

std::vector<PrimeOfK> primes_above(const NumberField& K, const mpz_class& p) {
  if (K.is_rational()) return {PrimeOfK{FieldElement::integer(K, p), p, p, 1, 1}};

  const mpz_class t = K.omega_trace();
  const mpz_class n = K.omega_norm();
  // Roots of X^2 - tX + n modulo p.
  std::vector<mpz_class> roots;
  if (p == 2) {
    for (int r = 0; r < 2; ++r) {
      mpz_class v = r * r - t * r + n;
      if (mpz_even_p(v.get_mpz_t())) roots.push_back(r);
    }
    if (roots.size() == 1) {
      // Double root iff the polynomial's discriminant is even.
      const mpz_class disc = t * t - 4 * n;
      if (!mpz_divisible_ui_p(disc.get_mpz_t(), 2)) roots.push_back(roots.front());
    }
  } else {
    const mpz_class disc = t * t - 4 * n;
    mpz_class dmod = disc % p;
    if (dmod < 0) dmod += p;
    const int symbol = mpz_legendre(dmod.get_mpz_t(), p.get_mpz_t());
    if (symbol >= 0) {
      const mpz_class s = sqrt_mod_prime(dmod, p);
      mpz_class inv2;
      const mpz_class two = 2;
      mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t());
      roots.push_back(((t + s) * inv2) % p);
      if (symbol == 1) roots.push_back((((t - s) * inv2) % p + p) % p);
    }
  }

  if (roots.empty())  // inert
    return {PrimeOfK{FieldElement::integer(K, p), p, p * p, 1, 2}};

  const bool ramified = roots.size() == 1 || roots[0] == roots[1];
  // The ideal (p, w - r) has Z-basis {p, w - r}; a shortest vector generates it.
  const Vec2 u{p, 0}, v{-roots[0], 1};
  const FieldElement pi = canonical_associate(from_coords(K, shortest_vector(u, v, norm_form(K))));
  if (integral_norm(pi) != p) throw Error(ErrorKind::Precondition, "prime generator search failed");
  if (ramified) return {PrimeOfK{pi, p, p, 2, 2}};
  PrimeOfK first{pi, p, p, 1, 2};
  PrimeOfK second{canonical_associate(pi.conj()), p, p, 1, 2};
  std::vector<PrimeOfK> out{first, second};
  std::sort(out.begin(), out.end());
  return out;
}

long valuation(const FieldElement& x, const PrimeOfK& p) {
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "valuation of zero");
  if (x.field().is_rational()) {
    mpz_class num = x.a().get_num(), den = x.a().get_den();
    const long up = mpz_remove(num.get_mpz_t(), num.get_mpz_t(), p.rational_prime.get_mpz_t());
    const long down = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), p.rational_prime.get_mpz_t());
    return up - down;
  }
  mpz_class m = x.denominator();
  FieldElement y = x * FieldElement::integer(x.field(), m);
  const long up = strip_prime(y, p);
  const long down =
      static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.rational_prime.get_mpz_t())) * p.ramification;
  return up - down;
}

long ValuationTable::exponent(const PrimeOfK& p) const {
  for (const auto& [q, e] : entries)
    if (q == p) return e;
  return 0;
}

FieldElement ValuationTable::reconstruct() const {
  FieldElement x = unit;
  for (const auto& [p, e] : entries) {
    const FieldElement power = p.generator.pow(static_cast<unsigned long>(e < 0 ? -e : e));
    if (e < 0) x /= power;
    else x *= power;
  }
  return x;
}

PartialFactorization factor_element_partial(const FieldElement& x, const FactorBudget& budget,
                                            FactorCache* cache) {
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "factor of zero");
  const NumberField& K = x.field();
  PartialFactorization out;
  std::set<mpz_class> rational_primes;
  mpz_class unfactored = 1;
  mpz_class m = x.denominator();
  FieldElement y = x * FieldElement::integer(K, m);

  if (K.is_rational()) {
    collect_rational_primes(y.a().get_num(), budget, cache, rational_primes, unfactored, out.probable);
  } else {
    collect_rational_primes(integral_norm(y), budget, cache, rational_primes, unfactored, out.probable);
  }
  collect_rational_primes(m, budget, cache, rational_primes, unfactored, out.probable);

  for (const mpz_class& p : rational_primes) {
    const long vm = static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
    for (const PrimeOfK& P : primes_above(K, p)) {
      const long e = strip_prime(y, P) - vm * P.ramification;
      if (e != 0) out.entries.emplace_back(P, e);
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  ValuationTable probe{out.entries, FieldElement(K, 1)};
  out.remainder = x / probe.reconstruct();
  out.unfactored_norm = unfactored;
  out.complete = (unfactored == 1) && is_unit(out.remainder);
  return out;
}

ValuationTable factor_element(const FieldElement& x, const FactorBudget& budget, FactorCache* cache) {
  PartialFactorization f = factor_element_partial(x, budget, cache);
  if (!f.complete)
    throw Error(ErrorKind::BudgetExceeded, "norm of " + x.to_string() + " not fully factored");
  return ValuationTable{std::move(f.entries), std::move(f.remainder)};
}

std::vector<double> archimedean_logs(const FieldElement& x) {
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "archimedean_logs(0)");
  if (x.field().is_rational()) return {log_abs(x.a())};
  const double half = 0.5 * log_abs(x.norm());
  return {half, half};
}

}  // namespace zsig
