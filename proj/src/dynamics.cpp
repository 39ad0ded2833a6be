#include "zsiglab/dynamics.hpp"

#include <cmath>
#include <map>
#include <random>

#include "zsiglab/error.hpp"
#include "zsiglab/heights.hpp"

namespace zsig {

namespace {

FieldElement lift(const NumberField& K, const FieldElement& x) { return x * FieldElement(K, 1); }

std::string element_key(const FieldElement& x) { return x.a().get_str() + "|" + x.b().get_str(); }

}  // namespace

UnicriticalMap UnicriticalMap::make(const NumberField& K, int d, const FieldElement& gamma, const FieldElement& c) {
  if (d < 2) throw Error(ErrorKind::Precondition, "degree must be at least 2");
  return UnicriticalMap{d, lift(K, gamma), lift(K, c), K};
}

UnicriticalMap UnicriticalMap::parse(const NumberField& K, std::string_view text) {
  const std::string s(text);
  const auto p1 = s.find(';');
  const auto p2 = p1 == std::string::npos ? p1 : s.find(';', p1 + 1);
  if (p2 == std::string::npos || s.find(';', p2 + 1) != std::string::npos)
    throw Error(ErrorKind::Parse, "map must look like \"d;gamma;c\", got '" + s + "'");
  int d = 0;
  try {
    std::size_t used = 0;
    d = std::stoi(s.substr(0, p1), &used);
    if (used != p1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad degree in map '" + s + "'");
  }
  if (d < 2 || d > 64) throw Error(ErrorKind::Parse, "degree out of range in map '" + s + "'");
  return make(K, d, FieldElement::parse(K, s.substr(p1 + 1, p2 - p1 - 1)), FieldElement::parse(K, s.substr(p2 + 1)));
}

FieldElement UnicriticalMap::operator()(const FieldElement& x) const {
  return (x - gamma).pow(static_cast<unsigned long>(d)) + c;
}

bool UnicriticalMap::integral_shift() const { return shift().is_integral(); }

Polynomial UnicriticalMap::polynomial() const {
  const Polynomial lin(K, {-gamma, FieldElement(K, 1)});
  return lin.pow(static_cast<unsigned>(d)) + Polynomial::constant(K, c);
}

Polynomial UnicriticalMap::iterate_polynomial(int i) const {
  if (i < 0) throw Error(ErrorKind::Precondition, "negative iterate");
  double deg = std::pow(static_cast<double>(d), i);
  if (deg > kMaxSymbolicDegree)
    throw Error(ErrorKind::ExpansionCap, "f^" + std::to_string(i) + " would have degree " +
                                             std::to_string(static_cast<long long>(deg)));
  Polynomial p = Polynomial::x(K);
  const Polynomial f = polynomial();
  for (int k = 0; k < i; ++k) p = f.compose(p);
  return p;
}

std::string UnicriticalMap::to_string() const {
  return std::to_string(d) + ";" + gamma.to_string() + ";" + c.to_string();
}

const FieldElement& OrbitTable::at(int n) const {
  if (n < 0 || n > last_level())
    throw Error(ErrorKind::OperandOverflow, "level " + std::to_string(n) + " not available (orbit stops at " +
                                                std::to_string(last_level()) + ")");
  return values[n];
}

std::size_t digit_size(const FieldElement& x) {
  auto digits = [](const mpz_class& v) { return v == 0 ? std::size_t{1} : mpz_sizeinbase(v.get_mpz_t(), 10); };
  return std::max({digits(x.a().get_num()), digits(x.a().get_den()), digits(x.b().get_num()),
                   digits(x.b().get_den())});
}

OrbitTable iterate(const UnicriticalMap& f, const FieldElement& alpha, int n_max, std::size_t digit_cap) {
  OrbitTable t{f, lift(f.K, alpha), {}, std::nullopt};
  if (digit_size(t.start) > digit_cap) {
    t.overflow_at = 0;
    return t;
  }
  t.values.push_back(t.start);
  // The previous value is under the cap, so one more step costs at most d times the cap.
  for (int i = 1; i <= n_max; ++i) {
    FieldElement next = f(t.values.back());
    if (digit_size(next) > digit_cap) {
      t.overflow_at = i;
      break;
    }
    t.values.push_back(std::move(next));
  }
  return t;
}

double log_plus(double t) { return t > 1 ? std::log(t) : 0.0; }

NuValue nu(const UnicriticalMap& f) {
  NuValue v;
  v.nu = h(f.gamma) / std::max(1.0, h(f.shift()));
  v.log_plus_nu = log_plus(v.nu);
  return v;
}

UnicriticalMap conjugate_by_shift(const UnicriticalMap& f, const FieldElement& t) {
  return UnicriticalMap::make(f.K, f.d, f.gamma - t, f.c - t);
}

std::string PeriodicityVerdict::to_string() const {
  switch (status) {
    case Status::PCF:
      return "PCF(preperiod " + std::to_string(preperiod) + ", period " + std::to_string(period) + ")";
    case Status::Wandering:
      return "Wandering(escape at " + std::to_string(escape_level) + ")";
    case Status::Unknown:
      break;
  }
  return "Unknown(" + std::to_string(steps_tried) + " steps)";
}

double escape_threshold(const UnicriticalMap& f) {
  return 2.0 / (f.d - 1) * std::max(1.0, h(f.shift())) + h(f.gamma) + std::log(2.0) + 1.0;
}

PeriodicityVerdict detect_periodicity(const UnicriticalMap& f, const FieldElement& alpha, int max_steps) {
  if (max_steps < 1) throw Error(ErrorKind::Precondition, "max_steps must be positive");
  PeriodicityVerdict v;
  const double threshold = escape_threshold(f);
  std::map<std::string, int> seen;
  FieldElement beta = lift(f.K, alpha);
  for (int k = 0; k <= max_steps; ++k) {
    auto [it, fresh] = seen.emplace(element_key(beta), k);
    if (!fresh) {
      v.status = PeriodicityVerdict::Status::PCF;
      v.preperiod = it->second;
      v.period = k - it->second;
      v.steps_tried = k;
      return v;
    }
    if (h(beta - f.gamma) > threshold) {
      v.status = PeriodicityVerdict::Status::Wandering;
      v.escape_level = k;
      v.steps_tried = k;
      return v;
    }
    if (k < max_steps) beta = f(beta);
  }
  v.steps_tried = max_steps;
  return v;
}

UnicriticalMap taunec_family(const NumberField& K, int d, const FieldElement& base, int N) {
  if (N < 1) throw Error(ErrorKind::Precondition, "N must be positive");
  const FieldElement b = lift(K, base);
  if (!b.is_integral()) throw Error(ErrorKind::Precondition, "base must lie in O_K");
  const UnicriticalMap tilde = UnicriticalMap::make(K, d, FieldElement(K, 0), b);
  const PeriodicityVerdict v = detect_periodicity(tilde, FieldElement(K, 0));
  if (v.status != PeriodicityVerdict::Status::Wandering)
    throw Error(ErrorKind::PCFBase, "x^" + std::to_string(d) + " + " + b.to_string() + " is " + v.to_string());
  const OrbitTable orbit = iterate(tilde, FieldElement(K, 0), N);
  const FieldElement gamma = -orbit.at(N);
  return UnicriticalMap::make(K, d, gamma, b + gamma);
}

UnicriticalMap example_family(int i) {
  if (i < 2) throw Error(ErrorKind::Precondition, "family index starts at 2");
  const NumberField Q;
  const UnicriticalMap f = UnicriticalMap::make(Q, 2, 0, 2);
  const OrbitTable orbit = iterate(f, 0, i);
  const FieldElement t = FieldElement(2) + (orbit.at(i) - 2) / 2;
  return conjugate_by_shift(f, t);
}

std::vector<SampledPair> sample_wandering(const SampleSpec& spec, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const NumberField& K = spec.K;
  auto draw = [&](long bound) {
    const long a = uniform(-bound, bound);
    const long b = K.is_rational() ? 0 : uniform(-bound, bound);
    return FieldElement(K, a, b);
  };
  std::vector<SampledPair> out;
  while (out.size() < count) {
    const int d = static_cast<int>(uniform(spec.d_min, spec.d_max));
    const FieldElement gamma = draw(spec.coeff_bound);
    const FieldElement c = draw(spec.coeff_bound);
    if (c.is_zero()) continue;
    const UnicriticalMap f = UnicriticalMap::make(K, d, gamma, c);
    FieldElement alpha = spec.critical_start ? gamma : draw(spec.alpha_bound);
    if (spec.rational_start && !spec.critical_start) alpha /= FieldElement(uniform(1, 6));
    if (detect_periodicity(f, alpha).status != PeriodicityVerdict::Status::Wandering) continue;
    out.push_back({f, alpha});
  }
  return out;
}

}  // namespace zsig
