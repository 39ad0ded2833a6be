#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zsiglab/numfield.hpp"
#include "zsiglab/polynomial.hpp"

namespace zsig {

// f(x) = (x - gamma)^d + c over K.
struct UnicriticalMap {
  int d = 2;
  FieldElement gamma;
  FieldElement c;
  NumberField K;

  static UnicriticalMap make(const NumberField& K, int d, const FieldElement& gamma, const FieldElement& c);
  // "d;gamma;c", elements in FieldElement text form.
  static UnicriticalMap parse(const NumberField& K, std::string_view text);

  FieldElement operator()(const FieldElement& x) const;
  FieldElement shift() const { return c - gamma; }
  // c - gamma in O_K
  bool integral_shift() const;
  bool in_Pd() const { return integral_shift() && !c.is_zero(); }
  Polynomial polynomial() const;
  // Symbolic f^i; refuses once d^i exceeds 27 (i <= 4 for d = 2, i <= 3 for d = 3).
  Polynomial iterate_polynomial(int i) const;
  std::string to_string() const;

  bool operator==(const UnicriticalMap&) const = default;
};

constexpr std::size_t kDefaultDigitCap = 100000;
constexpr int kMaxSymbolicDegree = 27;

struct OrbitTable {
  UnicriticalMap map;
  FieldElement start;
  std::vector<FieldElement> values;  // f^0(start) .. f^n(start)
  std::optional<int> overflow_at;   // first level refused by the digit cap

  int last_level() const { return static_cast<int>(values.size()) - 1; }
  // Throws OperandOverflow for levels past the stored range.
  const FieldElement& at(int n) const;
};

// Decimal digits of the largest numerator/denominator coordinate.
std::size_t digit_size(const FieldElement& x);

OrbitTable iterate(const UnicriticalMap& f, const FieldElement& alpha, int n_max,
                   std::size_t digit_cap = kDefaultDigitCap);

struct NuValue {
  double nu = 0;
  double log_plus_nu = 0;
};
NuValue nu(const UnicriticalMap& f);
double log_plus(double t);

// g(x) = f(x + t) - t
UnicriticalMap conjugate_by_shift(const UnicriticalMap& f, const FieldElement& t);

struct PeriodicityVerdict {
  enum class Status { PCF, Wandering, Unknown };
  Status status = Status::Unknown;
  int preperiod = 0;     // PCF
  int period = 0;        // PCF
  int escape_level = 0;  // Wandering
  int steps_tried = 0;

  std::string to_string() const;
};

constexpr int kDefaultPeriodicitySteps = 64;

// Escape threshold for the certificate: (2/(d-1)) max{1, h(c - gamma)} + h(gamma) + log 2 + 1.
double escape_threshold(const UnicriticalMap& f);
PeriodicityVerdict detect_periodicity(const UnicriticalMap& f, const FieldElement& alpha,
                                      int max_steps = kDefaultPeriodicitySteps);

// f~(x) = x^d + base, gamma = -f~^N(0), c = base + gamma. Throws PCFBase unless
// the critical orbit of f~ is certified wandering.
UnicriticalMap taunec_family(const NumberField& K, int d, const FieldElement& base, int N);

// Conjugates of x^2 + 2 over Q by t_i = 2 + (f^i(0) - 2)/2.
UnicriticalMap example_family(int i);

struct SampleSpec {
  NumberField K;
  int d_min = 2;
  int d_max = 2;
  long coeff_bound = 10;  // |gamma|, |c| coordinates
  long alpha_bound = 10;
  bool critical_start = false;  // alpha = gamma
  bool rational_start = false;  // alpha in Q with small denominator
};

struct SampledPair {
  UnicriticalMap f;
  FieldElement alpha;
};

// Seeded draws of integral (gamma, c) with wandering alpha; PCF and unknown
// draws are rejected.
std::vector<SampledPair> sample_wandering(const SampleSpec& spec, std::size_t count, std::uint64_t seed);

}  // namespace zsig
