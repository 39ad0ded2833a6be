#include "zsiglab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "zsiglab/abc.hpp"
#include "zsiglab/dynamics.hpp"
#include "zsiglab/galois.hpp"
#include "zsiglab/heights.hpp"
#include "zsiglab/primdiv.hpp"
#include "zsiglab/quadratic.hpp"
#include "zsiglab/report.hpp"

namespace zsig {

namespace {

struct Options {
  std::string command;
  std::string field = "Q";
  std::string map = "2;0;1";
  std::string alpha = "0";
  std::string shift;
  int n_min = 2;
  int n_max = 8;
  double epsilon = 0.5;
  double delta = 0.25;
  std::uint64_t trial_bound = FactorBudget{}.trial_bound;
  std::uint64_t rho_iters = FactorBudget{}.rho_iterations;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
  // family-scan
  std::string family = "taunec";
  std::string base = "2";
  int degree = 2;
  std::string N_range = "2..10";
  int count = 20;
  long coeff_bound = 10;
  // galois
  int i_max = 6;

  FactorBudget budget() const { return FactorBudget{trial_bound, rho_iters, true}; }
};

ojson config_json(const Options& o) {
  ojson c = ojson::object();
  c["version"] = kVersion;
  c["command"] = o.command;
  c["field"] = o.field;
  if (o.command != "family-scan" || o.family == "random") c["map"] = o.map;
  c["alpha"] = o.alpha;
  c["shift"] = o.shift;
  c["n_min"] = o.n_min;
  c["n_max"] = o.n_max;
  c["epsilon"] = o.epsilon;
  c["delta"] = o.delta;
  c["trial_bound"] = o.trial_bound;
  c["rho_iters"] = o.rho_iters;
  c["jobs"] = o.jobs;
  c["seed"] = o.seed;
  c["format"] = o.format;
  if (o.command == "family-scan") {
    c["family"] = o.family;
    c["base"] = o.base;
    c["degree"] = o.degree;
    c["N"] = o.N_range;
    c["count"] = o.count;
    c["coeff_bound"] = o.coeff_bound;
  }
  if (o.command == "galois") {
    c["family"] = o.family;
    c["i_max"] = o.i_max;
  }
  return c;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad range '" + s + "' (expected a..b)");
  }
}

std::string prime_list(const PrimeExponents& ps) {
  std::string out;
  for (const auto& [P, e] : ps) {
    if (!out.empty()) out += "; ";
    out += P.to_string();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

struct Setup {
  NumberField K;
  UnicriticalMap f;
  FieldElement alpha;
};

Setup common_setup(const Options& o) {
  Setup s;
  s.K = NumberField::parse(o.field);
  s.f = UnicriticalMap::parse(s.K, o.map);
  s.alpha = FieldElement::parse(s.K, o.alpha) * FieldElement(s.K, 1);
  if (!o.shift.empty()) {
    // study g(x) = f(x + t) - t on the matching point alpha - t
    const FieldElement t = FieldElement::parse(s.K, o.shift);
    s.f = conjugate_by_shift(s.f, t);
    s.alpha -= t;
  }
  return s;
}

ojson verdict_json(const PeriodicityVerdict& v) { return v.to_string(); }

// ---- subcommands ----------------------------------------------------------

int cmd_orbit(const Options& o, Report& rep) {
  const Setup s = common_setup(o);
  const OrbitTable orbit = iterate(s.f, s.alpha, o.n_max);
  const PeriodicityVerdict v = detect_periodicity(s.f, s.alpha);
  rep.columns = {"n", "value", "digits", "height"};
  for (int n = 0; n <= orbit.last_level(); ++n) {
    const FieldElement& x = orbit.at(n);
    rep.add_row({n, x.to_string(), digit_size(x), h(x)});
  }
  const NuValue nv = nu(s.f);
  rep.summary["map"] = s.f.to_string();
  rep.summary["periodicity"] = verdict_json(v);
  rep.summary["preperiodic"] = v.status == PeriodicityVerdict::Status::PCF;
  rep.summary["in_Pd"] = s.f.in_Pd();
  rep.summary["nu"] = nv.nu;
  rep.summary["log_plus_nu"] = nv.log_plus_nu;
  if (orbit.last_level() >= 1) {
    const HeightValue ch = canonical_height(s.f, s.alpha, orbit.last_level());
    rep.summary["canonical_height"] = ch.value;
    rep.summary["canonical_height_tail"] = ch.error_bound;
  }
  rep.summary["overflow_at"] = orbit.overflow_at ? ojson(*orbit.overflow_at) : ojson(nullptr);
  return orbit.overflow_at ? kExitResource : kExitOk;
}

void require_wandering(const UnicriticalMap& f, const FieldElement& alpha, Report& rep) {
  const PeriodicityVerdict v = detect_periodicity(f, alpha);
  rep.summary["periodicity"] = v.to_string();
  if (v.status == PeriodicityVerdict::Status::PCF)
    throw Error(ErrorKind::Precondition, "alpha = " + alpha.to_string() + " is preperiodic: " + v.to_string());
}

int cmd_zsigmondy(const Options& o, Report& rep) {
  const Setup s = common_setup(o);
  rep.summary["map"] = s.f.to_string();
  require_wandering(s.f, s.alpha, rep);
  ZsigmondyOptions zo;
  zo.jobs = o.jobs;
  const ZsigmondyReport z = zsigmondy_set(s.f, s.alpha, o.n_max, o.budget(), zo);
  rep.columns = {"n", "value_digits", "primitive_digits", "in_zsigmondy", "mult_one_witness", "primitive_primes", "status"};
  for (const auto& lv : z.levels) {
    rep.add_row({lv.n, digit_size(lv.value), lv.zero_value ? 0 : digit_size(lv.primitive), lv.in_zsigmondy,
                 lv.mult_one_witness ? lv.mult_one_witness->to_string() : "",
                 lv.primes ? prime_list(lv.primes->primes) + (lv.primes->status == FactorStatus::Partial ? " ..." : "") : "",
                 to_string(lv.status)});
  }
  rep.summary["level_one"] = z.level_one.to_string();
  rep.summary["zsigmondy_set"] = z.members();
  rep.summary["all_exact"] = z.all_exact();
  return kExitOk;
}

struct FitLine {
  double slope = 0, intercept = 0;
  bool defined = false;
};

FitLine least_squares(const std::vector<std::pair<double, double>>& pts) {
  FitLine fit;
  if (pts.size() < 2) return fit;
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.defined = true;
  return fit;
}

int cmd_family_scan(const Options& o, Report& rep) {
  const NumberField K = NumberField::parse(o.field);
  ZsigmondyOptions membership;
  membership.list_primes = false;
  membership.find_witness = false;
  std::vector<std::pair<double, double>> points;
  const double log_d = std::log(static_cast<double>(o.degree));

  if (o.family == "taunec") {
    const auto [lo, hi] = parse_range(o.N_range);
    if (lo > hi || lo < 1) throw Error(ErrorKind::Parse, "empty N range '" + o.N_range + "'");
    const FieldElement base = FieldElement::parse(K, o.base);
    rep.columns = {"N", "gamma_digits", "c_digits", "nu", "log_plus_nu", "N_in_zsigmondy", "max_zsigmondy",
                   "zsigmondy_set", "bound_margin", "note"};
    std::vector<std::vector<ojson>> rows(static_cast<std::size_t>(hi - lo + 1));
    parallel_for(rows.size(), o.jobs, [&](std::size_t k) {
      const int N = lo + static_cast<int>(k);
      const UnicriticalMap f = taunec_family(K, o.degree, base, N);
      const NuValue nv = nu(f);
      if (f.c.is_zero()) {
        rows[k] = {N, digit_size(f.gamma), digit_size(f.c), nv.nu, nv.log_plus_nu, nullptr, nullptr, "", nullptr,
                   "c = 0, outside P_d"};
        return;
      }
      const int n_scan = std::max(o.n_max, N + 1);
      const ZsigmondyReport z = zsigmondy_set(f, f.gamma, n_scan, o.budget(), membership);
      const auto members = z.members();
      const bool has_N = std::find(members.begin(), members.end(), N) != members.end();
      // log+ nu - log d < N log d
      const double margin = N * log_d - (nv.log_plus_nu - log_d);
      rows[k] = {N, digit_size(f.gamma), digit_size(f.c), nv.nu, nv.log_plus_nu, has_N,
                 members.empty() ? ojson(nullptr) : ojson(members.back()), ojson(members), margin, ""};
    });
    for (auto& r : rows) {
      if (!r[6].is_null()) points.emplace_back(r[4].get<double>(), r[6].get<double>());
      rep.add_row(std::move(r));
    }
  } else if (o.family == "random") {
    SampleSpec spec;
    spec.K = K;
    spec.d_min = spec.d_max = o.degree;
    spec.coeff_bound = o.coeff_bound;
    spec.critical_start = true;
    const auto draws = sample_wandering(spec, static_cast<std::size_t>(o.count), o.seed);
    rep.columns = {"map", "nu", "log_plus_nu", "max_zsigmondy", "zsigmondy_set"};
    std::vector<std::vector<ojson>> rows(draws.size());
    parallel_for(draws.size(), o.jobs, [&](std::size_t k) {
      const UnicriticalMap& f = draws[k].f;
      const NuValue nv = nu(f);
      const ZsigmondyReport z = zsigmondy_set(f, f.gamma, o.n_max, o.budget(), membership);
      const auto members = z.members();
      rows[k] = {f.to_string(), nv.nu, nv.log_plus_nu, members.empty() ? 0 : members.back(), ojson(members)};
    });
    for (auto& r : rows) {
      points.emplace_back(r[2].get<double>(), r[3].get<double>());
      rep.add_row(std::move(r));
    }
  } else {
    throw Error(ErrorKind::Parse, "unknown family '" + o.family + "' (taunec or random)");
  }

  const FitLine fit = least_squares(points);
  ojson pts = ojson::array();
  for (const auto& [x, y] : points) pts.push_back(ojson::array({x, y}));
  rep.summary["points"] = std::move(pts);
  rep.summary["slope"] = fit.defined ? ojson(fit.slope) : ojson(nullptr);
  rep.summary["intercept"] = fit.defined ? ojson(fit.intercept) : ojson(nullptr);
  rep.summary["reference_slope"] = 1.0 / log_d;
  rep.summary["fit_target"] = "max Zsigmondy element vs log+ nu";
  return kExitOk;
}

int cmd_abc(const Options& o, Report& rep) {
  const Setup s = common_setup(o);
  rep.summary["map"] = s.f.to_string();
  FactorCache cache;
  rep.columns = {"n", "a", "b", "s", "height", "rad", "quality", "rad_margin", "rad_holds", "imprimitive_margin",
                 "imprimitive_holds", "unit_height", "status"};
  const double base_height = h(s.alpha) + h(s.f.gamma) + h(s.f.c);
  const int lo = std::max(1, o.n_min);
  std::vector<std::vector<ojson>> rows(static_cast<std::size_t>(std::max(0, o.n_max - lo + 1)));
  parallel_for(rows.size(), o.jobs, [&](std::size_t k) {
    const int n = lo + static_cast<int>(k);
    std::vector<ojson> r(13, nullptr);
    r[0] = n;
    try {
      const AbcTriple t = orbit_abc_triple(s.f, s.alpha, n, o.budget(), &cache);
      r[1] = t.a.to_string();
      r[2] = t.b.to_string();
      r[3] = t.s.to_string();
      r[4] = t.h_proj;
      r[5] = t.rad;
      r[6] = t.infinite_quality ? ojson("inf") : ojson(t.quality);
    } catch (const Error& e) {
      r[12] = std::string(e.kind() == ErrorKind::DegenerateTriple ? "skipped: " : "partial: ") + e.what();
      if (e.kind() != ErrorKind::DegenerateTriple && e.kind() != ErrorKind::BudgetExceeded) throw;
      rows[k] = std::move(r);
      return;
    }
    std::string status = "ok";
    try {
      const BoundCheck rb = check_rad_lower_bound(s.f, s.alpha, n, o.epsilon, o.budget(), &cache);
      r[7] = rb.margin;
      r[8] = rb.holds;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      status = "partial";
    }
    try {
      const BoundCheck ib = check_imprimitive_bound(s.f, s.alpha, n, o.delta, o.budget(), &cache);
      r[9] = ib.margin;
      r[10] = ib.holds;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      status = "partial";
    }
    if (s.f.d == 2) {
      try {
        r[11] = h(decompose(s.f, s.alpha, n, 2, o.budget(), &cache).u);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded) throw;
        status = "partial";
      }
    }
    r[12] = status;
    rows[k] = std::move(r);
  });
  double best = 0;
  std::optional<double> abc_c, unit_c;
  std::optional<int> held_from;
  for (auto& r : rows) {
    if (r[6].is_number()) best = std::max(best, r[6].get<double>());
    // smallest C with h < (1 + eps) rad + C on every observed triple
    if (r[4].is_number()) {
      const double need = r[4].get<double>() - (1 + o.epsilon) * r[5].get<double>();
      abc_c = abc_c ? std::max(*abc_c, need) : need;
    }
    // smallest C with h(u) <= C (h(alpha) + h(gamma) + h(c)), l = 2
    if (r[11].is_number() && base_height > 0) {
      const double need = r[11].get<double>() / base_height;
      unit_c = unit_c ? std::max(*unit_c, need) : need;
    }
    const bool both = r[8] == true && r[10] == true;
    if (both && !held_from) held_from = r[0].get<int>();
    if (!both && r[12] == "ok") held_from.reset();
    rep.add_row(std::move(r));
  }
  rep.summary["max_quality"] = best;
  rep.summary["abc_intercept"] = abc_c ? ojson(*abc_c) : ojson(nullptr);
  rep.summary["unit_height_constant"] = unit_c ? ojson(*unit_c) : ojson(nullptr);
  rep.summary["observed_threshold"] = held_from ? ojson(*held_from) : ojson(nullptr);
  return kExitOk;
}

ojson maybe(const std::optional<FieldElement>& x) { return x ? ojson(x->to_string()) : ojson(nullptr); }

int cmd_galois(const Options& o, Report& rep) {
  if (o.family == "example") {
    const auto checks = verify_example_family(o.i_max);
    rep.columns = {"i", "t", "gamma", "c", "f_gamma", "f_i_gamma", "disc", "identity", "v2_is_one", "congruence",
                   "disc_identity", "square_witness", "witness_root", "level2", "stability"};
    bool all = true;
    for (const auto& fc : checks) {
      all = all && fc.all_hold();
      rep.add_row({fc.i, fc.t.get_str(), fc.map.gamma.to_string(), fc.map.c.to_string(), fc.f_gamma.to_string(),
                   fc.f_i_gamma.to_string(), fc.disc.to_string(), fc.identity_a, fc.valuation_b, fc.congruence_c,
                   fc.disc_d, fc.witness_e, fc.witness_root ? ojson(fc.witness_root->to_string()) : ojson(nullptr),
                   fc.level2 ? ojson(fc.level2->to_string()) : ojson(nullptr), fc.stability.to_string()});
    }
    rep.summary["all_identities_hold"] = all;
    return kExitOk;
  }
  const Setup s = common_setup(o);
  rep.summary["map"] = s.f.to_string();
  const TowerReport tr = tower_report(s.f, o.n_max, o.budget(), o.jobs);
  if (s.f.d == 2 && tr.stability.status == StabilityReport::Status::Reducible)
    throw Error(ErrorKind::ReducibleBase, s.f.to_string() + " is reducible: -c = (" + tr.stability.square_root->to_string() + ")^2");
  rep.columns = {"n", "stability", "sufficient", "witness_prime", "sufficient_note", "oracle", "oracle_note", "disc"};
  for (const auto& lv : tr.levels) {
    rep.add_row({lv.n, lv.stability, lv.sufficient.to_string(),
                 lv.sufficient.witness_prime ? ojson(lv.sufficient.witness_prime->to_string()) : ojson(nullptr),
                 lv.sufficient.note, lv.oracle ? ojson(lv.oracle->to_string()) : ojson(nullptr),
                 lv.oracle ? ojson(lv.oracle->note) : ojson(nullptr), maybe(lv.disc)});
  }
  rep.summary["stability"] = tr.stability.to_string();
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--field", o.field, "Q, Qi, Q(-D)");
  sub->add_option("--map", o.map, "\"d;gamma;c\" for (x-gamma)^d + c");
  sub->add_option("--alpha", o.alpha, "starting point");
  sub->add_option("--shift", o.shift, "conjugate by x -> x + t first");
  sub->add_option("--n-max,--n", o.n_max, "last level")->check(CLI::Range(0, 4096));
  sub->add_option("--n-min", o.n_min, "first level")->check(CLI::Range(0, 4096));
  sub->add_option("--epsilon", o.epsilon);
  sub->add_option("--delta", o.delta);
  sub->add_option("--trial-bound", o.trial_bound)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100'000'000}));
  sub->add_option("--rho-iters", o.rho_iters);
  sub->add_option("--jobs", o.jobs)->check(CLI::Range(1, 256));
  sub->add_option("--seed", o.seed);
  sub->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "write the report here instead of stdout");
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidField:
    case ErrorKind::Parse:
    case ErrorKind::FieldMismatch:
      return kExitConfig;
    case ErrorKind::BudgetExceeded:
    case ErrorKind::OperandOverflow:
    case ErrorKind::ExpansionCap:
      return kExitResource;
    default:
      return kExitPrecondition;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact experiments on orbits of unicritical polynomials", "zsiglab"};
  app.require_subcommand(1);
  auto* orbit = app.add_subcommand("orbit", "exact orbit, heights, canonical height");
  auto* zsig = app.add_subcommand("zsigmondy", "primitive divisors and Zsigmondy set per level");
  auto* scan = app.add_subcommand("family-scan", "constructed families and the log+ nu fit");
  auto* abc = app.add_subcommand("abc", "orbit abc triples and bound margins");
  auto* gal = app.add_subcommand("galois", "stability and tower maximality");
  for (auto* sub : {orbit, zsig, scan, abc, gal}) add_common(sub, o);
  scan->add_option("--family", o.family, "taunec or random");
  scan->add_option("--base", o.base, "c - gamma of the base map");
  scan->add_option("--degree,-d", o.degree)->check(CLI::Range(2, 16));
  scan->add_option("--N", o.N_range, "range a..b");
  scan->add_option("--count", o.count)->check(CLI::Range(1, 100000));
  scan->add_option("--coeff-bound", o.coeff_bound)->check(CLI::Range(1L, 1000000L));
  gal->add_option("--family", o.family, "example: verify the conjugated x^2+2 family");
  gal->add_option("--i-max", o.i_max)->check(CLI::Range(2, 12));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "zsiglab: " << e.what() << "\n";
    return kExitConfig;
  }

  Report rep;
  int code = kExitOk;
  try {
    if (orbit->parsed()) {
      o.command = "orbit";
      o.family.clear();
    } else if (zsig->parsed()) {
      o.command = "zsigmondy";
      o.family.clear();
    } else if (scan->parsed()) {
      o.command = "family-scan";
    } else if (abc->parsed()) {
      o.command = "abc";
      o.family.clear();
    } else {
      o.command = "galois";
      if (o.family == "taunec") o.family.clear();
    }
    rep.config = config_json(o);
    if (o.command == "orbit") code = cmd_orbit(o, rep);
    else if (o.command == "zsigmondy") code = cmd_zsigmondy(o, rep);
    else if (o.command == "family-scan") code = cmd_family_scan(o, rep);
    else if (o.command == "abc") code = cmd_abc(o, rep);
    else code = cmd_galois(o, rep);
  } catch (const Error& e) {
    err << "zsiglab: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }

  const std::string text = o.format == "json" ? rep.to_json() : rep.to_csv();
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      err << "zsiglab: cannot write " << o.out << "\n";
      return kExitConfig;
    }
    f << text;
  }
  return code;
}

}  // namespace zsig
