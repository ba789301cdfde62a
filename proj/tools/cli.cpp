#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lnorm/analytic.hpp"
#include "lnorm/critical.hpp"
#include "lnorm/errors.hpp"
#include "lnorm/generators.hpp"
#include "lnorm/normest.hpp"
#include "lnorm/witness.hpp"

#ifndef LNORM_VERSION
#define LNORM_VERSION "0.0.0"
#endif

namespace lnorm::cli {

using json = nlohmann::ordered_json;

namespace {

// Thrown for bad flag values discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "json";
  std::string out_path;
  unsigned threads = 1;
  double tol = kDefaultTol;
  std::size_t max_iter = kDefaultMaxIter;
  std::size_t dense_cap = kDefaultDenseCap;
  double min_speedup = kDefaultMinSpeedup;
};

struct Record {
  std::string command;
  json params = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json summary = json::object();
  bool deterministic = true;
};

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) throw UsageError(what + ": not a number: '" + text + "'");
  return v;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw UsageError(what + ": not a nonnegative integer: '" + text + "'");
  return v;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t v = parse_count(item, "--sizes");
    if (v == 0) throw UsageError("--sizes: sizes must be >= 1");
    sizes.push_back(v);
  }
  if (sizes.empty()) throw UsageError("--sizes: empty list");
  return sizes;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::stringstream ss(spec);
  std::string lo, hi, step;
  if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, step) || !ss.eof()) {
    throw UsageError("--grid: expected lo:hi:step, got '" + spec + "'");
  }
  const double l = parse_double(lo, "--grid"), h = parse_double(hi, "--grid"), st = parse_double(step, "--grid");
  if (!(st > 0.0)) throw UsageError("--grid: step must be positive");
  auto grid = make_grid(l, h, st);
  if (grid.empty()) throw UsageError("--grid: empty grid '" + spec + "'");
  if (grid.front() <= 0.0) throw UsageError("--grid: values must be positive");
  return grid;
}

void apply_env(Common& c, const EnvLookup& env) {
  if (auto v = env("LNORM_TOL")) {
    c.tol = parse_double(*v, "LNORM_TOL");
    if (!(c.tol > 0.0)) throw UsageError("LNORM_TOL must be > 0");
  }
  if (auto v = env("LNORM_MAX_ITER")) c.max_iter = parse_count(*v, "LNORM_MAX_ITER");
  if (auto v = env("LNORM_DENSE_CAP")) c.dense_cap = parse_count(*v, "LNORM_DENSE_CAP");
  if (auto v = env("LNORM_THREADS")) c.threads = static_cast<unsigned>(parse_count(*v, "LNORM_THREADS"));
  if (auto v = env("LNORM_BENCH_MIN_SPEEDUP")) c.min_speedup = parse_double(*v, "LNORM_BENCH_MIN_SPEEDUP");
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", c.out_path, "Write the record to this file instead of stdout");
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--tol", c.tol, "Stopping tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-iter", c.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  sub->add_option("--dense-cap", c.dense_cap, "Largest dense materialization")->check(CLI::PositiveNumber);
}

void validate_common(const Common& c) {
  if (c.threads == 0) throw UsageError("threads must be >= 1");
  if (c.max_iter == 0) throw UsageError("max-iter must be >= 1");
  if (c.dense_cap == 0) throw UsageError("dense-cap must be >= 1");
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return v.dump();
}

std::string render(const Record& r, const std::string& format, double wall_time) {
  std::ostringstream os;
  if (format == "csv") {
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << '\n';
    }
    return os.str();
  }
  json doc;
  doc["schema"] = 1;
  doc["command"] = r.command;
  doc["params"] = r.params;
  doc["columns"] = r.columns;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  doc["summary"] = r.summary;
  doc["meta"] = {{"tool", "lnorm"}, {"version", LNORM_VERSION}, {"wall_time_s", wall_time},
                 {"deterministic", r.deterministic}};
  os << doc.dump(2) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

struct NormArgs {
  std::string family = "as";
  std::string shape;
  std::optional<double> s;
  std::optional<std::int64_t> N;
  double p = 2.0;
  std::string sizes = "256,1024,4096";
};

Record cmd_norm(const NormArgs& a, const Common& c) {
  GeneratorSequence gen = GeneratorSequence::as(1.0);
  Shape shape = Shape::L;
  if (a.family == "as" || a.family == "cesaro") {
    if (!a.s) throw UsageError("norm: --s is required for family " + a.family);
    if (!(*a.s > 0.0)) throw UsageError("norm: --s must be > 0");
    gen = a.family == "as" ? GeneratorSequence::as(*a.s) : GeneratorSequence::cesaro(*a.s);
    shape = a.family == "as" ? Shape::L : Shape::C;
  } else {
    if (!a.N) throw UsageError("norm: --N is required for family lacunary");
    if (*a.N < 2) throw UsageError("norm: --N must be >= 2");
    gen = GeneratorSequence::lacunary(*a.N);
    shape = Shape::C;
  }
  const bool default_shape = a.shape.empty();
  if (a.shape == "L") shape = Shape::L;
  if (a.shape == "C") shape = Shape::C;
  if (a.shape == "Ctr") shape = Shape::Ctr;
  if (!(a.p > 1.0)) throw UsageError("norm: --p must be > 1");

  const auto sizes = parse_sizes(a.sizes);
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw UsageError("norm: --sizes must be strictly increasing");
  }

  const StructuredMatrix A{shape, gen};
  SweepOptions so;
  so.tol = c.tol;
  so.max_iter = c.max_iter;
  so.threads = c.threads;
  const auto sweep = truncation_sweep(A, a.p, sizes, so);

  Record r;
  r.command = "norm";
  r.params = {{"family", a.family}, {"shape", to_string(shape)}, {"generator", gen.describe()}, {"p", a.p},
              {"sizes", sizes}, {"tol", c.tol}, {"max_iter", c.max_iter}};
  r.columns = {"M", "value", "residual", "iterations", "lower_certificate", "converged"};
  for (const auto& e : sweep) {
    r.rows.push_back({e.truncation, e.value, e.residual, e.iterations, e.lower_certificate, e.converged});
  }

  // Proven bounds for the default shape of each family.
  std::optional<double> bound;
  std::string bound_name;
  if (default_shape) {
    if (a.family == "as") {
      bound = upper_bound_of_record(a.p, *a.s);
      bound_name = a.p == 2.0 ? "delta_bound" : "pq";
    } else if (a.family == "cesaro" && *a.s >= 1.0) {
      bound = holder_conjugate(a.p);
      bound_name = "q";
    } else if (a.family == "lacunary" && a.p == 2.0) {
      bound = lacunary_norm(*a.N);
      bound_name = "lacunary_norm";
    }
  }
  r.summary["upper_bound"] = opt(bound);
  r.summary["upper_bound_kind"] = bound ? json(bound_name) : json(nullptr);
  const auto fit = log_fit_extrapolation(sweep);
  r.summary["log_fit_limit_heuristic"] = fit ? json(fit->limit) : json(nullptr);

  if (bound) {
    for (const auto& e : sweep) {
      if (e.lower_certificate > *bound * (1.0 + 1e-9) + 1e-9) {
        std::ostringstream os;
        os.precision(17);
        os << "norm: certified value " << e.lower_certificate << " at M=" << e.truncation << " exceeds the proven bound "
           << *bound;
        throw ConsistencyError(os.str());
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
  std::optional<double> s;
  std::optional<double> p;
  std::optional<std::int64_t> N;
  std::string t = "opt";
  std::size_t k_max = 10;
  std::size_t n_max = 1000000;
};

Record cmd_bounds(const BoundsArgs& a) {
  if (!a.s && !a.p && !a.N) throw UsageError("bounds: give at least one of --s, --p, --N");
  Record r;
  r.command = "bounds";
  r.columns = {"quantity", "index", "value"};
  auto row = [&r](const std::string& name, const json& index, double value) { r.rows.push_back({name, index, value}); };

  if (a.s) {
    const double s = *a.s;
    if (!(s > 0.0)) throw UsageError("bounds: --s must be > 0");
    r.params["s"] = s;
    r.params["n_max"] = a.n_max;
    row("f_s", nullptr, f_of_s(s));
    const auto report = delta_upper_bound(DeltaBoundParams::standard(s, a.n_max), GeneratorSequence::as(s));
    row("delta_bound", nullptr, report.value);
    row("s_star", nullptr, s_star());
    row("s_upper", nullptr, s_upper());
    if (s != 0.25) {
      row("g0", nullptr, g0_limit(s));
      row("f0_quartic", nullptr, f0_quartic(s));
    }
  }
  if (a.p) {
    const double p = *a.p;
    if (!(p > 1.0)) throw UsageError("bounds: --p must be > 1");
    r.params["p"] = p;
    row("q", nullptr, holder_conjugate(p));
    row("pq", nullptr, pq_constant(p));
    if (a.s && *a.s >= 1.0) row("sandwich_bound", nullptr, pq_constant(p));
  }
  if (a.N) {
    const std::int64_t N = *a.N;
    if (N < 2) throw UsageError("bounds: --N must be >= 2");
    const double t = a.t == "opt" ? lacunary_t_opt(N) : parse_double(a.t, "--t");
    if (!(t >= 0.0 && t <= 1.0)) throw UsageError("bounds: --t must lie in [0, 1]");
    r.params["N"] = N;
    r.params["t"] = a.t == "opt" ? json("opt") : json(t);
    r.params["k_max"] = a.k_max;
    row("lacunary_norm", nullptr, lacunary_norm(N));
    row("lacunary_norm_squared", nullptr, lacunary_norm_squared(N));
    row("t_opt", nullptr, lacunary_t_opt(N));
    row("t", nullptr, t);
    for (std::size_t k = 0; k <= a.k_max; ++k) {
      const auto lc = lacunary_constants(N, t, k);
      row("eta", k, k == 0 ? lc.eta0 : lc.eta_k);
    }
    for (std::size_t k = 1; k <= a.k_max; ++k) row("eta_gap", k, -lacunary_constants(N, t, k).eta_k_correction);
  }
  return r;
}

// ---------------------------------------------------------------------------

struct WitnessArgs {
  std::string kind = "as";
  std::optional<double> s;
  std::optional<double> p;
  std::optional<std::int64_t> N;
  std::size_t M = 100000;
  std::size_t m = 10000;
  std::size_t levels = 16;
  std::string eps = "auto";
};

Record cmd_witness(const WitnessArgs& a) {
  Record r;
  r.command = "witness";
  r.params["kind"] = a.kind;
  if (a.kind == "as") {
    if (!a.s) throw UsageError("witness: --s is required");
    if (a.M < 2) throw UsageError("witness: --M must be >= 2");
    std::optional<double> eps;
    if (a.eps != "auto") {
      eps = parse_double(a.eps, "--eps");
      if (!(*eps > 0.0)) throw UsageError("witness: --eps must be > 0");
    }
    r.params["s"] = *a.s;
    r.params["M"] = a.M;
    r.params["eps"] = eps ? json(*eps) : json("auto");
    r.columns = {"status", "eps", "alpha", "beta", "ratio", "pointwise_ok", "min_pointwise_margin", "matvec_ratio",
                 "tail", "consistency_error", "K_crosscheck"};
    try {
      const auto w = build_as_witness(*a.s, a.M, eps);
      const auto cert = certify_as_witness(w);
      r.rows.push_back({"ok", w.params.eps(), w.params.alpha(), w.params.beta(), cert.ratio, cert.pointwise_ok,
                        cert.min_pointwise_margin, cert.matvec_ratio, cert.tail, cert.consistency_error,
                        witness_K_crosscheck(w)});
      if (!cert.pointwise_ok) throw ConsistencyError("witness: pointwise inequality y_n >= (4+eps) x_n violated");
    } catch (const NoValidEpsilon& e) {
      r.rows.push_back({"no_valid_epsilon", nullptr, nullptr, nullptr, nullptr, false, nullptr, nullptr, nullptr,
                        nullptr, nullptr});
      r.summary["message"] = e.what();
    }
  } else if (a.kind == "pnorm") {
    if (!a.s || !a.p) throw UsageError("witness: --s and --p are required");
    if (!(*a.s >= 1.0)) throw UsageError("witness: --s must be >= 1");
    if (!(*a.p > 1.0)) throw UsageError("witness: --p must be > 1");
    r.params["s"] = *a.s;
    r.params["p"] = *a.p;
    r.params["m"] = a.m;
    const auto cert = certify_pnorm_witness(build_pnorm_witness(*a.s, *a.p, a.m));
    r.columns = {"ratio", "truncation", "norm_p_pow", "gamma_m", "lower_bound_pow", "slack", "self_bound_ok",
                 "upper_ok"};
    r.rows.push_back({cert.ratio, cert.truncation, cert.norm_p_pow, cert.gamma_m, cert.lower_bound_pow, cert.slack,
                      cert.self_bound_ok, cert.upper_ok});
    r.summary["pq"] = pq_constant(*a.p);
    if (!cert.self_bound_ok || !cert.upper_ok) throw ConsistencyError("witness: p-norm witness violates a proven bound");
  } else {
    if (!a.N) throw UsageError("witness: --N is required");
    if (*a.N < 2) throw UsageError("witness: --N must be >= 2");
    if (a.levels < 1) throw UsageError("witness: --levels must be >= 1");
    r.params["N"] = *a.N;
    r.params["levels"] = a.levels;
    const auto cert = certify_lacunary_witness(build_lacunary_witness(*a.N, a.levels));
    r.columns = {"ratio_sq", "ratio_sq_blocks", "ratio_sq_bound", "limit", "gap", "bound_ok"};
    r.rows.push_back({cert.ratio_sq, cert.ratio_sq_blocks, cert.ratio_sq_bound, cert.limit, cert.limit - cert.ratio_sq,
                      cert.bound_ok});
    if (!cert.bound_ok) throw ConsistencyError("witness: lacunary ratio below the c-corrected bound");
  }
  return r;
}

// ---------------------------------------------------------------------------

struct CriticalArgs {
  double p = 2.0;
  std::optional<std::string> grid;
  std::size_t M_max = std::size_t{1} << 16;
  double margin = 1e-3;
  std::size_t witness_M = 100000;
};

Record cmd_critical(const CriticalArgs& a, const Common& c) {
  if (!(a.p > 1.0)) throw UsageError("critical: --p must be > 1");
  if (a.M_max < 1) throw UsageError("critical: --Mmax must be >= 1");
  std::vector<double> grid;
  if (a.grid) {
    grid = parse_grid(*a.grid);
  } else if (a.p == 2.0) {
    grid = default_grid_p2();
  } else {
    grid = make_grid(0.5, 1.5, 0.1);
  }

  ScanOptions so;
  so.M_max = a.M_max;
  so.margin = a.margin;
  so.tol = c.tol;
  so.max_iter = c.max_iter;
  so.witness_M = a.witness_M;
  so.threads = c.threads;
  const auto scan = scan_critical(a.p, grid, so);

  Record r;
  r.command = "critical";
  r.params = {{"p", a.p},        {"grid", a.grid ? json(*a.grid) : json("default")}, {"Mmax", a.M_max},
              {"margin", a.margin}, {"witness_M", a.witness_M}, {"tol", c.tol}, {"max_iter", c.max_iter}};
  r.columns = {"s", "verdict", "witness_ratio", "witness_eps", "sweep_max", "sweep_max_M", "upper_bound", "certificate"};
  for (const auto& pt : scan.per_s) {
    r.rows.push_back({pt.s, to_string(pt.verdict), opt(pt.witness_ratio), opt(pt.witness_eps), pt.sweep_max,
                      pt.sweep_max_truncation, opt(pt.upper_bound), pt.certificate});
  }
  r.summary = {{"target", scan.target},
               {"bracket_low", opt(scan.bracket_low)},
               {"bracket_high", opt(scan.bracket_high)},
               {"verdicts_monotone", scan.verdicts_monotone}};
  return r;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string sizes = "1024,2048,4096,8192,16384";
  std::size_t reps = 20;
  std::optional<double> min_speedup;
};

Record cmd_bench(const BenchArgs& a, const Common& c) {
  if (a.reps == 0) throw UsageError("bench: --reps must be >= 1");
  auto sizes = parse_sizes(a.sizes);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  const double min_speedup = a.min_speedup.value_or(c.min_speedup);

  const auto result = bench_matvec(sizes, a.reps, c.dense_cap);
  Record r;
  r.command = "bench";
  r.deterministic = false;
  r.params = {{"sizes", sizes}, {"reps", a.reps}, {"dense_cap", c.dense_cap}, {"min_speedup", min_speedup}};
  r.columns = {"M", "structured_s", "dense_s", "speedup"};
  std::optional<double> speedup_4096;
  for (const auto& row : result.rows) {
    std::optional<double> speedup;
    if (row.dense_s) speedup = *row.dense_s / row.structured_s;
    if (row.M == 4096) speedup_4096 = speedup;
    r.rows.push_back({row.M, row.structured_s, opt(row.dense_s), opt(speedup)});
  }
  r.summary = {{"exponent", opt(result.exponent)},
               {"exponent_ok", result.exponent ? json(*result.exponent >= 0.9 && *result.exponent <= 1.3) : json(nullptr)},
               {"speedup_at_4096", opt(speedup_4096)},
               {"speedup_ok", speedup_4096 ? json(*speedup_4096 >= min_speedup) : json(nullptr)}};
  return r;
}

}  // namespace

std::optional<std::string> system_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

std::optional<double> fit_exponent(std::span<const std::size_t> sizes, std::span<const double> times) {
  if (sizes.size() != times.size() || sizes.size() < 2) return std::nullopt;
  const double n = static_cast<double>(sizes.size());
  double su = 0, sv = 0, suu = 0, suv = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double u = std::log(static_cast<double>(sizes[i]));
    const double v = std::log(times[i]);
    su += u;
    sv += v;
    suu += u * u;
    suv += u * v;
  }
  const double denom = n * suu - su * su;
  if (denom == 0.0) return std::nullopt;
  return (n * suv - su * sv) / denom;
}

BenchResult bench_matvec(std::span<const std::size_t> sizes, std::size_t reps, std::size_t dense_cap) {
  using clock = std::chrono::steady_clock;
  volatile double sink = 0.0;

  // Best of `reps`, each rep long enough (>= 2 ms) to swamp clock resolution.
  auto time_op = [&](auto&& op) {
    std::size_t inner = 1;
    for (;;) {
      const auto t0 = clock::now();
      for (std::size_t i = 0; i < inner; ++i) op();
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      if (dt >= 2e-3 || inner >= (std::size_t{1} << 24)) break;
      inner *= 2;
    }
    double best = 1e300;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto t0 = clock::now();
      for (std::size_t i = 0; i < inner; ++i) op();
      best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count() / static_cast<double>(inner));
    }
    return best;
  };

  const StructuredMatrix A{Shape::L, GeneratorSequence::as(1.0)};
  BenchResult result;
  std::vector<double> times;
  for (std::size_t M : sizes) {
    std::vector<double> x(M, 1.0), y(M);
    const TruncatedOperator op{A, M};
    BenchRow row;
    row.M = M;
    row.structured_s = time_op([&] {
      op.apply(x, y);
      sink = sink + y[0];
    });
    if (M <= dense_cap) {
      const DenseMatrix D = materialize_dense(A, M, dense_cap);
      row.dense_s = time_op([&] {
        const auto z = dense_matvec(D, x);
        sink = sink + z[0];
      });
    }
    times.push_back(row.structured_s);
    result.rows.push_back(row);
  }
  result.exponent = fit_exponent(sizes, times);
  return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  Common common;
  common.threads = std::max(1u, std::thread::hardware_concurrency());
  try {
    apply_env(common, env);
  } catch (const UsageError& e) {
    err << "lnorm: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Operator norms of structured infinite matrices", "lnorm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LNORM_VERSION);

  NormArgs norm_args;
  auto* norm = app.add_subcommand("norm", "Truncation sweep of a norm estimate");
  add_common(norm, common);
  norm->add_option("--family", norm_args.family)->check(CLI::IsMember({"as", "cesaro", "lacunary"}));
  norm->add_option("--shape", norm_args.shape, "Override the shape (L, C, Ctr)")->check(CLI::IsMember({"L", "C", "Ctr"}));
  norm->add_option("--s", norm_args.s);
  norm->add_option("--N", norm_args.N);
  norm->add_option("--p", norm_args.p);
  norm->add_option("--sizes", norm_args.sizes, "Comma-separated truncation sizes");

  BoundsArgs bounds_args;
  auto* bounds = app.add_subcommand("bounds", "Analytic constants and bounds");
  add_common(bounds, common);
  bounds->add_option("--s", bounds_args.s);
  bounds->add_option("--p", bounds_args.p);
  bounds->add_option("--N", bounds_args.N);
  bounds->add_option("--t", bounds_args.t, "Splitting exponent in [0, 1] or 'opt'");
  bounds->add_option("--k-max", bounds_args.k_max, "Last eta_k index");
  bounds->add_option("--n-max", bounds_args.n_max, "Horizon of the delta-bound supremum")->check(CLI::PositiveNumber);

  WitnessArgs witness_args;
  auto* witness = app.add_subcommand("witness", "Build and certify a witness vector");
  add_common(witness, common);
  witness->add_option("--kind", witness_args.kind)->check(CLI::IsMember({"as", "pnorm", "lacunary"}));
  witness->add_option("--s", witness_args.s);
  witness->add_option("--p", witness_args.p);
  witness->add_option("--N", witness_args.N);
  witness->add_option("--M", witness_args.M, "Truncation of the As witness");
  witness->add_option("--m", witness_args.m, "Length parameter of the p-norm witness");
  witness->add_option("--levels", witness_args.levels, "Levels of the lacunary witness");
  witness->add_option("--eps", witness_args.eps, "Epsilon or 'auto'");

  CriticalArgs critical_args;
  auto* critical = app.add_subcommand("critical", "Scan for the critical point");
  add_common(critical, common);
  critical->add_option("--p", critical_args.p);
  critical->add_option("--grid", critical_args.grid, "lo:hi:step");
  critical->add_option("--Mmax", critical_args.M_max, "Largest truncation of each sweep");
  critical->add_option("--margin", critical_args.margin)->check(CLI::NonNegativeNumber);
  critical->add_option("--witness-M", critical_args.witness_M)->check(CLI::Range(std::size_t{2}, std::size_t{1} << 26));

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Structured vs dense matvec timings");
  add_common(bench, common);
  bench->add_option("--sizes", bench_args.sizes);
  bench->add_option("--reps", bench_args.reps);
  bench->add_option("--min-speedup", bench_args.min_speedup);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    validate_common(common);
    const auto t0 = std::chrono::steady_clock::now();
    Record record;
    if (norm->parsed()) record = cmd_norm(norm_args, common);
    if (bounds->parsed()) record = cmd_bounds(bounds_args);
    if (witness->parsed()) record = cmd_witness(witness_args);
    if (critical->parsed()) record = cmd_critical(critical_args, common);
    if (bench->parsed()) record = cmd_bench(bench_args, common);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string text = render(record, common.format, wall);
    if (common.out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(common.out_path, std::ios::binary);
      if (!file) throw UsageError("cannot open --out file '" + common.out_path + "'");
      file << text;
      if (!file) throw std::runtime_error("failed writing '" + common.out_path + "'");
      err << "lnorm: wrote " << common.out_path << '\n';
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "lnorm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "lnorm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConsistencyError& e) {
    err << "lnorm: consistency failure: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const std::exception& e) {
    err << "lnorm: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lnorm::cli
