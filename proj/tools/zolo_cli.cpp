// zolo_cli: Zolotarev numbers, solver runs, heuristic bounds, skeleton
// conditioning and the three figure sweeps as CSV or JSON tables.
//
// Exit status: 0 when every row is certified, 2 when some row is not, 1 on
// any error (message on stderr).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zolo/analytic.hpp"
#include "zolo/errors.hpp"
#include "zolo/heuristic.hpp"
#include "zolo/io.hpp"
#include "zolo/parallel.hpp"
#include "zolo/skeleton.hpp"
#include "zolo/solver.hpp"
#include "zolo/svd_compare.hpp"

using namespace zolo;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kLn10 = 2.302585092994045684;

struct RunConfig {
  std::string command;
  std::string domain_file;
  std::optional<double> lambda;
  std::optional<int> n;
  std::string n_range;
  std::string lambda_grid;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  double certify_tol = 1e-8;
  int max_iter = 200;
  bool no_meta = false;
  std::string fig_kind;
  int samples = 1000;
  int set_size = 100;
  double sigma_floor = 1e-13;
};

using Meta = std::vector<std::pair<std::string, std::string>>;

double log10_of(double v) { return v / kLn10; }

Json nodes(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

int parse_int(const std::string& s, const char* what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size()) throw ValidationError(std::string("bad integer in ") + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

/// "A:B" inclusive.
std::vector<int> parse_n_range(const std::string& s) {
  const auto p = split(s, ':');
  if (p.size() != 2) throw ValidationError("--n-range must look like A:B");
  const int a = parse_int(p[0], "--n-range"), b = parse_int(p[1], "--n-range");
  if (a > b) throw ValidationError("--n-range needs A <= B");
  std::vector<int> out;
  for (int n = a; n <= b; ++n) out.push_back(n);
  return out;
}

/// "A:B:COUNT", log-spaced and inclusive of both ends.
std::vector<double> parse_lambda_grid(const std::string& s) {
  const auto p = split(s, ':');
  if (p.size() != 3) throw ValidationError("--lambda-grid must look like A:B:COUNT");
  const double a = parse_double(p[0]), b = parse_double(p[1]);
  const int count = parse_int(p[2], "--lambda-grid");
  if (!(a > 0 && b > 0 && a < 1 && b < 1) || count < 1)
    throw ValidationError("--lambda-grid needs 0 < A, B < 1 and COUNT >= 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : double(i) / (count - 1);
    out.push_back(i == 0 ? a : i == count - 1 ? b : std::exp(std::log(a) + t * (std::log(b) - std::log(a))));
  }
  return out;
}

void check_lambda(double lambda) {
  if (!(lambda > 0 && lambda < 1)) throw ValidationError("lambda must lie in (0, 1)");
}

std::vector<int> n_values(const RunConfig& c, const char* fallback) {
  if (c.n && !c.n_range.empty()) throw ValidationError("give --n or --n-range, not both");
  if (c.n) return {*c.n};
  if (!c.n_range.empty()) return parse_n_range(c.n_range);
  if (fallback) return parse_n_range(fallback);
  throw ValidationError("--n or --n-range is required");
}

std::vector<double> lambda_values(const RunConfig& c, const char* fallback) {
  if (c.lambda && !c.lambda_grid.empty()) throw ValidationError("give --lambda or --lambda-grid, not both");
  if (c.lambda) {
    check_lambda(*c.lambda);
    return {*c.lambda};
  }
  if (!c.lambda_grid.empty()) return parse_lambda_grid(c.lambda_grid);
  if (fallback) return parse_lambda_grid(fallback);
  throw ValidationError("--lambda or --lambda-grid is required");
}

/// The domain file, or the symmetric intervals for --lambda.
std::pair<Domain, Domain> domains_for(const RunConfig& c) {
  if (!c.domain_file.empty()) {
    if (c.lambda || !c.lambda_grid.empty()) throw ValidationError("give --domain or --lambda, not both");
    return load_domain_pair(c.domain_file);
  }
  if (!c.lambda) throw ValidationError("--domain or --lambda is required");
  check_lambda(*c.lambda);
  return {Domain::intervals({{*c.lambda, 1}}), Domain::intervals({{-1, -*c.lambda}})};
}

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions o;
  o.certify_tol = c.certify_tol;
  o.max_iter = c.max_iter;
  o.throw_on_failure = false;
  return o;
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Meta metadata(const RunConfig& c) {
  if (c.no_meta) return {};
  Meta m{{"tool", std::string("zolo_cli ") + kVersion}, {"command", c.command}};
  if (!c.domain_file.empty()) m.emplace_back("domain", c.domain_file);
  if (c.lambda) m.emplace_back("lambda", format_double(*c.lambda));
  if (!c.lambda_grid.empty()) m.emplace_back("lambda_grid", c.lambda_grid);
  if (c.n) m.emplace_back("n", std::to_string(*c.n));
  if (!c.n_range.empty()) m.emplace_back("n_range", c.n_range);
  if (c.command.rfind("fig", 0) == 0) m.emplace_back("seed", std::to_string(c.seed));
  m.emplace_back("certify_tol", format_double(c.certify_tol));
  m.emplace_back("max_iter", std::to_string(c.max_iter));
  m.emplace_back("threads", std::to_string(thread_count()));
  m.emplace_back("generated", timestamp());
  return m;
}

void emit(const RunConfig& c, const Table& t, const Meta& meta) {
  const auto fmt = output_format_from_string(c.format);
  if (c.out.empty()) {
    write_table(std::cout, t, fmt, meta);
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ValidationError("cannot write " + c.out);
  write_table(f, t, fmt, meta);
  if (!f) throw ValidationError("write failed for " + c.out);
}

struct KappaCells {
  double xy = std::nan(""), yx = std::nan(""), bar = std::nan("");
};

KappaCells kappa_cells(const std::vector<double>& roots, const std::vector<double>& poles, const Domain& X,
                       const Domain& Y) {
  KappaCells k;
  if (roots.empty()) return k;
  const auto rep = kappa(make_skeleton(roots, poles), X, Y);
  k.xy = rep.kappa_xy;
  k.yx = rep.kappa_yx;
  k.bar = kappa_asymptote(static_cast<int>(roots.size()));
  return k;
}

int cmd_analytic(const RunConfig& c) {
  const auto ns = n_values(c, nullptr);
  const auto lambdas = lambda_values(c, nullptr);
  Table t;
  t.columns = {"lambda", "n", "log_Zn", "log10_Zn", "log_lower", "log10_lower", "log_upper", "log10_upper",
               "log_upper2", "log10_upper2", "log_upper3", "log10_upper3", "kappa_xy", "kappa_yx",
               "kappa_bar", "certified", "roots", "poles", "x_extrema", "y_extrema"};
  std::vector<std::vector<Json>> rows(lambdas.size() * ns.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const double lambda = lambdas[k / ns.size()];
    const int n = ns[k % ns.size()];
    if (n < 1) throw ValidationError("n must be at least 1");
    const auto sol = zolotarev_nodes(n, lambda);
    const auto b = zolotarev_bounds(n, lambda);
    const auto kc = kappa_cells(sol.roots, sol.poles, Domain::intervals({{lambda, 1}}),
                                Domain::intervals({{-1, -lambda}}));
    rows[k] = {lambda, n, sol.log_Zn, log10_of(sol.log_Zn), b.log_lower, log10_of(b.log_lower),
               b.log_upper, log10_of(b.log_upper), b.log_upper2, log10_of(b.log_upper2), b.log_upper3,
               log10_of(b.log_upper3), kc.xy, kc.yx, kc.bar, true, nodes(sol.roots), nodes(sol.poles),
               nodes(sol.x_extrema), nodes(sol.y_extrema)};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  emit(c, t, metadata(c));
  return 0;
}

std::vector<double> distinct(std::vector<double> v) {
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int cmd_solve(const RunConfig& c) {
  const auto [X, Y] = domains_for(c);
  const auto ns = n_values(c, nullptr);
  const auto pair = validate_pair(X, Y);
  const auto opts = solve_options(c);
  const bool json = output_format_from_string(c.format) == OutputFormat::Json;
  Table t;
  t.columns = {"n", "lambda_hull", "log_Zn", "log10_Zn", "log_Zn_lower", "log10_Zn_lower", "log_Zn_upper",
               "log10_Zn_upper", "hull_log_Zn", "hull_log10_Zn", "hull_log_lower", "hull_log10_lower",
               "hull_log_upper", "hull_log10_upper", "iterations", "final_deviation", "certified", "status",
               "kappa_xy", "kappa_yx", "kappa_bar", "roots", "poles"};
  if (json) t.columns.push_back("skeleton");
  std::vector<std::vector<Json>> rows(ns.size());
  std::vector<char> certified(ns.size(), 0);
  parallel_for(ns.size(), [&](std::size_t k) {
    const int n = ns[k];
    if (n < 0) throw ValidationError("n must be nonnegative");
    auto [eq, rep] = solve(pair, n, opts);
    // A covering witness repeats the last covered point; report each node once.
    const auto roots = distinct(eq.original_roots());
    auto poles = eq.original_poles();
    poles.erase(std::unique(poles.begin(), poles.end()), poles.end());
    KappaCells kc;
    Json skel = nullptr;
    if (!eq.covering && n >= 1) {
      kc = kappa_cells(roots, poles, X, Y);
      if (json) skel = skeleton_to_json(make_skeleton(roots, poles));
    }
    const double hz = n >= 1 ? zolotarev_number_log(n, pair.lambda) : 0.0;
    const auto hb = n >= 1 ? zolotarev_bounds(n, pair.lambda) : ZolotarevBounds{0, 0, 0, 0};
    certified[k] = rep.certified;
    rows[k] = {n, pair.lambda, rep.log_Zn, log10_of(rep.log_Zn), rep.log_Zn_lower, log10_of(rep.log_Zn_lower),
               rep.log_Zn_upper, log10_of(rep.log_Zn_upper), hz, log10_of(hz), hb.log_lower,
               log10_of(hb.log_lower), hb.log_upper, log10_of(hb.log_upper), rep.iterations,
               rep.final_deviation, rep.certified, to_string(rep.status), kc.xy, kc.yx, kc.bar, nodes(roots),
               nodes(poles)};
    if (json) rows[k].push_back(skel);
  });
  for (auto& r : rows) t.add_row(std::move(r));
  emit(c, t, metadata(c));
  return std::all_of(certified.begin(), certified.end(), [](char v) { return v != 0; }) ? 0 : 2;
}

int cmd_heuristic(const RunConfig& c) {
  if (c.domain_file.empty()) throw ValidationError("--domain is required");
  const auto [X, Y] = load_domain_pair(c.domain_file);
  if (!X.cardinality() || !Y.cardinality()) throw ValidationError("heuristic needs point-set domains");
  validate_pair(X, Y);
  const auto ns = n_values(c, nullptr);
  Table t;
  t.columns = {"n", "n_minus", "n_plus", "lambda_core", "covering", "log_bound", "log10_bound",
               "log_bound_loose", "log10_bound_loose", "roots", "poles"};
  std::vector<std::vector<Json>> rows(ns.size());
  parallel_for(ns.size(), [&](std::size_t k) {
    if (ns[k] < 0) throw ValidationError("n must be nonnegative");
    const auto part = best_partition(X, Y, ns[k]);
    const auto hn = heuristic_nodes(part, X, Y);
    rows[k] = {part.n, part.n_minus, part.n_plus, part.lambda_core, part.covering, part.log_bound,
               log10_of(part.log_bound), part.log_bound_loose, log10_of(part.log_bound_loose),
               nodes(hn.roots), nodes(hn.poles)};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  emit(c, t, metadata(c));
  return 0;
}

int cmd_kappa(const RunConfig& c) {
  const auto ns = n_values(c, nullptr);
  Table t;
  t.columns = {"r", "lambda", "source", "kappa_xy", "kappa_yx", "kappa", "kappa_bar", "offset", "fit_offset",
               "certified"};
  std::vector<std::vector<Json>> rows(ns.size());
  std::vector<char> certified(ns.size(), 1);
  const bool analytic = c.domain_file.empty();
  const auto [X, Y] = domains_for(c);
  const auto pair = validate_pair(X, Y);
  const auto opts = solve_options(c);
  parallel_for(ns.size(), [&](std::size_t k) {
    const int r = ns[k];
    if (r < 1) throw ValidationError("r must be at least 1");
    std::vector<double> roots, poles;
    bool ok = true;
    if (analytic) {
      const auto sol = zolotarev_nodes(r, *c.lambda);
      roots = sol.roots;
      poles = sol.poles;
    } else {
      auto [eq, rep] = solve(pair, r, opts);
      ok = rep.certified;
      if (eq.covering) throw ValidationError("r = " + std::to_string(r) + " covers a point set; kappa is undefined");
      roots = eq.original_roots();
      poles = eq.original_poles();
    }
    const auto kc = kappa_cells(roots, poles, X, Y);
    const double km = std::max(kc.xy, kc.yx);
    certified[k] = ok;
    rows[k] = {r, pair.lambda, analytic ? "analytic" : "solver", kc.xy, kc.yx, km, kc.bar, km - kc.bar,
               kappa_offset_fit(pair.lambda), ok};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  emit(c, t, metadata(c));
  return std::all_of(certified.begin(), certified.end(), [](char v) { return v != 0; }) ? 0 : 2;
}

int fig_heuristic(const RunConfig& c) {
  const auto ns = n_values(c, "3:14");
  SampleExperimentOptions o;
  o.seed = c.seed;
  o.n_samples = c.samples;
  o.set_size = c.set_size;
  o.n_lo = ns.front();
  o.n_hi = ns.back();
  if (o.n_samples < 1 || o.set_size < 2 || o.n_lo < 1) throw ValidationError("need samples >= 1, set size >= 2, n >= 1");
  const auto rows = sample_experiment(o);
  Table t;
  t.columns = {"sample_id", "n", "log_Zn", "log10_Zn", "log_bound", "log10_bound", "n_minus", "n_plus",
               "solver_iters", "certified", "status"};
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.certified;
    t.add_row({r.sample_id, r.n, r.log_Zn, log10_of(r.log_Zn), r.log_bound, log10_of(r.log_bound), r.n_minus,
               r.n_plus, r.solver_iters, r.certified, r.status});
  }
  Meta meta = metadata(c);
  if (!c.no_meta) {
    meta.insert(meta.end() - 1, {"samples", std::to_string(c.samples)});
    meta.insert(meta.end() - 1, {"set_size", std::to_string(c.set_size)});
  }
  emit(c, t, meta);
  return all ? 0 : 2;
}

int fig_condition(const RunConfig& c) {
  const auto ns = n_values(c, "2:100");
  const auto lambdas = lambda_values(c, "1e-7:0.9:8");
  for (int r : ns)
    if (r < 1) throw ValidationError("r must be at least 1");
  const auto rows = condition_experiment(lambdas, ns);
  Table t;
  t.columns = {"lambda", "r", "kappa_xy", "kappa_yx", "kappa", "kappa_bar", "offset", "fit_offset"};
  for (const auto& r : rows)
    t.add_row({r.lambda, r.r, r.kappa.kappa_xy, r.kappa.kappa_yx, r.kappa_max, r.kappa_bar, r.offset, r.fit_offset});
  emit(c, t, metadata(c));
  return 0;
}

int fig_equivalence(const RunConfig& c) {
  const auto lambdas = lambda_values(c, "1e-7:1e-2:6");
  EquivalenceOptions o;
  o.n_points = c.n.value_or(99);
  if (!c.n_range.empty()) throw ValidationError("fig equivalence takes --n, the number of points");
  if (o.n_points < 2) throw ValidationError("--n must be at least 2");
  o.r_max = o.n_points - 1;
  o.sigma_floor = c.sigma_floor;
  const auto rows = equivalence_experiment(lambdas, o);
  Table t;
  t.columns = {"lambda", "r", "err2_svd", "err2_skel", "errxy_svd", "errxy_skel", "mu_skel", "mu_svd",
               "eta_minus", "eta_plus", "eta_ratio", "eta_minus_weighted", "eta_plus_weighted",
               "eta_ratio_weighted", "weighted_ratio_bound", "log_Zr", "log10_Zr", "certified", "bounds_hold",
               "status"};
  bool all = true;
  for (const auto& e : rows) {
    const auto& r = e.rank;
    all = all && r.certified && r.bounds_hold;
    t.add_row({e.lambda, r.r, r.err2_svd, r.err2_skel, r.errxy_svd, r.errxy_skel, r.mu_skel, r.mu_svd,
               e.eta.eta_minus, e.eta.eta_plus, e.eta.ratio(), e.weighted.eta_minus, e.weighted.eta_plus,
               e.weighted.ratio(), e.weighted_ratio_bound, r.log_Zr, log10_of(r.log_Zr), r.certified,
               r.bounds_hold, r.status});
  }
  emit(c, t, metadata(c));
  return all ? 0 : 2;
}

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--out", c.out, "Output file (default: stdout)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--no-meta", c.no_meta, "Omit metadata lines so that output is byte-reproducible");
}

void add_n(CLI::App* app, RunConfig& c) {
  app->add_option("--n", c.n, "Degree or rank");
  app->add_option("--n-range", c.n_range, "Inclusive range A:B");
}

void add_solver(CLI::App* app, RunConfig& c) {
  app->add_option("--certify-tol", c.certify_tol, "Relative equioscillation tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", c.max_iter, "Solver iteration cap")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Zolotarev numbers and Cauchy skeleton decompositions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* analytic = app.add_subcommand("analytic", "Closed-form nodes and bounds on [lambda, 1] x [-1, -lambda]");
  analytic->add_option("--lambda", c.lambda, "Cross-ratio in (0, 1)");
  analytic->add_option("--lambda-grid", c.lambda_grid, "Log-spaced grid A:B:COUNT");
  add_n(analytic, c);
  add_common(analytic, c);

  auto* solve_cmd = app.add_subcommand("solve", "Equioscillation solver on a domain file or symmetric intervals");
  solve_cmd->add_option("--domain", c.domain_file, "JSON file with X and Y");
  solve_cmd->add_option("--lambda", c.lambda, "Use X = [lambda, 1], Y = [-1, -lambda]");
  add_n(solve_cmd, c);
  add_solver(solve_cmd, c);
  add_common(solve_cmd, c);

  auto* heur = app.add_subcommand("heuristic", "Covering-partition bound for point sets");
  heur->add_option("--domain", c.domain_file, "JSON file with point sets X and Y");
  add_n(heur, c);
  add_common(heur, c);

  auto* kap = app.add_subcommand("kappa", "Condition numbers of the rank-r skeleton");
  kap->add_option("--domain", c.domain_file, "JSON file with X and Y (solver nodes)");
  kap->add_option("--lambda", c.lambda, "Symmetric intervals (closed-form nodes)");
  add_n(kap, c);
  add_solver(kap, c);
  add_common(kap, c);

  auto* fig = app.add_subcommand("fig", "Figure data: heuristic, condition or equivalence");
  fig->add_option("kind", c.fig_kind, "Which figure")->required()->check(
      CLI::IsMember({"heuristic", "condition", "equivalence"}));
  fig->add_option("--seed", c.seed, "Sampling seed (heuristic)");
  fig->add_option("--samples", c.samples, "Number of samples (heuristic)");
  fig->add_option("--set-size", c.set_size, "Points drawn per set (heuristic)");
  fig->add_option("--lambda-grid", c.lambda_grid, "Log-spaced grid A:B:COUNT");
  fig->add_option("--sigma-floor", c.sigma_floor, "Relative singular value cutoff (equivalence)");
  add_n(fig, c);
  add_solver(fig, c);
  add_common(fig, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*analytic) {
      c.command = "analytic";
      return cmd_analytic(c);
    }
    if (*solve_cmd) {
      c.command = "solve";
      return cmd_solve(c);
    }
    if (*heur) {
      c.command = "heuristic";
      return cmd_heuristic(c);
    }
    if (*kap) {
      c.command = "kappa";
      return cmd_kappa(c);
    }
    c.command = "fig " + c.fig_kind;
    if (c.fig_kind == "heuristic") return fig_heuristic(c);
    if (c.fig_kind == "condition") return fig_condition(c);
    return fig_equivalence(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
