#include "zolo/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "zolo/analytic.hpp"
#include "zolo/parallel.hpp"
#include "zolo/solver.hpp"

namespace zolo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Indexed {
  std::vector<double> x;  // ascending
  std::vector<double> y;  // descending
};

Indexed indexed_points(const Domain& X, const Domain& Y) {
  if (X.kind() != Domain::Kind::PointSet || Y.kind() != Domain::Kind::PointSet)
    throw ValidationError("heuristic partitions need finite point sets");
  if (!(X.min() > Y.max())) throw SeparationError("heuristic partitions need min X > max Y");
  Indexed p{X.point_values(), Y.point_values()};
  std::reverse(p.y.begin(), p.y.end());
  return p;
}

void check_partition(const Indexed& p, int n, int n_minus, int n_plus) {
  if (n < 0 || n_minus < 0 || n_plus < 0 || n_minus + n_plus > n)
    throw IndexError("partition needs 0 <= n_minus, n_plus and n_minus + n_plus <= n");
  const auto used = static_cast<std::size_t>(n_minus + n_plus);
  if (used >= p.x.size() || used >= p.y.size()) throw IndexError("partition leaves an empty core");
}

double near_factor(const Indexed& p, int n_plus, int i) {
  const double xmax = p.x[p.x.size() - n_plus - 1];
  const double ymin = p.y[p.y.size() - n_plus - 1];
  const double xi = p.x[i - 1], yi = p.y[i - 1];
  return std::log(xmax - xi) + std::log(yi - ymin) - std::log(xmax - yi) - std::log(xi - ymin);
}

double far_factor(const Indexed& p, int n_minus, int i) {
  const double xmin = p.x[n_minus];
  const double ymax = p.y[n_minus];
  const double xi = p.x[p.x.size() - i], yi = p.y[p.y.size() - i];
  return std::log(xi - xmin) + std::log(ymax - yi) - std::log(xi - ymax) - std::log(xmin - yi);
}

Partition bound_of(const Indexed& p, int n, int n_minus, int n_plus) {
  check_partition(p, n, n_minus, n_plus);
  Partition part;
  part.n = n;
  part.n_minus = n_minus;
  part.n_plus = n_plus;
  part.core_xmin = p.x[n_minus];
  part.core_xmax = p.x[p.x.size() - n_plus - 1];
  part.core_ymax = p.y[n_minus];
  part.core_ymin = p.y[p.y.size() - n_plus - 1];
  const int m = n - n_minus - n_plus;
  const auto core_x = p.x.size() - n_minus - n_plus;
  const auto core_y = p.y.size() - n_minus - n_plus;
  if (core_x >= 2 && core_y >= 2)
    part.lambda_core = cross_ratio_lambda(part.core_xmin, part.core_xmax, part.core_ymin, part.core_ymax);
  if (m >= 1 && (static_cast<std::size_t>(m) >= core_x || static_cast<std::size_t>(m) >= core_y)) {
    part.covering = true;
    part.log_bound = part.log_bound_loose = -kInf;
    return part;
  }
  part.log_bound_loose = m == 0 ? 0.0 : zolotarev_number_log(m, part.lambda_core);
  double s = part.log_bound_loose;
  for (int i = 1; i <= n_minus; ++i) s += near_factor(p, n_plus, i);
  for (int i = 1; i <= n_plus; ++i) s += far_factor(p, n_minus, i);
  part.log_bound = s;
  return part;
}

}  // namespace

Partition partition_bound(const Domain& X, const Domain& Y, int n, int n_minus, int n_plus) {
  return bound_of(indexed_points(X, Y), n, n_minus, n_plus);
}

double log_cover_factor(const Domain& X, const Domain& Y, int n_minus, int n_plus, int i, bool near) {
  const auto p = indexed_points(X, Y);
  check_partition(p, n_minus + n_plus, n_minus, n_plus);
  if (i < 1 || i > (near ? n_minus : n_plus)) throw IndexError("cover factor index out of range");
  return near ? near_factor(p, n_plus, i) : far_factor(p, n_minus, i);
}

Partition best_partition(const Domain& X, const Domain& Y, int n) {
  const auto p = indexed_points(X, Y);
  if (n < 0) throw IndexError("best_partition: negative n");
  const auto cap = static_cast<int>(std::min(p.x.size(), p.y.size())) - 1;
  Partition best = bound_of(p, n, 0, 0);
  for (int total = 1; total <= std::min(n, cap); ++total) {
    for (int nm = 0; nm <= total; ++nm) {
      const Partition cand = bound_of(p, n, nm, total - nm);
      if (cand.log_bound < best.log_bound) best = cand;
    }
  }
  return best;
}

HeuristicNodes heuristic_nodes(const Partition& part, const Domain& X, const Domain& Y) {
  const auto p = indexed_points(X, Y);
  HeuristicNodes out;
  if (part.covering) {
    const std::size_t k = std::min(p.x.size(), p.y.size());
    out.roots.assign(p.x.begin(), p.x.begin() + k);
    out.poles.assign(p.y.begin(), p.y.begin() + k);
    return out;
  }
  check_partition(p, part.n, part.n_minus, part.n_plus);
  for (int i = 0; i < part.n_minus; ++i) {
    out.roots.push_back(p.x[i]);
    out.poles.push_back(p.y[i]);
  }
  for (int i = 1; i <= part.n_plus; ++i) {
    out.roots.push_back(p.x[p.x.size() - i]);
    out.poles.push_back(p.y[p.y.size() - i]);
  }
  const int m = part.n - part.n_minus - part.n_plus;
  if (m > 0) {
    const auto sol = zolotarev_nodes(m, part.lambda_core);
    const auto mapped = map_nodes_to_pair(sol, part.core_xmin, part.core_xmax, part.core_ymin, part.core_ymax);
    out.roots.insert(out.roots.end(), mapped.roots.begin(), mapped.roots.end());
    out.poles.insert(out.poles.end(), mapped.poles.begin(), mapped.poles.end());
  }
  std::sort(out.roots.begin(), out.roots.end());
  std::sort(out.poles.begin(), out.poles.end(), std::greater<>());
  return out;
}

std::pair<Domain, Domain> sample_point_sets(std::uint64_t seed, int sample_id, int set_size) {
  if (set_size < 2) throw ValidationError("sample sets need at least two points");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample_id)};
  std::mt19937_64 gen(seq);
  auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1p-53; };
  std::vector<double> x(set_size), y(set_size);
  for (auto& v : x) v = 1 - uniform();
  for (auto& v : y) v = -1 + uniform();
  for (auto* v : {&x, &y}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return {Domain::points(std::move(x)), Domain::points(std::move(y))};
}

std::vector<SampleRow> sample_experiment(const SampleExperimentOptions& opts) {
  if (opts.n_samples < 0 || opts.n_lo < 0 || opts.n_hi < opts.n_lo)
    throw ValidationError("sample_experiment: bad sample count or n range");
  const int per = opts.n_hi - opts.n_lo + 1;
  const int solver_hi = opts.solver_n_hi < 0 ? opts.n_hi : opts.solver_n_hi;
  std::vector<SampleRow> rows(static_cast<std::size_t>(opts.n_samples) * per);
  parallel_for(opts.n_samples, [&](std::size_t s) {
    const auto [X, Y] = sample_point_sets(opts.seed, static_cast<int>(s), opts.set_size);
    const auto pair = std::make_shared<const SeparatedPair>(validate_pair(X, Y));
    SolveOptions so;
    so.throw_on_failure = false;
    for (int k = 0; k < per; ++k) {
      SampleRow& row = rows[s * per + k];
      row.sample_id = static_cast<int>(s);
      row.n = opts.n_lo + k;
      const auto part = best_partition(X, Y, row.n);
      row.log_bound = part.log_bound;
      row.n_minus = part.n_minus;
      row.n_plus = part.n_plus;
      row.log_Zn = std::numeric_limits<double>::quiet_NaN();
      row.status = "not_run";
      if (row.n > solver_hi) continue;
      try {
        const auto [eq, rep] = solve(*pair, row.n, so);
        row.log_Zn = rep.log_Zn;
        row.solver_iters = rep.iterations;
        row.certified = rep.certified;
        row.status = to_string(rep.status);
      } catch (const Error& e) {
        row.status = std::string("error: ") + e.what();
      }
    }
  });
  return rows;
}

}  // namespace zolo
