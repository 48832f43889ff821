#pragma once

// Heuristic solutions of Zolotarev's problem on finite point sets: the
// n_minus points of X and Y closest to the gap and the n_plus points farthest
// from it are covered by nodes, and the remaining nodes come from the
// closed-form solution on the hull of what is left (the core).

#include <cstdint>
#include <string>
#include <vector>

#include "zolo/domains.hpp"

namespace zolo {

struct Partition {
  int n = 0;
  int n_minus = 0;
  int n_plus = 0;
  /// Core endpoints x_{n-+1}, x_{|X|-n+}, y_{|Y|-n+}, y_{n-+1}, with X
  /// indexed ascending and Y descending.
  double core_xmin = 0;
  double core_xmax = 0;
  double core_ymin = 0;
  double core_ymax = 0;
  double lambda_core = 1;
  /// True when the n - n_minus - n_plus free nodes can cover the core of X
  /// or of Y; both bounds are then -inf.
  bool covering = false;
  double log_bound = 0;        ///< log Z_m(lambda_core) + sum of log cross-ratio factors
  double log_bound_loose = 0;  ///< log Z_m(lambda_core), m = n - n_minus - n_plus
};

/// Both upper bounds on log Z_n(X, Y) for the given partition. X and Y must
/// be separated point sets with X to the right of Y. Throws IndexError when
/// n_minus or n_plus is negative, n_minus + n_plus > n, or the core of X or
/// of Y is empty.
Partition partition_bound(const Domain& X, const Domain& Y, int n, int n_minus, int n_plus);

/// log of the cross-ratio factor contributed by the i-th covered point on
/// the near (n_minus) side, 1 <= i <= n_minus, or the far side when
/// near == false (i counts from the outermost point, 1 <= i <= n_plus).
double log_cover_factor(const Domain& X, const Domain& Y, int n_minus, int n_plus, int i, bool near);

/// Minimizer of log_bound over n_minus + n_plus <= n, ties going to the
/// smaller n_minus + n_plus and then to the smaller n_minus.
Partition best_partition(const Domain& X, const Domain& Y, int n);

struct HeuristicNodes {
  std::vector<double> roots;  ///< ascending
  std::vector<double> poles;  ///< descending
};

/// Nodes realizing a partition's bound: the covered points themselves plus
/// the closed-form nodes carried onto the core endpoints. For a covering
/// partition, min(|X|, |Y|) nodes cover the smaller set exactly.
HeuristicNodes heuristic_nodes(const Partition& part, const Domain& X, const Domain& Y);

/// One row of the sampling experiment.
struct SampleRow {
  int sample_id = 0;
  int n = 0;
  double log_Zn = 0;  ///< NaN when the solver was not run or failed
  double log_bound = 0;
  int n_minus = 0;
  int n_plus = 0;
  int solver_iters = 0;
  bool certified = false;
  std::string status;
};

struct SampleExperimentOptions {
  std::uint64_t seed = 1;
  int n_samples = 1000;
  int set_size = 100;
  int n_lo = 1;
  int n_hi = 12;
  /// Largest n passed to the solver; rows above it carry only the bound.
  /// Negative means n_hi.
  int solver_n_hi = -1;
};

/// X and Y for one sample: set_size points 1 - U and -1 + U with U uniform
/// on [0, 1) at 53-bit resolution, drawn from a generator seeded by
/// (seed, sample_id) so that each sample is reproducible on its own.
/// Duplicate draws are dropped.
std::pair<Domain, Domain> sample_point_sets(std::uint64_t seed, int sample_id, int set_size);

/// Rows ordered by sample_id, then n. Samples run concurrently.
std::vector<SampleRow> sample_experiment(const SampleExperimentOptions& opts);

}  // namespace zolo
