#pragma once

// Closed-form solution of Zolotarev's third problem on [lambda, 1] x
// [-1, -lambda] and its Mobius images.

#include <vector>

#include "zolo/domains.hpp"

namespace zolo {

/// Roots, poles and extrema of the optimal rational function for
/// X = [lambda, 1], Y = [-1, -lambda]. Poles and Y-extrema are the negated
/// roots and X-extrema.
struct AnalyticSolution {
  int n = 0;
  double lambda = 0;
  std::vector<double> roots;             ///< ascending, in (lambda, 1)
  std::vector<double> root_complements;  ///< 1 - roots, to full relative accuracy
  std::vector<double> poles;             ///< descending, -roots
  std::vector<double> x_extrema;         ///< n + 1 values, ascending from lambda to 1
  std::vector<double> y_extrema;         ///< -x_extrema
  double log_Zn = 0;
};

AnalyticSolution zolotarev_nodes(int n, double lambda);

/// log Z_n(lambda) from the node product; n = 0 gives 0.
double zolotarev_number_log(int n, double lambda);

/// Logarithms of the chain
///   4 rho^-2n / (1 + rho^-4n)^4 <= Z_n <= 4 rho^-2n / (1 + rho^-4n)^2
///     <= 4 rho^-2n <= 4 rho~^-2n.
struct ZolotarevBounds {
  double log_lower;
  double log_upper;
  double log_upper2;
  double log_upper3;
};

ZolotarevBounds zolotarev_bounds(int n, double lambda);

/// Nodes of an analytic solution carried to the pair of intervals with the
/// given endpoints.
struct MappedNodes {
  std::vector<double> roots;      ///< ascending in (xmin, xmax)
  std::vector<double> poles;      ///< descending in (ymin, ymax)
  std::vector<double> x_extrema;  ///< ascending, first = xmin, last = xmax
  std::vector<double> y_extrema;  ///< descending, first = ymax, last = ymin
};

/// Throws ValidationError when the cross-ratio of the endpoints differs from
/// sol.lambda by more than 1e-12 relative.
MappedNodes map_nodes_to_pair(const AnalyticSolution& sol, double xmin, double xmax, double ymin,
                              double ymax);

}  // namespace zolo
