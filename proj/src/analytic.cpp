#include "zolo/analytic.hpp"

#include <cmath>
#include <numbers>

#include "zolo/special_functions.hpp"

namespace zolo {

AnalyticSolution zolotarev_nodes(int n, double lambda) {
  if (n < 0) throw DomainError("zolotarev_nodes: n must be non-negative");
  const EllipticModulus<double> m(lambda);
  AnalyticSolution sol;
  sol.n = n;
  sol.lambda = lambda;
  sol.roots.resize(n);
  sol.root_complements.resize(n);
  sol.x_extrema.resize(n + 1);
  for (int i = 0; i < n; ++i) {
    const auto v = xi_value((i + 0.5) / n, m);
    sol.roots[i] = v.value;
    sol.root_complements[i] = v.complement;
  }
  if (n == 0) {
    sol.x_extrema = {lambda, 1.0};
  } else {
    for (int j = 0; j <= n; ++j) sol.x_extrema[j] = xi(static_cast<double>(j) / n, m);
  }
  sol.poles.resize(n);
  sol.y_extrema.resize(sol.x_extrema.size());
  for (int i = 0; i < n; ++i) sol.poles[i] = -sol.roots[i];
  for (std::size_t j = 0; j < sol.x_extrema.size(); ++j) sol.y_extrema[j] = -sol.x_extrema[j];

  double s = 0;
  for (int i = 0; i < n; ++i) s += std::log(sol.root_complements[i]) - std::log1p(sol.roots[i]);
  sol.log_Zn = 2 * s;
  return sol;
}

double zolotarev_number_log(int n, double lambda) {
  if (n == 0) {
    detail::check_lambda(lambda, "zolotarev_number_log");
    return 0;
  }
  return zolotarev_nodes(n, lambda).log_Zn;
}

ZolotarevBounds zolotarev_bounds(int n, double lambda) {
  if (n < 1) throw DomainError("zolotarev_bounds: n must be positive");
  const auto r = moduli_rho(lambda);
  const double base = std::log(4.0) - 2 * n * r.log_rho;
  const double tail = std::log1p(std::exp(-4 * n * r.log_rho));
  return {base - 4 * tail, base - 2 * tail, base, std::log(4.0) - 2 * n * r.log_rho_tilde};
}

MappedNodes map_nodes_to_pair(const AnalyticSolution& sol, double xmin, double xmax, double ymin,
                              double ymax) {
  const double lam = cross_ratio_lambda(xmin, xmax, ymin, ymax);
  if (std::abs(lam - sol.lambda) > 1e-12 * sol.lambda) {
    throw ValidationError("map_nodes_to_pair: endpoint cross-ratio does not match lambda");
  }
  MappedNodes out;
  const bool identity = xmin == sol.lambda && xmax == 1 && ymin == -1 && ymax == -sol.lambda;
  const MobiusMap map = identity ? MobiusMap::identity()
                                 : mobius_from_normalized(sol.lambda, xmin, xmax, ymax);
  for (double r : sol.roots) out.roots.push_back(map(r));
  for (double p : sol.poles) out.poles.push_back(map(p));
  for (double x : sol.x_extrema) out.x_extrema.push_back(map(x));
  for (auto it = sol.x_extrema.begin(); it != sol.x_extrema.end(); ++it) out.y_extrema.push_back(map(-*it));
  out.x_extrema.front() = xmin;
  out.x_extrema.back() = xmax;
  out.y_extrema.front() = ymax;
  out.y_extrema.back() = ymin;
  return out;
}

}  // namespace zolo
