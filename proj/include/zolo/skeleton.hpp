#pragma once

// Skeleton decompositions of the Cauchy kernel 1 / (x - y) built on nodes
// x~ (interpolating in x) and y~ (interpolating in y):
//
//   1 / (x - y)  ~  C(x, y~) C(x~, y~)^-1 C(x~, y)
//               =  u(x)^T C(x~, y)  =  C(x, y~) v(y)  =  u(x)^T C(x~, y~) v(y).

#include <string>
#include <vector>

#include "zolo/domains.hpp"
#include "zolo/scaled.hpp"

namespace zolo {

enum class SkeletonForm { Raw, LeftInterp, RightInterp, TwoSided };

const char* to_string(SkeletonForm f);
SkeletonForm skeleton_form_from_string(const std::string& s);

/// Immutable after construction.
struct SkeletonDecomposition {
  int r = 0;
  std::vector<double> x_nodes;  ///< x~
  std::vector<double> y_nodes;  ///< y~
  /// U_i = prod_j (x~_i - y~_j) / prod_{j != i} (x~_i - x~_j)
  std::vector<ScaledProduct> u_weights;
  /// V_i = prod_j (x~_j - y~_i) / prod_{j != i} (y~_i - y~_j)
  std::vector<ScaledProduct> v_weights;
  SkeletonForm form = SkeletonForm::TwoSided;
  /// C(x~, y~)^-1 from the explicit Cauchy inverse formula, row-major;
  /// only populated for the Raw form. Unstable: diagnostics only.
  std::vector<double> raw_inverse;
};

/// Throws ValidationError for unequal lengths, repeated nodes or x~_i = y~_j.
SkeletonDecomposition make_skeleton(std::vector<double> x_nodes, std::vector<double> y_nodes,
                                    SkeletonForm form = SkeletonForm::TwoSided);

enum class InterpSide { U, V };

/// u(z) or v(z) by the modified Lagrange formula in O(r) operations.
/// Throws PoleError when z sits on a node of the opposite side.
std::vector<double> eval_interp(const SkeletonDecomposition& dec, InterpSide side, double z);

/// f(x)^T g(y) evaluated in the decomposition's form.
double reconstruct(const SkeletonDecomposition& dec, double x, double y);
double reconstruct(const SkeletonDecomposition& dec, SkeletonForm form, double x, double y);

/// log |g(z)| for g(z) = prod (z - x~_j) / (z - y~_j). The pointwise
/// relative error of every exact form is |g(x) / g(y)|.
double log_abs_node_ratio(const SkeletonDecomposition& dec, double z);

enum class ErrorEvaluation {
  Factored,       ///< max_X |g| / min_Y |g| from the closed-form residual
  Reconstructed,  ///< |1 - (x - y) f(x)^T g(y)| on the product grid
};

struct RelativeErrorReport {
  double value = 0;      ///< maximum relative error
  double log_value = 0;  ///< its natural log, finite even when value underflows
  double argmax_x = 0;
  double argmax_y = 0;
};

/// Maximum over X x Y of |1 - (x - y) f(x)^T g(y)|. Point sets are
/// enumerated; each interval piece contributes grid_density Chebyshev
/// points plus the exact maximizers of |g| between consecutive nodes.
RelativeErrorReport max_relative_error(const SkeletonDecomposition& dec, const Domain& X, const Domain& Y,
                                       int grid_density = 64,
                                       ErrorEvaluation eval = ErrorEvaluation::Factored);

struct KappaReport {
  double kappa_xy = 0;
  double kappa_yx = 0;
  double argmax_x = 0;
  double argmax_y = 0;
};

/// kappa_r(X, Y) = max_x sum_i max_y |u_i(x) (x - y) / (x~_i - y)| and the
/// mirrored kappa_r(Y, X) with v. The inner maximum is taken over the hull
/// endpoints of the opposite set, where a Mobius function of y that is
/// monotone on the hull peaks.
KappaReport kappa(const SkeletonDecomposition& dec, const Domain& X, const Domain& Y);

/// (2 / pi) (gamma + log(8 / pi) + log r), r >= 1.
double kappa_asymptote(int r);

/// Empirical large-r offset 0.305 (log lambda)^2 / (5.88 - log lambda).
double kappa_offset_fit(double lambda);

struct ConditionRow {
  double lambda = 0;
  int r = 0;
  KappaReport kappa;
  double kappa_max = 0;  ///< max(kappa_xy, kappa_yx)
  double kappa_bar = 0;  ///< kappa_asymptote(r)
  double offset = 0;     ///< kappa_max - kappa_bar
  double fit_offset = 0; ///< kappa_offset_fit(lambda)
};

/// kappa of the closed-form skeleton on [lambda, 1] x [-1, -lambda] for
/// every (lambda, r) pair, ordered by lambda, then r. Pairs run
/// concurrently.
std::vector<ConditionRow> condition_experiment(const std::vector<double>& lambdas, const std::vector<int>& ranks);

}  // namespace zolo
