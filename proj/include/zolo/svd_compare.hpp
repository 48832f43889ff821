#pragma once

// Dense SVD by one-sided Jacobi rotations, the 2-norm and the elementwise
// relative maximum norm of matrices indexed by x and y, their equivalence
// coefficients, and the transferability of optimal rank-r approximations
// between the two norms.

#include <string>
#include <vector>

namespace zolo {

/// Row-major m x n matrix.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int m, int n) : rows(m), cols(n), data(static_cast<std::size_t>(m) * n, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// A = U diag(sigma) V^T with U m x k, V n x k, k = min(m, n), sigma
/// descending and U, V with orthonormal columns.
struct SvdResult {
  DenseMatrix U;
  std::vector<double> sigma;
  DenseMatrix V;
  int sweeps = 0;
};

/// One-sided Jacobi SVD. Throws ValidationError for non-finite entries or
/// dimensions above 512 and MaxIterError when 50 sweeps do not converge.
SvdResult dense_svd(const DenseMatrix& A);

/// Largest singular value.
double norm2(const DenseMatrix& A);

/// C_ij = 1 / (x_i - y_j).
DenseMatrix cauchy_matrix(const std::vector<double>& x, const std::vector<double>& y);

/// max_ij |(x_i - y_j) A_ij|.
double norm_xy(const DenseMatrix& A, const std::vector<double>& x, const std::vector<double>& y);

struct EtaPair {
  double eta_minus = 0;
  double eta_plus = 0;
  double ratio() const { return eta_plus / eta_minus; }
};

/// eta_- = 1 / max |x_i - y_j| and eta_+ = ||C(x, y)||_2.
EtaPair eta_coefficients(const std::vector<double>& x, const std::vector<double>& y);

/// eta_-(P, Q) = min |p_i q_j / (x_i - y_j)| and eta_+(P, Q) = ||P C Q||_2.
/// Throws ValidationError for a nonpositive weight.
EtaPair weighted_eta(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& p,
                     const std::vector<double>& q);

struct RankComparison {
  int r = 0;
  double err2_svd = 0;    ///< sigma_{r+1}
  double err2_skel = 0;   ///< ||C - C_skel||_2
  double errxy_svd = 0;   ///< ||C - C_svd||_xy
  double errxy_skel = 0;  ///< ||C - C_skel||_xy
  double mu_skel = 0;     ///< err2_skel / err2_svd
  double mu_svd = 0;      ///< errxy_svd / errxy_skel
  double log_Zr = 0;      ///< solver value on the point sets
  bool certified = false;
  /// 1 <= mu_skel, 1 <= mu_svd and mu_skel mu_svd <= eta_+ / eta_- (1 + 1e-9).
  bool bounds_hold = false;
  std::string status;
};

struct ComparisonReport {
  std::vector<double> sigma;
  EtaPair eta;
  EtaPair weighted;  ///< zero when no weights were supplied
  /// Largest observed ratio |fl(sum) - sum| / sum |terms| over the entries
  /// of U diag(sigma) V^T, measured against C(x, y). Compare with
  /// (k - 1) eps for k-term sums.
  double epsilon_summation_estimate = 0;
  std::vector<RankComparison> ranks;
};

struct TransferOptions {
  /// Weights p and q for the weighted coefficients; empty skips them.
  std::vector<double> p;
  std::vector<double> q;
  /// Stop before rank r once sigma_{r+1} < floor * sigma_1, below which the
  /// computed tail singular values carry no relative accuracy. Zero keeps
  /// every rank up to r_max.
  double sigma_floor = 0;
};

/// Rows for r = 1 .. r_max. The skeleton at each rank uses certified solver
/// nodes for the point sets x and y (x ascending above y descending). Its
/// residual is evaluated from the closed form
///   (C - C_skel)_ij = g(x_i) / (g(y_j) (x_i - y_j)),
/// g(z) = prod (z - x~_k) / (z - y~_k), so that tiny errors keep their
/// relative accuracy. The truncated-SVD residual is the tail sum over
/// singular triplets beyond r. Solver failures are recorded per row.
ComparisonReport transferability(const std::vector<double>& x, const std::vector<double>& y, int r_max,
                                 const TransferOptions& opts = {});

struct EquivalenceRow {
  double lambda = 0;
  RankComparison rank;
  EtaPair eta;
  EtaPair weighted;
  double weighted_ratio_bound = 0;  ///< n (1 + lambda) / (2 sqrt(lambda))
};

struct EquivalenceOptions {
  int n_points = 99;
  int r_max = 98;
  double sigma_floor = 1e-13;
};

/// x = the n_points extrema of the degree n_points - 1 closed-form solution
/// on [lambda, 1], y = -x, weights |x_i| + sqrt(lambda) and |y_i| +
/// sqrt(lambda). Rows ordered by lambda, then r; lambdas run concurrently.
std::vector<EquivalenceRow> equivalence_experiment(const std::vector<double>& lambdas,
                                                   const EquivalenceOptions& opts = {});

}  // namespace zolo
