#include "zolo/svd_compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "zolo/analytic.hpp"
#include "zolo/errors.hpp"
#include "zolo/parallel.hpp"
#include "zolo/solver.hpp"

namespace zolo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Column = std::vector<double>;

double dot(const Column& a, const Column& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Column& a) {
  double scale = 0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0) return 0;
  double s = 0;
  for (double v : a) s += (v / scale) * (v / scale);
  return scale * std::sqrt(s);
}

// Unit vector orthogonal to every column in `basis`, taken from the
// coordinate axis that survives projection best.
Column complete_basis(const std::vector<Column>& basis, std::size_t dim) {
  Column best;
  double best_norm = -1;
  for (std::size_t k = 0; k < dim; ++k) {
    Column e(dim, 0.0);
    e[k] = 1;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const double c = dot(b, e);
        for (std::size_t i = 0; i < dim; ++i) e[i] -= c * b[i];
      }
    const double nn = norm(e);
    if (nn > best_norm) {
      best_norm = nn;
      best = std::move(e);
    }
  }
  for (double& v : best) v /= best_norm;
  return best;
}

SvdResult jacobi_tall(const DenseMatrix& A) {
  const int m = A.rows, n = A.cols;
  double amax = 0;
  for (double v : A.data) amax = std::max(amax, std::abs(v));
  const double scale = amax > 0 ? amax : 1;
  std::vector<Column> W(n, Column(m)), V(n, Column(n, 0.0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) W[j][i] = A(i, j) / scale;
    V[j][j] = 1;
  }
  // Rounding in an m-term dot product reaches m eps |w_p| |w_q|; a threshold
  // at that level can cycle, so leave a margin.
  const double tol = 4 * m * kEps;
  int sweep = 0;
  for (bool rotated = true; rotated; ++sweep) {
    if (sweep == 50) throw MaxIterError("dense_svd: no convergence after 50 sweeps");
    rotated = false;
    for (int p = 0; p + 1 < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double alpha = dot(W[p], W[p]);
        const double beta = dot(W[q], W[q]);
        const double gamma = dot(W[p], W[q]);
        // A column whose squared norm underflows is below 1e-154 sigma_1.
        if (gamma == 0 || alpha == 0 || beta == 0) continue;
        if (!(std::abs(gamma) > tol * std::sqrt(alpha) * std::sqrt(beta))) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1 / std::hypot(1.0, t);
        const double s = c * t;
        for (int i = 0; i < m; ++i) {
          const double wp = W[p][i], wq = W[q][i];
          W[p][i] = c * wp - s * wq;
          W[q][i] = s * wp + c * wq;
        }
        for (int i = 0; i < n; ++i) {
          const double vp = V[p][i], vq = V[q][i];
          V[p][i] = c * vp - s * vq;
          V[q][i] = s * vp + c * vq;
        }
      }
    }
  }
  std::vector<double> sig(n);
  for (int j = 0; j < n; ++j) sig[j] = norm(W[j]);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] > sig[b]; });

  SvdResult out;
  out.sweeps = sweep;
  out.U = DenseMatrix(m, n);
  out.V = DenseMatrix(n, n);
  out.sigma.resize(n);
  std::vector<Column> ucols;
  for (int k = 0; k < n; ++k) {
    const int j = order[k];
    Column u = W[j];
    if (sig[j] > 0) {
      for (double& v : u) v /= sig[j];
    } else {
      u = complete_basis(ucols, m);
    }
    ucols.push_back(u);
    out.sigma[k] = sig[j] * scale;
    for (int i = 0; i < m; ++i) out.U(i, k) = u[i];
    for (int i = 0; i < n; ++i) out.V(i, k) = V[j][i];
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& A) {
  DenseMatrix T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

struct SignedLogValue {
  double log_abs = 0;
  double sign = 1;  // 0 on a node
};

// g(z) = prod (z - roots) / (z - poles) in log-magnitude and sign form.
SignedLogValue node_ratio(double z, const std::vector<double>& roots, const std::vector<double>& poles) {
  SignedLogValue v;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double a = z - roots[k], b = z - poles[k];
    if (a == 0) return {-std::numeric_limits<double>::infinity(), 0};
    v.log_abs += std::log(std::abs(a)) - std::log(std::abs(b));
    if ((a < 0) != (b < 0)) v.sign = -v.sign;
  }
  return v;
}

}  // namespace

SvdResult dense_svd(const DenseMatrix& A) {
  if (A.rows > 512 || A.cols > 512) throw ValidationError("dense_svd: dimensions above 512");
  if (A.rows <= 0 || A.cols <= 0) throw ValidationError("dense_svd: empty matrix");
  for (double v : A.data)
    if (!std::isfinite(v)) throw ValidationError("dense_svd: non-finite entry");
  if (A.rows >= A.cols) return jacobi_tall(A);
  SvdResult t = jacobi_tall(transpose(A));
  std::swap(t.U, t.V);
  return t;
}

double norm2(const DenseMatrix& A) { return dense_svd(A).sigma.front(); }

DenseMatrix cauchy_matrix(const std::vector<double>& x, const std::vector<double>& y) {
  DenseMatrix C(static_cast<int>(x.size()), static_cast<int>(y.size()));
  for (int i = 0; i < C.rows; ++i)
    for (int j = 0; j < C.cols; ++j) {
      if (x[i] == y[j]) throw PoleError("cauchy_matrix: x_i equals y_j");
      C(i, j) = 1 / (x[i] - y[j]);
    }
  return C;
}

double norm_xy(const DenseMatrix& A, const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) m = std::max(m, std::abs((x[i] - y[j]) * A(i, j)));
  return m;
}

EtaPair eta_coefficients(const std::vector<double>& x, const std::vector<double>& y) {
  double span = 0;
  for (double a : x)
    for (double b : y) span = std::max(span, std::abs(a - b));
  return {1 / span, norm2(cauchy_matrix(x, y))};
}

EtaPair weighted_eta(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& p,
                     const std::vector<double>& q) {
  if (p.size() != x.size() || q.size() != y.size()) throw ValidationError("weighted_eta: weight length mismatch");
  for (const auto* w : {&p, &q})
    for (double v : *w)
      if (!(v > 0)) throw ValidationError("weighted_eta: weights must be positive");
  DenseMatrix B = cauchy_matrix(x, y);
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) {
      B(i, j) *= p[i] * q[j];
      lo = std::min(lo, std::abs(B(i, j)));
    }
  return {lo, norm2(B)};
}

ComparisonReport transferability(const std::vector<double>& x, const std::vector<double>& y, int r_max,
                                 const TransferOptions& opts) {
  const int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
  const DenseMatrix C = cauchy_matrix(x, y);
  const SvdResult svd = dense_svd(C);
  const int k = std::min(m, n);

  ComparisonReport rep;
  rep.sigma = svd.sigma;
  rep.eta = eta_coefficients(x, y);
  if (!opts.p.empty()) rep.weighted = weighted_eta(x, y, opts.p, opts.q);

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0, a = 0;
      for (int t = 0; t < k; ++t) {
        const double term = svd.U(i, t) * svd.sigma[t] * svd.V(j, t);
        s += term;
        a += std::abs(term);
      }
      if (a > 0) rep.epsilon_summation_estimate = std::max(rep.epsilon_summation_estimate, std::abs(s - C(i, j)) / a);
    }

  std::vector<double> xs = x, ys = y;
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const SeparatedPair pair = validate_pair(Domain::points(xs), Domain::points(ys));
  SolveOptions so;
  so.throw_on_failure = false;

  for (int r = 1; r <= std::min(r_max, k - 1); ++r) {
    if (opts.sigma_floor > 0 && svd.sigma[r] < opts.sigma_floor * svd.sigma[0]) break;
    DenseMatrix tail(m, n);
    for (int t = r; t < k; ++t)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) tail(i, j) += svd.U(i, t) * svd.sigma[t] * svd.V(j, t);

    RankComparison row;
    row.r = r;
    row.err2_svd = svd.sigma[r];
    row.errxy_svd = norm_xy(tail, x, y);
    try {
      const auto [eq, sr] = solve(pair, r, so);
      row.log_Zr = sr.log_Zn;
      row.certified = sr.certified;
      row.status = to_string(sr.status);
      const auto roots = eq.original_roots();
      const auto poles = eq.original_poles();
      std::vector<SignedLogValue> gx(m), gy(n);
      for (int i = 0; i < m; ++i) gx[i] = node_ratio(x[i], roots, poles);
      for (int j = 0; j < n; ++j) gy[j] = node_ratio(y[j], roots, poles);
      DenseMatrix R(m, n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
          R(i, j) = gx[i].sign * gy[j].sign * std::exp(gx[i].log_abs - gy[j].log_abs) / (x[i] - y[j]);
      row.err2_skel = norm2(R);
      row.errxy_skel = norm_xy(R, x, y);
      row.mu_skel = row.err2_skel / row.err2_svd;
      row.mu_svd = row.errxy_svd / row.errxy_skel;
      row.bounds_hold = row.mu_skel >= 1 && row.mu_svd >= 1 &&
                        row.mu_skel * row.mu_svd <= rep.eta.ratio() * (1 + 1e-9);
    } catch (const Error& e) {
      row.status = std::string("error: ") + e.what();
    }
    rep.ranks.push_back(row);
  }
  return rep;
}

std::vector<EquivalenceRow> equivalence_experiment(const std::vector<double>& lambdas,
                                                   const EquivalenceOptions& opts) {
  if (opts.n_points < 2) throw ValidationError("equivalence_experiment: need at least two points");
  std::vector<std::vector<EquivalenceRow>> per(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t li) {
    const double lam = lambdas[li];
    const auto sol = zolotarev_nodes(opts.n_points - 1, lam);
    const std::vector<double> x = sol.x_extrema;
    const std::vector<double> y = sol.y_extrema;
    TransferOptions to;
    to.sigma_floor = opts.sigma_floor;
    for (double v : x) to.p.push_back(std::abs(v) + std::sqrt(lam));
    for (double v : y) to.q.push_back(std::abs(v) + std::sqrt(lam));
    const auto rep = transferability(x, y, opts.r_max, to);
    for (const auto& rc : rep.ranks) {
      EquivalenceRow row;
      row.lambda = lam;
      row.rank = rc;
      row.eta = rep.eta;
      row.weighted = rep.weighted;
      row.weighted_ratio_bound = opts.n_points * (1 + lam) / (2 * std::sqrt(lam));
      per[li].push_back(row);
    }
  });
  std::vector<EquivalenceRow> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace zolo
