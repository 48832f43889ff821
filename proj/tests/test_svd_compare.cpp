#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "zolo/analytic.hpp"
#include "zolo/skeleton.hpp"
#include "zolo/solver.hpp"
#include "zolo/svd_compare.hpp"

using namespace zolo;

namespace {

DenseMatrix random_matrix(std::mt19937_64& rng, int m, int n) {
  std::normal_distribution<double> N(0, 1);
  DenseMatrix A(m, n);
  for (double& v : A.data) v = N(rng);
  return A;
}

Eigen::MatrixXd to_eigen(const DenseMatrix& A) {
  Eigen::MatrixXd E(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) E(i, j) = A(i, j);
  return E;
}

double reconstruction_error(const DenseMatrix& A, const SvdResult& s) {
  const Eigen::MatrixXd U = to_eigen(s.U), V = to_eigen(s.V);
  const Eigen::VectorXd S = Eigen::Map<const Eigen::VectorXd>(s.sigma.data(), s.sigma.size());
  const Eigen::MatrixXd R = to_eigen(A) - U * S.asDiagonal() * V.transpose();
  return R.jacobiSvd().singularValues()(0);
}

double orthogonality_error(const DenseMatrix& Q) {
  const Eigen::MatrixXd E = to_eigen(Q);
  return (E.transpose() * E - Eigen::MatrixXd::Identity(E.cols(), E.cols())).cwiseAbs().maxCoeff();
}

std::pair<std::vector<double>, std::vector<double>> extrema_points(int count, double lam) {
  const auto sol = zolotarev_nodes(count - 1, lam);
  return {sol.x_extrema, sol.y_extrema};
}

}  // namespace

TEST_CASE("singular values of small exact matrices") {
  DenseMatrix D(3, 3);
  D(0, 0) = 1;
  D(1, 1) = 3;
  D(2, 2) = 2;
  const auto s = dense_svd(D);
  CHECK(s.sigma == std::vector<double>{3, 2, 1});

  DenseMatrix P(2, 2);
  P(0, 1) = P(1, 0) = 1;
  const auto p = dense_svd(P);
  CHECK(p.sigma[0] == doctest::Approx(1).epsilon(1e-15));
  CHECK(p.sigma[1] == doctest::Approx(1).epsilon(1e-15));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0, 1);
  DenseMatrix R1(7, 5);
  std::vector<double> u(7), v(5);
  for (auto& a : u) a = N(rng);
  for (auto& a : v) a = N(rng);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 5; ++j) R1(i, j) = u[i] * v[j];
  const auto r1 = dense_svd(R1);
  CHECK(r1.sigma[1] / r1.sigma[0] <= 1e-13);
}

TEST_CASE("random matrices match an independent SVD and reconstruct") {
  std::mt19937_64 rng(5);
  for (auto [m, n] : {std::pair{6, 6}, std::pair{12, 5}, std::pair{5, 12}, std::pair{40, 33}, std::pair{1, 4}}) {
    const auto A = random_matrix(rng, m, n);
    const auto s = dense_svd(A);
    const int k = std::min(m, n);
    REQUIRE(static_cast<int>(s.sigma.size()) == k);
    CHECK(s.U.rows == m);
    CHECK(s.V.rows == n);
    const Eigen::VectorXd ref = to_eigen(A).jacobiSvd().singularValues();
    for (int i = 0; i < k; ++i) CHECK(std::abs(s.sigma[i] - ref(i)) <= 1e-13 * ref(0));
    for (int i = 1; i < k; ++i) CHECK(s.sigma[i] <= s.sigma[i - 1]);
    CHECK(reconstruction_error(A, s) <= 1e-12 * s.sigma[0]);
    CHECK(orthogonality_error(s.U) <= 1e-12);
    CHECK(orthogonality_error(s.V) <= 1e-12);
  }
}

TEST_CASE("Cauchy matrices reconstruct to working accuracy") {
  for (double lam : {1e-7, 1e-3, 0.5}) {
    const auto [x, y] = extrema_points(40, lam);
    const auto C = cauchy_matrix(x, y);
    const auto s = dense_svd(C);
    CHECK(reconstruction_error(C, s) <= 1e-12 * s.sigma[0]);
  }
}

TEST_CASE("rank-deficient input keeps orthonormal factors") {
  DenseMatrix Z(4, 3);
  const auto s = dense_svd(Z);
  CHECK(s.sigma == std::vector<double>{0, 0, 0});
  CHECK(orthogonality_error(s.U) <= 1e-15);
  DenseMatrix A(5, 3);
  for (int i = 0; i < 5; ++i) A(i, 0) = A(i, 2) = i + 1;
  const auto t = dense_svd(A);
  CHECK(t.sigma[2] == 0);
  CHECK(orthogonality_error(t.U) <= 1e-13);
  CHECK(reconstruction_error(A, t) <= 1e-13 * t.sigma[0]);
}

TEST_CASE("invalid SVD input") {
  DenseMatrix A(2, 2);
  A(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(dense_svd(A), ValidationError);
  CHECK_THROWS_AS(dense_svd(DenseMatrix(513, 2)), ValidationError);
}

TEST_CASE("relative maximum norm") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.1, 2);
  const std::vector<double> x{0.3, 0.9, 1.7}, y{-0.2, -1.1, -3.0};
  const auto C = cauchy_matrix(x, y);
  CHECK(std::abs(norm_xy(C, x, y) - 1) <= 2 * std::numeric_limits<double>::epsilon());
  CHECK(norm_xy(DenseMatrix(3, 3), x, y) == 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto A = random_matrix(rng, 3, 3);
    double scan = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) scan = std::max(scan, std::abs(A(i, j)) * (x[i] - y[j]));
    CHECK(norm_xy(A, x, y) == doctest::Approx(scan).epsilon(1e-15));
  }
}

TEST_CASE("equivalence coefficients") {
  const auto e = eta_coefficients({1}, {-1});
  CHECK(e.eta_minus == 0.5);
  CHECK(e.eta_plus == 0.5);
  CHECK(e.ratio() == 1);
  for (double lam : {1e-7, 1e-4, 1e-2}) {
    const auto [x, y] = extrema_points(99, lam);
    const auto eta = eta_coefficients(x, y);
    CHECK(eta.eta_minus == 0.5);
    CHECK(eta.ratio() <= 99 / lam);
    // Within an order of magnitude of saturation.
    CHECK(eta.ratio() >= 99 / lam / 30);
  }
}

TEST_CASE("norm equivalence sandwich") {
  std::mt19937_64 rng(13);
  for (double lam : {1e-5, 0.2}) {
    const auto [x, y] = extrema_points(30, lam);
    const auto eta = eta_coefficients(x, y);
    for (int trial = 0; trial < 100; ++trial) {
      auto A = random_matrix(rng, 30, 30);
      // Scaled Cauchy-like entries exercise the upper inequality.
      if (trial % 2)
        for (int i = 0; i < 30; ++i)
          for (int j = 0; j < 30; ++j) A(i, j) /= x[i] - y[j];
      const double n2 = norm2(A), nxy = norm_xy(A, x, y);
      CHECK(eta.eta_minus * nxy <= n2 * (1 + 1e-12));
      CHECK(n2 <= eta.eta_plus * nxy * (1 + 1e-12));
    }
  }
}

TEST_CASE("weighted coefficients") {
  const auto [x, y] = extrema_points(20, 1e-3);
  const std::vector<double> ones(20, 1.0);
  const auto plain = eta_coefficients(x, y);
  const auto w1 = weighted_eta(x, y, ones, ones);
  CHECK(w1.eta_minus == doctest::Approx(plain.eta_minus).epsilon(1e-15));
  CHECK(w1.eta_plus == doctest::Approx(plain.eta_plus).epsilon(1e-15));
  auto bad = ones;
  bad[4] = 0;
  CHECK_THROWS_AS(weighted_eta(x, y, bad, ones), ValidationError);
  CHECK_THROWS_AS(weighted_eta(x, y, ones, std::vector<double>(19, 1.0)), ValidationError);

  for (double lam : {1e-7, 1e-5, 1e-3, 1e-2}) {
    const auto [xs, ys] = extrema_points(99, lam);
    std::vector<double> p, q;
    for (double v : xs) p.push_back(std::abs(v) + std::sqrt(lam));
    for (double v : ys) q.push_back(std::abs(v) + std::sqrt(lam));
    const auto w = weighted_eta(xs, ys, p, q);
    CHECK(w.ratio() <= 99 * (1 + lam) / (2 * std::sqrt(lam)));
    // Improvement over the unweighted ratio is about 1 / sqrt(lambda).
    const double gain = eta_coefficients(xs, ys).ratio() / w.ratio();
    CHECK(gain * std::sqrt(lam) >= 1.0 / 3);
    CHECK(gain * std::sqrt(lam) <= 3);
  }
}

TEST_CASE("transferability on a small geometry") {
  const double lam = 1e-3;
  const auto [x, y] = extrema_points(21, lam);
  const auto rep = transferability(x, y, 12);
  REQUIRE(rep.ranks.size() == 12);
  CHECK(rep.epsilon_summation_estimate <= 20 * 21 * std::numeric_limits<double>::epsilon());
  for (const auto& row : rep.ranks) {
    CHECK(row.certified);
    CHECK(row.bounds_hold);
    CHECK(row.mu_skel >= 1);
    CHECK(row.mu_svd >= 1);
    CHECK(row.mu_skel * row.mu_svd <= rep.eta.ratio());
    CHECK(row.err2_svd == rep.sigma[row.r]);
    CHECK(row.err2_svd <= row.err2_skel);
    CHECK(row.errxy_skel <= row.errxy_svd);
    CHECK(std::log(row.errxy_skel) == doctest::Approx(row.log_Zr).epsilon(1e-8));
    if (20 % row.r == 0) CHECK(std::abs(row.errxy_skel / std::exp(zolotarev_number_log(row.r, lam)) - 1) <= 1e-6);
  }
}

TEST_CASE("closed-form skeleton residual matches subtraction") {
  const double lam = 0.05;
  const auto [x, y] = extrema_points(15, lam);
  const auto rep = transferability(x, y, 3);
  const auto pair = validate_pair(Domain::points(x), Domain::points(std::vector<double>(y.rbegin(), y.rend())));
  for (int r = 1; r <= 3; ++r) {
    const auto [eq, sr] = solve(pair, r);
    const auto dec = make_skeleton(eq.original_roots(), eq.original_poles());
    Eigen::MatrixXd R(15, 15);
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j) R(i, j) = 1 / (x[i] - y[j]) - reconstruct(dec, x[i], y[j]);
    const double direct = R.jacobiSvd().singularValues()(0);
    CHECK(rep.ranks[r - 1].err2_skel == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("equivalence experiment rows") {
  EquivalenceOptions o;
  o.n_points = 15;
  o.r_max = 4;
  const auto rows = equivalence_experiment({1e-3, 1e-2}, o);
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].lambda == (i < 4 ? 1e-3 : 1e-2));
    CHECK(rows[i].rank.r == static_cast<int>(i % 4) + 1);
    CHECK(rows[i].rank.bounds_hold);
    CHECK(rows[i].weighted_ratio_bound == doctest::Approx(15 * (1 + rows[i].lambda) / (2 * std::sqrt(rows[i].lambda))));
    CHECK(rows[i].weighted.ratio() <= rows[i].weighted_ratio_bound);
  }
}
