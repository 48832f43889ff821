#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "zolo/analytic.hpp"
#include "zolo/solver.hpp"
#include "zolo/special_functions.hpp"

using namespace zolo;

namespace {

SeparatedPair symmetric(double lam) {
  return validate_pair(Domain::intervals({{lam, 1}}), Domain::intervals({{-1, -lam}}));
}

std::shared_ptr<const SeparatedPair> shared(SeparatedPair p) {
  return std::make_shared<const SeparatedPair>(std::move(p));
}

/// Analytic nodes moved in the xi^{-1} parameter by independent offsets of
/// size up to `eps` times the node spacing.
Equioscillator perturbed_analytic(double lam, int n, double eps, std::mt19937_64& rng) {
  const EllipticModulus<double> m(lam);
  std::uniform_real_distribution<double> U(-eps, eps);
  std::vector<double> roots(n), poles(n);
  for (int i = 0; i < n; ++i) {
    roots[i] = xi((i + 0.5 + U(rng)) / n, m);
    poles[i] = -xi((i + 0.5 + U(rng)) / n, m);
  }
  return make_equioscillator(shared(symmetric(lam)), roots, poles);
}

/// Membership up to the rounding of a xi / xi^{-1} round trip.
bool near(const Domain& S, double z) {
  const double tol = 1e-13 * std::abs(z);
  return !S.slice(z - tol, z + tol).empty();
}

double spread_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

TEST_CASE("solve reproduces the closed form on the symmetric pair") {
  for (double lam : {1e-7, 1e-3, 0.5}) {
    const auto pair = symmetric(lam);
    for (int n = 1; n <= 20; ++n) {
      const auto [eq, rep] = solve(pair, n);
      const double ref = zolotarev_number_log(n, lam);
      CHECK(std::abs(rep.log_Zn - ref) <= 1e-10 * std::abs(ref));
      CHECK(rep.certified);
      CHECK(rep.status == SolveStatus::Converged);
      CHECK(rep.log_Zn_lower <= rep.log_Zn + 1e-12);
      CHECK(rep.log_Zn <= rep.log_Zn_upper + 1e-12);
      CHECK(std::is_sorted(eq.roots.begin(), eq.roots.end()));
      CHECK(std::is_sorted(eq.poles.rbegin(), eq.poles.rend()));
    }
  }
}

TEST_CASE("initialization on the full intervals is the closed form") {
  for (double lam : {1e-9, 0.2, 0.9}) {
    for (int n : {1, 2, 3, 4, 5, 8, 11}) {
      const auto eq = initialize(shared(symmetric(lam)), n);
      const auto sol = zolotarev_nodes(n, lam);
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(eq.roots[i] - sol.roots[i]) <= 1e-13 * sol.roots[i]);
        CHECK(std::abs(eq.poles[i] - sol.poles[i]) <= 1e-13 * sol.roots[i]);
      }
    }
  }
}

TEST_CASE("insertion parameters avoid gaps in the domain") {
  const double lam = 0.01;
  const auto X = Domain::intervals({{lam, 0.05}, {0.3, 1}});
  const EllipticModulus<double> m(lam);
  for (int count : {2, 3, 6, 15}) {
    const auto a = insertion_parameters(X, lam, count);
    REQUIRE(a.size() == static_cast<std::size_t>(count));
    CHECK(a.front() == 0);
    CHECK(std::is_sorted(a.begin(), a.end()));
    for (double v : a) CHECK(near(X, xi(v, m)));
  }
  // Two isolated points can host two parameters but not three.
  const auto P = Domain::points({lam, 1});
  CHECK(insertion_parameters(P, lam, 2).size() == 2);
  CHECK_THROWS_AS(insertion_parameters(P, lam, 3), CardinalityError);
}

TEST_CASE("initialization on two symmetric subintervals") {
  const auto pair = validate_pair(Domain::intervals({{-3, -2}, {2, 3}}), Domain::intervals({{-12, -8}}));
  const auto eq = initialize(shared(pair), 6);
  const EllipticModulus<double> m(pair.lambda);
  for (double v : insertion_parameters(pair.Xn, pair.lambda, 7)) CHECK(near(pair.Xn, xi(v, m)));
  for (double x : eq.ext.x) CHECK(pair.Xn.contains(x));
  CHECK_THROWS_AS(initialize(shared(validate_pair(Domain::points({1, 2, 3}), Domain::points({-1, -2, -3}))), 3),
                  CardinalityError);
}

TEST_CASE("residuals at the closed-form nodes are level") {
  for (double lam : {1e-6, 0.1, 0.7}) {
    for (int n : {2, 5, 9}) {
      const auto sol = zolotarev_nodes(n, lam);
      const auto eq = make_equioscillator(shared(symmetric(lam)), sol.roots, sol.poles);
      const auto r = residual_logs(eq);
      CHECK(spread_of(r.c) <= 1e-9);
      CHECK(spread_of(r.d) <= 1e-9);
      CHECK(r.c.front() + r.d.front() == doctest::Approx(sol.log_Zn).epsilon(1e-12));
    }
  }
}

TEST_CASE("residual by hand for one root and one pole") {
  const auto eq = make_equioscillator(shared(symmetric(0.1)), {0.5}, {-0.5});
  CHECK(eq.ext.x.back() == 1);
  const auto r = residual_logs(eq);
  CHECK(r.c.back() == doctest::Approx(std::log(0.5 / 1.5)).epsilon(1e-15));
  CHECK(eq.ext.x.front() == 0.1);
  CHECK(r.c.front() == doctest::Approx(std::log(0.4 / 0.6)).epsilon(1e-15));
}

TEST_CASE("perturbed nodes have a positive residual spread") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto eq = perturbed_analytic(0.01, 6, 0.1, rng);
    const auto r = residual_logs(eq);
    CHECK(std::max(spread_of(r.c), spread_of(r.d)) > 0);
    CHECK(eq.deviation() > 0);
  }
}

TEST_CASE("correction vanishes at the closed-form nodes") {
  for (double lam : {1e-5, 0.1, 0.6}) {
    for (int n : {1, 4, 10}) {
      const auto sol = zolotarev_nodes(n, lam);
      const auto eq = make_equioscillator(shared(symmetric(lam)), sol.roots, sol.poles);
      const auto corr = correction_step(eq);
      for (double d : corr.d_roots) CHECK(std::abs(d) <= 1e-9);
      for (double d : corr.d_poles) CHECK(std::abs(d) <= 1e-9);
      CHECK(corr.a == doctest::Approx(sol.log_Zn / 2).epsilon(1e-11));
      CHECK(std::abs(corr.b) <= 1e-9);
    }
  }
}

TEST_CASE("correction of a symmetric one-node perturbation keeps the symmetry") {
  const double lam = 0.04;
  for (double eps : {0.05, -0.1, 0.2}) {
    const double r = std::sqrt(lam) * (1 + eps);
    const auto eq = make_equioscillator(shared(symmetric(lam)), {r}, {-r});
    const auto corr = correction_step(eq);
    CHECK(corr.d_roots[0] == doctest::Approx(-corr.d_poles[0]).epsilon(1e-12));
    CHECK(corr.d_roots[0] * eps < 0);
  }
}

TEST_CASE("correction solves the linearized system") {
  std::mt19937_64 rng(17);
  for (double lam : {1e-4, 0.05, 0.5}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 5;
      const auto eq = perturbed_analytic(lam, n, 0.2, rng);
      const auto res = residual_logs(eq);
      const auto corr = correction_step(eq);
      const int N = 2 * n + 2;
      Eigen::MatrixXd M(N, N);
      Eigen::VectorXd rhs(N), sol(N);
      for (int i = 0; i <= n; ++i) {
        const double x = eq.ext.x[i], y = eq.ext.y[i];
        M(i, 0) = 1;
        M(i, 1) = -1;
        M(n + 1 + i, 0) = 1;
        M(n + 1 + i, 1) = 1;
        for (int j = 0; j < n; ++j) {
          M(i, 2 + j) = 1 / (x - eq.roots[j]);
          M(i, 2 + n + j) = -1 / (x - eq.poles[j]);
          M(n + 1 + i, 2 + j) = -1 / (y - eq.roots[j]);
          M(n + 1 + i, 2 + n + j) = 1 / (y - eq.poles[j]);
        }
        rhs(i) = res.c[i];
        rhs(n + 1 + i) = res.d[i];
      }
      sol(0) = corr.a;
      sol(1) = corr.b;
      for (int j = 0; j < n; ++j) {
        sol(2 + j) = corr.d_roots[j];
        sol(2 + n + j) = corr.d_poles[j];
      }
      const double resid = (M * sol - rhs).norm();
      CHECK(resid <= 1e-10 * rhs.norm());
      const Eigen::VectorXd dense = M.fullPivLu().solve(rhs);
      CHECK(std::abs(dense(0) - corr.a) <= 1e-9 * std::max(1.0, std::abs(corr.a)));
    }
  }
}

TEST_CASE("line search never increases the spread and keeps the brackets") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto eq = perturbed_analytic(trial % 2 ? 1e-6 : 0.3, 7, 0.3, rng);
    const double before = eq.deviation();
    const auto corr = correction_step(eq);
    const auto x = eq.ext.x;
    const auto y = eq.ext.y;
    const auto ls = line_search_st(eq, corr);
    CHECK(ls.spread <= before);
    CHECK(eq.deviation() <= before);
    CHECK(ls.alpha >= 0);
    CHECK(ls.alpha <= 1);
    for (int i = 0; i < 7; ++i) {
      CHECK(x[i] < eq.roots[i]);
      CHECK(eq.roots[i] < x[i + 1]);
      CHECK(y[i + 1] < eq.poles[i]);
      CHECK(eq.poles[i] < y[i]);
    }
  }
}

TEST_CASE("full steps are accepted near convergence with a quadratic tail") {
  std::mt19937_64 rng(29);
  for (double lam : {1e-7, 1e-3, 0.5}) {
    auto eq = perturbed_analytic(lam, 12, 0.2, rng);
    const auto rep = refine(eq);
    CHECK(rep.certified);
    REQUIRE(rep.iterations >= 2);
    CHECK(rep.alpha_history[rep.iterations - 2] == 1.0);
    const double floor_level = 100 * rep.spread_history.back();
    int checked = 0;
    for (std::size_t k = 0; k + 1 < rep.spread_history.size(); ++k) {
      const double s0 = rep.spread_history[k], s1 = rep.spread_history[k + 1];
      if (s0 < 1e-3 && s1 > floor_level) {
        CHECK(std::log(s1) <= 1.7 * std::log(s0));
        ++checked;
      }
    }
    CHECK(checked >= 1);
  }
}

TEST_CASE("Mobius images give the same Zolotarev number") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-3, 3), S(0.2, 5);
  const double lam = 1e-3;
  const auto sym = symmetric(lam);
  for (int trial = 0; trial < 8; ++trial) {
    // Random increasing affine map composed with a Mobius map whose pole
    // lies outside [-1, 1].
    const double pole = (trial % 2 ? 1 : -1) * (1.5 + S(rng));
    const auto M = MobiusMap::from_coefficients(S(rng), U(rng), -1 / pole, 1);
    auto f = [&](double z) { return M(z); };
    const bool inc = M.determinant() > 0;
    const double x0 = f(lam), x1 = f(1), y0 = f(-1), y1 = f(-lam);
    const auto X = Domain::intervals({{std::min(x0, x1), std::max(x0, x1)}});
    const auto Y = Domain::intervals({{std::min(y0, y1), std::max(y0, y1)}});
    const auto pair = (inc == (x0 > y0)) ? validate_pair(X, Y) : validate_pair(X.negated(), Y.negated());
    CHECK(pair.lambda == doctest::Approx(lam).epsilon(1e-10));
    for (int n : {3, 9}) {
      const auto a = solve(sym, n).second;
      const auto b = solve(pair, n).second;
      CHECK(std::abs(a.log_Zn - b.log_Zn) <= 1e-10 * std::abs(a.log_Zn));
    }
  }
}

TEST_CASE("roots cover a two-point set") {
  const auto pair = validate_pair(Domain::points({0.5, 1}), Domain::intervals({{-1, -0.1}}));
  const auto [eq, rep] = solve(pair, 2);
  CHECK(rep.status == SolveStatus::Covering);
  CHECK(std::isinf(rep.log_Zn));
  CHECK(rep.log_Zn < 0);
  CHECK(rep.certified);
  CHECK(certify(eq, 1e-8));
  auto roots = eq.original_roots();
  std::sort(roots.begin(), roots.end());
  CHECK(roots[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(roots[1] == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("n = 0 is trivial") {
  const auto [eq, rep] = solve(symmetric(0.3), 0);
  CHECK(rep.status == SolveStatus::Trivial);
  CHECK(rep.log_Zn == 0);
  CHECK(rep.certified);
}

TEST_CASE("certify accepts optimal nodes and rejects a perturbation") {
  for (double lam : {1e-4, 0.3}) {
    const auto sol = zolotarev_nodes(6, lam);
    const auto eq = make_equioscillator(shared(symmetric(lam)), sol.roots, sol.poles);
    CHECK(certify(eq, 1e-8));
    auto roots = sol.roots;
    roots[0] += 1e-3 * (sol.roots[1] - sol.roots[0]);
    const auto bad = make_equioscillator(shared(symmetric(lam)), roots, sol.poles);
    CHECK_FALSE(certify(bad, 1e-8));
  }
}

TEST_CASE("subsets of the bounding intervals have smaller numbers") {
  const auto pair = validate_pair(Domain::intervals({{0.01, 0.02}, {0.1, 0.4}, {0.6, 1}}),
                                  Domain::intervals({{-1, -0.5}, {-0.2, -0.01}}));
  double prev = 0;
  for (int n = 1; n <= 10; ++n) {
    const auto [eq, rep] = solve(pair, n);
    CHECK(rep.certified);
    CHECK(rep.log_Zn <= zolotarev_number_log(n, pair.lambda) + 1e-12);
    CHECK(rep.log_Zn < prev);
    prev = rep.log_Zn;
    for (std::size_t i = 0; i < eq.ext.x.size(); ++i) CHECK(pair.Xn.contains(eq.ext.x[i]));
    for (std::size_t i = 0; i < eq.ext.y.size(); ++i) CHECK(pair.Yn.contains(eq.ext.y[i]));
  }
}

TEST_CASE("three-point sets agree with a brute-force minimax") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> U(0.02, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> X{U(rng), U(rng), U(rng)}, Y{-U(rng), -U(rng), -U(rng)};
    std::sort(X.begin(), X.end());
    std::sort(Y.begin(), Y.end());
    const auto pair = validate_pair(Domain::points(X), Domain::points(Y));
    SolveOptions opts;
    opts.throw_on_failure = false;
    const auto rep = solve(pair, 1, opts).second;
    const double ref = oracle::brute_force_log_z1(X, Y);
    CHECK(std::abs(std::exp(rep.log_Zn) - std::exp(ref)) <= 1e-6);
  }
}

TEST_CASE("failures are reported through the status or thrown") {
  const auto pair = symmetric(0.1);
  SolveOptions opts;
  opts.max_iter = 0;
  auto eq = perturbed_analytic(0.1, 8, 0.3, *std::make_unique<std::mt19937_64>(1));
  CHECK_THROWS_AS(refine(eq, opts), MaxIterError);
  opts.throw_on_failure = false;
  const auto rep = refine(eq, opts);
  CHECK(rep.status == SolveStatus::MaxIter);
  CHECK_FALSE(rep.certified);
  CHECK_THROWS_AS(solve(pair, -1), DomainError);
}
