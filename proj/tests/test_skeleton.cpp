#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "zolo/analytic.hpp"
#include "zolo/skeleton.hpp"
#include "zolo/solver.hpp"

using namespace zolo;

namespace {

SkeletonDecomposition analytic_skeleton(int r, double lam, SkeletonForm form = SkeletonForm::TwoSided) {
  const auto s = zolotarev_nodes(r, lam);
  return make_skeleton(s.roots, s.poles, form);
}

Domain interval(double a, double b) { return Domain::intervals({{a, b}}); }

}  // namespace

TEST_CASE("interpolation vectors are unit vectors on their own nodes") {
  for (double lam : {1e-7, 0.01, 0.5}) {
    const auto dec = analytic_skeleton(12, lam);
    for (int j = 0; j < 12; ++j) {
      const auto u = eval_interp(dec, InterpSide::U, dec.x_nodes[j]);
      const auto v = eval_interp(dec, InterpSide::V, dec.y_nodes[j]);
      for (int i = 0; i < 12; ++i) {
        CHECK(u[i] == (i == j ? 1.0 : 0.0));
        CHECK(v[i] == (i == j ? 1.0 : 0.0));
      }
      // One ulp away the modified Lagrange formula is still accurate.
      const double z = std::nextafter(dec.x_nodes[j], 2.0);
      const auto un = eval_interp(dec, InterpSide::U, z);
      for (int i = 0; i < 12; ++i) CHECK(std::abs(un[i] - (i == j ? 1.0 : 0.0)) <= 1e-13);
    }
  }
}

TEST_CASE("interpolation vectors sum to one up to the node ratio") {
  // Lagrange interpolation of the monic prod (t - y~_j) leaves
  // sum_i u_i(z) = 1 - g(z) and sum_i v_i(z) = 1 - 1 / g(z).
  std::mt19937_64 rng(41);
  for (double lam : {1e-7, 1e-3, 0.3}) {
    const auto dec = analytic_skeleton(20, lam);
    std::uniform_real_distribution<double> T(0, 1);
    for (int k = 0; k < 100; ++k) {
      const double x = std::exp(std::log(lam) * T(rng));
      double su = 0, au = 0, sv = 0, av = 0;
      for (double w : eval_interp(dec, InterpSide::U, x)) {
        su += w;
        au += std::abs(w);
      }
      for (double w : eval_interp(dec, InterpSide::V, -x)) {
        sv += w;
        av += std::abs(w);
      }
      const double gx = std::exp(log_abs_node_ratio(dec, x));
      const double gy = std::exp(-log_abs_node_ratio(dec, -x));
      // Sign of g on X and of 1/g on Y for interleaved real nodes.
      const double sx = std::count_if(dec.x_nodes.begin(), dec.x_nodes.end(), [&](double t) { return t > x; }) % 2 ? -1 : 1;
      const double sy = std::count_if(dec.y_nodes.begin(), dec.y_nodes.end(), [&](double t) { return t < -x; }) % 2 ? -1 : 1;
      CHECK(std::abs(su - (1 - sx * gx)) <= 1e-13 * au);
      CHECK(std::abs(sv - (1 - sy * gy)) <= 1e-13 * av);
      if (lam >= 0.3) {
        CHECK(std::abs(su - 1) <= 1e-13);
        CHECK(std::abs(sv - 1) <= 1e-13);
      }
    }
  }
}

TEST_CASE("rank-one interpolation vector") {
  const auto dec = make_skeleton({0.3}, {-0.7});
  for (double z : {0.1, 0.5, 2.0, -0.2}) {
    // C(y~, x~)^-1 C(y~, z) for 1 x 1 matrices.
    const double direct = (1 / (-0.7 - z)) / (1 / (-0.7 - 0.3));
    CHECK(eval_interp(dec, InterpSide::U, z)[0] == doctest::Approx(direct).epsilon(1e-15));
    CHECK(eval_interp(dec, InterpSide::U, z)[0] == doctest::Approx((0.3 + 0.7) / (z + 0.7)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(eval_interp(dec, InterpSide::U, -0.7), PoleError);
  CHECK_THROWS_AS(eval_interp(dec, InterpSide::V, 0.3), PoleError);
}

TEST_CASE("interpolation vectors match dense Cauchy solves") {
  const int r = 8;
  const auto dec = analytic_skeleton(r, 0.1, SkeletonForm::Raw);
  Eigen::MatrixXd Cyx(r, r), Cxy(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Cyx(i, j) = 1 / (dec.y_nodes[i] - dec.x_nodes[j]);
      Cxy(i, j) = 1 / (dec.x_nodes[i] - dec.y_nodes[j]);
    }
  for (double z : {0.15, 0.42, 0.97}) {
    Eigen::VectorXd bu(r), bv(r);
    for (int i = 0; i < r; ++i) {
      bu(i) = 1 / (dec.y_nodes[i] - z);
      bv(i) = 1 / (dec.x_nodes[i] + z);
    }
    const Eigen::VectorXd u = Cyx.fullPivLu().solve(bu);
    const Eigen::VectorXd v = Cxy.fullPivLu().solve(bv);
    const auto uu = eval_interp(dec, InterpSide::U, z);
    const auto vv = eval_interp(dec, InterpSide::V, -z);
    for (int i = 0; i < r; ++i) {
      CHECK(std::abs(uu[i] - u(i)) <= 1e-9 * std::max(1.0, std::abs(u(i))));
      CHECK(std::abs(vv[i] - v(i)) <= 1e-9 * std::max(1.0, std::abs(v(i))));
    }
  }
  const Eigen::MatrixXd inv = Cxy.inverse();
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i)
      CHECK(std::abs(dec.raw_inverse[k * r + i] - inv(k, i)) <= 1e-8 * inv.cwiseAbs().maxCoeff());
}

TEST_CASE("reconstruction is exact on the nodes in every form") {
  for (auto form : {SkeletonForm::Raw, SkeletonForm::LeftInterp, SkeletonForm::RightInterp, SkeletonForm::TwoSided}) {
    const auto dec = analytic_skeleton(6, 0.05, form);
    double tol = 1e-13;
    if (form == SkeletonForm::Raw) {
      // The explicit inverse carries the full conditioning of C(x~, y~).
      Eigen::MatrixXd C(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) C(i, j) = 1 / (dec.x_nodes[i] - dec.y_nodes[j]);
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
      tol = 8 * svd.singularValues()(0) / svd.singularValues()(5) * 2.2e-16;
      CHECK(tol > 1e-13);
    }
    for (int i = 0; i < 6; ++i) {
      for (double y : {-1.0, -0.5, -0.05}) {
        const double exact = 1 / (dec.x_nodes[i] - y);
        CHECK(std::abs(reconstruct(dec, dec.x_nodes[i], y) - exact) <= tol * exact);
      }
      for (double x : {0.05, 0.5, 1.0}) {
        const double exact = 1 / (x - dec.y_nodes[i]);
        CHECK(std::abs(reconstruct(dec, x, dec.y_nodes[i]) - exact) <= tol * exact);
      }
    }
  }
}

TEST_CASE("empty decomposition") {
  const auto dec = make_skeleton({}, {});
  CHECK(reconstruct(dec, 0.5, -0.5) == 0);
  const auto e = max_relative_error(dec, interval(0.1, 1), interval(-1, -0.1));
  CHECK(e.value == 1);
  CHECK_THROWS_AS(make_skeleton({0.1, 0.1}, {-1, -2}), ValidationError);
  CHECK_THROWS_AS(make_skeleton({0.1}, {0.1}), ValidationError);
  CHECK_THROWS_AS(make_skeleton({0.1}, {}), ValidationError);
}

TEST_CASE("stable forms agree within the condition-number bound") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> T(0, 1);
  for (double lam : {1e-7, 1e-4, 1e-2, 0.3, 0.9}) {
    for (int r : {5, 20, 60}) {
      const auto dec = analytic_skeleton(r, lam);
      const auto X = interval(lam, 1), Y = interval(-1, -lam);
      const auto kp = kappa(dec, X, Y);
      for (int k = 0; k < 30; ++k) {
        const double x = std::exp(std::log(lam) * T(rng));
        const double y = -std::exp(std::log(lam) * T(rng));
        const double L = reconstruct(dec, SkeletonForm::LeftInterp, x, y);
        const double R = reconstruct(dec, SkeletonForm::RightInterp, x, y);
        const double B = reconstruct(dec, SkeletonForm::TwoSided, x, y);
        CHECK(std::abs(L - R) * (x - y) <= 1e-12 * (kp.kappa_xy + kp.kappa_yx));
        CHECK(std::abs(L - B) * (x - y) <= 1e-12 * kp.kappa_xy);
      }
    }
  }
}

TEST_CASE("relative error of optimal nodes is the Zolotarev number") {
  for (double lam : {1e-6, 0.01, 0.4}) {
    for (int r : {1, 4, 9}) {
      const auto dec = analytic_skeleton(r, lam);
      const auto X = interval(lam, 1), Y = interval(-1, -lam);
      const auto e = max_relative_error(dec, X, Y);
      const double Z = zolotarev_number_log(r, lam);
      CHECK(std::abs(e.log_value - Z) <= 1e-8);
      if (r <= 4) {
        const auto g = max_relative_error(dec, X, Y, 32, ErrorEvaluation::Reconstructed);
        CHECK(std::abs(g.value - e.value) <= 1e-8 * e.value + 1e-13);
      }
    }
  }
}

TEST_CASE("relative error from solver nodes on a union of intervals") {
  const auto X = Domain::intervals({{0.5, 1}, {1.5, 3}});
  const auto Y = Domain::intervals({{-4, -2}, {-1, -0.2}});
  const auto pair = validate_pair(X, Y);
  for (int n : {2, 5}) {
    const auto [eq, rep] = solve(pair, n);
    REQUIRE(rep.certified);
    const auto dec = make_skeleton(eq.original_roots(), eq.original_poles());
    const auto e = max_relative_error(dec, X, Y);
    CHECK(std::abs(e.value - std::exp(rep.log_Zn)) <= 1e-8 * std::exp(rep.log_Zn));

    // The error is attained at all (n + 1)^2 pairs of extrema.
    const double Z = std::exp(rep.log_Zn);
    int attained = 0;
    for (double xn : eq.ext.x) {
      for (double yn : eq.ext.y) {
        const double x = pair.inverse_map(xn), y = pair.inverse_map(yn);
        const double err = std::exp(log_abs_node_ratio(dec, x) - log_abs_node_ratio(dec, y));
        if (std::abs(err - Z) <= 1e-7 * Z) ++attained;
      }
    }
    CHECK(attained == (n + 1) * (n + 1));
  }
}

TEST_CASE("covering nodes reconstruct a two-point set exactly") {
  const auto X = Domain::points({0.5, 1});
  const auto Y = interval(-1, -0.1);
  const auto dec = make_skeleton({0.5, 1}, {-0.3, -0.6});
  const auto e = max_relative_error(dec, X, Y);
  CHECK(e.value == 0);
}

TEST_CASE("kappa on the symmetric pair") {
  const auto k1 = kappa(analytic_skeleton(1, 0.2), interval(0.2, 1), interval(-1, -0.2));
  CHECK(k1.kappa_xy >= 1);
  CHECK(k1.kappa_xy == doctest::Approx(k1.kappa_yx).epsilon(1e-12));

  const double lam = 0.999;
  const auto k20 = kappa(analytic_skeleton(20, lam), interval(lam, 1), interval(-1, -lam));
  CHECK(std::abs(k20.kappa_xy - kappa_asymptote(20)) < 0.01);

  const double lam5 = 1e-5;
  const auto k50 = kappa(analytic_skeleton(50, lam5), interval(lam5, 1), interval(-1, -lam5));
  CHECK(std::abs(k50.kappa_xy - kappa_asymptote(50) - kappa_offset_fit(lam5)) <= 0.05);
}

TEST_CASE("kappa is invariant under Mobius maps") {
  const double lam = cross_ratio_lambda(2, 3, -3, -2);
  const auto m = map_nodes_to_pair(zolotarev_nodes(7, lam), 2, 3, -3, -2);
  const auto a = kappa(make_skeleton(m.roots, m.poles), interval(2, 3), interval(-3, -2));
  const auto b = kappa(analytic_skeleton(7, lam), interval(lam, 1), interval(-1, -lam));
  CHECK(a.kappa_xy == doctest::Approx(b.kappa_xy).epsilon(1e-8));
  CHECK(a.kappa_yx == doctest::Approx(b.kappa_yx).epsilon(1e-8));
}

TEST_CASE("kappa on point sets is an exact scan") {
  const std::vector<double> xs{0.2, 0.35, 0.6, 0.9}, ys{-0.95, -0.5, -0.3};
  const auto X = Domain::points(xs), Y = Domain::points(ys);
  const auto dec = make_skeleton({0.3, 0.7}, {-0.4, -0.8});
  const auto k = kappa(dec, X, Y);
  double ref = 0;
  for (double x : xs) {
    const auto u = eval_interp(dec, InterpSide::U, x);
    double s = 0;
    for (int i = 0; i < 2; ++i) {
      double m = 0;
      for (double y : ys) m = std::max(m, std::abs(u[i] * (x - y) / (dec.x_nodes[i] - y)));
      s += m;
    }
    ref = std::max(ref, s);
  }
  CHECK(k.kappa_xy == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("Lebesgue asymptote") {
  const double g = std::numbers::egamma;
  CHECK(kappa_asymptote(1) == doctest::Approx(2 / std::numbers::pi * (g + std::log(8 / std::numbers::pi))));
  for (int r = 1; r < 200; ++r) CHECK(kappa_asymptote(r + 1) > kappa_asymptote(r));
  CHECK(kappa_asymptote(100) - kappa_asymptote(10) == doctest::Approx(2 / std::numbers::pi * std::log(10.0)));
  CHECK_THROWS_AS(kappa_asymptote(0), DomainError);
}

TEST_CASE("form names round-trip") {
  for (auto f : {SkeletonForm::Raw, SkeletonForm::LeftInterp, SkeletonForm::RightInterp, SkeletonForm::TwoSided})
    CHECK(skeleton_form_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(skeleton_form_from_string("diagonal"), ValidationError);
}
