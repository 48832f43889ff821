#include "zolo/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zolo/analytic.hpp"
#include "zolo/parallel.hpp"

namespace zolo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool on_node(double z, double node) { return std::abs(z - node) <= 4 * kEps * std::max(std::abs(z), std::abs(node)); }

/// prod_j (z - a_j) / (z - b_j), or prod_j (z - a_j) / (b_j - z) when
/// `flip` is set (the v-side prefactor).
ScaledProduct node_ratio(double z, const std::vector<double>& a, const std::vector<double>& b, bool flip) {
  ScaledProduct p;
  for (std::size_t j = 0; j < a.size(); ++j) {
    p.mul(z - a[j]);
    p.div(flip ? b[j] - z : z - b[j]);
  }
  return p;
}

std::vector<double> chebyshev_points(double lo, double hi, int m) {
  if (lo == hi || m <= 1) return {lo};
  std::vector<double> out(m);
  for (int k = 0; k < m; ++k) {
    const double t = (1 - std::cos(std::numbers::pi * k / (m - 1))) / 2;
    out[k] = k == m - 1 ? hi : lo + (hi - lo) * t;
  }
  return out;
}

/// Candidate points of `dom`: every point of a point set, otherwise
/// Chebyshev points of each piece plus the maximizers of
/// sum log|z - zeros| - sum log|z - poles| between consecutive zeros.
std::vector<double> candidates(const Domain& dom, const std::vector<double>& zeros,
                               const std::vector<double>& poles, int density) {
  std::vector<double> out;
  for (const auto& piece : dom.pieces()) {
    const auto pts = chebyshev_points(piece.lo, piece.hi, density);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  std::vector<double> z = zeros;
  std::sort(z.begin(), z.end());
  for (std::size_t i = 0; i <= z.size(); ++i) {
    const double lo = i == 0 ? -kInf : z[i - 1];
    const double hi = i == z.size() ? kInf : z[i];
    try {
      out.push_back(max_log_ratio_on(dom, lo, hi, zeros, poles).argmax);
    } catch (const EmptySliceError&) {
    }
  }
  return out;
}

/// Maximum of f over dom: points are enumerated, interval pieces are split
/// at the breakpoints, sampled, and refined by golden-section search.
template <typename F>
std::pair<double, double> outer_max(const Domain& dom, const std::vector<double>& breaks, F f) {
  double best_z = dom.min(), best = -kInf;
  auto consider = [&](double z) {
    const double v = f(z);
    if (v > best) {
      best = v;
      best_z = z;
    }
    return v;
  };
  std::vector<double> b = breaks;
  std::sort(b.begin(), b.end());
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (const auto& piece : dom.pieces()) {
    if (piece.lo == piece.hi) {
      consider(piece.lo);
      continue;
    }
    std::vector<double> cuts{piece.lo};
    for (double x : b)
      if (x > piece.lo && x < piece.hi) cuts.push_back(x);
    cuts.push_back(piece.hi);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      constexpr int kSamples = 9;
      const double a = cuts[s], c = cuts[s + 1];
      std::vector<double> zs(kSamples), vs(kSamples);
      for (int k = 0; k < kSamples; ++k) {
        zs[k] = k == kSamples - 1 ? c : a + (c - a) * k / (kSamples - 1);
        vs[k] = consider(zs[k]);
      }
      const int k = static_cast<int>(std::max_element(vs.begin(), vs.end()) - vs.begin());
      double lo = zs[std::max(k - 1, 0)], hi = zs[std::min(k + 1, kSamples - 1)];
      double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      double f1 = consider(m1), f2 = consider(m2);
      for (int it = 0; it < 80 && hi - lo > 4 * kEps * std::max(std::abs(lo), std::abs(hi)); ++it) {
        if (f1 >= f2) {
          hi = m2;
          m2 = m1;
          f2 = f1;
          m1 = hi - phi * (hi - lo);
          f1 = consider(m1);
        } else {
          lo = m1;
          m1 = m2;
          f1 = f2;
          m2 = lo + phi * (hi - lo);
          f2 = consider(m2);
        }
      }
    }
  }
  return {best_z, best};
}

}  // namespace

const char* to_string(SkeletonForm f) {
  switch (f) {
    case SkeletonForm::Raw: return "raw";
    case SkeletonForm::LeftInterp: return "left";
    case SkeletonForm::RightInterp: return "right";
    case SkeletonForm::TwoSided: return "two_sided";
  }
  return "two_sided";
}

SkeletonForm skeleton_form_from_string(const std::string& s) {
  if (s == "raw") return SkeletonForm::Raw;
  if (s == "left") return SkeletonForm::LeftInterp;
  if (s == "right") return SkeletonForm::RightInterp;
  if (s == "two_sided") return SkeletonForm::TwoSided;
  throw ValidationError("unknown skeleton form: " + s);
}

SkeletonDecomposition make_skeleton(std::vector<double> x_nodes, std::vector<double> y_nodes, SkeletonForm form) {
  if (x_nodes.size() != y_nodes.size()) throw ValidationError("skeleton needs as many x nodes as y nodes");
  const std::size_t r = x_nodes.size();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (x_nodes[i] == y_nodes[j]) throw ValidationError("an x node coincides with a y node");
      if (j != i && (x_nodes[i] == x_nodes[j] || y_nodes[i] == y_nodes[j]))
        throw ValidationError("skeleton nodes must be distinct");
    }
  }
  SkeletonDecomposition dec;
  dec.r = static_cast<int>(r);
  dec.form = form;
  dec.u_weights.resize(r);
  dec.v_weights.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    ScaledProduct U, V;
    for (std::size_t j = 0; j < r; ++j) {
      U.mul(x_nodes[i] - y_nodes[j]);
      V.mul(x_nodes[j] - y_nodes[i]);
      if (j == i) continue;
      U.div(x_nodes[i] - x_nodes[j]);
      V.div(y_nodes[i] - y_nodes[j]);
    }
    dec.u_weights[i] = U;
    dec.v_weights[i] = V;
  }
  if (form == SkeletonForm::Raw) {
    // C(x~, y~)^-1 [k][i] = (-1)^(r-1) U_i V_k / (x~_i - y~_k)
    dec.raw_inverse.resize(r * r);
    const double sign = r % 2 ? 1 : -1;
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t i = 0; i < r; ++i) {
        ScaledProduct p = dec.u_weights[i];
        p.mul(dec.v_weights[k]);
        p.div(x_nodes[i] - y_nodes[k]);
        dec.raw_inverse[k * r + i] = sign * p.value();
      }
    }
  }
  dec.x_nodes = std::move(x_nodes);
  dec.y_nodes = std::move(y_nodes);
  return dec;
}

std::vector<double> eval_interp(const SkeletonDecomposition& dec, InterpSide side, double z) {
  const bool u = side == InterpSide::U;
  const auto& own = u ? dec.x_nodes : dec.y_nodes;
  const auto& other = u ? dec.y_nodes : dec.x_nodes;
  const auto& w = u ? dec.u_weights : dec.v_weights;
  const std::size_t r = own.size();
  std::vector<double> out(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    if (z == own[i]) {
      out[i] = 1;
      return out;
    }
  }
  for (double p : other)
    if (on_node(z, p)) throw PoleError("interpolation vector evaluated on a node of the opposite side");
  const ScaledProduct g = node_ratio(z, own, other, !u);
  for (std::size_t i = 0; i < r; ++i) {
    ScaledProduct t = g;
    t.mul(w[i]);
    t.div(z - own[i]);
    out[i] = t.value();
  }
  return out;
}

double reconstruct(const SkeletonDecomposition& dec, double x, double y) {
  return reconstruct(dec, dec.form, x, y);
}

double reconstruct(const SkeletonDecomposition& dec, SkeletonForm form, double x, double y) {
  if (x == y) throw PoleError("reconstruct: x equals y");
  const std::size_t r = dec.x_nodes.size();
  if (r == 0) return 0;
  const auto& xt = dec.x_nodes;
  const auto& yt = dec.y_nodes;
  switch (form) {
    case SkeletonForm::LeftInterp: {
      const auto u = eval_interp(dec, InterpSide::U, x);
      double s = 0;
      for (std::size_t i = 0; i < r; ++i) s += u[i] / (xt[i] - y);
      return s;
    }
    case SkeletonForm::RightInterp: {
      const auto v = eval_interp(dec, InterpSide::V, y);
      double s = 0;
      for (std::size_t j = 0; j < r; ++j) s += v[j] / (x - yt[j]);
      return s;
    }
    case SkeletonForm::TwoSided: {
      const auto u = eval_interp(dec, InterpSide::U, x);
      const auto v = eval_interp(dec, InterpSide::V, y);
      double s = 0;
      for (std::size_t i = 0; i < r; ++i) {
        double w = 0;
        for (std::size_t j = 0; j < r; ++j) w += v[j] / (xt[i] - yt[j]);
        s += u[i] * w;
      }
      return s;
    }
    case SkeletonForm::Raw: {
      SkeletonDecomposition tmp;
      const SkeletonDecomposition* d = &dec;
      if (dec.raw_inverse.empty()) {
        tmp = make_skeleton(xt, yt, SkeletonForm::Raw);
        d = &tmp;
      }
      for (double p : yt)
        if (x == p) throw PoleError("reconstruct: x on a y node");
      for (double p : xt)
        if (y == p) throw PoleError("reconstruct: y on an x node");
      double s = 0;
      for (std::size_t k = 0; k < r; ++k) {
        double w = 0;
        for (std::size_t i = 0; i < r; ++i) w += d->raw_inverse[k * r + i] / (xt[i] - y);
        s += w / (x - yt[k]);
      }
      return s;
    }
  }
  return 0;
}

double log_abs_node_ratio(const SkeletonDecomposition& dec, double z) {
  return node_ratio(z, dec.x_nodes, dec.y_nodes, false).log_abs();
}

RelativeErrorReport max_relative_error(const SkeletonDecomposition& dec, const Domain& X, const Domain& Y,
                                       int grid_density, ErrorEvaluation eval) {
  RelativeErrorReport rep{1, 0, X.min(), Y.max()};
  if (dec.r == 0) return rep;
  const auto sx = candidates(X, dec.x_nodes, dec.y_nodes, grid_density);
  const auto sy = candidates(Y, dec.y_nodes, dec.x_nodes, grid_density);
  if (eval == ErrorEvaluation::Factored) {
    double cx = -kInf, cy = -kInf;
    for (double x : sx) {
      const double v = log_abs_node_ratio(dec, x);
      if (v > cx) {
        cx = v;
        rep.argmax_x = x;
      }
    }
    for (double y : sy) {
      const double v = -log_abs_node_ratio(dec, y);
      if (v > cy) {
        cy = v;
        rep.argmax_y = y;
      }
    }
    rep.log_value = cx + cy;
    rep.value = std::exp(rep.log_value);
    return rep;
  }
  double best = -1;
  for (double x : sx) {
    for (double y : sy) {
      const double e = std::abs(1 - (x - y) * reconstruct(dec, x, y));
      if (e > best) {
        best = e;
        rep.argmax_x = x;
        rep.argmax_y = y;
      }
    }
  }
  rep.value = best;
  rep.log_value = std::log(best);
  return rep;
}

KappaReport kappa(const SkeletonDecomposition& dec, const Domain& X, const Domain& Y) {
  KappaReport rep;
  if (dec.r == 0) return rep;
  auto side_sum = [&](InterpSide side, double z, const Domain& opp) {
    const auto w = eval_interp(dec, side, z);
    const auto& nodes = side == InterpSide::U ? dec.x_nodes : dec.y_nodes;
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double m = std::max(std::abs((z - opp.min()) / (nodes[i] - opp.min())),
                                std::abs((z - opp.max()) / (nodes[i] - opp.max())));
      s += std::abs(w[i]) * m;
    }
    return s;
  };
  const auto [xa, kx] = outer_max(X, dec.x_nodes, [&](double x) { return side_sum(InterpSide::U, x, Y); });
  const auto [ya, ky] = outer_max(Y, dec.y_nodes, [&](double y) { return side_sum(InterpSide::V, y, X); });
  rep.kappa_xy = kx;
  rep.kappa_yx = ky;
  rep.argmax_x = xa;
  rep.argmax_y = ya;
  return rep;
}

double kappa_asymptote(int r) {
  if (r < 1) throw DomainError("kappa_asymptote: r must be positive");
  return 2 / std::numbers::pi * (std::numbers::egamma + std::log(8 / std::numbers::pi) + std::log(r));
}

double kappa_offset_fit(double lambda) {
  const double L = std::log(lambda);
  return 0.305 * L * L / (5.88 - L);
}

std::vector<ConditionRow> condition_experiment(const std::vector<double>& lambdas, const std::vector<int>& ranks) {
  std::vector<ConditionRow> rows(lambdas.size() * ranks.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    ConditionRow& row = rows[k];
    row.lambda = lambdas[k / ranks.size()];
    row.r = ranks[k % ranks.size()];
    const auto sol = zolotarev_nodes(row.r, row.lambda);
    const auto dec = make_skeleton(sol.roots, sol.poles);
    row.kappa = kappa(dec, Domain::intervals({{row.lambda, 1}}), Domain::intervals({{-1, -row.lambda}}));
    row.kappa_max = std::max(row.kappa.kappa_xy, row.kappa.kappa_yx);
    row.kappa_bar = kappa_asymptote(row.r);
    row.offset = row.kappa_max - row.kappa_bar;
    row.fit_offset = kappa_offset_fit(row.lambda);
  });
  return rows;
}

}  // namespace zolo
