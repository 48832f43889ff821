#include "zolo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zolo/scaled.hpp"
#include "zolo/special_functions.hpp"

namespace zolo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(double s) { return 1 / (1 + std::exp(-s)); }

/// The point at logistic fraction sigma(s) of [lo, hi], measured from the
/// nearer end so that tiny offsets survive.
double logistic_point(double lo, double hi, double s) {
  const double w = hi - lo;
  return s <= 0 ? lo + w * logistic(s) : hi - w * logistic(-s);
}

/// Multiplies (or divides) p by the factors u - w_j, or w_j - u when
/// reversed, skipping index `skip`. Throws DegenerateGeometryError on an
/// exact zero factor.
void accumulate(ScaledProduct& p, double u, std::span<const double> w, bool reversed, bool divide,
                std::size_t skip = static_cast<std::size_t>(-1)) {
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j == skip) continue;
    const double diff = reversed ? w[j] - u : u - w[j];
    if (diff == 0) throw DegenerateGeometryError("coincident nodes in the correction formula");
    if (divide) p.div(diff); else p.mul(diff);
  }
}

SignedLog to_signed_log(const ScaledProduct& p) { return {p.log_abs(), p.sign()}; }

/// Places points of S (ascending pieces) left to right, each the smallest
/// element of S at distance >= gap from its predecessor, starting at min S.
/// Returns at most `count` points. Runs of points inside one piece are
/// measured from the run's anchor to avoid accumulating rounding.
std::vector<double> greedy_packing(const std::vector<Interval>& S, double gap, int count) {
  std::vector<double> out;
  std::size_t piece = 0;
  double anchor = S.front().lo;
  int run = 0;
  while (static_cast<int>(out.size()) < count) {
    double z = anchor + run * gap;
    // Below one ulp of the anchor the step no longer moves; advance to the
    // next representable value so that point pieces are still visited.
    if (!out.empty() && !(z > out.back())) z = std::nextafter(out.back(), kInf);
    while (piece < S.size() && z > S[piece].hi) {
      ++piece;
      if (piece < S.size() && z < S[piece].lo) {
        anchor = S[piece].lo;
        run = 0;
        z = anchor;
      }
    }
    if (piece == S.size()) break;
    out.push_back(z);
    ++run;
  }
  return out;
}

/// n + 1 points of S with the largest attainable minimum separation, found
/// by bisection on the separation over greedy left-to-right packings.
std::vector<double> spread_points(const std::vector<Interval>& S, int count) {
  double lo = 0, hi = S.back().hi - S.front().lo;
  if (count > 1 && hi > 0) hi /= count - 1;
  if (static_cast<int>(greedy_packing(S, hi, count).size()) == count) {
    lo = hi;
  } else {
    for (int it = 0; it < 300; ++it) {
      const double mid = lo > 0 ? (lo + hi) / 2 : ulp_midpoint(lo, hi);
      if (mid == lo || mid == hi) break;
      if (static_cast<int>(greedy_packing(S, mid, count).size()) == count) lo = mid; else hi = mid;
    }
  }
  if (!(lo > 0) && count > 1) throw CardinalityError("domain cannot host the requested number of points");
  return greedy_packing(S, lo, count);
}

std::vector<Interval> mapped_parameters(const Domain& d, const EllipticModulus<double>& m) {
  std::vector<Interval> out;
  for (const auto& p : d.pieces()) {
    const double lo = xi_inverse(p.lo, m);
    const double hi = p.hi == p.lo ? lo : xi_inverse(p.hi, m);
    if (!out.empty() && !(out.back().hi < lo)) {
      out.back().hi = std::max(out.back().hi, hi);
      continue;
    }
    out.push_back({lo, hi});
  }
  return out;
}

std::vector<double> padded_cover(const std::vector<double>& pts, int n) {
  std::vector<double> out(pts.begin(), pts.end());
  while (static_cast<int>(out.size()) < n) out.push_back(pts.back());
  out.resize(n);
  return out;
}

}  // namespace

ExtremaState locate_extrema(const SeparatedPair& pair, const std::vector<double>& roots,
                            const std::vector<double>& poles) {
  const std::size_t n = roots.size();
  ExtremaState st;
  st.x.resize(n + 1);
  st.c.resize(n + 1);
  st.y.resize(n + 1);
  st.d.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double lo = i == 0 ? -kInf : roots[i - 1];
    const double hi = i == n ? kInf : roots[i];
    const auto m = max_log_ratio_on(pair.Xn, lo, hi, roots, poles);
    st.x[i] = m.argmax;
    st.c[i] = m.value;
  }
  for (std::size_t i = 0; i <= n; ++i) {
    const double hi = i == 0 ? kInf : poles[i - 1];
    const double lo = i == n ? -kInf : poles[i];
    const auto m = max_log_ratio_on(pair.Yn, lo, hi, poles, roots);
    st.y[i] = m.argmax;
    st.d[i] = m.value;
  }
  const auto [c0, c1] = std::minmax_element(st.c.begin(), st.c.end());
  const auto [d0, d1] = std::minmax_element(st.d.begin(), st.d.end());
  st.b = (*d0 + *d1 - *c0 - *c1) / 4;
  st.a = (*c0 + *c1) / 2 + st.b;
  st.spread = std::max(*c1 - *c0, *d1 - *d0);
  if (!std::isfinite(st.spread)) st.spread = kInf;
  return st;
}

namespace {

// Covering nodes sit on points of the original set; the round trip through
// the normalizing map moves them by a few ulps, so they are put back.
double snap_to_point(const Domain& S, double v) {
  if (!S.cardinality()) return v;
  const double tol = 1e-13 * (std::abs(v) + S.max() - S.min());
  const auto near = S.slice(v - tol, v + tol);
  if (near.empty()) return v;
  return std::min_element(near.begin(), near.end(), [&](const Interval& a, const Interval& b) {
           return std::abs(a.lo - v) < std::abs(b.lo - v);
         })->lo;
}

}  // namespace

std::vector<double> Equioscillator::original_roots() const {
  std::vector<double> out;
  for (double r : roots) {
    const double v = pair->inverse_map(r);
    out.push_back(covering ? snap_to_point(pair->X, v) : v);
  }
  return out;
}

std::vector<double> Equioscillator::original_poles() const {
  std::vector<double> out;
  for (double p : poles) {
    const double v = pair->inverse_map(p);
    out.push_back(covering ? snap_to_point(pair->Y, v) : v);
  }
  return out;
}

Equioscillator make_equioscillator(std::shared_ptr<const SeparatedPair> pair, std::vector<double> roots,
                                   std::vector<double> poles) {
  if (roots.size() != poles.size()) throw ValidationError("roots and poles must have equal length");
  Equioscillator eq;
  eq.n = static_cast<int>(roots.size());
  eq.pair = std::move(pair);
  eq.roots = std::move(roots);
  eq.poles = std::move(poles);
  eq.ext = locate_extrema(*eq.pair, eq.roots, eq.poles);
  return eq;
}

std::vector<double> insertion_parameters(const Domain& S, double lambda, int count) {
  const EllipticModulus<double> m(lambda);
  return spread_points(mapped_parameters(S, m), count);
}

Equioscillator initialize(std::shared_ptr<const SeparatedPair> pair, int n) {
  if (n < 0) throw DomainError("initialize: n must be non-negative");
  const EllipticModulus<double> m(pair->lambda);
  const auto sa = spread_points(mapped_parameters(pair->Xn, m), n + 1);
  const auto sb = spread_points(mapped_parameters(pair->Yn.negated(), m), n + 1);
  std::vector<double> roots(n), poles(n);
  for (int i = 0; i < n; ++i) {
    roots[i] = xi((sa[i] + sa[i + 1]) / 2, m);
    poles[i] = -xi((sb[i] + sb[i + 1]) / 2, m);
  }
  return make_equioscillator(std::move(pair), std::move(roots), std::move(poles));
}

Residuals residual_logs(const Equioscillator& eq) {
  Residuals r;
  auto check = [&](double z) {
    for (double w : eq.roots)
      if (z == w) throw DegenerateGeometryError("extremum coincides with a root");
    for (double w : eq.poles)
      if (z == w) throw DegenerateGeometryError("extremum coincides with a pole");
  };
  for (double x : eq.ext.x) {
    check(x);
    r.c.push_back(log_abs_ratio(x, eq.roots, eq.poles));
  }
  for (double y : eq.ext.y) {
    check(y);
    r.d.push_back(log_abs_ratio(y, eq.poles, eq.roots));
  }
  return r;
}

Correction correction_step(const Equioscillator& eq) {
  const std::size_t n = eq.roots.size();
  const std::span<const double> xt = eq.roots, yt = eq.poles, x = eq.ext.x, y = eq.ext.y;
  const Residuals res = residual_logs(eq);
  const auto& c = res.c;
  const auto& d = res.d;

  std::vector<SignedLog> p(n + 1), q(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    ScaledProduct pp;
    accumulate(pp, x[i], yt, false, false);
    accumulate(pp, x[i], xt, false, false);
    accumulate(pp, x[i], y, false, true);
    accumulate(pp, x[i], x, false, true, i);
    p[i] = to_signed_log(pp);

    ScaledProduct qq;
    accumulate(qq, y[i], xt, true, false);
    accumulate(qq, y[i], yt, true, false);
    accumulate(qq, y[i], x, true, true);
    accumulate(qq, y[i], y, true, true, i);
    q[i] = to_signed_log(qq);
  }

  Correction out;
  std::vector<SignedLog> terms;
  terms.reserve(2 * n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    terms.push_back(p[i] * SignedLog::of(c[i]));
    terms.push_back(q[i] * SignedLog::of(d[i]));
  }
  const SignedLog num = signed_log_sum(terms);
  terms.clear();
  for (std::size_t i = 0; i <= n; ++i) {
    terms.push_back(p[i]);
    terms.push_back(q[i]);
  }
  const SignedLog den = signed_log_sum(terms);
  const double a = (num / den).value();
  out.a = a;

  std::vector<SignedLog> wc(n + 1), wd(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    wc[i] = SignedLog::of(a - c[i]) * p[i];
    wd[i] = SignedLog::of(a - d[i]) * q[i];
  }
  terms.clear();
  for (std::size_t i = 0; i <= n; ++i) {
    terms.push_back(SignedLog::of(x[i]) * wc[i]);
    terms.push_back(SignedLog::of(y[i]) * wd[i]);
  }
  out.b = signed_log_sum(terms).value();

  auto delta = [&](double z, bool root, std::size_t i) {
    ScaledProduct pre;
    if (root) {
      accumulate(pre, z, y, true, false);
      accumulate(pre, z, x, true, false);
      accumulate(pre, z, yt, true, true);
      accumulate(pre, z, xt, true, true, i);
    } else {
      accumulate(pre, z, x, false, false);
      accumulate(pre, z, y, false, false);
      accumulate(pre, z, xt, false, true);
      accumulate(pre, z, yt, false, true, i);
    }
    terms.clear();
    for (std::size_t j = 0; j <= n; ++j) {
      if (z == x[j] || z == y[j]) throw DegenerateGeometryError("node coincides with an extremum");
      terms.push_back(wc[j] / SignedLog::of(z - x[j]));
      terms.push_back(wd[j] / SignedLog::of(z - y[j]));
    }
    return (to_signed_log(pre) * signed_log_sum(terms)).value();
  };
  out.d_roots.resize(n);
  out.d_poles.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.d_roots[i] = delta(xt[i], true, i);
    out.d_poles[i] = delta(yt[i], false, i);
  }
  return out;
}

LineSearchResult line_search_st(Equioscillator& eq, const Correction& corr, double golden_tol) {
  const std::size_t n = eq.roots.size();
  const auto& x = eq.ext.x;
  const auto& y = eq.ext.y;
  std::vector<double> s(n), ds(n), t(n), dt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double l = eq.roots[i] - x[i], r = x[i + 1] - eq.roots[i];
    s[i] = std::log(l / r);
    ds[i] = corr.d_roots[i] * (x[i + 1] - x[i]) / (r * l);
    const double u = y[i] - eq.poles[i], w = eq.poles[i] - y[i + 1];
    t[i] = std::log(w / u);
    dt[i] = corr.d_poles[i] * (y[i] - y[i + 1]) / (u * w);
  }

  struct Trial {
    double alpha;
    double spread;
    std::vector<double> roots, poles;
    ExtremaState ext;
  };
  Trial best{0, eq.ext.spread, {}, {}, {}};
  auto evaluate = [&](double alpha) {
    Trial tr{alpha, kInf, std::vector<double>(n), std::vector<double>(n), {}};
    for (std::size_t i = 0; i < n; ++i) {
      tr.roots[i] = logistic_point(x[i], x[i + 1], s[i] + alpha * ds[i]);
      tr.poles[i] = logistic_point(y[i + 1], y[i], t[i] + alpha * dt[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      // A node rounded onto a bracketing extremum makes a slice degenerate.
      if (!(tr.roots[i] > x[i] && tr.roots[i] < x[i + 1])) return kInf;
      if (!(tr.poles[i] < y[i] && tr.poles[i] > y[i + 1])) return kInf;
    }
    try {
      tr.ext = locate_extrema(*eq.pair, tr.roots, tr.poles);
      tr.spread = tr.ext.spread;
    } catch (const EmptySliceError&) {
      return kInf;
    }
    const double sp = tr.spread;
    if (sp < best.spread) best = std::move(tr);
    return sp;
  };

  evaluate(1.0);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double lo = 0, hi = 1;
  double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
  double f1 = evaluate(m1), f2 = evaluate(m2);
  while (hi - lo > golden_tol) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - phi * (hi - lo);
      f1 = evaluate(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + phi * (hi - lo);
      f2 = evaluate(m2);
    }
  }

  LineSearchResult out{best.alpha, best.spread, false};
  if (best.spread < eq.ext.spread) {
    eq.roots = std::move(best.roots);
    eq.poles = std::move(best.poles);
    eq.ext = std::move(best.ext);
    out.improved = true;
  }
  return out;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Trivial: return "trivial";
    case SolveStatus::Covering: return "covering";
    case SolveStatus::Stagnated: return "stagnated";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Degenerate: return "degenerate";
  }
  return "unknown";
}

bool certify(const Equioscillator& eq, double tol) {
  if (eq.covering) return true;
  if (eq.n == 0) return true;
  ExtremaState st;
  try {
    st = locate_extrema(*eq.pair, eq.roots, eq.poles);
  } catch (const EmptySliceError&) {
    return false;
  }
  const double scale = tol * std::max(1.0, std::abs(st.a));
  for (std::size_t i = 0; i < st.c.size(); ++i) {
    if (!(std::abs(st.b + st.c[i] - st.a) <= scale)) return false;
    if (!(std::abs(st.d[i] - st.b - st.a) <= scale)) return false;
  }
  for (int i = 0; i < eq.n; ++i) {
    if (!(st.x[i] < eq.roots[i] && eq.roots[i] < st.x[i + 1])) return false;
    if (!(st.y[i] > eq.poles[i] && eq.poles[i] > st.y[i + 1])) return false;
  }
  return true;
}

SolveReport refine(Equioscillator& eq, const SolveOptions& opts) {
  const int n = eq.n;
  SolveReport rep;
  if (eq.covering) {
    rep.log_Zn = rep.log_Zn_upper = rep.log_Zn_lower = -kInf;
    rep.certified = true;
    rep.status = SolveStatus::Covering;
    return rep;
  }
  rep.spread_history.push_back(eq.ext.spread);
  if (n == 0) {
    rep.status = SolveStatus::Trivial;
  } else {
    bool finished = false;
    for (int it = 0; it < opts.max_iter; ++it) {
      if (eq.ext.spread == 0) {
        finished = true;
        break;
      }
      Correction corr;
      try {
        corr = correction_step(eq);
      } catch (const DegenerateGeometryError& e) {
        rep.status = SolveStatus::Degenerate;
        rep.message = e.what();
        finished = true;
        break;
      }
      const auto ls = line_search_st(eq, corr, opts.golden_tol);
      if (!ls.improved) {
        rep.status = SolveStatus::Stagnated;
        finished = true;
        break;
      }
      ++rep.iterations;
      rep.alpha_history.push_back(ls.alpha);
      rep.spread_history.push_back(ls.spread);
    }
    if (!finished) rep.status = SolveStatus::MaxIter;
  }

  const auto& st = eq.ext;
  const auto [c0, c1] = std::minmax_element(st.c.begin(), st.c.end());
  const auto [d0, d1] = std::minmax_element(st.d.begin(), st.d.end());
  rep.log_Zn = 2 * st.a;
  rep.log_Zn_upper = *c1 + *d1;
  rep.log_Zn_lower = *c0 + *d0;
  rep.final_deviation = st.spread;
  const double scale = std::max(1.0, std::abs(st.a));
  const bool acceptable = st.spread <= opts.accept_tol * scale;
  rep.certified = st.spread <= opts.certify_tol * scale && certify(eq, opts.certify_tol);
  if (n > 0 && acceptable) rep.status = SolveStatus::Converged;
  if (!acceptable && opts.throw_on_failure) {
    const std::string msg = "solve did not reach equioscillation (status " + to_string(rep.status) +
                            ", spread " + std::to_string(st.spread) + ")";
    if (rep.status == SolveStatus::MaxIter) throw MaxIterError(msg);
    if (rep.status == SolveStatus::Degenerate) throw DegenerateGeometryError(msg);
    throw StagnationError(msg);
  }
  return rep;
}

std::pair<Equioscillator, SolveReport> solve(const SeparatedPair& pair_in, int n, const SolveOptions& opts) {
  if (n < 0) throw DomainError("solve: n must be non-negative");
  auto pair = std::make_shared<const SeparatedPair>(pair_in);
  SolveReport rep;

  const auto card_x = pair->Xn.cardinality();
  const auto card_y = pair->Yn.cardinality();
  const bool cover_x = card_x && static_cast<int>(*card_x) <= n;
  const bool cover_y = card_y && static_cast<int>(*card_y) <= n;
  if (n > 0 && (cover_x || cover_y)) {
    Equioscillator eq;
    eq.n = n;
    eq.pair = pair;
    eq.covering = true;
    eq.roots = padded_cover(cover_x ? pair->Xn.point_values() : std::vector<double>{pair->Xn.min()}, n);
    std::vector<double> ys_desc = cover_y ? pair->Yn.point_values() : std::vector<double>{pair->Yn.min()};
    std::reverse(ys_desc.begin(), ys_desc.end());
    eq.poles = padded_cover(ys_desc, n);
    rep.log_Zn = rep.log_Zn_upper = rep.log_Zn_lower = -kInf;
    rep.certified = true;
    rep.status = SolveStatus::Covering;
    rep.message = cover_x ? "roots cover X" : "poles cover Y";
    return {std::move(eq), rep};
  }

  Equioscillator eq = n == 0 ? make_equioscillator(pair, {}, {}) : initialize(pair, n);
  rep = refine(eq, opts);
  return {std::move(eq), rep};
}

}  // namespace zolo
