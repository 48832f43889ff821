#include "zolo/domains.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "zolo/scaled.hpp"

namespace zolo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

/// Rebuilds a domain from ascending pieces, merging any that rounding made
/// touch or overlap.
Domain rebuild(Domain::Kind kind, std::vector<Interval> pieces) {
  std::vector<Interval> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && !(merged.back().hi < p.lo)) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
      continue;
    }
    merged.push_back(p);
  }
  if (kind == Domain::Kind::PointSet) {
    std::vector<double> values;
    for (const auto& p : merged) values.push_back(p.lo);
    return Domain::points(std::move(values));
  }
  return Domain::intervals(std::move(merged));
}

Domain snap_hull(const Domain& d, double lo, double hi) {
  auto pieces = d.pieces();
  for (auto& p : pieces) {
    p.lo = std::clamp(p.lo, lo, hi);
    p.hi = std::clamp(p.hi, lo, hi);
  }
  const bool first_point = d.pieces().front().lo == d.pieces().front().hi;
  const bool last_point = d.pieces().back().lo == d.pieces().back().hi;
  pieces.front().lo = lo;
  if (first_point) pieces.front().hi = lo;
  pieces.back().hi = hi;
  if (last_point) pieces.back().lo = hi;
  return rebuild(d.kind(), std::move(pieces));
}

}  // namespace

Domain Domain::intervals(std::vector<Interval> pieces) {
  if (pieces.empty()) throw ValidationError("domain must be nonempty");
  for (const auto& p : pieces) {
    require_finite(p.lo, "interval endpoint");
    require_finite(p.hi, "interval endpoint");
    if (p.lo > p.hi) throw ValidationError("interval with lo > hi");
  }
  std::sort(pieces.begin(), pieces.end(), [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (!(pieces[i - 1].hi < pieces[i].lo)) throw ValidationError("intervals must be pairwise disjoint");
  }
  return Domain(Kind::IntervalUnion, std::move(pieces));
}

Domain Domain::points(std::vector<double> values) {
  if (values.empty()) throw ValidationError("domain must be nonempty");
  for (double v : values) require_finite(v, "point");
  if (values.size() > 1 && values.front() > values.back()) std::reverse(values.begin(), values.end());
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) throw ValidationError("points must be strictly monotone");
  }
  std::vector<Interval> pieces;
  pieces.reserve(values.size());
  for (double v : values) pieces.push_back({v, v});
  return Domain(Kind::PointSet, std::move(pieces));
}

std::vector<double> Domain::point_values() const {
  std::vector<double> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) {
    if (p.lo != p.hi) throw ValidationError("domain is not a finite point set");
    out.push_back(p.lo);
  }
  return out;
}

std::optional<std::size_t> Domain::cardinality() const {
  for (const auto& p : pieces_) {
    if (p.lo != p.hi) return std::nullopt;
  }
  return pieces_.size();
}

bool Domain::contains(double z) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), z,
                             [](double v, const Interval& p) { return v < p.lo; });
  if (it == pieces_.begin()) return false;
  --it;
  return z <= it->hi;
}

std::vector<Interval> Domain::slice(double lo, double hi) const {
  std::vector<Interval> out;
  if (!(lo <= hi)) return out;
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), lo,
                             [](const Interval& p, double v) { return p.hi < v; });
  for (; it != pieces_.end() && it->lo <= hi; ++it) {
    out.push_back({std::max(it->lo, lo), std::min(it->hi, hi)});
  }
  return out;
}

Domain Domain::negated() const {
  std::vector<Interval> pieces;
  pieces.reserve(pieces_.size());
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) pieces.push_back({-it->hi, -it->lo});
  return Domain(kind_, std::move(pieces));
}

MobiusMap MobiusMap::from_coefficients(double a, double b, double c, double d) {
  MobiusMap m;
  m.a = a;
  m.b = b;
  m.c = c;
  m.d = d;
  if (!(m.determinant() != 0) || !std::isfinite(m.determinant())) {
    throw DomainError("Mobius map must have nonzero finite determinant");
  }
  return m;
}

double MobiusMap::operator()(double z) const {
  const double den = c * z + d;
  if (std::abs(den) <= 4 * kEps * (std::abs(c * z) + std::abs(d))) {
    throw PoleError("Mobius map evaluated at its pole");
  }
  return (a * z + b) / den;
}

MobiusMap MobiusMap::compose(const MobiusMap& in) const {
  return from_coefficients(a * in.a + b * in.c, a * in.b + b * in.d, c * in.a + d * in.c,
                           c * in.b + d * in.d);
}

Domain MobiusMap::apply_increasing(const Domain& dom) const {
  std::vector<Interval> pieces;
  pieces.reserve(dom.pieces().size());
  for (const auto& p : dom.pieces()) {
    const double lo = (*this)(p.lo);
    const double hi = p.hi == p.lo ? lo : (*this)(p.hi);
    if (!(lo <= hi)) throw DomainError("Mobius map is not increasing on the domain");
    pieces.push_back({lo, hi});
  }
  return rebuild(dom.kind(), std::move(pieces));
}

double mobius_apply(const MobiusMap& map, double z) { return map(z); }

double cross_ratio_lambda(double xmin, double xmax, double ymin, double ymax) {
  if (!(xmax > xmin && xmin > ymax && ymax > ymin)) {
    throw SeparationError("cross_ratio_lambda requires xmax > xmin > ymax > ymin");
  }
  // With g the gap and a, b the interval lengths the printed expression
  // (sqrt(ab) - sqrt((g+b)(a+g)))^2 / (g(a+b+g)) equals g(a+b+g)/(A+B)^2,
  // a sum of positive terms.
  const double g = xmin - ymax;
  const double a = xmax - xmin;
  const double b = ymax - ymin;
  const double A = std::sqrt(a) * std::sqrt(b);
  const double B = std::sqrt(g + b) * std::sqrt(a + g);
  const double s = A + B;
  double lambda = (g / s) * ((a + b + g) / s);
  return std::min(lambda, 1 - kEps / 2);
}

MobiusMap mobius_from_normalized(double lambda, double xmin, double xmax, double ymax) {
  const double P = xmin * xmax, Q = ymax * xmax, R = ymax * xmin;
  const double nz = (1 - lambda) * P - (1 + lambda) * Q + 2 * lambda * R;
  const double nc = lambda * ((1 - lambda) * P + (1 + lambda) * Q - 2 * R);
  const double dz = (1 - lambda) * ymax - (1 + lambda) * xmin + 2 * lambda * xmax;
  const double dc = lambda * ((1 - lambda) * ymax + (1 + lambda) * xmin - 2 * xmax);
  return MobiusMap::from_coefficients(-nz, -nc, dz, dc);
}

SeparatedPair validate_pair(const Domain& X, const Domain& Y) {
  if (X.min() == X.max()) throw DegenerateError("X is a single point");
  if (Y.min() == Y.max()) throw DegenerateError("Y is a single point");
  if (!(X.min() > Y.max())) throw SeparationError("min X must exceed max Y");

  const double xmin = X.min(), xmax = X.max(), ymin = Y.min(), ymax = Y.max();
  // Pairs already in normalized position keep their lambda bit for bit.
  const bool already_normal = xmax == 1 && ymin == -1 && ymax == -xmin && xmin < 1;
  const double lambda = already_normal ? xmin : cross_ratio_lambda(xmin, xmax, ymin, ymax);
  SeparatedPair pair{X, Y, lambda, MobiusMap::identity(), MobiusMap::identity(), X, Y};

  if (!already_normal) {
    pair.inverse_map = mobius_from_normalized(lambda, xmin, xmax, ymax);
    pair.forward_map = pair.inverse_map.inverse();
    pair.Xn = pair.forward_map.apply_increasing(X);
    pair.Yn = pair.forward_map.apply_increasing(Y);
  }
  // The hull endpoints are exact by construction; remove rounding.
  pair.Xn = snap_hull(pair.Xn, lambda, 1.0);
  pair.Yn = snap_hull(pair.Yn, -1.0, -lambda);
  return pair;
}

double log_ratio_derivative(double z, std::span<const double> zeros, std::span<const double> poles) {
  double s = 0;
  for (double w : zeros) s += 1 / (z - w);
  for (double w : poles) s -= 1 / (z - w);
  return s;
}

namespace {

double log_ratio_second(double z, std::span<const double> zeros, std::span<const double> poles) {
  double s = 0;
  for (double w : zeros) {
    const double t = 1 / (z - w);
    s -= t * t;
  }
  for (double w : poles) {
    const double t = 1 / (z - w);
    s += t * t;
  }
  return s;
}

bool is_zero_of(double z, std::span<const double> zeros) {
  return std::find(zeros.begin(), zeros.end(), z) != zeros.end();
}

/// Interior stationary point of F on (p, q) given F'(p) > 0 > F'(q).
double stationary_point(double p, double q, std::span<const double> zeros,
                        std::span<const double> poles) {
  double lo = p, hi = q;
  double z = ulp_midpoint(lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double d1 = log_ratio_derivative(z, zeros, poles);
    if (d1 == 0) return z;
    if (d1 > 0) lo = z; else hi = z;
    const double d2 = log_ratio_second(z, zeros, poles);
    double next = d2 < 0 ? z - d1 / d2 : ulp_midpoint(lo, hi);
    if (!(next > lo && next < hi)) next = ulp_midpoint(lo, hi);
    if (next == lo || next == hi || std::abs(next - z) <= 2 * kEps * std::abs(z)) return next;
    z = next;
  }
  return z;
}

#ifndef NDEBUG
void check_unimodal(double p, double q, std::span<const double> zeros, std::span<const double> poles) {
  constexpr int kSamples = 32;
  double prev = -kInf;
  bool descending = false;
  for (int i = 0; i <= kSamples; ++i) {
    const double z = p + (q - p) * i / kSamples;
    const double f = log_abs_ratio(z, zeros, poles);
    const double slack = 1e-9 * (1 + std::abs(f));
    if (f < prev - slack) descending = true;
    assert(!(descending && f > prev + slack) && "log|h| is not unimodal between consecutive roots");
    prev = f;
  }
}
#endif

}  // namespace

SliceMax max_log_ratio_on(const Domain& domain, double lo, double hi, std::span<const double> zeros,
                          std::span<const double> poles) {
  const auto pieces = domain.slice(lo, hi);
  if (pieces.empty()) throw EmptySliceError("maximization slice is empty");
  SliceMax best{pieces.front().lo, -kInf};
  bool have = false;
  for (const auto& piece : pieces) {
    double cand;
    if (piece.lo == piece.hi) {
      cand = piece.lo;
    } else {
#ifndef NDEBUG
      check_unimodal(piece.lo, piece.hi, zeros, poles);
#endif
      const double dp = is_zero_of(piece.lo, zeros) ? kInf : log_ratio_derivative(piece.lo, zeros, poles);
      const double dq = is_zero_of(piece.hi, zeros) ? -kInf : log_ratio_derivative(piece.hi, zeros, poles);
      if (dp <= 0) {
        cand = piece.lo;
      } else if (dq >= 0) {
        cand = piece.hi;
      } else {
        cand = stationary_point(piece.lo, piece.hi, zeros, poles);
      }
    }
    const double f = log_abs_ratio(cand, zeros, poles);
    if (!have || f > best.value) {
      best = {cand, f};
      have = true;
    }
  }
  return best;
}

SliceMax max_abs_logh_on(const Domain& domain, double lo, double hi, std::span<const double> roots,
                         std::span<const double> poles, double b, Side side) {
  if (side == Side::X) {
    auto m = max_log_ratio_on(domain, lo, hi, roots, poles);
    return {m.argmax, m.value + b};
  }
  auto m = max_log_ratio_on(domain, lo, hi, poles, roots);
  return {m.argmax, m.value - b};
}

}  // namespace zolo
