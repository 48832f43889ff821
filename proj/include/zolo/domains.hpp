#pragma once

// Real domains X and Y, their validation as a separated pair, and the Mobius
// normalization onto [lambda, 1] and [-1, -lambda].

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "zolo/errors.hpp"

namespace zolo {

struct Interval {
  double lo;
  double hi;
};

/// A finite union of disjoint closed intervals, or a finite point set.
/// Point sets are stored as degenerate intervals [p, p] so that one code
/// path serves both kinds.
class Domain {
 public:
  enum class Kind { IntervalUnion, PointSet };

  /// Intervals may be given in any order; they must satisfy lo <= hi and be
  /// pairwise disjoint.
  static Domain intervals(std::vector<Interval> pieces);
  /// Points must be strictly increasing or strictly decreasing.
  static Domain points(std::vector<double> values);

  Kind kind() const { return kind_; }
  /// Ascending, pairwise disjoint pieces.
  const std::vector<Interval>& pieces() const { return pieces_; }
  /// Ascending point values; requires every piece to be degenerate.
  std::vector<double> point_values() const;

  double min() const { return pieces_.front().lo; }
  double max() const { return pieces_.back().hi; }
  /// Number of elements when finite (every piece degenerate), else empty.
  std::optional<std::size_t> cardinality() const;
  bool contains(double z) const;
  /// Pieces clipped to [lo, hi]; the bounds may be infinite.
  std::vector<Interval> slice(double lo, double hi) const;
  /// Image under z -> -z.
  Domain negated() const;

 private:
  Domain(Kind kind, std::vector<Interval> pieces) : kind_(kind), pieces_(std::move(pieces)) {}
  Kind kind_;
  std::vector<Interval> pieces_;
};

/// z -> (a z + b) / (c z + d).
class MobiusMap {
 public:
  double a = 1, b = 0, c = 0, d = 1;

  static MobiusMap identity() { return {}; }
  static MobiusMap from_coefficients(double a, double b, double c, double d);

  /// Throws PoleError when the denominator vanishes to working precision.
  double operator()(double z) const;
  MobiusMap inverse() const { return from_coefficients(d, -b, -c, a); }
  /// (this o inner)(z) = this(inner(z)).
  MobiusMap compose(const MobiusMap& inner) const;
  double determinant() const { return a * d - b * c; }
  /// Image of a domain under a map that is increasing on its hull.
  Domain apply_increasing(const Domain& dom) const;
};

double mobius_apply(const MobiusMap& map, double z);

/// Cross-ratio parameter of [xmin, xmax] and [ymin, ymax]: the lambda for
/// which some Mobius map sends the pair onto [lambda, 1] and [-1, -lambda].
double cross_ratio_lambda(double xmin, double xmax, double ymin, double ymax);

/// The map sending -1, -lambda, lambda, 1 to ymin, ymax, xmin, xmax, given
/// lambda = cross_ratio_lambda(xmin, xmax, ymin, ymax).
MobiusMap mobius_from_normalized(double lambda, double xmin, double xmax, double ymax);

/// A validated pair with max X > min X > max Y > min Y.
struct SeparatedPair {
  Domain X;
  Domain Y;
  double lambda;
  MobiusMap forward_map;  ///< original coordinates -> normalized
  MobiusMap inverse_map;  ///< normalized -> original coordinates
  Domain Xn;              ///< X in normalized coordinates, hull [lambda, 1]
  Domain Yn;              ///< Y in normalized coordinates, hull [-1, -lambda]
};

SeparatedPair validate_pair(const Domain& X, const Domain& Y);

struct SliceMax {
  double argmax;
  double value;
};

/// Maximizes F(z) = sum log|z - zeros_j| - sum log|z - poles_j| over
/// domain ∩ [lo, hi]. The interval [lo, hi] must not contain any of the
/// zeros in its interior, so that F is unimodal there. Throws
/// EmptySliceError when the intersection is empty.
SliceMax max_log_ratio_on(const Domain& domain, double lo, double hi,
                          std::span<const double> zeros, std::span<const double> poles);

enum class Side { X, Y };

/// Maximizer of log|h| on the X side, or of -log|h| on the Y side, where
/// h(z) = exp(b) prod (z - roots_j) / (z - poles_j).
SliceMax max_abs_logh_on(const Domain& domain, double lo, double hi, std::span<const double> roots,
                         std::span<const double> poles, double b, Side side);

/// d/dz of sum log|z - zeros_j| - sum log|z - poles_j|.
double log_ratio_derivative(double z, std::span<const double> zeros, std::span<const double> poles);

}  // namespace zolo
