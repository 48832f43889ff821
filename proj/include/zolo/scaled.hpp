#pragma once

// Products and signed sums that would under- or overflow as plain doubles.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace zolo {

/// A product kept as mantissa * 2^exponent, renormalized after every factor.
struct ScaledProduct {
  double mantissa = 1;
  long exponent = 0;

  void mul(double f) { renormalize(mantissa * f); }
  void div(double f) { renormalize(mantissa / f); }
  void mul(const ScaledProduct& o) {
    mul(o.mantissa);
    exponent += o.exponent;
  }
  void div(const ScaledProduct& o) {
    div(o.mantissa);
    exponent -= o.exponent;
  }

  void renormalize(double m) {
    if (m == 0 || !std::isfinite(m)) {
      mantissa = m;
      return;
    }
    int k = 0;
    mantissa = std::frexp(m, &k);
    exponent += k;
  }

  double log_abs() const {
    if (mantissa == 0) return -std::numeric_limits<double>::infinity();
    if (!std::isfinite(mantissa)) return std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::numbers::ln2;
  }
  int sign() const { return mantissa < 0 ? -1 : 1; }
  double value() const {
    if (exponent > std::numeric_limits<int>::max() / 2) return mantissa * HUGE_VAL;
    if (exponent < std::numeric_limits<int>::min() / 2) return mantissa * 0.0;
    return std::ldexp(mantissa, static_cast<int>(exponent));
  }
};

/// sum_j log|z - zeros_j| - sum_j log|z - poles_j|, evaluated as one product.
inline double log_abs_ratio(double z, std::span<const double> zeros, std::span<const double> poles) {
  ScaledProduct p;
  const std::size_t common = std::min(zeros.size(), poles.size());
  for (std::size_t j = 0; j < common; ++j) p.mul((z - zeros[j]) / (z - poles[j]));
  for (std::size_t j = common; j < zeros.size(); ++j) p.mul(z - zeros[j]);
  for (std::size_t j = common; j < poles.size(); ++j) p.div(z - poles[j]);
  return p.log_abs();
}

/// A real number stored as sign * exp(log).
struct SignedLog {
  double log = -std::numeric_limits<double>::infinity();
  int sign = 1;

  static SignedLog of(double x) { return {std::log(std::abs(x)), x < 0 ? -1 : 1}; }
  double value() const { return sign * std::exp(log); }
  SignedLog operator*(const SignedLog& o) const { return {log + o.log, sign * o.sign}; }
  SignedLog operator/(const SignedLog& o) const { return {log - o.log, sign * o.sign}; }
};

/// Sum of signed-log terms, scaled by the largest magnitude before adding.
inline SignedLog signed_log_sum(std::span<const SignedLog> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) top = std::max(top, t.log);
  if (!std::isfinite(top)) return {};
  double s = 0;
  for (const auto& t : terms) s += t.sign * std::exp(t.log - top);
  if (s == 0) return {};
  return {top + std::log(std::abs(s)), s < 0 ? -1 : 1};
}

/// Monotone map from doubles to integers, used to bisect in floating-point
/// ulps so that brackets of any scale close in at most 64 halvings.
inline std::int64_t ordered_key(double x) {
  const auto bits = std::bit_cast<std::int64_t>(x);
  return bits >= 0 ? bits : std::numeric_limits<std::int64_t>::min() - bits;
}

inline double from_ordered_key(std::int64_t k) {
  const std::int64_t bits = k >= 0 ? k : std::numeric_limits<std::int64_t>::min() - k;
  return std::bit_cast<double>(bits);
}

/// Midpoint of [a, b] in ulp space.
inline double ulp_midpoint(double a, double b) {
  const std::int64_t ka = ordered_key(a), kb = ordered_key(b);
  return from_ordered_key((ka >> 1) + (kb >> 1));
}

}  // namespace zolo
