#pragma once

// Jacobi elliptic primitives parameterized by the complementary modulus
// lambda = sqrt(1 - k^2). Everything here stays accurate when lambda is far
// below sqrt(epsilon), where forming 1 - lambda^2 would round to one.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zolo/errors.hpp"

namespace zolo {

template <typename Scalar>
struct QuarterPeriods {
  Scalar K;       ///< K(lambda), modulus lambda
  Scalar Kprime;  ///< K(sqrt(1 - lambda^2)), computed from lambda directly
};

/// dn together with its complement 1 - dn, both to high relative accuracy.
template <typename Scalar>
struct DnValue {
  Scalar dn;
  Scalar complement;
};

/// Value of the node map xi(v) with its complement and logarithm.
template <typename Scalar>
struct XiValue {
  Scalar value;
  Scalar complement;  ///< 1 - xi(v)
  Scalar log_value;   ///< log xi(v)
};

template <typename Scalar>
struct RhoModuli {
  Scalar rho;
  Scalar rho_tilde;
  Scalar log_rho;
  Scalar log_rho_tilde;
};

namespace detail {

template <typename Scalar>
constexpr Scalar eps() {
  return std::numeric_limits<Scalar>::epsilon();
}

/// Complementary-modulus threshold below which the ascending Landen
/// recursion stops and the hyperbolic base case takes over.
template <typename Scalar>
constexpr Scalar landen_threshold() {
  return Scalar(1e-8);
}

inline void check_lambda(double lambda, const char* who) {
  if (!(lambda > 0 && lambda < 1)) {
    throw DomainError(std::string(who) + ": lambda must lie in (0,1), got " +
                      std::to_string(lambda));
  }
}

template <typename Scalar>
Scalar agm(Scalar a, Scalar b, int* iterations = nullptr) {
  using std::abs;
  using std::sqrt;
  int it = 0;
  while (abs(a - b) > 2 * eps<Scalar>() * a && it < 64) {
    const Scalar mean = (a + b) / 2;
    b = sqrt(a * b);
    a = mean;
    ++it;
  }
  if (iterations) *iterations = it;
  return (a + b) / 2;
}

/// K(k) given only the complementary modulus kc = sqrt(1 - k^2).
template <typename Scalar>
Scalar complete_K_from_complement(Scalar kc, int* iterations = nullptr) {
  using std::log;
  if (kc < landen_threshold<Scalar>()) {
    // K = log(4/kc) + kc^2/4 (log(4/kc) - 1) + O(kc^4 log kc)
    if (iterations) *iterations = 0;
    const Scalar L = log(Scalar(4) / kc);
    return L + kc * kc / 4 * (L - 1);
  }
  return std::numbers::pi_v<Scalar> / (2 * agm(Scalar(1), kc, iterations));
}

/// sqrt(1 - x^2) without cancellation.
template <typename Scalar>
Scalar complement_of(Scalar x) {
  using std::sqrt;
  return sqrt((1 - x) * (1 + x));
}

/// dn(z, k) for k = sqrt(1 - lambda^2) and 0 <= z <= K(k)/2, by ascending
/// Landen transformations down to the k -> 1 expansion
///   dn(w,k) = sech w (1 + k'^2/4 (sinh^2 w + w tanh w)) + O(k'^4).
/// Each level uses dn(z) = (D + l/D)/(1 + l), D = dn(z/(1+l), k_next), which
/// is a sum of positive terms, and the complement recursion
///   1 - dn(z) = (1 - D)(D - l) / ((1 + l) D).
template <typename Scalar>
DnValue<Scalar> dn_ascending(Scalar z, Scalar lambda, int extra_levels = 0) {
  using std::cosh;
  using std::sinh;
  using std::sqrt;
  using std::tanh;
  if (z == 0) return {Scalar(1), Scalar(0)};

  std::array<Scalar, 96> levels{};
  int count = 0;
  Scalar lam = lambda;
  Scalar k = complement_of(lambda);
  Scalar w = z;
  int extra = 0;
  while (count < static_cast<int>(levels.size())) {
    Scalar next_lam;
    if (k >= Scalar(0.5)) {
      const Scalar r = lam / (1 + k);
      next_lam = r * r;
    } else {
      next_lam = (1 - k) / (1 + k);
    }
    k = 2 * sqrt(k) / (1 + k);
    lam = next_lam;
    w /= (1 + lam);
    levels[count++] = lam;
    if (lam < landen_threshold<Scalar>()) {
      if (extra >= extra_levels) break;
      ++extra;
    }
  }

  const Scalar q = lam / 2;
  const Scalar sh = sinh(w);
  const Scalar ch = cosh(w);
  const Scalar correction = (q * sh) * (q * sh) + q * q * w * tanh(w);
  const Scalar half = sinh(w / 2);
  Scalar D = (1 + correction) / ch;
  Scalar E = (2 * half * half - correction) / ch;

  for (int j = count - 1; j >= 0; --j) {
    const Scalar l = levels[j];
    const Scalar nextD = (D + l / D) / (1 + l);
    E = E * (D - l) / ((1 + l) * D);
    D = nextD;
  }
  return {D, E};
}

/// 1 - lambda/dn for the reflected value dn(K - t) = lambda / dn(t).
template <typename Scalar>
Scalar reflected_complement(const DnValue<Scalar>& d, Scalar lambda) {
  if (d.complement < Scalar(0.5)) return ((1 - lambda) - d.complement) / d.dn;
  return (d.dn - lambda) / d.dn;
}

}  // namespace detail

/// Quarter periods K(lambda) and K'(lambda) = K(sqrt(1 - lambda^2)) via the
/// arithmetic-geometric mean. K' is computed from lambda directly.
template <typename Scalar>
QuarterPeriods<Scalar> complete_K(Scalar lambda) {
  detail::check_lambda(static_cast<double>(lambda), "complete_K");
  const Scalar k = detail::complement_of(lambda);
  return {detail::complete_K_from_complement(k),
          detail::complete_K_from_complement(lambda)};
}

/// Complementary modulus lambda with the quantities the node map reuses.
template <typename Scalar>
class EllipticModulus {
 public:
  explicit EllipticModulus(Scalar lambda) : lambda_(lambda) {
    using std::log;
    detail::check_lambda(static_cast<double>(lambda), "EllipticModulus");
    log_lambda_ = log(lambda);
    periods_ = complete_K(lambda);
  }

  Scalar lambda() const { return lambda_; }
  Scalar log_lambda() const { return log_lambda_; }
  /// k = sqrt(1 - lambda^2); rounds to one for small lambda and is only
  /// reported, never used in the evaluation paths.
  Scalar k() const { return detail::complement_of(lambda_); }
  Scalar K() const { return periods_.K; }
  Scalar Kprime() const { return periods_.Kprime; }

 private:
  Scalar lambda_;
  Scalar log_lambda_;
  QuarterPeriods<Scalar> periods_;
};

/// dn(u, k) with k = sqrt(1 - lambda^2) for u in [0, K(k)].
template <typename Scalar>
DnValue<Scalar> jacobi_dn_value(Scalar u, const EllipticModulus<Scalar>& m) {
  const Scalar K = m.Kprime();
  const Scalar tol = 8 * detail::eps<Scalar>() * K;
  if (!(u >= -tol && u <= K + tol)) {
    throw DomainError("jacobi_dn: argument outside [0, K]");
  }
  if (u < 0) u = 0;
  if (u > K) u = K;
  if (2 * u <= K) return detail::dn_ascending(u, m.lambda());
  // dn(K - t) = lambda / dn(t)
  const auto inner = detail::dn_ascending(K - u, m.lambda());
  const Scalar lam = m.lambda();
  return {lam / inner.dn, detail::reflected_complement(inner, lam)};
}

template <typename Scalar>
Scalar jacobi_dn(Scalar u, Scalar lambda) {
  return jacobi_dn_value(u, EllipticModulus<Scalar>(lambda)).dn;
}

/// xi(v) = dn((1 - v) K', k), the node map of the Zolotarev solution.
/// Increasing from xi(0) = lambda to xi(1) = 1, with xi(1/2) = sqrt(lambda).
template <typename Scalar>
XiValue<Scalar> xi_value(Scalar v, const EllipticModulus<Scalar>& m) {
  using std::log;
  using std::log1p;
  if (!(v >= 0 && v <= 1)) throw DomainError("xi: v must lie in [0,1]");
  const Scalar lam = m.lambda();
  if (v >= Scalar(0.5)) {
    const auto d = detail::dn_ascending((1 - v) * m.Kprime(), lam);
    const Scalar lg = d.complement < Scalar(0.5) ? log1p(-d.complement) : log(d.dn);
    return {d.dn, d.complement, lg};
  }
  const auto d = detail::dn_ascending(v * m.Kprime(), lam);
  const Scalar logd = d.complement < Scalar(0.5) ? log1p(-d.complement) : log(d.dn);
  return {lam / d.dn, detail::reflected_complement(d, lam), m.log_lambda() - logd};
}

template <typename Scalar>
Scalar xi(Scalar v, const EllipticModulus<Scalar>& m) {
  return xi_value(v, m).value;
}

template <typename Scalar>
Scalar xi(Scalar v, Scalar lambda) {
  return xi_value(v, EllipticModulus<Scalar>(lambda)).value;
}

template <typename Scalar>
Scalar log_xi(Scalar v, const EllipticModulus<Scalar>& m) {
  return xi_value(v, m).log_value;
}

/// d xi / dv = K' sqrt((1 - xi^2)(xi^2 - lambda^2)), from dn' = -k^2 sn cn.
template <typename Scalar>
Scalar xi_derivative(const XiValue<Scalar>& x, Scalar v, const EllipticModulus<Scalar>& m) {
  using std::sqrt;
  const Scalar lam = m.lambda();
  // xi - lambda, accurate near v = 0 where xi = lambda / dn(v K')
  Scalar above;
  if (v < Scalar(0.5)) {
    const Scalar dn = lam / x.value;
    const Scalar one_minus_dn = 1 - dn;
    above = lam * one_minus_dn / dn;
  } else {
    above = x.value - lam;
  }
  const Scalar prod = x.complement * (1 + x.value) * above * (x.value + lam);
  return m.Kprime() * sqrt(prod > 0 ? prod : Scalar(0));
}

/// Inverse of the node map in the log domain: the v in [0,1] with
/// log xi(v) = log_z. Safeguarded Newton inside a shrinking bisection bracket.
template <typename Scalar>
Scalar xi_inverse_log(Scalar log_z, const EllipticModulus<Scalar>& m) {
  using std::abs;
  const Scalar e = detail::eps<Scalar>();
  const Scalar loglam = m.log_lambda();
  const Scalar slack = 8 * e * (1 + abs(loglam));
  if (!(log_z >= loglam - slack && log_z <= slack)) {
    throw DomainError("xi_inverse: argument outside [lambda, 1]");
  }
  if (log_z <= loglam) return Scalar(0);
  if (log_z >= 0) return Scalar(1);

  Scalar lo = 0, hi = 1;
  Scalar v = 1 - log_z / loglam;  // exact in the lambda -> 0 limit
  if (!(v > 0 && v < 1)) v = Scalar(0.5);
  for (int it = 0; it < 200; ++it) {
    const auto x = xi_value(v, m);
    const Scalar phi = x.log_value - log_z;
    if (phi == 0) return v;
    if (phi < 0) lo = v; else hi = v;
    const Scalar slope = xi_derivative(x, v, m) / x.value;
    Scalar next = slope > 0 ? v - phi / slope : (lo + hi) / 2;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    if (abs(next - v) <= e || hi - lo <= 4 * e) return next;
    v = next;
  }
  return v;
}

template <typename Scalar>
Scalar xi_inverse(Scalar z, const EllipticModulus<Scalar>& m) {
  using std::log;
  using std::log1p;
  const Scalar e = detail::eps<Scalar>();
  const Scalar lam = m.lambda();
  if (!(z >= lam * (1 - 8 * e) && z <= 1 + 8 * e)) {
    throw DomainError("xi_inverse: argument outside [lambda, 1]");
  }
  if (z <= lam) return Scalar(0);
  if (z >= 1) return Scalar(1);
  const Scalar lz = z > Scalar(0.5) ? log1p(-(1 - z)) : log(z);
  return xi_inverse_log(lz, m);
}

template <typename Scalar>
Scalar xi_inverse(Scalar z, Scalar lambda) {
  return xi_inverse(z, EllipticModulus<Scalar>(lambda));
}

/// rho = exp(pi K(lambda) / K'(lambda)) and rho~ = exp((pi^2/2) / log(4/lambda)),
/// the moduli governing the geometric decay of Zolotarev numbers.
template <typename Scalar>
RhoModuli<Scalar> moduli_rho(Scalar lambda) {
  using std::exp;
  using std::log;
  const auto p = complete_K(lambda);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar log_rho = pi * p.K / p.Kprime;
  const Scalar log_rho_tilde = (pi * pi / 2) / log(Scalar(4) / lambda);
  return {exp(log_rho), exp(log_rho_tilde), log_rho, log_rho_tilde};
}

}  // namespace zolo
