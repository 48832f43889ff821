#pragma once

// Equioscillation solver for Z_n(X, Y) on finite unions of closed intervals
// and finite point sets.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "zolo/domains.hpp"

namespace zolo {

struct SolveOptions {
  double certify_tol = 1e-8;   ///< relative to max(1, |a|)
  int max_iter = 200;
  double golden_tol = 1e-3;    ///< absolute tolerance of the step-length search
  double accept_tol = 1e-6;    ///< stagnation above this relative spread is a failure
  bool throw_on_failure = true;
};

/// Local extrema of h between its roots and poles together with the
/// log-residuals c_i = log|r(x_i)|, d_i = -log|r(y_i)|, r = h / exp(b).
struct ExtremaState {
  std::vector<double> x;  ///< n + 1 maximizers of |h| on X, ascending
  std::vector<double> y;  ///< n + 1 maximizers of 1/|h| on Y, descending
  std::vector<double> c;
  std::vector<double> d;
  double a = 0;       ///< equioscillation level for the best b
  double b = 0;       ///< log-scale minimizing the spread
  double spread = 0;  ///< max(range c, range d)
};

/// Locates the extrema for the given roots (ascending) and poles
/// (descending) in normalized coordinates. Throws EmptySliceError if a
/// maximization slice is empty.
ExtremaState locate_extrema(const SeparatedPair& pair, const std::vector<double>& roots,
                            const std::vector<double>& poles);

/// Solver state. All coordinates are normalized (X in [lambda, 1],
/// Y in [-1, -lambda]).
struct Equioscillator {
  int n = 0;
  std::shared_ptr<const SeparatedPair> pair;
  std::vector<double> roots;  ///< ascending
  std::vector<double> poles;  ///< descending
  ExtremaState ext;
  bool covering = false;  ///< roots cover X or poles cover Y; Z = 0

  double a() const { return ext.a; }
  double b() const { return ext.b; }
  double deviation() const { return ext.spread; }
  /// Roots and poles carried back to the original coordinates. Covering
  /// nodes land exactly on points of the original sets.
  std::vector<double> original_roots() const;
  std::vector<double> original_poles() const;
};

Equioscillator make_equioscillator(std::shared_ptr<const SeparatedPair> pair,
                                   std::vector<double> roots, std::vector<double> poles);

/// `count` parameters in xi^{-1}(S), S a subset of [lambda, 1], starting at
/// the smallest element and spaced as far apart as S allows: the minimum
/// gap between consecutive parameters is maximal. Ascending.
std::vector<double> insertion_parameters(const Domain& S, double lambda, int count);

/// Roots xi((a_i + a_{i+1}) / 2) and poles -xi((b_i + b_{i+1}) / 2) from the
/// insertion parameters a of X and b of -Y. On the full intervals this
/// reproduces the closed-form nodes. Throws CardinalityError when X or Y
/// cannot host n + 1 distinct points.
Equioscillator initialize(std::shared_ptr<const SeparatedPair> pair, int n);

struct Residuals {
  std::vector<double> c;
  std::vector<double> d;
};

/// c_i and d_i at the current extrema, as sums of logarithms. Throws
/// DegenerateGeometryError when an extremum coincides with a root or pole.
Residuals residual_logs(const Equioscillator& eq);

struct Correction {
  double a = 0;
  double b = 0;
  std::vector<double> d_roots;
  std::vector<double> d_poles;
};

/// Closed-form solution of the linearized equioscillation system, with all
/// products evaluated in log-magnitude and sign form.
Correction correction_step(const Equioscillator& eq);

struct LineSearchResult {
  double alpha = 0;
  double spread = 0;
  bool improved = false;
};

/// Golden-section search over alpha in [0, 1] along the logistic s/t
/// direction, refreshing the extrema at every trial. Updates eq when some
/// alpha reduces the spread; otherwise leaves it untouched.
LineSearchResult line_search_st(Equioscillator& eq, const Correction& corr, double golden_tol = 1e-3);

enum class SolveStatus { Converged, Trivial, Covering, Stagnated, MaxIter, Degenerate };

std::string to_string(SolveStatus s);

struct SolveReport {
  double log_Zn = 0;        ///< 2a
  double log_Zn_upper = 0;  ///< log of the optimand attained by the final nodes
  double log_Zn_lower = 0;
  int iterations = 0;
  double final_deviation = 0;
  bool certified = false;
  SolveStatus status = SolveStatus::Converged;
  std::vector<double> alpha_history;
  std::vector<double> spread_history;  ///< spread before the first and after every step
  std::string message;
};

std::pair<Equioscillator, SolveReport> solve(const SeparatedPair& pair, int n,
                                             const SolveOptions& opts = {});

/// Runs the correction and line-search loop from the given state, which is
/// updated in place. solve() is initialize() followed by refine().
SolveReport refine(Equioscillator& eq, const SolveOptions& opts = {});

/// Sufficient optimality check: the 2n + 2 extremal values agree with +-a to
/// tol * max(1, |a|), roots and poles interleave with the extrema, and every
/// maximization slice is nonempty.
bool certify(const Equioscillator& eq, double tol);

}  // namespace zolo
