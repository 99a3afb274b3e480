#pragma once

#include <vector>

#include "cutofflab/chain.hpp"

namespace cutofflab {

/// Gamma f(x) = 1/2 sum_y T(x,y) (f(y) - f(x))^2.
Vector gamma(const MarkovChain& chain, const Vector& f);
/// Gamma(f,g)(x) = 1/2 sum_y T(x,y) (f(y) - f(x)) (g(y) - g(x)).
Vector gamma_bilinear(const MarkovChain& chain, const Vector& f, const Vector& g);
/// Gamma_2 f = 1/2 (L Gamma f - 2 Gamma(f, L f)).
Vector gamma2(const MarkovChain& chain, const Vector& f);

struct CurvatureReport {
  std::vector<double> per_state_min_eig;
  std::vector<double> per_state_scale;  // max(1, max |Q_x entry|)
  double global_min = 0.0;
  double tolerance = 1e-9;
  bool curved = true;
  /// Set when curved is false: the worst state relative to its scale and a
  /// unit-norm function f with Gamma_2 f(state) = per_state_min_eig[state].
  Index violating_state = -1;
  Vector witness;
};

/// Symmetric matrix of f -> Gamma_2 f(x) on the radius-2 ball around x,
/// together with the ball's state indices.
struct LocalForm {
  std::vector<Index> ball;
  DenseMatrix Q;
};

LocalForm gamma2_form(const MarkovChain& chain, Index x);

/// Minimum eigenvalue of every local form; the chain is reported curved iff
/// each minimum is >= -tol * scale.
CurvatureReport certify_curvature(const MarkovChain& chain, double tol = 1e-9);

struct SubcommutationReport {
  bool holds = true;
  double max_violation = 0.0;  // max of Gamma(P_t f) - P_t Gamma f, scaled tolerance already removed
  std::size_t function_index = 0;
  Index state = -1;
};

/// Checks Gamma(P_t f) <= P_t Gamma f + tol * max(1, |P_t Gamma f|) pointwise for every f.
SubcommutationReport check_subcommutation(const MarkovChain& chain, double t, const std::vector<Vector>& functions,
                                          double tol = 1e-10);

}  // namespace cutofflab
