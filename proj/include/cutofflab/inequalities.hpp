#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cutofflab/chain.hpp"
#include "cutofflab/curvature.hpp"

namespace cutofflab {

/// Psi(r) = r^2 / (2 (r + e^{-r} - 1)), Psi(0) = 1. A power series in r is
/// used for |r| < 1, which keeps the removable singularity exact.
double psi(double r);

/// How a t_mls value fed into a bound was obtained. Every bound below is
/// increasing in t_mls, so a pass with a lower estimate is also a pass with
/// the true constant; a failure with one is inconclusive.
enum class TmlsSource { CertifiedLower, Heuristic, DecayVerified };
std::string_view to_string(TmlsSource source);

struct Witness {
  std::string model;
  std::string where;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of checking lhs <= rhs over many instances.
struct InequalityReport {
  InequalityReport() = default;
  explicit InequalityReport(std::string report_name) : name(std::move(report_name)) {}

  std::string name;
  std::size_t instances = 0;
  double max_violation = -1e300;  // max(lhs - rhs)
  double max_excess = -1e300;     // max(lhs - rhs - tol), > 0 means a failed instance
  std::vector<Witness> witnesses; // the worst instance, then up to 8 failures
  bool pass = true;
  bool uses_tmls = false;
  TmlsSource source = TmlsSource::CertifiedLower;
  std::string label;              // verified, heuristic-pass, inconclusive or fail
  std::uint64_t seed = 0;

  void record(const std::string& model, const std::string& where, double lhs, double rhs, double tol);
  void merge(const InequalityReport& other);
  /// Sets pass and label from the recorded instances.
  void finalize();
};

/// The three pointwise quantities of the approximate chain rule.
struct ChainRuleTerms {
  double r = 0.0;  // Lip(log f)
  Vector lower;    // Psi(-r) (Lf/f - L log f)
  Vector middle;   // Gamma(log f)
  Vector upper;    // Psi(r) (Lf/f - L log f)
};

/// Per-edge terms e^l - 1 - l and l^2/2 are evaluated with series near l = 0.
ChainRuleTerms chain_rule_terms(const MarkovChain& chain, const Vector& f);
InequalityReport check_chain_rule(const MarkovChain& chain, const Vector& f, const std::string& model = {});

/// d/dt Ent(X_t) <= -Varent(X_t) / (2t(1 + Lip(log f_t))) on the grid, with the
/// derivative taken by centered differences (step 1e-4 t, Richardson fallback).
/// Throws NotCertified unless the curvature report is nonnegative.
InequalityReport check_info_differential(const MarkovChain& chain, const CurvatureReport& curvature,
                                         const Vector& initial_law, const std::string& start,
                                         const std::vector<double>& times, const std::string& model = {});

/// Centered-difference estimate of d/dt Ent(X_t) at t > 0.
double entropy_derivative(const MarkovChain& chain, const Vector& initial_law, double t);

/// 3 + 3 log d + 3 log(1 v diam/(4t)).
double heat_kernel_bound(const MarkovChain& chain, double t);
InequalityReport check_heat_kernel_regularity(const MarkovChain& chain, const Vector& initial_law,
                                              const std::string& start, const std::vector<double>& times,
                                              const std::string& model = {});

/// Var[g(X_t)] <= 2t E[Gamma g(X_t)] for each g.
InequalityReport check_local_poincare(const MarkovChain& chain, const Vector& initial_law, double t,
                                      const std::vector<Vector>& functions, const std::string& model = {});

/// 2 TV^2 <= Ent.
InequalityReport pinsker(const Vector& pi, const Vector& f, const std::string& model = {});
/// Ent <= (1 + sqrt(Varent)) / (1 - TV). Throws TotalVariationOne.
InequalityReport reverse_pinsker(const Vector& pi, const Vector& f, const std::string& model = {});

/// t + t_mls log(1 v Ent(X_t) / (2 eps^2)).
double mixing_time_bound(double t, double ent_t, double t_mls, double eps);
/// Compares the bound at each grid time against the exact t_mix from the start.
InequalityReport check_mixing_time_bound(const MarkovChain& chain, const Vector& initial_law, const std::string& start,
                                         const std::vector<double>& times, double t_mls, TmlsSource source,
                                         double eps, const std::string& model = {});

/// t_mls (log(120/eps^4) + log log d + log(2 + t_mix(1-eps)/t_mls)).
/// Throws NotApplicable when d <= e, InvalidInput unless eps in (0, 1/2).
double window_bound(double t_mls, double d, double eps, double tmix_one_minus_eps);

struct WindowCheck {
  double tmix_eps = 0.0;
  double tmix_one_minus_eps = 0.0;
  double window = 0.0;
  double bound = 0.0;
  InequalityReport report;
};

/// t_mix^S(eps) - t_mix^S(1-eps) <= window_bound, with exact mixing times.
WindowCheck check_window(const MarkovChain& chain, const std::vector<Index>& starts, double eps, double t_mls,
                         TmlsSource source, const std::string& model = {});

/// 15 (log d + t_mls / t). Throws NotApplicable when d < 2, where the
/// composition of the regularity and diameter bounds no longer yields it.
double combined_lipschitz_bound(double d, double t, double t_mls);
InequalityReport check_combined_lipschitz(const MarkovChain& chain, const Vector& initial_law,
                                          const std::string& start, const std::vector<double>& times, double t_mls,
                                          TmlsSource source, const std::string& model = {});

}  // namespace cutofflab
