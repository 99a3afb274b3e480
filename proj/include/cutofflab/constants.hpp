#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cutofflab/chain.hpp"

namespace cutofflab {

/// E(f) = -pi[f L log f], the instantaneous entropy dissipation at density f.
double entropy_dissipation(const MarkovChain& chain, const Vector& f);

/// E(f) / Ent(f) for a positive density f (sum pi f = 1).
/// Throws ZeroDensity for f with a nonpositive entry, DegenerateDensity when
/// Ent(f) < 1e-14.
double mls_ratio(const MarkovChain& chain, const Vector& f);

/// Ent(X_t) <= Ent(X_0) exp(-t rho) on a time grid, over Dirac and mixture starts.
struct DecayCheck {
  bool passed = true;
  std::size_t starts_checked = 0;
  double worst_ratio = 0.0;  // max Ent(X_t) / (Ent(X_0) e^{-t rho})
  double worst_time = 0.0;
  std::string worst_start;
};

struct MlsEstimate {
  double rho_hat = 0.0;
  double t_mls_lower = 0.0;  // 1 / rho_hat: a certified lower bound on t_mls
  std::size_t restarts = 0;  // optimizer runs, including deterministic starts
  Vector best_density;
  DecayCheck decay_check;
  std::uint64_t seed = 0;
};

struct MlsOptions {
  std::size_t random_restarts = 8;
  std::size_t budget = 400;        // gradient iterations per run
  std::size_t dirac_starts = 16;   // evenly spaced smoothed Dirac starts (all states if N is smaller)
  std::size_t mixture_starts = 50; // random mixtures in the decay check
  std::size_t decay_points = 20;
  std::uint64_t seed = 20240601;
};

/// Minimizes mls_ratio over positive densities with preconditioned gradient
/// descent in logit coordinates, then runs the decay check at rate rho_hat.
MlsEstimate estimate_tmls(const MarkovChain& chain, const MlsOptions& options = {});

/// Runs only the trajectory decay check at rate rho.
DecayCheck check_entropy_decay(const MarkovChain& chain, double rho, const MlsOptions& options = {});

struct SpectralGap {
  double value = 0.0;
  Vector eigenfunction;  // pi-orthogonal to constants, normalized in L2(pi)
  bool reversible = true;
};

/// Second-smallest eigenvalue of -L in L2(pi); non-reversible chains use the
/// additive reversibilization unless strict, in which case NotReversible is thrown.
SpectralGap spectral_gap_full(const MarkovChain& chain, bool strict = false);
double spectral_gap(const MarkovChain& chain, bool strict = false);

struct DiamMlsCheck {
  bool holds = false;  // false means inconclusive, never a counterexample
  int diameter = 0;
  double rhs = 0.0;    // 16 t_mls_lower log(2d)
};

DiamMlsCheck check_diam_mls(const MarkovChain& chain, const MlsEstimate& estimate);

}  // namespace cutofflab
