#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cutofflab/constants.hpp"
#include "cutofflab/curvature.hpp"
#include "cutofflab/inequalities.hpp"
#include "cutofflab/model_spec.hpp"
#include "cutofflab/semigroup.hpp"

namespace cutofflab {

/// Curvature is skipped above this many states in full analyses.
inline constexpr std::size_t kCurvatureCap = 20000;

struct AnalysisOptions {
  std::vector<double> eps{0.25, 0.75};
  std::vector<double> delta{0.1};
  std::string starts = "origin";  // all, origin, or a comma-separated index list
  std::size_t profile_points = 64;
  MlsOptions mls;
  bool inequalities = true;
};

struct Analysis {
  nlohmann::json report;
  MixingProfile profile;
  std::vector<Index> starts;
  double t_mix_half = 0.0;  // t_mix^S(1/2), the plot normalization
  bool violation = false;   // some inequality failed with a verified label
};

/// Resolves a start designation against a chain. Throws InvalidInput.
std::vector<Index> resolve_starts(const MarkovChain& chain, const std::string& designation, Index origin);

/// Full pipeline: structure, curvature, t_mls estimate, mixing profile,
/// criterion and window ratios, inequality checks along trajectories.
Analysis analyze(const Model& model, const AnalysisOptions& options = {});

/// CSV t,start,tv,ent,varent,lip_log_f with 12 significant digits.
std::string profile_csv(const MixingProfile& profile);
/// CSV of the worst-case TV curve against t / t_mix(1/2).
std::string plot_csv(const MixingProfile& profile, double t_mix_half);

struct SweepOptions {
  std::string family;               // hypercube, transpositions, ehrenfest, bernoulli_laplace, multislice, ising, hardcore
  std::vector<int> sizes;
  double eps = 0.25;
  std::string graph = "cycle";      // graph family for ising and hardcore
  double beta = 0.1;
  double lambda = 0.25;
  int parts = 2;                    // multislice: n split into this many near-equal blocks
  MlsOptions mls;
};

struct SweepRow {
  int n = 0;
  std::size_t N = 0;
  double d = 0.0;
  int diam = 0;
  double rho_hat = 0.0;
  double t_mls_lower = 0.0;
  double tmix_eps = 0.0;
  double tmix_one_minus_eps = 0.0;
  double window_ratio = 0.0;       // t_mix(eps) / t_mix(1-eps)
  double criterion_ratio = 0.0;    // NaN when d <= e
  double window_bound = 0.0;       // NaN when d <= e
  std::string window_label;        // verified, heuristic-pass, inconclusive, fail, not-applicable
  std::string note;                // set when the instance was skipped
};

struct Sweep {
  std::vector<SweepRow> rows;
  std::string csv;
  bool window_ratio_decreasing = false;
  bool window_bounds_hold = true;
  bool violation = false;
};

nlohmann::json sweep_instance_spec(const SweepOptions& options, int n);
Sweep sweep(const SweepOptions& options);

nlohmann::json to_json(const InequalityReport& report);
nlohmann::json to_json(const CurvatureReport& report, bool per_state);
nlohmann::json to_json(const MlsEstimate& estimate);
nlohmann::json to_json(const DecayCheck& check);

}  // namespace cutofflab
