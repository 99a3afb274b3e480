#pragma once

#include <string>
#include <vector>

#include "cutofflab/chain.hpp"

namespace cutofflab {

/// Poisson(t) probabilities w[k - first] for k in [first, first + w.size()),
/// with both neglected tails below `tail` in total.
struct PoissonWindow {
  std::size_t first = 0;
  std::vector<double> weights;
  std::size_t last() const { return first + weights.size() - 1; }
};

PoissonWindow poisson_window(double t, double tail = 1e-13);

/// law * exp(t (T - Id)) by uniformization. Throws NegativeTime.
Vector evolve_law(const MarkovChain& chain, const Vector& law, double t);
/// exp(t (T - Id)) f, the semigroup acting on observables.
Vector apply_semigroup(const MarkovChain& chain, const Vector& f, double t);

/// Density f_t of X_t with respect to pi.
struct Density {
  Vector f;
  double time = 0.0;
  std::string origin;
};

Density density_from_law(const MarkovChain& chain, const Vector& law, double t = 0.0, std::string origin = {});
Vector dirac(const MarkovChain& chain, Index o);
Density evolve(const MarkovChain& chain, const Vector& initial_law, double t, std::string origin = {});

/// Generator applied to an observable: (Lf)(x) = sum_y T(x,y)(f(y) - f(x)).
Vector generator(const MarkovChain& chain, const Vector& f);

// Information functionals of a density f with respect to pi.
double total_variation(const Vector& pi, const Vector& f);
/// Ent = sum pi f log f, with 0 log 0 = 0; evaluated as sum pi (f log f - f + 1).
double entropy(const Vector& pi, const Vector& f);
/// Varent = sum pi f (log f)^2 - Ent^2, zero-mass states skipped.
double varentropy(const Vector& pi, const Vector& f);
/// max over adjacency edges of |log f(x) - log f(y)|. Throws ZeroDensity.
double lip_log_density(const MarkovChain& chain, const Vector& f);
/// max over adjacency edges of |g(x) - g(y)|.
double lipschitz(const MarkovChain& chain, const Vector& g);

double total_variation(const MarkovChain& chain, const Density& d);
double entropy(const MarkovChain& chain, const Density& d);
double varentropy(const MarkovChain& chain, const Density& d);

/// A law moving forward in time; each advance reuses the previous state.
class Trajectory {
 public:
  Trajectory(const MarkovChain& chain, Vector law, double t0 = 0.0);

  void advance_to(double t);
  double time() const { return time_; }
  const Vector& law() const { return law_; }
  Vector density() const;

 private:
  const MarkovChain* chain_;
  Vector law_;
  double time_;
};

/// First time the monotone statistic drops to `level` from `initial_law`;
/// bisection to absolute tolerance 1e-6 * max(1, bracket).
double mixing_time_from(const MarkovChain& chain, const Vector& initial_law, double eps);
double entropic_mixing_time_from(const MarkovChain& chain, const Vector& initial_law, double delta);

/// max over o in S of the Dirac-start mixing time.
double mixing_time(const MarkovChain& chain, const std::vector<Index>& starts, double eps);
double entropic_mixing_time(const MarkovChain& chain, const std::vector<Index>& starts, double delta);

struct StartCurves {
  std::string start;
  std::vector<double> tv;
  std::vector<double> ent;
  std::vector<double> varent;
  std::vector<double> lip_log_f;  // +inf where f_t has zeros
  std::vector<double> t_mix;      // one per requested eps
};

struct MixingProfile {
  std::vector<double> times;
  std::vector<double> eps;
  std::vector<double> delta;
  std::vector<StartCurves> starts;
  std::vector<double> t_mix_S;  // max over starts, per eps
  std::vector<double> t_ent_S;  // max over starts, per delta

  /// Worst-case TV over the start set at each grid time.
  std::vector<double> tv_S() const;
};

/// Curves on `times` (sorted, >= 0) plus mixing times; starts are Dirac masses.
MixingProfile compute_profile(const MarkovChain& chain, const std::vector<Index>& starts, std::vector<double> times,
                              std::vector<double> eps, std::vector<double> delta);

/// Evenly spaced grid on [0, t_max] with `points` entries.
std::vector<double> uniform_grid(double t_max, std::size_t points);
/// `points` log-spaced times on [t_min, t_max].
std::vector<double> log_grid(double t_min, double t_max, std::size_t points);

}  // namespace cutofflab
