#include "cutofflab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutofflab/error.hpp"
#include "cutofflab/parallel.hpp"

namespace cutofflab {

namespace {

double log_poisson(double t, std::size_t k) {
  const double kd = static_cast<double>(k);
  return -t + kd * std::log(t) - std::lgamma(kd + 1.0);
}

// Relative precision targeted per entry when extending past the Poisson window.
constexpr double kRelativeTail = 1e-15;

// Sum_k w_k v T^k (or T^k v). Past the absolute window, terms keep being added
// while they still change some entry relatively, so that far-away states get
// positive and relatively accurate mass at small t.
Vector uniformize(const SparseMatrix& step, const Vector& v0, double t, bool relative, std::size_t extra_limit) {
  if (t < 0.0 || !std::isfinite(t)) throw Error(ErrorCode::NegativeTime, "time must be finite and nonnegative");
  if (t == 0.0) return v0;
  const PoissonWindow win = poisson_window(t);
  Vector acc = Vector::Zero(v0.size());
  Vector v = v0;
  for (std::size_t k = 0; k <= win.last(); ++k) {
    if (k >= win.first) acc += win.weights[k - win.first] * v;
    if (k < win.last()) v = step * v;
  }
  if (!relative) return acc;
  const std::size_t limit = win.last() + extra_limit;
  for (std::size_t k = win.last() + 1; k <= limit; ++k) {
    v = step * v;
    const double w = std::exp(log_poisson(t, k));
    if (w == 0.0) break;
    bool changed = false;
    for (Index x = 0; x < v.size(); ++x) {
      const double term = w * v(x);
      if (term > 0.0 && (acc(x) == 0.0 || term > kRelativeTail * acc(x))) {
        changed = true;
        break;
      }
    }
    if (!changed) break;
    acc += w * v;
  }
  return acc;
}

double tv_of_law(const Vector& pi, const Vector& law) { return 0.5 * (law - pi).cwiseAbs().sum(); }

double ent_of_law(const Vector& pi, const Vector& law) {
  double s = 0.0;
  for (Index x = 0; x < law.size(); ++x) {
    if (law(x) > 0.0) s += law(x) * std::log(law(x) / pi(x));
  }
  return std::max(0.0, s);
}

template <class Stat>
double first_passage(const MarkovChain& chain, const Vector& law0, double level, Stat stat) {
  const Vector& pi = chain.stationary();
  if (stat(pi, law0) <= level) return 0.0;
  const std::size_t extra = static_cast<std::size_t>(chain.diameter()) + 64;
  double lo = 0.0;
  Vector lo_law = law0;
  double hi = 1.0;
  Vector hi_law = uniformize(chain.transition_transpose(), lo_law, hi - lo, true, extra);
  while (stat(pi, hi_law) > level) {
    lo = hi;
    lo_law = hi_law;
    hi *= 2.0;
    if (hi > 1e9) throw Error(ErrorCode::InvalidInput, "mixing time exceeds 1e9; chain may be reducible");
    hi_law = uniformize(chain.transition_transpose(), lo_law, hi - lo, true, extra);
  }
  const double tol = 1e-6 * std::max(1.0, hi);
  while (hi - lo > 0.5 * tol) {
    const double mid = 0.5 * (lo + hi);
    Vector mid_law = uniformize(chain.transition_transpose(), lo_law, mid - lo, true, extra);
    if (stat(pi, mid_law) > level) {
      lo = mid;
      lo_law = std::move(mid_law);
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

PoissonWindow poisson_window(double t, double tail) {
  if (t < 0.0 || !std::isfinite(t)) throw Error(ErrorCode::NegativeTime, "time must be finite and nonnegative");
  PoissonWindow win;
  if (t == 0.0) {
    win.weights = {1.0};
    return win;
  }
  const std::size_t mode = static_cast<std::size_t>(std::floor(t));
  std::size_t right = mode;
  while (true) {
    const double next = std::exp(log_poisson(t, right + 1));
    const double ratio = t / static_cast<double>(right + 2);
    if (ratio < 1.0 && next / (1.0 - ratio) <= 0.5 * tail) break;
    ++right;
  }
  std::size_t left = mode;
  while (left > 0) {
    const double prev = std::exp(log_poisson(t, left - 1));
    const double ratio = static_cast<double>(left - 1) / t;
    if (ratio < 1.0 && prev / (1.0 - ratio) <= 0.5 * tail) break;
    --left;
  }
  // Weights relative to the mode by the ratio recurrence, then normalized:
  // lgamma-based log weights lose ~1e-13 relative accuracy at large t.
  win.first = left;
  win.weights.assign(right - left + 1, 0.0);
  const std::size_t m = mode - left;
  win.weights[m] = 1.0;
  for (std::size_t i = m; i + 1 < win.weights.size(); ++i)
    win.weights[i + 1] = win.weights[i] * t / static_cast<double>(left + i + 1);
  for (std::size_t i = m; i > 0; --i) win.weights[i - 1] = win.weights[i] * static_cast<double>(left + i) / t;
  double total = 0.0;
  for (double w : win.weights) total += w;
  for (double& w : win.weights) w /= total;
  return win;
}

Vector evolve_law(const MarkovChain& chain, const Vector& law, double t) {
  return uniformize(chain.transition_transpose(), law, t, true, static_cast<std::size_t>(chain.diameter()) + 64);
}

Vector apply_semigroup(const MarkovChain& chain, const Vector& f, double t) {
  return uniformize(chain.transition(), f, t, false, 0);
}

Density density_from_law(const MarkovChain& chain, const Vector& law, double t, std::string origin) {
  return Density{law.cwiseQuotient(chain.stationary()), t, std::move(origin)};
}

Vector dirac(const MarkovChain& chain, Index o) {
  Vector law = Vector::Zero(static_cast<Index>(chain.size()));
  law(o) = 1.0;
  return law;
}

Density evolve(const MarkovChain& chain, const Vector& initial_law, double t, std::string origin) {
  return density_from_law(chain, evolve_law(chain, initial_law, t), t, std::move(origin));
}

Vector generator(const MarkovChain& chain, const Vector& f) { return chain.transition() * f - f; }

double total_variation(const Vector& pi, const Vector& f) {
  return 0.5 * (pi.array() * (f.array() - 1.0).abs()).sum();
}

double entropy(const Vector& pi, const Vector& f) {
  // Sum of pi (f log f - f + 1): equal to pi[f log f] for a density, but every
  // term is nonnegative and there is no cancellation when f is close to 1.
  double s = 0.0;
  for (Index x = 0; x < f.size(); ++x) {
    const double g = f(x) - 1.0;
    double h;
    if (std::abs(g) < 0.05) {
      h = 0.0;
      double power = g * g;
      for (int k = 2; k < 40; ++k) {
        const double term = power / (k * (k - 1.0));
        h += (k % 2 == 0) ? term : -term;
        if (std::abs(term) < 1e-18 * h) break;
        power *= g;
      }
    } else if (f(x) > 0.0) {
      h = f(x) * std::log(f(x)) - g;
    } else {
      h = 1.0;
    }
    s += pi(x) * h;
  }
  return s;
}

double varentropy(const Vector& pi, const Vector& f) {
  double mean = 0.0;
  for (Index x = 0; x < f.size(); ++x)
    if (f(x) > 0.0) mean += pi(x) * f(x) * std::log(f(x));
  double s = 0.0;
  for (Index x = 0; x < f.size(); ++x) {
    if (f(x) > 0.0) {
      const double c = std::log(f(x)) - mean;
      s += pi(x) * f(x) * c * c;
    }
  }
  return s;
}

double lipschitz(const MarkovChain& chain, const Vector& g) {
  double r = 0.0;
  for (auto [x, y] : chain.edges()) r = std::max(r, std::abs(g(x) - g(y)));
  return r;
}

double lip_log_density(const MarkovChain& chain, const Vector& f) {
  for (Index x = 0; x < f.size(); ++x) {
    if (!(f(x) > 0.0)) throw Error(ErrorCode::ZeroDensity, "density vanishes at state " + std::to_string(x));
  }
  return lipschitz(chain, f.array().log().matrix());
}

double total_variation(const MarkovChain& chain, const Density& d) { return total_variation(chain.stationary(), d.f); }
double entropy(const MarkovChain& chain, const Density& d) { return entropy(chain.stationary(), d.f); }
double varentropy(const MarkovChain& chain, const Density& d) { return varentropy(chain.stationary(), d.f); }

Trajectory::Trajectory(const MarkovChain& chain, Vector law, double t0)
    : chain_(&chain), law_(std::move(law)), time_(t0) {}

void Trajectory::advance_to(double t) {
  if (t < time_) throw Error(ErrorCode::NegativeTime, "trajectories only move forward in time");
  if (t == time_) return;
  law_ = evolve_law(*chain_, law_, t - time_);
  time_ = t;
}

Vector Trajectory::density() const { return law_.cwiseQuotient(chain_->stationary()); }

double mixing_time_from(const MarkovChain& chain, const Vector& initial_law, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidInput, "precision eps must lie in (0,1)");
  return first_passage(chain, initial_law, eps, tv_of_law);
}

double entropic_mixing_time_from(const MarkovChain& chain, const Vector& initial_law, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidInput, "entropy level delta must be positive");
  return first_passage(chain, initial_law, delta, ent_of_law);
}

double mixing_time(const MarkovChain& chain, const std::vector<Index>& starts, double eps) {
  std::vector<double> per(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { per[i] = mixing_time_from(chain, dirac(chain, starts[i]), eps); });
  return per.empty() ? 0.0 : *std::max_element(per.begin(), per.end());
}

double entropic_mixing_time(const MarkovChain& chain, const std::vector<Index>& starts, double delta) {
  std::vector<double> per(starts.size());
  parallel_for(starts.size(),
               [&](std::size_t i) { per[i] = entropic_mixing_time_from(chain, dirac(chain, starts[i]), delta); });
  return per.empty() ? 0.0 : *std::max_element(per.begin(), per.end());
}

std::vector<double> MixingProfile::tv_S() const {
  std::vector<double> out(times.size(), 0.0);
  for (const auto& s : starts)
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = std::max(out[i], s.tv[i]);
  return out;
}

MixingProfile compute_profile(const MarkovChain& chain, const std::vector<Index>& starts, std::vector<double> times,
                              std::vector<double> eps, std::vector<double> delta) {
  if (starts.empty()) throw Error(ErrorCode::InvalidInput, "start set S is empty");
  std::sort(times.begin(), times.end());
  if (!times.empty() && times.front() < 0.0) throw Error(ErrorCode::NegativeTime, "profile grid has negative times");
  MixingProfile prof;
  prof.times = times;
  prof.eps = std::move(eps);
  prof.delta = std::move(delta);
  prof.starts.resize(starts.size());
  const Vector& pi = chain.stationary();
  std::vector<std::vector<double>> t_ent(starts.size());

  parallel_for(starts.size(), [&](std::size_t i) {
    auto& sc = prof.starts[i];
    sc.start = chain.label(starts[i]);
    Trajectory traj(chain, dirac(chain, starts[i]));
    for (double t : prof.times) {
      traj.advance_to(t);
      const Vector f = traj.density();
      sc.tv.push_back(total_variation(pi, f));
      sc.ent.push_back(entropy(pi, f));
      sc.varent.push_back(varentropy(pi, f));
      double lip = std::numeric_limits<double>::infinity();
      if ((f.array() > 0.0).all()) lip = lip_log_density(chain, f);
      sc.lip_log_f.push_back(lip);
    }
    for (double e : prof.eps) sc.t_mix.push_back(mixing_time_from(chain, dirac(chain, starts[i]), e));
    for (double d : prof.delta) t_ent[i].push_back(entropic_mixing_time_from(chain, dirac(chain, starts[i]), d));
  });

  prof.t_mix_S.assign(prof.eps.size(), 0.0);
  prof.t_ent_S.assign(prof.delta.size(), 0.0);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    for (std::size_t j = 0; j < prof.eps.size(); ++j) prof.t_mix_S[j] = std::max(prof.t_mix_S[j], prof.starts[i].t_mix[j]);
    for (std::size_t j = 0; j < prof.delta.size(); ++j) prof.t_ent_S[j] = std::max(prof.t_ent_S[j], t_ent[i][j]);
  }
  return prof;
}

std::vector<double> uniform_grid(double t_max, std::size_t points) {
  std::vector<double> g;
  if (points == 0) return g;
  if (points == 1) return {0.0};
  for (std::size_t i = 0; i < points; ++i) g.push_back(t_max * static_cast<double>(i) / static_cast<double>(points - 1));
  return g;
}

std::vector<double> log_grid(double t_min, double t_max, std::size_t points) {
  std::vector<double> g;
  if (points == 1) return {t_min};
  const double a = std::log(t_min), b = std::log(t_max);
  for (std::size_t i = 0; i < points; ++i) g.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1)));
  return g;
}

}  // namespace cutofflab
