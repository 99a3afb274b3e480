#include "cutofflab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "cutofflab/error.hpp"
#include "cutofflab/parallel.hpp"
#include "cutofflab/semigroup.hpp"

namespace cutofflab {

namespace {

constexpr double kMinEntropy = 1e-14;
// Trial densities closer to 1 than this lose digits in Ent; the optimizer stays away.
constexpr double kMinTrialEntropy = 1e-9;
constexpr std::size_t kDenseGapLimit = 512;

// Ratio and gradient in logit coordinates u, where f = e^u / pi[e^u].
struct LogitEval {
  double E = 0.0;
  double ent = 0.0;
  double ratio = std::numeric_limits<double>::infinity();
  Vector grad;
};

LogitEval eval_logits(const MarkovChain& chain, const Vector& u, bool with_grad) {
  const Vector& pi = chain.stationary();
  const double umax = u.maxCoeff();
  const Vector w = pi.array() * (u.array() - umax).exp();
  const double Z = w.sum();
  const Vector p = w / Z;
  const double logZ = std::log(Z) + umax;
  const Vector Lu = generator(chain, u);
  LogitEval ev;
  const double pLu = p.dot(Lu);
  const double pu = p.dot(u);
  ev.E = -pLu;
  ev.ent = pu - logZ;
  if (!(ev.ent >= kMinTrialEntropy)) return ev;
  ev.ratio = ev.E / ev.ent;
  if (with_grad) {
    const Vector Ltp = chain.transition_transpose() * p - p;
    const Vector dE = -(p.array() * (Lu.array() - pLu)).matrix() - Ltp;
    const Vector dEnt = (p.array() * (u.array() - pu)).matrix();
    ev.grad = (dE - ev.ratio * dEnt) / ev.ent;
  }
  return ev;
}

Vector density_from_logits(const MarkovChain& chain, const Vector& u) {
  const Vector& pi = chain.stationary();
  const Vector e = (u.array() - u.maxCoeff()).exp();
  return e / pi.dot(e);
}

struct RunResult {
  double ratio = std::numeric_limits<double>::infinity();
  Vector u;
};

RunResult minimize_ratio(const MarkovChain& chain, Vector u, std::size_t budget) {
  const Vector& pi = chain.stationary();
  LogitEval cur = eval_logits(chain, u, true);
  RunResult best{cur.ratio, u};
  if (!std::isfinite(cur.ratio)) return best;
  double step = 1.0;
  for (std::size_t it = 0; it < budget; ++it) {
    const Vector dir = -cur.grad.cwiseQuotient(pi);
    const double slope = cur.grad.dot(dir);
    if (!(slope < 0.0)) break;
    const double dmax = dir.cwiseAbs().maxCoeff();
    step = std::min(step * 2.0, 4.0 / dmax);
    bool accepted = false;
    LogitEval next;
    Vector trial;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial = u + step * dir;
      next = eval_logits(chain, trial, true);
      if (std::isfinite(next.ratio) && next.ratio <= cur.ratio + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double improvement = (cur.ratio - next.ratio) / cur.ratio;
    u = std::move(trial);
    cur = std::move(next);
    if (cur.ratio < best.ratio) best = {cur.ratio, u};
    if (improvement < 1e-9) break;
  }
  return best;
}

std::vector<Index> spread_states(std::size_t n, std::size_t cap) {
  std::vector<Index> out;
  const std::size_t k = std::min(n, cap);
  for (std::size_t i = 0; i < k; ++i) out.push_back(static_cast<Index>(i * n / k));
  return out;
}

// Smallest nonzero eigenvalue of a symmetric PSD operator A (spectrum in [0,2])
// with known null vector, by Lanczos on 2I - A with full reorthogonalization.
template <class Apply>
std::pair<double, Vector> lanczos_gap(Index n, const Vector& null_vec, Apply apply) {
  const Index max_steps = std::min<Index>(n - 1, 400);
  std::vector<Vector> V;
  std::vector<double> alpha, beta;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Vector q(n);
  for (Index i = 0; i < n; ++i) q(i) = normal(rng);
  auto deflate = [&](Vector& v) {
    v -= null_vec.dot(v) * null_vec;
    for (const auto& b : V) v -= b.dot(v) * b;
  };
  deflate(q);
  q.normalize();
  double value = 0.0;
  Vector ritz;
  for (Index k = 0; k < max_steps; ++k) {
    V.push_back(q);
    Vector w = 2.0 * q - apply(q);
    const double a = q.dot(w);
    alpha.push_back(a);
    deflate(w);
    deflate(w);
    const double b = w.norm();
    const Index m = static_cast<Index>(alpha.size());
    const bool check = (m % 10 == 0) || b < 1e-12 || k + 1 == max_steps;
    if (check) {
      DenseMatrix Tm = DenseMatrix::Zero(m, m);
      for (Index i = 0; i < m; ++i) {
        Tm(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) Tm(i, i + 1) = Tm(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(Tm);
      const double theta = es.eigenvalues()(m - 1);
      const Vector s = es.eigenvectors().col(m - 1);
      const double resid = std::abs(b * s(m - 1));
      value = 2.0 - theta;
      ritz = Vector::Zero(n);
      for (Index i = 0; i < m; ++i) ritz += s(i) * V[static_cast<std::size_t>(i)];
      if (resid < 1e-10 || b < 1e-12) break;
    }
    beta.push_back(b);
    q = w / b;
  }
  return {value, ritz};
}

}  // namespace

double entropy_dissipation(const MarkovChain& chain, const Vector& f) {
  const Vector logf = f.array().log().matrix();
  return -chain.stationary().cwiseProduct(f).dot(generator(chain, logf));
}

double mls_ratio(const MarkovChain& chain, const Vector& f) {
  const Vector& pi = chain.stationary();
  if (f.size() != pi.size()) throw Error(ErrorCode::InvalidInput, "density length does not match the state space");
  for (Index x = 0; x < f.size(); ++x)
    if (!(f(x) > 0.0)) throw Error(ErrorCode::ZeroDensity, "density must be positive, fails at state " + std::to_string(x));
  if (std::abs(pi.dot(f) - 1.0) > 1e-8) throw Error(ErrorCode::InvalidInput, "density does not integrate to 1 against pi");
  const double ent = entropy(pi, f);
  if (ent < kMinEntropy) throw Error(ErrorCode::DegenerateDensity, "entropy below 1e-14; ratio undefined");
  return entropy_dissipation(chain, f) / ent;
}

DecayCheck check_entropy_decay(const MarkovChain& chain, double rho, const MlsOptions& options) {
  const std::size_t n = chain.size();
  std::vector<Vector> laws;
  std::vector<std::string> names;
  for (Index o : spread_states(n, options.dirac_starts)) {
    laws.push_back(dirac(chain, o));
    names.push_back("dirac " + chain.label(o));
  }
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<Index> pick(0, static_cast<Index>(n) - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t m = 0; m < options.mixture_starts && n > 1; ++m) {
    Vector law = Vector::Zero(static_cast<Index>(n));
    const int atoms = 2 + static_cast<int>(m % 3);
    for (int a = 0; a < atoms; ++a) law(pick(rng)) += unif(rng) + 1e-3;
    law /= law.sum();
    laws.push_back(std::move(law));
    names.push_back("mixture " + std::to_string(m));
  }
  const double t_scale = 1.0 / rho;
  const std::vector<double> grid = log_grid(0.01 * t_scale, 10.0 * t_scale, options.decay_points);

  struct Worst {
    double ratio = 0.0, time = 0.0;
  };
  std::vector<Worst> worst(laws.size());
  const Vector& pi = chain.stationary();
  parallel_for(laws.size(), [&](std::size_t i) {
    Trajectory traj(chain, laws[i]);
    const double ent0 = entropy(pi, traj.density());
    if (ent0 < kMinEntropy) return;
    for (double t : grid) {
      traj.advance_to(t);
      const double ent = entropy(pi, traj.density());
      const double r = ent / (ent0 * std::exp(-t * rho));
      if (r > worst[i].ratio) worst[i] = {r, t};
    }
  });
  DecayCheck dc;
  dc.starts_checked = laws.size();
  for (std::size_t i = 0; i < laws.size(); ++i) {
    if (worst[i].ratio > dc.worst_ratio) {
      dc.worst_ratio = worst[i].ratio;
      dc.worst_time = worst[i].time;
      dc.worst_start = names[i];
    }
  }
  dc.passed = dc.worst_ratio <= 1.0 + 1e-9;
  return dc;
}

MlsEstimate estimate_tmls(const MarkovChain& chain, const MlsOptions& options) {
  const std::size_t n = chain.size();
  if (n < 2) throw Error(ErrorCode::InvalidInput, "a single-state chain has no entropy to dissipate");
  std::vector<Vector> inits;
  // Near-constant density along the slowest eigenfunction: the ratio there is
  // close to twice the spectral gap, where the infimum often sits.
  {
    const SpectralGap gap = spectral_gap_full(chain);
    const Vector& phi = gap.eigenfunction;
    // phi has unit L2(pi) norm, so Ent is about a^2/2; keep it well above the
    // trial-entropy floor while a * max|phi| stays small.
    const double scale = phi.cwiseAbs().maxCoeff();
    if (scale > 0.0) inits.push_back(phi * std::min(2e-3, 0.1 / scale));
  }
  for (Index o : spread_states(n, options.dirac_starts)) {
    Vector u = Vector::Zero(static_cast<Index>(n));
    u(o) = 3.0;
    inits.push_back(std::move(u));
  }
  for (std::size_t r = 0; r < options.random_restarts; ++r) {
    std::mt19937_64 rng(options.seed + r);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = std::ldexp(0.25, static_cast<int>(r % 4));
    Vector u(static_cast<Index>(n));
    for (Index x = 0; x < u.size(); ++x) u(x) = sigma * normal(rng);
    inits.push_back(std::move(u));
  }

  std::vector<RunResult> runs(inits.size());
  parallel_for(inits.size(), [&](std::size_t i) { runs[i] = minimize_ratio(chain, inits[i], options.budget); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].ratio < runs[best].ratio) best = i;
  if (!std::isfinite(runs[best].ratio)) throw Error(ErrorCode::DegenerateDensity, "no admissible trial density");

  MlsEstimate est;
  est.seed = options.seed;
  est.restarts = inits.size();
  est.best_density = density_from_logits(chain, runs[best].u);
  est.rho_hat = mls_ratio(chain, est.best_density);
  est.t_mls_lower = 1.0 / est.rho_hat;
  est.decay_check = check_entropy_decay(chain, est.rho_hat, options);
  return est;
}

namespace {

void refine_eigenfunction(const MarkovChain& chain, double value, Vector& phi) {
  const Index n = static_cast<Index>(chain.size());
  const Vector& pi = chain.stationary();
  // I - (T + T*)/2 - mu I with T*(x,y) = pi(y) T(y,x) / pi(x).
  const double mu = value * (1.0 - 1e-7);
  std::vector<Eigen::Triplet<double, Index>> trips;
  const SparseMatrix& T = chain.transition();
  for (Index x = 0; x < n; ++x) {
    trips.emplace_back(x, x, 1.0 - mu);
    for (SparseMatrix::InnerIterator it(T, x); it; ++it) {
      const Index y = it.col();
      trips.emplace_back(x, y, -0.5 * it.value());
      trips.emplace_back(y, x, -0.5 * it.value() * pi(x) / pi(y));
    }
  }
  Eigen::SparseMatrix<double, Eigen::ColMajor, Index> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, Index>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) return;
  // Each solve shrinks other components by about 1e-7 relative to the
  // eigenvector; the starting error can be 1e30 in the sup norm.
  for (int step = 0; step < 12; ++step) {
    Vector next = lu.solve(phi);
    if (lu.info() != Eigen::Success || !next.allFinite()) return;
    next.array() -= pi.dot(next);
    const double nrm = std::sqrt(pi.dot(next.cwiseAbs2()));
    if (!(nrm > 0.0)) return;
    next /= nrm;
    if (next.dot(phi.cwiseProduct(pi)) < 0.0) next = -next;
    const double change = (next - phi).cwiseAbs().maxCoeff() / next.cwiseAbs().maxCoeff();
    phi = std::move(next);
    if (change < 1e-12) break;
  }
}

}  // namespace

SpectralGap spectral_gap_full(const MarkovChain& chain, bool strict) {
  SpectralGap out;
  out.reversible = chain.is_reversible(1e-12);
  if (strict && !out.reversible) throw Error(ErrorCode::NotReversible, "spectral gap requested on a non-reversible chain");
  const Index n = static_cast<Index>(chain.size());
  const Vector& pi = chain.stationary();
  if (n < 2) return out;
  const Vector sq = pi.cwiseSqrt();
  const Vector isq = sq.cwiseInverse();
  const SparseMatrix& T = chain.transition();
  Vector psi;
  if (static_cast<std::size_t>(n) < kDenseGapLimit) {
    DenseMatrix A = DenseMatrix::Identity(n, n) - chain.dense();
    A = sq.asDiagonal() * A * isq.asDiagonal();
    A = 0.5 * (A + A.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(A);
    out.value = es.eigenvalues()(1);
    psi = es.eigenvectors().col(1);
  } else {
    const SparseMatrix& Tt = chain.transition_transpose();
    // A = D^{1/2}(I - T)D^{-1/2}, symmetrized.
    auto apply = [&](const Vector& v) -> Vector {
      const Vector a = v - sq.cwiseProduct(T * isq.cwiseProduct(v));
      const Vector b = v - isq.cwiseProduct(Tt * sq.cwiseProduct(v));
      return 0.5 * (a + b);
    };
    auto [value, vec] = lanczos_gap(n, sq, apply);
    out.value = value;
    psi = vec;
  }
  out.eigenfunction = isq.cwiseProduct(psi);
  // Dividing by sqrt(pi) amplifies the eigensolver's absolute error wherever pi
  // is tiny (2^-n at the ends of an Ehrenfest chain). Shifted inverse
  // iteration in function space only couples neighbours, so it restores
  // pointwise accuracy.
  if (pi.minCoeff() < 1e-6 * pi.maxCoeff()) refine_eigenfunction(chain, out.value, out.eigenfunction);
  const double nrm = std::sqrt(pi.dot(out.eigenfunction.cwiseAbs2()));
  if (nrm > 0.0) out.eigenfunction /= nrm;
  return out;
}

double spectral_gap(const MarkovChain& chain, bool strict) { return spectral_gap_full(chain, strict).value; }

DiamMlsCheck check_diam_mls(const MarkovChain& chain, const MlsEstimate& estimate) {
  DiamMlsCheck c;
  c.diameter = chain.diameter();
  c.rhs = 16.0 * estimate.t_mls_lower * std::log(2.0 * chain.degree());
  c.holds = static_cast<double>(c.diameter) <= c.rhs;
  return c;
}

}  // namespace cutofflab
