#include "cutofflab/suites.hpp"

#include <cmath>
#include <random>

#include "cutofflab/constants.hpp"
#include "cutofflab/curvature.hpp"
#include "cutofflab/error.hpp"
#include "cutofflab/models.hpp"
#include "cutofflab/semigroup.hpp"

namespace cutofflab {

namespace {

std::vector<Index> ends_of(const MarkovChain& chain) {
  const auto n = static_cast<Index>(chain.size());
  return n > 1 ? std::vector<Index>{0, n / 2} : std::vector<Index>{0};
}

std::vector<double> suite_grid(const MarkovChain& chain, const std::vector<Index>& starts) {
  const double t_hi = std::max(1.0, 2.0 * mixing_time(chain, starts, 0.25));
  return log_grid(0.01, t_hi, 20);
}

Vector random_mixture(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  Vector law = Vector::Zero(static_cast<Index>(n));
  for (int a = 0; a < 3; ++a) law(static_cast<Index>(pick(rng))) += unif(rng);
  return law / law.sum();
}

TmlsSource source_of(const MlsEstimate& est) {
  return est.decay_check.passed ? TmlsSource::DecayVerified : TmlsSource::CertifiedLower;
}

MlsOptions suite_mls_options(std::uint64_t seed) {
  MlsOptions o;
  o.seed = seed;
  o.random_restarts = 4;
  o.budget = 300;
  o.dirac_starts = 8;
  o.mixture_starts = 20;
  return o;
}

std::vector<InequalityReport> psi_suite() {
  InequalityReport at_zero{"psi_at_zero"}, at_one{"psi_at_one"}, monotone{"psi_monotone"}, linear{"psi_below_1_plus_r"},
      identity{"psi_identity"};
  at_zero.record("psi", "r=0", std::abs(psi(0.0) - 1.0), 0.0, 0.0);
  at_one.record("psi", "r=1", std::abs(psi(1.0) - std::exp(1.0) / 2.0), 0.0, 1e-12);
  const int points = 10000;
  double prev = psi(-30.0);
  for (int i = 1; i < points; ++i) {
    const double r = -30.0 + 60.0 * i / (points - 1);
    const double cur = psi(r);
    // strict increase: prev - cur must be negative
    monotone.record("psi", "r=" + std::to_string(r), prev, cur, -1e-300);
    prev = cur;
    if (r >= 0.0) linear.record("psi", "r=" + std::to_string(r), cur, 1.0 + r, 0.0);
    if (std::abs(r) >= 1e-4) {
      const double half_sq = r * r / 2.0;
      const double rel = std::abs(cur * (r + std::expm1(-r)) - half_sq) / half_sq;
      identity.record("psi", "r=" + std::to_string(r), rel, 0.0, 1e-12);
    }
  }
  for (double r = 0.0; r <= 30.0; r += 0.01) linear.record("psi", "r=" + std::to_string(r), psi(r), 1.0 + r, 0.0);
  std::vector<InequalityReport> out{at_zero, at_one, monotone, linear, identity};
  for (auto& r : out) r.finalize();
  return out;
}

std::vector<CatalogEntry> chain_rule_models() {
  std::vector<CatalogEntry> m;
  m.push_back({"hypercube n=4", build_hypercube(4), {0}});
  m.push_back({"transpositions n=4", build_transpositions(4), {0}});
  m.push_back({"ehrenfest n=6", build_ehrenfest(6), {0}});
  m.push_back({"ising cycle4 beta=0.1", build_ising(Graph::cycle(4), 0.1).chain, {0}});
  m.push_back({"hardcore petersen lambda=1/3", build_hardcore(Graph::petersen(), 1.0 / 3.0).chain, {0}});
  return m;
}

std::vector<InequalityReport> chain_rule_suite(std::uint64_t seed) {
  InequalityReport sandwich{"chain_rule"}, smooth{"chain_rule_smooth_limit"};
  sandwich.seed = smooth.seed = seed;
  std::uint64_t s = seed;
  for (const auto& e : chain_rule_models()) {
    for (int k = 0; k < 1000; ++k) sandwich.merge(check_chain_rule(e.chain, random_positive_function(e.chain.size(), s++), e.name));
    // f = exp(eps g) with Lip(g) = 1: both bounds approach Gamma(log f).
    Vector g = random_positive_function(e.chain.size(), s++).array().log().matrix();
    g /= lipschitz(e.chain, g);
    const double eps = 1e-6;
    const ChainRuleTerms t = chain_rule_terms(e.chain, (eps * g).array().exp().matrix());
    double worst = 0.0;
    for (Index x = 0; x < t.middle.size(); ++x) {
      if (t.middle(x) <= 0.0) continue;
      worst = std::max({worst, (t.upper(x) - t.middle(x)) / t.middle(x), (t.middle(x) - t.lower(x)) / t.middle(x)});
    }
    smooth.record(e.name, "eps=1e-6 relative gap", worst, 1e-6, 0.0);
  }
  sandwich.finalize();
  smooth.finalize();
  return {sandwich, smooth};
}

std::vector<InequalityReport> info_differential_suite(std::uint64_t seed) {
  InequalityReport curvature{"curvature_certified"}, info{"info_differential"}, poincare{"local_poincare"};
  info.seed = poincare.seed = seed;
  std::uint64_t s = seed;
  for (const auto& e : curved_catalog()) {
    const CurvatureReport cr = certify_curvature(e.chain);
    const std::size_t worst = static_cast<std::size_t>(
        std::min_element(cr.per_state_min_eig.begin(), cr.per_state_min_eig.end()) - cr.per_state_min_eig.begin());
    curvature.record(e.name, "global_min", -cr.global_min, 0.0, cr.tolerance * cr.per_state_scale[worst]);
    if (!cr.curved) continue;
    const auto grid = suite_grid(e.chain, e.starts);
    for (Index o : e.starts) {
      info.merge(check_info_differential(e.chain, cr, dirac(e.chain, o), "start " + e.chain.label(o), grid, e.name));
      for (double t : {0.1, 1.0, 5.0}) {
        std::vector<Vector> gs;
        std::mt19937_64 rng(s++);
        std::normal_distribution<double> normal;
        for (int k = 0; k < 200; ++k) {
          Vector g(static_cast<Index>(e.chain.size()));
          for (Index x = 0; x < g.size(); ++x) g(x) = normal(rng);
          gs.push_back(std::move(g));
        }
        poincare.merge(check_local_poincare(e.chain, dirac(e.chain, o), t, gs, e.name));
      }
    }
  }
  curvature.finalize();
  info.finalize();
  poincare.finalize();
  return {curvature, info, poincare};
}

std::vector<InequalityReport> regularity_suite(std::uint64_t seed) {
  InequalityReport heat{"heat_kernel_regularity"}, combined{"combined_lipschitz"}, diam{"diam_mls"};
  heat.seed = combined.seed = diam.seed = seed;
  combined.uses_tmls = true;
  combined.source = TmlsSource::DecayVerified;
  std::mt19937_64 rng(seed);
  for (const auto& e : curved_catalog()) {
    const auto grid = suite_grid(e.chain, e.starts);
    std::vector<std::pair<std::string, Vector>> laws;
    for (Index o : e.starts) laws.emplace_back("start " + e.chain.label(o), dirac(e.chain, o));
    for (int k = 0; k < 2; ++k) laws.emplace_back("mixture " + std::to_string(k), random_mixture(e.chain.size(), rng));
    for (const auto& [name, law] : laws) heat.merge(check_heat_kernel_regularity(e.chain, law, name, grid, e.name));

    const MlsEstimate est = estimate_tmls(e.chain, suite_mls_options(seed));
    const DiamMlsCheck dc = check_diam_mls(e.chain, est);
    diam.record(e.name, "diam <= 16 t_mls_lower log 2d", dc.diameter, dc.rhs, 0.0);
    if (e.chain.degree() >= 2.0) {
      for (Index o : e.starts)
        combined.merge(check_combined_lipschitz(e.chain, dirac(e.chain, o), "start " + e.chain.label(o), grid,
                                                est.t_mls_lower, source_of(est), e.name));
    }
  }
  heat.finalize();
  combined.finalize();
  diam.finalize();
  // diam <= 16 t_mls log 2d with a lower estimate of t_mls: a pass is valid a fortiori, a failure proves nothing.
  diam.label = diam.pass ? "verified" : "inconclusive";
  return {heat, combined, diam};
}

std::vector<InequalityReport> pinsker_suite(std::uint64_t seed) {
  InequalityReport fwd{"pinsker"}, rev{"reverse_pinsker"};
  fwd.seed = rev.seed = seed;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (int k = 0; k < 1000; ++k) {
    Vector pi(20), q(20);
    for (Index x = 0; x < 20; ++x) {
      pi(x) = expo(rng);
      q(x) = expo(rng);
    }
    pi /= pi.sum();
    q /= q.sum();
    const Vector f = q.cwiseQuotient(pi);
    const std::string name = "random density " + std::to_string(k);
    fwd.merge(pinsker(pi, f, name));
    rev.merge(reverse_pinsker(pi, f, name));
  }
  for (const auto& e : curved_catalog()) {
    const auto grid = suite_grid(e.chain, e.starts);
    for (Index o : e.starts) {
      Trajectory traj(e.chain, dirac(e.chain, o));
      for (double t : grid) {
        traj.advance_to(t);
        const Vector f = traj.density();
        fwd.merge(pinsker(e.chain.stationary(), f, e.name));
        rev.merge(reverse_pinsker(e.chain.stationary(), f, e.name));
      }
    }
  }
  fwd.finalize();
  rev.finalize();
  return {fwd, rev};
}

std::vector<InequalityReport> window_suite(std::uint64_t seed) {
  InequalityReport window{"window_bound"}, tmix{"mixing_time_bound"};
  window.seed = tmix.seed = seed;
  window.uses_tmls = tmix.uses_tmls = true;
  window.source = tmix.source = TmlsSource::DecayVerified;
  std::vector<CatalogEntry> models;
  models.push_back({"hypercube n=8", build_hypercube(8), {0}});
  models.push_back({"transpositions n=5", build_transpositions(5), {0}});
  models.push_back({"ehrenfest n=16", build_ehrenfest(16), {0}});
  models.push_back({"ehrenfest n=32", build_ehrenfest(32), {0}});
  models.push_back({"bernoulli-laplace n=6", build_bernoulli_laplace(6), {0}});
  models.push_back({"ising cycle4 beta=0.1", build_ising(Graph::cycle(4), 0.1).chain, {0}});
  models.push_back({"hardcore petersen lambda=1/3", build_hardcore(Graph::petersen(), 1.0 / 3.0).chain, {0}});
  for (const auto& e : models) {
    const MlsEstimate est = estimate_tmls(e.chain, suite_mls_options(seed));
    window.merge(check_window(e.chain, e.starts, 0.25, est.t_mls_lower, source_of(est), e.name).report);
    const auto grid = uniform_grid(2.0 * mixing_time(e.chain, e.starts, 0.1), 20);
    for (double eps : {0.1, 0.25}) {
      tmix.merge(check_mixing_time_bound(e.chain, dirac(e.chain, e.starts.front()), "start " + e.chain.label(e.starts.front()),
                                         grid, est.t_mls_lower, source_of(est), eps, e.name));
    }
  }
  window.finalize();
  tmix.finalize();
  return {window, tmix};
}

}  // namespace

std::vector<CatalogEntry> curved_catalog() {
  std::vector<CatalogEntry> c;
  for (int n = 2; n <= 8; ++n) c.push_back({"hypercube n=" + std::to_string(n), build_hypercube(n), {0}});
  for (int n = 3; n <= 5; ++n) c.push_back({"transpositions n=" + std::to_string(n), build_transpositions(n), {0}});
  for (int n = 2; n <= 8; ++n) {
    MarkovChain ch = project(build_hypercube(n), coordinate_sum_map(n));
    auto starts = ends_of(ch);
    c.push_back({"ehrenfest n=" + std::to_string(n) + " (projected)", std::move(ch), std::move(starts)});
  }
  {
    const MarkovChain s4 = build_transpositions(4);
    MarkovChain bl = project(s4, bernoulli_laplace_map(4));
    auto starts = ends_of(bl);
    c.push_back({"bernoulli-laplace n=4 (projected)", std::move(bl), std::move(starts)});
    for (const std::vector<int>& kappa : {std::vector<int>{2, 2}, {1, 3}, {1, 1, 2}}) {
      MarkovChain ms = project(s4, multislice_map(kappa));
      auto starts2 = ends_of(ms);
      std::string name = "multislice (";
      for (std::size_t i = 0; i < kappa.size(); ++i) name += (i ? "," : "") + std::to_string(kappa[i]);
      c.push_back({name + ") (projected)", std::move(ms), std::move(starts2)});
    }
    MarkovChain ms22 = build_multislice({2, 2});
    MarkovChain bl2 = project(ms22, multislice_to_bernoulli_laplace_map({2, 2}));
    c.push_back({"bernoulli-laplace n=4 (from multislice)", std::move(bl2), {0, 1}});
  }
  {
    const MarkovChain s3 = build_transpositions(3);
    c.push_back({"multislice (1,2) (projected)", project(s3, multislice_map({1, 2})), {0, 1}});
    const MarkovChain s5 = build_transpositions(5);
    for (const std::vector<int>& kappa : {std::vector<int>{2, 3}, {1, 2, 2}}) {
      MarkovChain ms = project(s5, multislice_map(kappa));
      auto starts = ends_of(ms);
      std::string name = "multislice (";
      for (std::size_t i = 0; i < kappa.size(); ++i) name += (i ? "," : "") + std::to_string(kappa[i]);
      c.push_back({name + ") (projected)", std::move(ms), std::move(starts)});
    }
  }
  {
    MarkovChain a = build_ising(Graph::cycle(4), 0.1).chain;
    auto sa = ends_of(a);
    c.push_back({"ising cycle4 beta=0.1", std::move(a), std::move(sa)});
    MarkovChain b = build_ising(Graph::path(8), 0.1).chain;
    auto sb = ends_of(b);
    c.push_back({"ising path8 beta=0.1", std::move(b), std::move(sb)});
  }
  struct Hc {
    const char* name;
    Graph g;
    double lambda;
  };
  const Hc hardcore[] = {
      {"hardcore edge lambda=1/2", Graph::path(2), 0.5},
      {"hardcore triangle lambda=1/3", Graph::complete(3), 1.0 / 3.0},
      {"hardcore star3 lambda=1/3", Graph::star(3), 1.0 / 3.0},
      {"hardcore path10 lambda=1/2", Graph::path(10), 0.5},
      {"hardcore cycle6 lambda=1/2", Graph::cycle(6), 0.5},
      {"hardcore grid2x3 lambda=1/3", Graph::grid(2, 3), 1.0 / 3.0},
      {"hardcore petersen lambda=1/3", Graph::petersen(), 1.0 / 3.0},
      {"hardcore empty4 lambda=1/2", Graph::empty(4), 0.5},
  };
  for (const auto& h : hardcore) {
    MarkovChain ch = build_hardcore(h.g, h.lambda).chain;
    const auto n = static_cast<Index>(ch.size());
    c.push_back({h.name, std::move(ch), {0, n - 1}});
  }
  return c;
}

MarkovChain random_sparse_chain(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0;; ++attempt) {
    DenseMatrix W = DenseMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unif(rng) < 0.4) {
          W(i, j) = std::pow(unif(rng), 4) + 1e-3;
          W(j, i) = std::pow(unif(rng), 4) + 1e-3;
        }
    for (int i = 0; i < n; ++i) W(i, i) = 0.2 * unif(rng);
    bool empty_row = false;
    for (int i = 0; i < n; ++i) {
      const double s = W.row(i).sum();
      if (s <= 0.0) empty_row = true;
      else W.row(i) /= s;
    }
    if (empty_row) continue;
    try {
      return build_chain(W);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotIrreducible || attempt > 1000) throw;
    }
  }
}

Vector random_positive_function(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector f(static_cast<Index>(n));
  for (Index x = 0; x < f.size(); ++x) f(x) = std::exp(normal(rng));
  return f;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"psi", "chainrule", "infodiff", "regularity", "pinsker", "window", "all"};
  return names;
}

std::vector<InequalityReport> run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "psi") return psi_suite();
  if (name == "chainrule") return chain_rule_suite(seed);
  if (name == "infodiff") return info_differential_suite(seed);
  if (name == "regularity") return regularity_suite(seed);
  if (name == "pinsker") return pinsker_suite(seed);
  if (name == "window") return window_suite(seed);
  if (name == "all") {
    std::vector<InequalityReport> all;
    for (const auto& n : suite_names()) {
      if (n == "all") continue;
      auto part = run_suite(n, seed);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw Error(ErrorCode::InvalidInput, "unknown suite \"" + name + "\"");
}

}  // namespace cutofflab
