#include "cutofflab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "cutofflab/error.hpp"
#include "cutofflab/parallel.hpp"

namespace cutofflab {

namespace {

using nlohmann::json;

std::string fmt12(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

TmlsSource source_of(const MlsEstimate& est) {
  return est.decay_check.passed ? TmlsSource::DecayVerified : TmlsSource::CertifiedLower;
}

json chain_stats(const MarkovChain& chain) {
  const Vector& pi = chain.stationary();
  return {{"N", chain.size()},
          {"d", chain.degree()},
          {"diam", chain.diameter()},
          {"pi_min", pi.minCoeff()},
          {"pi_max", pi.maxCoeff()},
          {"reversible", chain.is_reversible()}};
}

bool has_failure(const json& reports) {
  for (const auto& r : reports)
    if (r.at("label") == "fail") return true;
  return false;
}

}  // namespace

json to_json(const InequalityReport& r) {
  json w = json::array();
  for (const auto& x : r.witnesses) w.push_back({{"model", x.model}, {"where", x.where}, {"lhs", x.lhs}, {"rhs", x.rhs}});
  json j = {{"name", r.name},
            {"instances", r.instances},
            {"max_violation", r.instances ? json(r.max_violation) : json(nullptr)},
            {"pass", r.pass},
            {"label", r.label},
            {"witnesses", w}};
  if (r.uses_tmls) j["tmls_source"] = std::string(to_string(r.source));
  if (r.seed) j["seed"] = r.seed;
  return j;
}

json to_json(const CurvatureReport& r, bool per_state) {
  json j = {{"verdict", r.curved ? "nonneg" : "violated"}, {"global_min", r.global_min}, {"tolerance", r.tolerance}};
  if (!r.curved) {
    j["violating_state"] = r.violating_state;
    j["witness"] = std::vector<double>(r.witness.data(), r.witness.data() + r.witness.size());
  }
  if (per_state) j["per_state_min"] = r.per_state_min_eig;
  return j;
}

json to_json(const DecayCheck& c) {
  return {{"passed", c.passed},
          {"starts_checked", c.starts_checked},
          {"worst_ratio", c.worst_ratio},
          {"worst_time", c.worst_time},
          {"worst_start", c.worst_start}};
}

json to_json(const MlsEstimate& e) {
  return {{"rho_hat", e.rho_hat},
          {"t_mls_lower", e.t_mls_lower},
          {"restarts", e.restarts},
          {"seed", e.seed},
          {"decay_check", to_json(e.decay_check)}};
}

std::vector<Index> resolve_starts(const MarkovChain& chain, const std::string& designation, Index origin) {
  const auto n = static_cast<Index>(chain.size());
  if (designation == "origin") return {origin};
  std::vector<Index> out;
  if (designation == "all") {
    for (Index x = 0; x < n; ++x) out.push_back(x);
    return out;
  }
  std::stringstream ss(designation);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0 || v >= n) throw Error(ErrorCode::InvalidInput, "start index out of range: " + item);
      out.push_back(static_cast<Index>(v));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidInput, "start set must be all, origin, or indices: " + designation);
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, "start set S is empty");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Analysis analyze(const Model& model, const AnalysisOptions& options) {
  const MarkovChain& chain = model.chain;
  Analysis a;
  a.starts = resolve_starts(chain, options.starts, model.origin);
  for (double e : options.eps)
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::InvalidInput, "eps values must lie in (0,1)");
  for (double d : options.delta)
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidInput, "delta values must be positive");

  json& rep = a.report;
  rep["spec"] = model.spec;
  rep["model"] = model.kind;
  if (!model.info.empty()) rep["model_info"] = model.info;
  rep["chain"] = chain_stats(chain);
  json starts = json::array();
  for (Index o : a.starts) starts.push_back(chain.label(o));
  rep["starts"] = starts;

  std::optional<CurvatureReport> curvature;
  if (chain.size() <= kCurvatureCap) {
    curvature = certify_curvature(chain);
    rep["curvature"] = to_json(*curvature, false);
  } else {
    rep["curvature"] = {{"verdict", "skipped"}, {"reason", "state space above the certification cap"}};
  }

  const bool single = chain.size() < 2;
  MlsEstimate est;
  if (!single) {
    est = estimate_tmls(chain, options.mls);
    json mls = to_json(est);
    const SpectralGap gap = spectral_gap_full(chain);
    mls["spectral_gap"] = gap.value;
    mls["spectral_gap_source"] = gap.reversible ? "reversible" : "additive reversibilization";
    const DiamMlsCheck dm = check_diam_mls(chain, est);
    mls["diam_mls"] = {{"diam", dm.diameter}, {"rhs", dm.rhs}, {"verdict", dm.holds ? "holds" : "inconclusive"}};
    if (!chain.is_reversible()) mls["note"] = "non-reversible chain: decay-rate form of the constant";
    rep["mls"] = mls;
  }

  // Mixing profile on a grid reaching past the slowest requested threshold.
  double t_hi = 1.0;
  for (double e : options.eps) t_hi = std::max(t_hi, mixing_time(chain, a.starts, e));
  a.t_mix_half = mixing_time(chain, a.starts, 0.5);
  t_hi = std::max(t_hi, a.t_mix_half);
  a.profile = compute_profile(chain, a.starts, uniform_grid(1.5 * t_hi, options.profile_points), options.eps,
                              options.delta);
  json mixing;
  json tm = json::array(), te = json::array();
  for (std::size_t i = 0; i < options.eps.size(); ++i) tm.push_back({{"eps", options.eps[i]}, {"t_mix", a.profile.t_mix_S[i]}});
  for (std::size_t i = 0; i < options.delta.size(); ++i)
    te.push_back({{"delta", options.delta[i]}, {"t_ent", a.profile.t_ent_S[i]}});
  mixing["t_mix"] = tm;
  mixing["t_ent"] = te;
  mixing["t_mix_half"] = a.t_mix_half;

  const double d = chain.degree();
  const bool loglog_ok = d > std::exp(1.0);
  json crit = json::array();
  for (std::size_t i = 0; i < options.eps.size(); ++i) {
    json c = {{"eps", options.eps[i]}};
    if (!loglog_ok || single) {
      c["ratio"] = "NotApplicable";
    } else {
      c["ratio"] = a.profile.t_mix_S[i] / (est.t_mls_lower * std::log(std::log(d)));
      c["direction"] = "upper estimate (uses t_mls_lower)";
    }
    crit.push_back(c);
  }
  mixing["criterion_ratio"] = crit;
  json windows = json::array();
  for (std::size_t i = 0; i < options.eps.size(); ++i) {
    if (!(options.eps[i] < 0.5)) continue;
    for (std::size_t j = 0; j < options.eps.size(); ++j) {
      if (std::abs(options.eps[j] - (1.0 - options.eps[i])) > 1e-12) continue;
      const double lo = a.profile.t_mix_S[j];
      windows.push_back({{"eps", options.eps[i]},
                         {"t_mix_eps", a.profile.t_mix_S[i]},
                         {"t_mix_one_minus_eps", lo},
                         {"ratio", lo > 0.0 ? json(a.profile.t_mix_S[i] / lo) : json("undefined")}});
    }
  }
  mixing["window_ratio"] = windows;
  rep["mixing"] = mixing;

  json reports = json::array();
  if (options.inequalities && !single) {
    std::vector<double> grid;
    for (double t : a.profile.times)
      if (t > 0.0) grid.push_back(t);
    const std::vector<double> log_times = log_grid(0.01, std::max(1.0, 1.5 * t_hi), 20);
    InequalityReport heat("heat_kernel_regularity"), combined("combined_lipschitz"), info("info_differential"),
        fwd("pinsker"), rev("reverse_pinsker"), bound("mixing_time_bound");
    combined.uses_tmls = bound.uses_tmls = true;
    combined.source = bound.source = source_of(est);
    const Vector& pi = chain.stationary();
    for (Index o : a.starts) {
      const Vector law = dirac(chain, o);
      const std::string name = "start " + chain.label(o);
      heat.merge(check_heat_kernel_regularity(chain, law, name, grid, model.kind));
      if (d >= 2.0) combined.merge(check_combined_lipschitz(chain, law, name, grid, est.t_mls_lower, source_of(est), model.kind));
      if (curvature && curvature->curved)
        info.merge(check_info_differential(chain, *curvature, law, name, log_times, model.kind));
      for (double e : options.eps)
        bound.merge(check_mixing_time_bound(chain, law, name, grid, est.t_mls_lower, source_of(est), e, model.kind));
      Trajectory traj(chain, law);
      for (double t : grid) {
        traj.advance_to(t);
        const Vector f = traj.density();
        fwd.merge(pinsker(pi, f, model.kind));
        if (total_variation(pi, f) < 1.0) rev.merge(reverse_pinsker(pi, f, model.kind));
      }
    }
    for (auto* r : {&heat, &combined, &info, &fwd, &rev, &bound}) {
      r->finalize();
      if (r->instances) reports.push_back(to_json(*r));
    }
    if (loglog_ok && curvature && curvature->curved) {
      for (double e : options.eps) {
        if (!(e < 0.5)) continue;
        reports.push_back(to_json(check_window(chain, a.starts, e, est.t_mls_lower, source_of(est), model.kind).report));
      }
    }
  }
  rep["inequalities"] = reports;
  a.violation = has_failure(reports);
  return a;
}

std::string profile_csv(const MixingProfile& p) {
  std::string out = "t,start,tv,ent,varent,lip_log_f\n";
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    for (const auto& s : p.starts) {
      out += fmt12(p.times[i]) + "," + s.start + "," + fmt12(s.tv[i]) + "," + fmt12(s.ent[i]) + "," +
             fmt12(s.varent[i]) + "," + fmt12(s.lip_log_f[i]) + "\n";
    }
  }
  return out;
}

std::string plot_csv(const MixingProfile& p, double t_mix_half) {
  std::string out = "t_over_tmix_half,tv\n";
  const auto tv = p.tv_S();
  if (t_mix_half <= 0.0) {
    // Already below 1/2 at time 0; the normalized curve degenerates to one point.
    out += "0," + fmt12(tv.empty() ? 0.0 : tv.front()) + "\n";
    return out;
  }
  for (std::size_t i = 0; i < p.times.size(); ++i) out += fmt12(p.times[i] / t_mix_half) + "," + fmt12(tv[i]) + "\n";
  return out;
}

json sweep_instance_spec(const SweepOptions& o, int n) {
  const std::string& f = o.family;
  if (f == "hypercube" || f == "transpositions" || f == "ehrenfest" || f == "bernoulli_laplace")
    return {{"model", f}, {"n", n}};
  if (f == "multislice") {
    if (o.parts < 1 || o.parts > n) throw Error(ErrorCode::InvalidInput, "multislice parts must lie in [1, n]");
    std::vector<int> kappa;
    for (int i = 0; i < o.parts; ++i) kappa.push_back(n / o.parts + (i < n % o.parts ? 1 : 0));
    return {{"model", "multislice"}, {"kappa", kappa}};
  }
  if (f == "ising") return {{"model", "ising"}, {"graph", {{"family", o.graph}, {"n", n}}}, {"beta", o.beta}};
  if (f == "hardcore") return {{"model", "hardcore"}, {"graph", {{"family", o.graph}, {"n", n}}}, {"lambda", o.lambda}};
  throw Error(ErrorCode::InvalidInput, "unknown sweep family \"" + f + "\"");
}

Sweep sweep(const SweepOptions& o) {
  if (!(o.eps > 0.0 && o.eps < 0.5)) throw Error(ErrorCode::InvalidInput, "sweep eps must lie in (0, 1/2)");
  Sweep s;
  s.rows.resize(o.sizes.size());
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  parallel_for(o.sizes.size(), [&](std::size_t i) {
    SweepRow& row = s.rows[i];
    row.n = o.sizes[i];
    row.criterion_ratio = row.window_bound = nan;
    Model m;
    try {
      m = build_model(sweep_instance_spec(o, row.n));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooLarge) throw;
      row.note = std::string("skipped: ") + e.what();
      return;
    }
    const MarkovChain& c = m.chain;
    const std::vector<Index> starts{m.origin};
    row.N = c.size();
    row.d = c.degree();
    row.diam = c.diameter();
    const MlsEstimate est = estimate_tmls(c, o.mls);
    row.rho_hat = est.rho_hat;
    row.t_mls_lower = est.t_mls_lower;
    row.tmix_eps = mixing_time(c, starts, o.eps);
    row.tmix_one_minus_eps = mixing_time(c, starts, 1.0 - o.eps);
    row.window_ratio = row.tmix_eps / row.tmix_one_minus_eps;
    if (row.d > std::exp(1.0)) {
      row.criterion_ratio = row.tmix_eps / (est.t_mls_lower * std::log(std::log(row.d)));
      const double bound = window_bound(est.t_mls_lower, row.d, o.eps, row.tmix_one_minus_eps);
      row.window_bound = bound;
      InequalityReport r("window_bound");
      r.uses_tmls = true;
      r.source = source_of(est);
      r.record(m.kind, "n=" + std::to_string(row.n), row.tmix_eps - row.tmix_one_minus_eps, bound,
               1e-6 * std::max(1.0, bound));
      r.finalize();
      row.window_label = r.label;
    } else {
      row.window_label = "not-applicable";
    }
  });

  std::string& csv = s.csv;
  csv = "n,N,d,diam,rho_hat,t_mls_lower,tmix_eps,tmix_1meps,window_ratio,criterion_ratio,window_bound,window_label\n";
  std::vector<double> ratios;
  for (const auto& r : s.rows) {
    if (!r.note.empty()) {
      csv += "# n=" + std::to_string(r.n) + " " + r.note + "\n";
      continue;
    }
    csv += std::to_string(r.n) + "," + std::to_string(r.N) + "," + fmt12(r.d) + "," + std::to_string(r.diam) + "," +
           fmt12(r.rho_hat) + "," + fmt12(r.t_mls_lower) + "," + fmt12(r.tmix_eps) + "," +
           fmt12(r.tmix_one_minus_eps) + "," + fmt12(r.window_ratio) + "," +
           (std::isnan(r.criterion_ratio) ? std::string("NotApplicable") : fmt12(r.criterion_ratio)) + "," +
           (std::isnan(r.window_bound) ? std::string("NotApplicable") : fmt12(r.window_bound)) + "," +
           r.window_label + "\n";
    ratios.push_back(r.window_ratio);
    if (r.window_label == "fail" || r.window_label == "inconclusive") s.window_bounds_hold = false;
    if (r.window_label == "fail") s.violation = true;
  }
  s.window_ratio_decreasing = ratios.size() >= 2;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (!(ratios[i] < ratios[i - 1])) s.window_ratio_decreasing = false;
  csv += "# family=" + o.family + " eps=" + fmt12(o.eps) + "\n";
  csv += std::string("# window_ratio strictly decreasing in n: ") + (s.window_ratio_decreasing ? "yes" : "no") + "\n";
  if (!ratios.empty()) {
    csv += "# window_ratio first=" + fmt12(ratios.front()) + " last=" + fmt12(ratios.back()) +
           " relative drop=" + fmt12(1.0 - ratios.back() / ratios.front()) + "\n";
  }
  csv += std::string("# window bound holds at every size: ") + (s.window_bounds_hold ? "yes" : "no") + "\n";
  return s;
}

}  // namespace cutofflab
