#include "cutofflab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cutofflab/error.hpp"
#include "cutofflab/semigroup.hpp"

namespace cutofflab {

namespace {

constexpr std::size_t kMaxFailures = 8;

std::string at_time(double t) {
  std::ostringstream os;
  os.precision(6);
  os << "t=" << t;
  return os.str();
}

// e^l - 1 - l, accurate for small l.
double expm1_minus_id(double l) {
  if (std::abs(l) < 0.1) {
    double term = l * l / 2.0, sum = 0.0;
    for (int k = 3; std::abs(term) > 1e-18 * std::abs(sum) || k < 5; ++k) {
      sum += term;
      term *= l / k;
    }
    return sum;
  }
  return std::expm1(l) - l;
}

}  // namespace

double psi(double r) {
  if (std::abs(r) < 1.0) {
    // (r + e^{-r} - 1) / r^2 = sum_{k>=0} (-r)^k / (k+2)!
    double term = 0.5, sum = 0.0;
    for (int k = 0; k < 40; ++k) {
      sum += term;
      term *= -r / (k + 3);
      if (std::abs(term) < 1e-19) break;
    }
    return 1.0 / (2.0 * sum);
  }
  const double denom = r + std::expm1(-r);
  if (std::isinf(denom)) return 0.0;
  return r * r / (2.0 * denom);
}

std::string_view to_string(TmlsSource source) {
  switch (source) {
    case TmlsSource::CertifiedLower: return "certified-lower";
    case TmlsSource::Heuristic: return "heuristic";
    case TmlsSource::DecayVerified: return "decay-verified";
  }
  return "unknown";
}

void InequalityReport::record(const std::string& model, const std::string& where, double lhs, double rhs, double tol) {
  ++instances;
  const double v = lhs - rhs;
  const double excess = v - tol;
  max_violation = std::max(max_violation, v);
  Witness w{model, where, lhs, rhs};
  if (witnesses.empty() || excess > max_excess) {
    if (witnesses.empty()) witnesses.push_back(w);
    else witnesses.front() = w;
  }
  max_excess = std::max(max_excess, excess);
  if (excess > 0.0 && witnesses.size() <= kMaxFailures) witnesses.push_back(std::move(w));
}

void InequalityReport::merge(const InequalityReport& other) {
  if (other.instances == 0) return;
  if (instances == 0 || other.max_excess > max_excess) {
    if (witnesses.empty()) witnesses.push_back(other.witnesses.front());
    else witnesses.front() = other.witnesses.front();
  }
  for (std::size_t i = 1; i < other.witnesses.size() && witnesses.size() <= kMaxFailures; ++i)
    witnesses.push_back(other.witnesses[i]);
  instances += other.instances;
  max_violation = std::max(max_violation, other.max_violation);
  max_excess = std::max(max_excess, other.max_excess);
  uses_tmls = uses_tmls || other.uses_tmls;
  if (other.uses_tmls && other.source != TmlsSource::DecayVerified) source = other.source;
}

void InequalityReport::finalize() {
  pass = instances == 0 || max_excess <= 0.0;
  if (!uses_tmls) {
    label = pass ? "verified" : "fail";
  } else if (source == TmlsSource::DecayVerified) {
    label = pass ? "verified" : "fail";
  } else {
    label = pass ? "heuristic-pass" : "inconclusive";
  }
}

ChainRuleTerms chain_rule_terms(const MarkovChain& chain, const Vector& f) {
  for (Index x = 0; x < f.size(); ++x)
    if (!(f(x) > 0.0)) throw Error(ErrorCode::ZeroDensity, "chain rule needs a positive function");
  const Vector logf = f.array().log().matrix();
  ChainRuleTerms out;
  out.r = lipschitz(chain, logf);
  const Index n = f.size();
  Vector bracket = Vector::Zero(n);
  out.middle = Vector::Zero(n);
  const SparseMatrix& T = chain.transition();
  for (Index x = 0; x < n; ++x) {
    for (SparseMatrix::InnerIterator it(T, x); it; ++it) {
      if (it.col() == x) continue;
      const double l = logf(it.col()) - logf(x);
      bracket(x) += it.value() * expm1_minus_id(l);
      out.middle(x) += 0.5 * it.value() * l * l;
    }
  }
  out.lower = psi(-out.r) * bracket;
  out.upper = psi(out.r) * bracket;
  return out;
}

InequalityReport check_chain_rule(const MarkovChain& chain, const Vector& f, const std::string& model) {
  const ChainRuleTerms terms = chain_rule_terms(chain, f);
  InequalityReport rep;
  rep.name = "chain_rule";
  const double scale = std::max({1.0, terms.upper.cwiseAbs().maxCoeff(), terms.middle.cwiseAbs().maxCoeff()});
  const double tol = 1e-10 * scale;
  for (Index x = 0; x < f.size(); ++x) {
    const std::string where = "state " + chain.label(x);
    rep.record(model, where + " lower", terms.lower(x), terms.middle(x), tol);
    rep.record(model, where + " upper", terms.middle(x), terms.upper(x), tol);
  }
  rep.finalize();
  return rep;
}

double entropy_derivative(const MarkovChain& chain, const Vector& initial_law, double t) {
  const Vector& pi = chain.stationary();
  const double h = 1e-4 * t;
  auto ent_of = [&](const Vector& law) { return entropy(pi, law.cwiseQuotient(pi)); };
  Trajectory traj(chain, initial_law);
  double e[5];
  const double offsets[5] = {-h, -h / 2, 0.0, h / 2, h};
  for (int k = 0; k < 5; ++k) {
    traj.advance_to(t + offsets[k]);
    e[k] = ent_of(traj.law());
  }
  const double d_full = (e[4] - e[0]) / (2.0 * h);
  const double d_half = (e[3] - e[1]) / h;
  if (std::abs(d_full - d_half) > 1e-6 * std::max(std::abs(d_half), 1e-300)) return (4.0 * d_half - d_full) / 3.0;
  return d_full;
}

InequalityReport check_info_differential(const MarkovChain& chain, const CurvatureReport& curvature,
                                         const Vector& initial_law, const std::string& start,
                                         const std::vector<double>& times, const std::string& model) {
  if (!curvature.curved)
    throw Error(ErrorCode::NotCertified, "information-differential check needs a nonnegatively curved chain");
  InequalityReport rep;
  rep.name = "info_differential";
  const Vector& pi = chain.stationary();
  for (double t : times) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidInput, "information-differential grid needs t > 0");
    const Vector f = evolve(chain, initial_law, t).f;
    const double lhs = entropy_derivative(chain, initial_law, t);
    const double varent = varentropy(pi, f);
    double rhs = 0.0;
    if (varent > 0.0) rhs = -varent / (2.0 * t * (1.0 + lip_log_density(chain, f)));
    rep.record(model, start + " " + at_time(t), lhs, rhs, 1e-5 * std::max(1.0, std::abs(lhs)));
  }
  rep.finalize();
  return rep;
}

double heat_kernel_bound(const MarkovChain& chain, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidInput, "heat-kernel bound needs t > 0");
  const double diam = chain.diameter();
  return 3.0 + 3.0 * std::log(chain.degree()) + 3.0 * std::log(std::max(1.0, diam / (4.0 * t)));
}

InequalityReport check_heat_kernel_regularity(const MarkovChain& chain, const Vector& initial_law,
                                              const std::string& start, const std::vector<double>& times,
                                              const std::string& model) {
  InequalityReport rep;
  rep.name = "heat_kernel_regularity";
  Trajectory traj(chain, initial_law);
  for (double t : times) {
    traj.advance_to(t);
    const double lip = lip_log_density(chain, traj.density());
    rep.record(model, start + " " + at_time(t), lip, heat_kernel_bound(chain, t), 1e-9);
  }
  rep.finalize();
  return rep;
}

InequalityReport check_local_poincare(const MarkovChain& chain, const Vector& initial_law, double t,
                                      const std::vector<Vector>& functions, const std::string& model) {
  InequalityReport rep;
  rep.name = "local_poincare";
  const Vector law = evolve_law(chain, initial_law, t);
  for (std::size_t k = 0; k < functions.size(); ++k) {
    const Vector& g = functions[k];
    const double mean = law.dot(g);
    const double var = law.dot((g.array() - mean).square().matrix());
    const double rhs = 2.0 * t * law.dot(gamma(chain, g));
    rep.record(model, "function " + std::to_string(k) + " " + at_time(t), var, rhs, 1e-10 * std::max(1.0, rhs));
  }
  rep.finalize();
  return rep;
}

InequalityReport pinsker(const Vector& pi, const Vector& f, const std::string& model) {
  InequalityReport rep;
  rep.name = "pinsker";
  const double tv = total_variation(pi, f);
  const double ent = entropy(pi, f);
  rep.record(model, "density", 2.0 * tv * tv, ent, 1e-12 * std::max(1.0, ent));
  rep.finalize();
  return rep;
}

InequalityReport reverse_pinsker(const Vector& pi, const Vector& f, const std::string& model) {
  const double tv = total_variation(pi, f);
  if (tv >= 1.0) throw Error(ErrorCode::TotalVariationOne, "reverse Pinsker needs TV < 1");
  InequalityReport rep;
  rep.name = "reverse_pinsker";
  const double rhs = (1.0 + std::sqrt(varentropy(pi, f))) / (1.0 - tv);
  rep.record(model, "density", entropy(pi, f), rhs, 1e-12 * std::max(1.0, rhs));
  rep.finalize();
  return rep;
}

double mixing_time_bound(double t, double ent_t, double t_mls, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidInput, "eps must lie in (0,1)");
  return t + t_mls * std::log(std::max(1.0, ent_t / (2.0 * eps * eps)));
}

InequalityReport check_mixing_time_bound(const MarkovChain& chain, const Vector& initial_law, const std::string& start,
                                         const std::vector<double>& times, double t_mls, TmlsSource source,
                                         double eps, const std::string& model) {
  InequalityReport rep;
  rep.name = "mixing_time_bound";
  rep.uses_tmls = true;
  rep.source = source;
  const double exact = mixing_time_from(chain, initial_law, eps);
  Trajectory traj(chain, initial_law);
  for (double t : times) {
    traj.advance_to(t);
    const double ent = entropy(chain.stationary(), traj.density());
    const double bound = mixing_time_bound(t, ent, t_mls, eps);
    rep.record(model, start + " " + at_time(t), exact, bound, 1e-6 * std::max(1.0, bound));
  }
  rep.finalize();
  return rep;
}

double window_bound(double t_mls, double d, double eps, double tmix_one_minus_eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw Error(ErrorCode::InvalidInput, "window bound needs eps in (0, 1/2)");
  if (!(d > std::exp(1.0))) throw Error(ErrorCode::NotApplicable, "log log d undefined for d <= e");
  return t_mls * (std::log(120.0 / std::pow(eps, 4)) + std::log(std::log(d)) +
                  std::log(2.0 + tmix_one_minus_eps / t_mls));
}

WindowCheck check_window(const MarkovChain& chain, const std::vector<Index>& starts, double eps, double t_mls,
                         TmlsSource source, const std::string& model) {
  WindowCheck wc;
  wc.tmix_eps = mixing_time(chain, starts, eps);
  wc.tmix_one_minus_eps = mixing_time(chain, starts, 1.0 - eps);
  wc.window = wc.tmix_eps - wc.tmix_one_minus_eps;
  wc.bound = window_bound(t_mls, chain.degree(), eps, wc.tmix_one_minus_eps);
  wc.report.name = "window_bound";
  wc.report.uses_tmls = true;
  wc.report.source = source;
  std::ostringstream where;
  where << "eps=" << eps;
  wc.report.record(model, where.str(), wc.window, wc.bound, 1e-6 * std::max(1.0, wc.bound));
  wc.report.finalize();
  return wc;
}

double combined_lipschitz_bound(double d, double t, double t_mls) {
  if (d < 2.0) throw Error(ErrorCode::NotApplicable, "combined Lipschitz bound needs d >= 2");
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidInput, "combined Lipschitz bound needs t > 0");
  return 15.0 * (std::log(d) + t_mls / t);
}

InequalityReport check_combined_lipschitz(const MarkovChain& chain, const Vector& initial_law,
                                          const std::string& start, const std::vector<double>& times, double t_mls,
                                          TmlsSource source, const std::string& model) {
  InequalityReport rep;
  rep.name = "combined_lipschitz";
  rep.uses_tmls = true;
  rep.source = source;
  Trajectory traj(chain, initial_law);
  for (double t : times) {
    traj.advance_to(t);
    const double lhs = 1.0 + lip_log_density(chain, traj.density());
    rep.record(model, start + " " + at_time(t), lhs, combined_lipschitz_bound(chain.degree(), t, t_mls), 1e-9);
  }
  rep.finalize();
  return rep;
}

}  // namespace cutofflab
