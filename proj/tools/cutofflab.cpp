#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cutofflab/analysis.hpp"
#include "cutofflab/error.hpp"
#include "cutofflab/suites.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cutofflab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitViolation = 2;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << text;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) std::cout << text;
  else write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cutofflab: exact analysis of finite Markov chains, curvature and cutoff"};
  app.require_subcommand(1);

  std::string spec, out, starts = "origin", suite, family, graph = "cycle";
  std::vector<double> eps{0.25, 0.75}, delta{0.1};
  std::vector<int> sizes;
  double sweep_eps = 0.25, beta = 0.1, lambda = 0.25, t_max = 0.0;
  int parts = 2;
  std::size_t points = 64;
  std::uint64_t seed = kSuiteSeed;

  auto* analyze_cmd = app.add_subcommand("analyze", "full analysis report of one model");
  analyze_cmd->add_option("--spec", spec, "model spec JSON file")->required();
  analyze_cmd->add_option("--eps", eps, "TV precisions")->delimiter(',');
  analyze_cmd->add_option("--delta", delta, "entropy levels")->delimiter(',');
  analyze_cmd->add_option("--starts", starts, "all, origin, or i,j,k");
  analyze_cmd->add_option("--points", points, "profile grid points");
  analyze_cmd->add_option("--seed", seed, "optimizer seed");
  analyze_cmd->add_option("--out", out, "output directory")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "window and criterion ratios across sizes");
  sweep_cmd->add_option("--family", family, "hypercube, transpositions, ehrenfest, bernoulli_laplace, multislice, ising, hardcore")
      ->required();
  sweep_cmd->add_option("--sizes", sizes, "sizes n")->delimiter(',')->required();
  sweep_cmd->add_option("--eps", sweep_eps, "precision in (0,1/2)");
  sweep_cmd->add_option("--graph", graph, "graph family for ising/hardcore");
  sweep_cmd->add_option("--beta", beta, "Ising inverse temperature");
  sweep_cmd->add_option("--lambda", lambda, "hard-core fugacity");
  sweep_cmd->add_option("--parts", parts, "multislice block count");
  sweep_cmd->add_option("--seed", seed, "optimizer seed");
  sweep_cmd->add_option("--out", out, "output directory")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run an inequality verification suite");
  verify_cmd->add_option("--suite", suite, "psi, chainrule, infodiff, regularity, pinsker, window, all")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--seed", seed, "random seed");
  verify_cmd->add_option("--out", out, "output file (default stdout)");

  auto* certify_cmd = app.add_subcommand("certify", "curvature certificate of one model");
  certify_cmd->add_option("--spec", spec, "model spec JSON file")->required();
  certify_cmd->add_option("--out", out, "output file (default stdout)");

  auto* constants_cmd = app.add_subcommand("constants", "modified log-Sobolev estimate and spectral gap");
  constants_cmd->add_option("--spec", spec, "model spec JSON file")->required();
  constants_cmd->add_option("--seed", seed, "optimizer seed");
  constants_cmd->add_option("--out", out, "output file (default stdout)");

  auto* profile_cmd = app.add_subcommand("profile", "TV, entropy and varentropy curves");
  profile_cmd->add_option("--spec", spec, "model spec JSON file")->required();
  profile_cmd->add_option("--starts", starts, "all, origin, or i,j,k");
  profile_cmd->add_option("--t-max", t_max, "grid end (default 1.5 t_mix(0.25))");
  profile_cmd->add_option("--points", points, "grid points");
  profile_cmd->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (analyze_cmd->parsed()) {
      const Model model = load_model(spec);
      AnalysisOptions opt;
      opt.eps = eps;
      opt.delta = delta;
      opt.starts = starts;
      opt.profile_points = points;
      opt.mls.seed = seed;
      const Analysis a = analyze(model, opt);
      const fs::path dir(out);
      write_file(dir / "report.json", a.report.dump(2) + "\n");
      write_file(dir / "profile.csv", profile_csv(a.profile));
      write_file(dir / "plot.csv", plot_csv(a.profile, a.t_mix_half));
      return a.violation ? kExitViolation : kExitOk;
    }
    if (sweep_cmd->parsed()) {
      SweepOptions opt;
      opt.family = family;
      opt.sizes = sizes;
      opt.eps = sweep_eps;
      opt.graph = graph;
      opt.beta = beta;
      opt.lambda = lambda;
      opt.parts = parts;
      opt.mls.seed = seed;
      const Sweep s = sweep(opt);
      write_file(fs::path(out) / ("sweep_" + family + ".csv"), s.csv);
      return s.violation ? kExitViolation : kExitOk;
    }
    if (verify_cmd->parsed()) {
      json arr = json::array();
      bool failed = false;
      for (const auto& r : run_suite(suite, seed)) {
        arr.push_back(to_json(r));
        failed = failed || r.label == "fail";
      }
      emit(out, arr.dump(2) + "\n");
      return failed ? kExitViolation : kExitOk;
    }
    if (certify_cmd->parsed()) {
      const Model model = load_model(spec);
      emit(out, to_json(certify_curvature(model.chain), true).dump(2) + "\n");
      return kExitOk;
    }
    if (constants_cmd->parsed()) {
      const Model model = load_model(spec);
      MlsOptions mo;
      mo.seed = seed;
      const MlsEstimate est = estimate_tmls(model.chain, mo);
      const SpectralGap gap = spectral_gap_full(model.chain);
      json j = to_json(est);
      j["spectral_gap"] = gap.value;
      if (!gap.reversible) j["spectral_gap_source"] = "additive reversibilization";
      emit(out, j.dump(2) + "\n");
      return kExitOk;
    }
    if (profile_cmd->parsed()) {
      const Model model = load_model(spec);
      const auto s = resolve_starts(model.chain, starts, model.origin);
      double hi = t_max;
      if (hi <= 0.0) hi = std::max(1.0, 1.5 * mixing_time(model.chain, s, 0.25));
      const MixingProfile p = compute_profile(model.chain, s, uniform_grid(hi, points), {}, {});
      emit(out, profile_csv(p));
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
