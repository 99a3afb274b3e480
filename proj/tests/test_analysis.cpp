#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cutofflab/analysis.hpp"
#include "cutofflab/error.hpp"

using namespace cutofflab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("cutofflab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CUTOFFLAB_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("model specs build the expected chains") {
  Model m = build_model(nlohmann::json::parse(R"({"model":"projection","inner":{"model":"hypercube","n":5},"map":"coordinate_sum"})"));
  CHECK(m.chain.size() == 6);
  Model lazy = build_model(nlohmann::json::parse(R"({"model":"lazy","inner":{"model":"two_state"},"theta":0.5})"));
  CHECK(lazy.chain.rate(0, 0) == doctest::Approx(0.5));
  Model mat = build_model(nlohmann::json::parse(R"({"model":"matrix","rows":[[0.5,0.5],[0.25,0.75]],"labels":["a","b"]})"));
  CHECK(mat.chain.stationary()(0) == doctest::Approx(1.0 / 3));
  CHECK(mat.chain.label(1) == "b");
  Model ising = build_model(nlohmann::json::parse(R"({"model":"ising","graph":{"family":"cycle","n":4},"beta":0.1})"));
  CHECK(ising.info.at("condition_holds").get<bool>());
  CHECK_THROWS_AS(build_model(nlohmann::json::parse(R"({"model":"nonsense"})")), Error);
  CHECK_THROWS_AS(build_model(nlohmann::json::parse(R"({"model":"hypercube"})")), Error);
}

TEST_CASE("start designations") {
  Model m = build_model(nlohmann::json::parse(R"({"model":"hypercube","n":3})"));
  CHECK(resolve_starts(m.chain, "all", m.origin).size() == 8);
  CHECK(resolve_starts(m.chain, "origin", m.origin) == std::vector<Index>{m.origin});
  CHECK(resolve_starts(m.chain, "1,5", m.origin) == std::vector<Index>{1, 5});
  CHECK_THROWS_AS(resolve_starts(m.chain, "9", m.origin), Error);
  CHECK_THROWS_AS(resolve_starts(m.chain, "x", m.origin), Error);
}

TEST_CASE("analysis report of a small hypercube") {
  Model m = build_model(nlohmann::json::parse(R"({"model":"hypercube","n":4})"));
  Analysis a = analyze(m);
  CHECK_FALSE(a.violation);
  CHECK(a.report.at("chain").at("N") == 16);
  CHECK(a.report.at("curvature").at("verdict") == "nonneg");
  CHECK(a.t_mix_half == doctest::Approx(mixing_time(m.chain, a.starts, 0.5)));
  for (const auto& r : a.report.at("inequalities")) CHECK(r.at("label") != "fail");

  std::istringstream plot(plot_csv(a.profile, a.t_mix_half));
  std::string line;
  std::getline(plot, line);
  CHECK(line == "t_over_tmix_half,tv");
  std::getline(plot, line);
  CHECK(line.rfind("0,", 0) == 0);

  std::istringstream prof(profile_csv(a.profile));
  std::getline(prof, line);
  CHECK(line == "t,start,tv,ent,varent,lip_log_f");
}

TEST_CASE("sweep rows and trend flags") {
  SweepOptions opt;
  opt.family = "hypercube";
  opt.sizes = {4, 6, 8};
  Sweep s = sweep(opt);
  REQUIRE(s.rows.size() == 3);
  CHECK(s.window_ratio_decreasing);
  CHECK(s.window_bounds_hold);
  for (const auto& r : s.rows) CHECK(r.window_ratio == doctest::Approx(r.tmix_eps / r.tmix_one_minus_eps));
  CHECK(s.csv.rfind("n,N,d,diam,rho_hat,t_mls_lower,tmix_eps,tmix_1meps,window_ratio,criterion_ratio,window_bound,window_label\n", 0) == 0);
}

TEST_CASE("command line exit codes and determinism") {
  fs::path dir = scratch("cli");
  {
    std::ofstream(dir / "model.json") << R"({"model":"transpositions","n":4})";
    std::ofstream(dir / "broken.json") << R"({"model":"hypercube",)";
    std::ofstream(dir / "bad.json") << R"({"model":"matrix","rows":[[0.5,0.4],[0.5,0.5]]})";
  }
  const std::string spec = (dir / "model.json").string();
  CHECK(run_cli("analyze --spec " + spec + " --out " + (dir / "a").string()) == 0);
  CHECK(run_cli("analyze --spec " + spec + " --out " + (dir / "b").string()) == 0);
  for (const char* f : {"report.json", "profile.csv", "plot.csv"}) {
    CHECK(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  CHECK(run_cli("analyze --spec " + (dir / "broken.json").string() + " --out " + (dir / "c").string()) == 1);
  CHECK(run_cli("certify --spec " + (dir / "bad.json").string()) == 1);
  CHECK(run_cli("verify --suite nosuch") == 1);
  CHECK(run_cli("sweep --family hypercube --sizes 3,4 --out " + (dir / "s").string()) == 0);
  CHECK(fs::exists(dir / "s" / "sweep_hypercube.csv"));
  fs::remove_all(dir);
}
