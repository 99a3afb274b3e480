#include <doctest.h>

#include <cmath>
#include <map>

#include "cutofflab/error.hpp"
#include "cutofflab/models.hpp"
#include "cutofflab/semigroup.hpp"
#include "oracles.hpp"

using namespace cutofflab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidInput;
}

DenseMatrix map_matrix(const StateMap& phi) {
  DenseMatrix K = DenseMatrix::Zero(static_cast<Eigen::Index>(phi.image.size()), static_cast<Eigen::Index>(phi.labels.size()));
  for (std::size_t x = 0; x < phi.image.size(); ++x) K(static_cast<Eigen::Index>(x), phi.image[x]) = 1.0;
  return K;
}

// P_t K = K Pbar_t, checked with dense exponentials on both sides.
double intertwining_defect(const MarkovChain& chain, const StateMap& phi, const MarkovChain& image, double t) {
  DenseMatrix K = map_matrix(phi);
  return (oracle::heat_kernel(chain, t) * K - K * oracle::heat_kernel(image, t)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("(Z_2)^n walk on coordinate vectors is the hypercube") {
  const int n = 4;
  GroupTable g = GroupTable::cyclic_power(n);
  std::vector<double> mu(g.order(), 0.0);
  for (int i = 0; i < n; ++i) mu[std::size_t{1} << i] = 1.0 / n;
  GroupWalk w = build_group_walk(g, mu);
  CHECK(w.conjugation_invariant);
  CHECK((w.chain.dense() - build_hypercube(n).dense()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("transpositions on S_4 from the multiplication table") {
  GroupTable g = GroupTable::symmetric(4);
  std::vector<double> mu(g.order(), 0.0);
  for (const auto& p : conjugacy_class(4, {2})) mu[static_cast<std::size_t>(rank(p))] = 1.0 / 6;
  GroupWalk w = build_group_walk(g, mu);
  CHECK(w.conjugation_invariant);
  CHECK_FALSE(w.counterexample.has_value());
  MarkovChain direct = build_transpositions(4);
  CHECK((w.chain.dense() - direct.dense()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(direct.size() == 24);
  CHECK(direct.degree() == doctest::Approx(6));
  // Cayley distance to the identity is n minus the number of cycles.
  CHECK(direct.diameter() == 3);
}

TEST_CASE("mixed-class measure on S_3 is not conjugation invariant") {
  GroupTable g = GroupTable::symmetric(3);
  std::vector<double> mu(g.order(), 0.0);
  mu[static_cast<std::size_t>(rank(transposition(3, 0, 1)))] = 0.5;
  mu[static_cast<std::size_t>(rank(transposition(3, 1, 2)))] = 0.5;
  GroupWalk w = build_group_walk(g, mu);
  CHECK_FALSE(w.conjugation_invariant);
  REQUIRE(w.counterexample.has_value());
  auto [x, y] = *w.counterexample;
  CHECK(mu[static_cast<std::size_t>(g.mul[x][y])] != mu[static_cast<std::size_t>(g.mul[y][x])]);
}

TEST_CASE("group walk rejects a non-generating support") {
  GroupTable g = GroupTable::cyclic_power(3);
  std::vector<double> mu(g.order(), 0.0);
  mu[1] = 0.5;
  mu[2] = 0.5;
  CHECK(code_of([&] { build_group_walk(g, mu); }) == ErrorCode::NotGenerating);
}

TEST_CASE("3-cycles on S_5 walk on the alternating group") {
  PermutationWalk w = build_conjugacy_class_walk(5, {3});
  CHECK(w.complexity == 3);
  CHECK(w.class_size == 20);
  CHECK(w.chain.size() == 60);
  CHECK(w.chain.degree() == doctest::Approx(20));
  CHECK(w.chain.diameter() == oracle::bfs_diameter(w.chain.dense()));
}

TEST_CASE("conjugacy class walk errors") {
  CHECK(code_of([] { build_conjugacy_class_walk(4, {}); }) == ErrorCode::NotGenerating);
  CHECK(code_of([] { build_conjugacy_class_walk(8, {2}); }) == ErrorCode::TooLarge);
}

TEST_CASE("Ehrenfest projection equals the birth-death rates") {
  for (int n = 2; n <= 10; ++n) {
    MarkovChain cube = build_hypercube(n);
    StateMap phi = coordinate_sum_map(n);
    MarkovChain proj = project(cube, phi);
    REQUIRE(proj.size() == static_cast<std::size_t>(n + 1));
    DenseMatrix P = proj.dense();
    for (int k = 0; k <= n; ++k) {
      for (int j = 0; j <= n; ++j) {
        double expected = j == k + 1 ? static_cast<double>(n - k) / n : j == k - 1 ? static_cast<double>(k) / n : 0.0;
        CHECK(std::abs(P(k, j) - expected) <= 1e-15);
      }
      CHECK(proj.stationary()(k) == doctest::Approx(std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) / std::pow(2.0, n)));
    }
    CHECK((P - build_ehrenfest(n).dense()).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("projections intertwine the semigroups") {
  {
    MarkovChain cube = build_hypercube(5);
    StateMap phi = coordinate_sum_map(5);
    MarkovChain e = project(cube, phi);
    for (double t : {0.1, 1.0, 4.0}) CHECK(intertwining_defect(cube, phi, e, t) < 1e-10);
  }
  {
    MarkovChain s4 = build_transpositions(4);
    StateMap phi = bernoulli_laplace_map(4);
    MarkovChain bl = project(s4, phi);
    CHECK((bl.dense() - build_bernoulli_laplace(4).dense()).cwiseAbs().maxCoeff() < 1e-15);
    for (double t : {0.1, 1.0, 4.0}) CHECK(intertwining_defect(s4, phi, bl, t) < 1e-10);
  }
  {
    MarkovChain s4 = build_transpositions(4);
    StateMap phi = multislice_map({1, 1, 2});
    MarkovChain ms = project(s4, phi);
    CHECK(ms.size() == 12);
    CHECK((ms.dense() - build_multislice({1, 1, 2}).dense()).cwiseAbs().maxCoeff() < 1e-15);
    for (double t : {0.1, 1.0, 4.0}) CHECK(intertwining_defect(s4, phi, ms, t) < 1e-10);
  }
  {
    MarkovChain ms = build_multislice({2, 2});
    StateMap phi = multislice_to_bernoulli_laplace_map({2, 2});
    MarkovChain bl = project(ms, phi);
    CHECK((bl.dense() - build_bernoulli_laplace(4).dense()).cwiseAbs().maxCoeff() < 1e-15);
    for (double t : {0.1, 1.0, 4.0}) CHECK(intertwining_defect(ms, phi, bl, t) < 1e-10);
  }
}

TEST_CASE("non-lumpable map is rejected") {
  MarkovChain path = build_ehrenfest(3);
  StateMap phi{{0, 1, 0, 0}, {"a", "b"}};
  CHECK(code_of([&] { project(path, phi); }) == ErrorCode::NotLumpable);
}

TEST_CASE("Ising at beta = 0 is the hypercube") {
  for (int n : {3, 5}) {
    SpinModel m = build_ising(Graph::cycle(n), 0.0);
    CHECK(m.M == 1.0);
    CHECK((m.chain.dense() - build_hypercube(n).dense()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("Ising Glauber dynamics targets the Gibbs measure") {
  const double beta = 0.3;
  Graph g = Graph::cycle(4);
  SpinModel m = build_ising(g, beta);
  Vector w(16);
  for (int x = 0; x < 16; ++x) {
    double e = 0;
    for (auto [i, j] : g.edges()) e += ((x >> i & 1) ? 1 : -1) * ((x >> j & 1) ? 1 : -1);
    w(x) = std::exp(beta * e);
  }
  w /= w.sum();
  CHECK((m.chain.stationary() - w).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((oracle::stationary(m.chain.dense()) - w).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.chain.is_reversible());
  CHECK(m.max_degree == 2);
  CHECK(m.M == doctest::Approx(std::exp(2 * beta * 2)));
  CHECK(m.d == doctest::Approx(4 * std::exp(2 * beta * 2)));
  CHECK(m.d <= m.d_bound * (1 + 1e-12));
  CHECK(m.condition_value == doctest::Approx(2 * (1 - std::exp(-2 * beta)) * std::exp(4 * beta)));
  CHECK(build_ising(g, 0.1).condition_holds);
  CHECK_FALSE(build_ising(g, 1.0).condition_holds);
}

TEST_CASE("hard-core model on a path") {
  const double lambda = 0.5;
  SpinModel m = build_hardcore(Graph::path(3), lambda);
  // Independent sets of P_3: {}, {0}, {1}, {2}, {0,2}.
  REQUIRE(m.chain.size() == 5);
  Vector w(5);
  for (Index x = 0; x < 5; ++x) {
    int k = 0;
    for (char c : m.chain.label(x)) k += c == '1';
    w(x) = std::pow(lambda, k);
  }
  w /= w.sum();
  CHECK((m.chain.stationary() - w).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(m.M == doctest::Approx(1 / lambda));
  CHECK(m.max_degree == 2);
  CHECK(m.condition_holds);
  CHECK(m.d <= m.d_bound * (1 + 1e-12));
  CHECK_FALSE(build_hardcore(Graph::path(3), 0.9).condition_holds);
}

TEST_CASE("Glauber rejects zero target mass") {
  GlauberSpec spec;
  spec.log_target = {0.0, -INFINITY};
  spec.moves = {{1, 0}};
  CHECK(code_of([&] { build_glauber(spec); }) == ErrorCode::UnsupportedTarget);
}

TEST_CASE("complete graph walk") {
  MarkovChain c = build_complete_graph_walk(5);
  CHECK(c.diameter() == 1);
  CHECK(c.degree() == doctest::Approx(4));
}
