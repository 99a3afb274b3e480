#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cutofflab/chain.hpp"
#include "cutofflab/graph.hpp"
#include "cutofflab/permutation.hpp"

namespace cutofflab {

/// Largest permutation size accepted by the S_n builders (7! = 5040 states).
inline constexpr int kMaxSymmetricN = 7;
/// Largest state space enumerated for spin systems.
inline constexpr std::size_t kMaxSpinStates = 20000;

/// Finite group given by its multiplication table: mul[a][b] = a*b.
struct GroupTable {
  std::vector<std::vector<Index>> mul;

  std::size_t order() const { return mul.size(); }
  Index identity() const;
  Index inverse(Index a) const;

  static GroupTable symmetric(int n);
  static GroupTable cyclic_power(int n);  // (Z_2)^n, elements as bitmasks
};

struct GroupWalk {
  MarkovChain chain;
  bool conjugation_invariant = false;
  /// A pair (x,y) with mu(xy) != mu(yx), when invariance fails.
  std::optional<std::pair<Index, Index>> counterexample;
};

/// Left random walk T(x,y) = mu(y x^{-1}).
/// Throws NotGenerating or AsymmetricSupport.
GroupWalk build_group_walk(const GroupTable& group, std::span<const double> mu,
                           std::vector<std::string> labels = {});

struct PermutationWalk {
  MarkovChain chain;
  int complexity = 0;  // non-fixed points of a class member
  std::size_t class_size = 0;
  bool conjugation_invariant = true;
};

/// Walk on S_n driven by a weighted list of permutations, without a full table.
PermutationWalk build_permutation_walk(int n, const std::vector<Permutation>& support,
                                       std::span<const double> weights);

/// Uniform measure on a conjugacy class of S_n given by its cycle type.
/// Throws TooLarge (n > 7), NotGenerating (trivial class or support
/// generating a proper subgroup) or AsymmetricClass.
PermutationWalk build_conjugacy_class_walk(int n, const std::vector<int>& cycle_type);

MarkovChain build_transpositions(int n);
MarkovChain build_hypercube(int n);
MarkovChain build_two_state();
MarkovChain build_complete_graph_walk(int n);
MarkovChain build_ehrenfest(int n);
MarkovChain build_bernoulli_laplace(int n);
MarkovChain build_multislice(const std::vector<int>& kappa);

/// Surjective map onto image indices 0..labels.size()-1.
struct StateMap {
  std::vector<Index> image;
  std::vector<std::string> labels;
};

/// Markovian projection through phi. Throws NotLumpable naming the image
/// point and the two preimage states with different fiber sums.
MarkovChain project(const MarkovChain& chain, const StateMap& phi);

// Named projection maps.
StateMap coordinate_sum_map(int n);                        // hypercube -> Ehrenfest
StateMap bernoulli_laplace_map(int n);                     // S_n -> {0..n/2}
StateMap multislice_map(const std::vector<int>& kappa);    // S_n -> words
StateMap multislice_to_bernoulli_laplace_map(const std::vector<int>& kappa);

/// Metropolis-type sampler with rates sqrt(pi(tau x)/(M pi(x)))/|G|.
struct GlauberSpec {
  std::vector<double> log_target;          // log pi up to an additive constant
  std::vector<std::vector<Index>> moves;   // each move maps state index -> state index
  std::vector<std::string> labels;
};

struct GlauberChain {
  MarkovChain chain;
  double M = 1.0;  // max over (x, tau) with tau x != x of pi(tau x)/pi(x)
};

/// Throws UnsupportedTarget (zero target mass) or NotIrreducible.
GlauberChain build_glauber(const GlauberSpec& spec);

struct SpinModel {
  MarkovChain chain;
  int max_degree = 0;  // Delta
  double M = 1.0;
  double d = 1.0;
  double condition_value = 0.0;  // Ising: Delta(1-e^{-2b})e^{2 Delta b}; Hard-core: lambda*Delta
  bool condition_holds = false;
  double M_bound = 0.0;          // e^{2 beta Delta} or 1/lambda
  double d_bound = 0.0;          // |V| e^{2 beta Delta} or |V|/lambda
};

double ising_condition(int max_degree, double beta);

/// Ising Glauber dynamics on {-1,1}^V; bit i of the state index is 1 iff spin i is +1.
SpinModel build_ising(const Graph& graph, double beta);
/// Hard-core Glauber dynamics; states are independent sets as sorted bitmasks.
SpinModel build_hardcore(const Graph& graph, double lambda);

}  // namespace cutofflab
