#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cutofflab/chain.hpp"
#include "cutofflab/inequalities.hpp"

namespace cutofflab {

/// A desk-scale model with the Dirac starts used by the verification suites.
struct CatalogEntry {
  std::string name;
  MarkovChain chain;
  std::vector<Index> starts;
};

/// Models expected to be nonnegatively curved: hypercubes n = 2..8,
/// transposition walks n = 3..5, their projections (Ehrenfest,
/// Bernoulli-Laplace, multislices), Ising on the 4-cycle and 8-path under
/// the high-temperature condition, hard-core models with lambda * Delta <= 1.
std::vector<CatalogEntry> curved_catalog();

/// Random row-stochastic matrix with symmetric but sparse support and
/// heavy-tailed weights. Chains of this kind are often not curved.
MarkovChain random_sparse_chain(int n, std::uint64_t seed);
/// Seed for which random_sparse_chain(6, seed) is certified Violated.
inline constexpr std::uint64_t kViolatedSeed = 0;

/// Random positive function exp(g) with g standard normal per state.
Vector random_positive_function(std::size_t n, std::uint64_t seed);

inline constexpr std::uint64_t kSuiteSeed = 20240601;

/// Named verification suites: psi, chainrule, infodiff, regularity, pinsker,
/// window, or all.
std::vector<InequalityReport> run_suite(const std::string& name, std::uint64_t seed = kSuiteSeed);
const std::vector<std::string>& suite_names();

}  // namespace cutofflab
