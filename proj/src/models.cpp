#include "cutofflab/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "cutofflab/error.hpp"

namespace cutofflab {

namespace {

constexpr double kLumpTolerance = 1e-12;

std::string bits_label(std::uint64_t mask, int n, char one = '1', char zero = '0') {
  std::string s(static_cast<std::size_t>(n), zero);
  for (int i = 0; i < n; ++i) {
    if (mask >> i & 1U) s[static_cast<std::size_t>(i)] = one;
  }
  return s;
}

SparseMatrix from_triplets(Index n, std::vector<Triplet>& trips) {
  SparseMatrix T(n, n);
  T.setFromTriplets(trips.begin(), trips.end());
  T.makeCompressed();
  return T;
}

double binom2(int n) { return 0.5 * n * (n - 1); }

// Words of the multislice in lexicographic order; symbols 0..L-1.
std::vector<std::vector<int>> multislice_words(const std::vector<int>& kappa) {
  std::vector<int> word;
  for (std::size_t l = 0; l < kappa.size(); ++l) {
    if (kappa[l] <= 0) throw Error(ErrorCode::InvalidInput, "multislice kappa entries must be positive");
    word.insert(word.end(), static_cast<std::size_t>(kappa[l]), static_cast<int>(l));
  }
  std::vector<std::vector<int>> words;
  do {
    words.push_back(word);
  } while (std::next_permutation(word.begin(), word.end()));
  return words;
}

std::string word_label(const std::vector<int>& w) {
  std::string s;
  for (int c : w) s += std::to_string(c + 1);
  return s;
}

}  // namespace

Index GroupTable::identity() const {
  const std::size_t n = order();
  for (std::size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = mul[e][a] == static_cast<Index>(a) && mul[a][e] == static_cast<Index>(a);
    if (ok) return static_cast<Index>(e);
  }
  throw Error(ErrorCode::InvalidInput, "multiplication table has no identity");
}

Index GroupTable::inverse(Index a) const {
  const Index e = identity();
  for (std::size_t b = 0; b < order(); ++b) {
    if (mul[static_cast<std::size_t>(a)][b] == e) return static_cast<Index>(b);
  }
  throw Error(ErrorCode::InvalidInput, "element " + std::to_string(a) + " has no inverse");
}

GroupTable GroupTable::symmetric(int n) {
  if (n < 1 || n > 6) throw Error(ErrorCode::TooLarge, "full multiplication tables are limited to S_n with n <= 6");
  const auto perms = all_permutations(n);
  GroupTable g;
  g.mul.assign(perms.size(), std::vector<Index>(perms.size()));
  for (std::size_t a = 0; a < perms.size(); ++a)
    for (std::size_t b = 0; b < perms.size(); ++b) g.mul[a][b] = rank(compose(perms[a], perms[b]));
  return g;
}

GroupTable GroupTable::cyclic_power(int n) {
  if (n < 1 || n > 10) throw Error(ErrorCode::TooLarge, "full multiplication tables are limited to (Z_2)^n with n <= 10");
  const std::size_t size = std::size_t{1} << n;
  GroupTable g;
  g.mul.assign(size, std::vector<Index>(size));
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = 0; b < size; ++b) g.mul[a][b] = static_cast<Index>(a ^ b);
  return g;
}

GroupWalk build_group_walk(const GroupTable& group, std::span<const double> mu, std::vector<std::string> labels) {
  const std::size_t n = group.order();
  if (mu.size() != n) throw Error(ErrorCode::InvalidInput, "increment law size differs from group order");
  double total = 0.0;
  for (double m : mu) {
    if (!(m >= 0.0)) throw Error(ErrorCode::InvalidInput, "increment law has a negative entry");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-10) throw Error(ErrorCode::InvalidInput, "increment law does not sum to 1");

  std::vector<Index> support;
  for (std::size_t s = 0; s < n; ++s)
    if (mu[s] > 0.0) support.push_back(static_cast<Index>(s));
  for (Index s : support) {
    const Index inv = group.inverse(s);
    if (!(mu[static_cast<std::size_t>(inv)] > 0.0)) {
      throw Error(ErrorCode::AsymmetricSupport,
                  "support contains " + std::to_string(s) + " but not its inverse " + std::to_string(inv));
    }
  }

  // Generation: the Cayley-graph orbit of the identity must be the whole group.
  std::vector<char> reached(n, 0);
  std::vector<Index> stack{group.identity()};
  reached[static_cast<std::size_t>(stack.back())] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Index x = stack.back();
    stack.pop_back();
    for (Index s : support) {
      const Index y = group.mul[static_cast<std::size_t>(s)][static_cast<std::size_t>(x)];
      if (!reached[static_cast<std::size_t>(y)]) {
        reached[static_cast<std::size_t>(y)] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  if (count != n) {
    throw Error(ErrorCode::NotGenerating,
                "support generates a subgroup of order " + std::to_string(count) + " < " + std::to_string(n));
  }

  std::vector<Triplet> trips;
  for (std::size_t x = 0; x < n; ++x)
    for (Index s : support) trips.emplace_back(static_cast<Index>(x), group.mul[static_cast<std::size_t>(s)][x], mu[static_cast<std::size_t>(s)]);

  GroupWalk walk{build_chain(from_triplets(static_cast<Index>(n), trips), std::move(labels),
                             Vector::Constant(static_cast<Index>(n), 1.0 / static_cast<double>(n))),
                 true, std::nullopt};
  for (std::size_t x = 0; x < n && walk.conjugation_invariant; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double a = mu[static_cast<std::size_t>(group.mul[x][y])];
      const double b = mu[static_cast<std::size_t>(group.mul[y][x])];
      if (std::abs(a - b) > 1e-15) {
        walk.conjugation_invariant = false;
        walk.counterexample = std::make_pair(static_cast<Index>(x), static_cast<Index>(y));
        break;
      }
    }
  }
  return walk;
}

PermutationWalk build_permutation_walk(int n, const std::vector<Permutation>& support, std::span<const double> weights) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "permutation size must be positive");
  if (n > kMaxSymmetricN) throw Error(ErrorCode::TooLarge, "S_n walks are capped at n = 7 (5040 states)");
  if (support.size() != weights.size() || support.empty()) {
    throw Error(ErrorCode::InvalidInput, "support and weights must be nonempty and of equal length");
  }
  std::map<Permutation, double> mu;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (static_cast<int>(support[i].size()) != n) throw Error(ErrorCode::InvalidInput, "support element of wrong size");
    if (!(weights[i] > 0.0)) throw Error(ErrorCode::InvalidInput, "support weights must be positive");
    mu[support[i]] += weights[i];
  }
  double total = 0.0;
  for (const auto& [p, w] : mu) total += w;
  if (std::abs(total - 1.0) > 1e-10) throw Error(ErrorCode::InvalidInput, "increment law does not sum to 1");
  for (const auto& [p, w] : mu) {
    if (!mu.count(inverse(p))) {
      throw Error(ErrorCode::AsymmetricSupport, "support contains " + to_string(p) + " but not its inverse");
    }
  }

  // States: the subgroup generated by the support, i.e. the orbit of the identity.
  std::vector<char> reached(static_cast<std::size_t>(factorial(n)), 0);
  std::vector<Permutation> stack{identity_permutation(n)};
  reached[static_cast<std::size_t>(rank(stack.back()))] = 1;
  while (!stack.empty()) {
    Permutation x = std::move(stack.back());
    stack.pop_back();
    for (const auto& [s, w] : mu) {
      Permutation y = compose(s, x);
      const auto r = static_cast<std::size_t>(rank(y));
      if (!reached[r]) {
        reached[r] = 1;
        stack.push_back(std::move(y));
      }
    }
  }
  std::vector<Index> index_of(reached.size(), -1);
  std::vector<Permutation> states;
  for (std::size_t r = 0; r < reached.size(); ++r) {
    if (reached[r]) {
      index_of[r] = static_cast<Index>(states.size());
      states.push_back(unrank(n, static_cast<std::int64_t>(r)));
    }
  }
  if (states.size() == 1) throw Error(ErrorCode::NotGenerating, "support generates the trivial group");

  std::vector<Triplet> trips;
  trips.reserve(states.size() * mu.size());
  std::vector<std::string> labels;
  labels.reserve(states.size());
  for (std::size_t x = 0; x < states.size(); ++x) {
    labels.push_back(to_string(states[x]));
    for (const auto& [s, w] : mu) {
      trips.emplace_back(static_cast<Index>(x), index_of[static_cast<std::size_t>(rank(compose(s, states[x])))], w);
    }
  }
  const auto N = static_cast<Index>(states.size());
  PermutationWalk walk{build_chain(from_triplets(N, trips), std::move(labels),
                                   Vector::Constant(N, 1.0 / static_cast<double>(N))),
                       0, mu.size(), true};
  for (const auto& [s, w] : mu) walk.complexity = std::max(walk.complexity, non_fixed_points(s));

  // mu(xy) = mu(yx) for all x,y  <=>  mu is invariant under conjugation by the
  // adjacent transpositions, which generate S_n.
  for (int i = 0; i + 1 < n && walk.conjugation_invariant; ++i) {
    const Permutation g = transposition(n, i, i + 1);
    for (const auto& [s, w] : mu) {
      auto it = mu.find(compose(compose(g, s), g));
      if (it == mu.end() || std::abs(it->second - w) > 1e-15) {
        walk.conjugation_invariant = false;
        break;
      }
    }
  }
  return walk;
}

PermutationWalk build_conjugacy_class_walk(int n, const std::vector<int>& type) {
  if (n > kMaxSymmetricN) throw Error(ErrorCode::TooLarge, "S_n walks are capped at n = 7 (5040 states)");
  if (n < 2) throw Error(ErrorCode::NotGenerating, "S_1 has only the trivial class");
  const auto cls = conjugacy_class(n, type);
  if (cls.empty() || non_fixed_points(cls.front()) == 0) {
    throw Error(ErrorCode::NotGenerating, "the identity class is trivial");
  }
  for (const auto& p : cls) {
    if (std::find(cls.begin(), cls.end(), inverse(p)) == cls.end()) {
      throw Error(ErrorCode::AsymmetricClass, "class is not closed under inversion");
    }
  }
  std::vector<double> w(cls.size(), 1.0 / static_cast<double>(cls.size()));
  auto walk = build_permutation_walk(n, cls, w);
  walk.complexity = non_fixed_points(cls.front());
  return walk;
}

MarkovChain build_transpositions(int n) { return build_conjugacy_class_walk(n, {2}).chain; }

MarkovChain build_hypercube(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "hypercube dimension must be positive");
  if (n > 16) throw Error(ErrorCode::TooLarge, "hypercube dimension is capped at 16");
  const Index N = Index{1} << n;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(N * n));
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(N));
  for (Index x = 0; x < N; ++x) {
    labels.push_back(bits_label(static_cast<std::uint64_t>(x), n));
    for (int i = 0; i < n; ++i) trips.emplace_back(x, x ^ (Index{1} << i), 1.0 / n);
  }
  return build_chain(from_triplets(N, trips), std::move(labels), Vector::Constant(N, 1.0 / static_cast<double>(N)));
}

MarkovChain build_two_state() {
  DenseMatrix T(2, 2);
  T << 0.0, 1.0, 1.0, 0.0;
  return build_chain(T);
}

MarkovChain build_complete_graph_walk(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidInput, "complete-graph walk needs at least 2 states");
  std::vector<Triplet> trips;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      if (x != y) trips.emplace_back(x, y, 1.0 / (n - 1));
  return build_chain(from_triplets(n, trips), {}, Vector::Constant(n, 1.0 / n));
}

MarkovChain build_ehrenfest(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "Ehrenfest model needs n >= 1");
  std::vector<Triplet> trips;
  Vector pi(n + 1);
  for (int k = 0; k <= n; ++k) {
    if (k < n) trips.emplace_back(k, k + 1, static_cast<double>(n - k) / n);
    if (k > 0) trips.emplace_back(k, k - 1, static_cast<double>(k) / n);
    pi(k) = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
  }
  return build_chain(from_triplets(n + 1, trips), {}, pi);
}

MarkovChain build_bernoulli_laplace(int n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidInput, "Bernoulli-Laplace needs an even n >= 2");
  const int m = n / 2;
  const double pairs = binom2(n);
  std::vector<Triplet> trips;
  Vector pi(m + 1);
  for (int k = 0; k <= m; ++k) {
    const double down = static_cast<double>(k) * k / pairs;
    const double up = static_cast<double>(m - k) * (m - k) / pairs;
    if (k > 0) trips.emplace_back(k, k - 1, down);
    if (k < m) trips.emplace_back(k, k + 1, up);
    trips.emplace_back(k, k, 1.0 - down - up);
    const double c = std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0));
    pi(k) = c * c;
  }
  return build_chain(from_triplets(m + 1, trips), {}, pi);
}

MarkovChain build_multislice(const std::vector<int>& kappa) {
  if (kappa.empty()) throw Error(ErrorCode::InvalidInput, "multislice needs at least one symbol");
  const auto words = multislice_words(kappa);
  if (words.size() > kMaxSpinStates) throw Error(ErrorCode::TooLarge, "multislice has too many words");
  std::map<std::vector<int>, Index> index;
  for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = static_cast<Index>(i);
  const int n = static_cast<int>(words.front().size());
  if (n < 2) throw Error(ErrorCode::InvalidInput, "multislice needs words of length >= 2");
  const double rate = 1.0 / binom2(n);
  std::vector<Triplet> trips;
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < words.size(); ++x) {
    labels.push_back(word_label(words[x]));
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (words[x][static_cast<std::size_t>(i)] == words[x][static_cast<std::size_t>(j)]) continue;
        auto w = words[x];
        std::swap(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)]);
        trips.emplace_back(static_cast<Index>(x), index.at(w), rate);
        moved += rate;
      }
    }
    trips.emplace_back(static_cast<Index>(x), static_cast<Index>(x), 1.0 - moved);
  }
  const auto N = static_cast<Index>(words.size());
  return build_chain(from_triplets(N, trips), std::move(labels), Vector::Constant(N, 1.0 / static_cast<double>(N)));
}

MarkovChain project(const MarkovChain& chain, const StateMap& phi) {
  const Index n = static_cast<Index>(chain.size());
  const Index m = static_cast<Index>(phi.labels.size());
  if (static_cast<Index>(phi.image.size()) != n) throw Error(ErrorCode::InvalidInput, "map size differs from state count");
  std::vector<Index> representative(static_cast<std::size_t>(m), -1);
  for (Index x = 0; x < n; ++x) {
    const Index y = phi.image[static_cast<std::size_t>(x)];
    if (y < 0 || y >= m) throw Error(ErrorCode::InvalidInput, "map value out of range at state " + std::to_string(x));
    if (representative[static_cast<std::size_t>(y)] < 0) representative[static_cast<std::size_t>(y)] = x;
  }
  for (Index y = 0; y < m; ++y) {
    if (representative[static_cast<std::size_t>(y)] < 0) {
      throw Error(ErrorCode::InvalidInput, "map is not surjective: image point " + phi.labels[static_cast<std::size_t>(y)] + " missed");
    }
  }

  const auto& T = chain.transition();
  auto fiber_sums = [&](Index x) {
    std::map<Index, double> row;
    for (SparseMatrix::InnerIterator it(T, x); it; ++it) row[phi.image[static_cast<std::size_t>(it.col())]] += it.value();
    return row;
  };

  std::vector<std::map<Index, double>> rows(static_cast<std::size_t>(m));
  for (Index y = 0; y < m; ++y) rows[static_cast<std::size_t>(y)] = fiber_sums(representative[static_cast<std::size_t>(y)]);
  for (Index x = 0; x < n; ++x) {
    const Index a = phi.image[static_cast<std::size_t>(x)];
    const auto& ref = rows[static_cast<std::size_t>(a)];
    const auto row = fiber_sums(x);
    std::map<Index, double> diff = ref;
    for (const auto& [y, v] : row) diff[y] -= v;
    for (const auto& [y, v] : diff) {
      if (std::abs(v) > kLumpTolerance) {
        throw Error(ErrorCode::NotLumpable, "fiber sums into image point " + phi.labels[static_cast<std::size_t>(y)] +
                                                " differ between states " +
                                                std::to_string(representative[static_cast<std::size_t>(a)]) + " and " +
                                                std::to_string(x));
      }
    }
  }

  std::vector<Triplet> trips;
  for (Index a = 0; a < m; ++a)
    for (const auto& [b, v] : rows[static_cast<std::size_t>(a)])
      if (v != 0.0) trips.emplace_back(a, b, v);
  Vector pushed = Vector::Zero(m);
  for (Index x = 0; x < n; ++x) pushed(phi.image[static_cast<std::size_t>(x)]) += chain.stationary()(x);
  return build_chain(from_triplets(m, trips), phi.labels, pushed);
}

StateMap coordinate_sum_map(int n) {
  StateMap phi;
  const Index N = Index{1} << n;
  for (Index x = 0; x < N; ++x) phi.image.push_back(std::popcount(static_cast<std::uint64_t>(x)));
  for (int k = 0; k <= n; ++k) phi.labels.push_back(std::to_string(k));
  return phi;
}

StateMap bernoulli_laplace_map(int n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidInput, "Bernoulli-Laplace map needs an even n");
  if (n > kMaxSymmetricN) throw Error(ErrorCode::TooLarge, "S_n maps are capped at n = 7");
  const int m = n / 2;
  StateMap phi;
  for (const auto& s : all_permutations(n)) {
    Index count = 0;
    for (int i = 0; i < m; ++i) count += s[static_cast<std::size_t>(i)] < m;
    phi.image.push_back(count);
  }
  for (int k = 0; k <= m; ++k) phi.labels.push_back(std::to_string(k));
  return phi;
}

StateMap multislice_map(const std::vector<int>& kappa) {
  const auto words = multislice_words(kappa);
  const int n = static_cast<int>(words.front().size());
  if (n > kMaxSymmetricN) throw Error(ErrorCode::TooLarge, "S_n maps are capped at n = 7");
  std::map<std::vector<int>, Index> index;
  StateMap phi;
  for (std::size_t i = 0; i < words.size(); ++i) {
    index[words[i]] = static_cast<Index>(i);
    phi.labels.push_back(word_label(words[i]));
  }
  std::vector<int> symbol_of_value;
  for (std::size_t l = 0; l < kappa.size(); ++l)
    symbol_of_value.insert(symbol_of_value.end(), static_cast<std::size_t>(kappa[l]), static_cast<int>(l));
  for (const auto& s : all_permutations(n)) {
    std::vector<int> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = symbol_of_value[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])];
    phi.image.push_back(index.at(w));
  }
  return phi;
}

StateMap multislice_to_bernoulli_laplace_map(const std::vector<int>& kappa) {
  if (kappa.size() != 2 || kappa[0] != kappa[1]) {
    throw Error(ErrorCode::InvalidInput, "Bernoulli-Laplace reduction needs kappa = (m, m)");
  }
  const int m = kappa[0];
  StateMap phi;
  for (const auto& w : multislice_words(kappa)) {
    Index count = 0;
    for (int i = 0; i < m; ++i) count += w[static_cast<std::size_t>(i)] == 0;
    phi.image.push_back(count);
  }
  for (int k = 0; k <= m; ++k) phi.labels.push_back(std::to_string(k));
  return phi;
}

GlauberChain build_glauber(const GlauberSpec& spec) {
  const auto n = static_cast<Index>(spec.log_target.size());
  if (n == 0) throw Error(ErrorCode::InvalidInput, "empty state space");
  for (Index x = 0; x < n; ++x) {
    if (!std::isfinite(spec.log_target[static_cast<std::size_t>(x)])) {
      throw Error(ErrorCode::UnsupportedTarget, "target has zero (or non-finite) mass at state " + std::to_string(x));
    }
  }
  if (spec.moves.empty()) throw Error(ErrorCode::InvalidInput, "move set is empty");
  for (const auto& tau : spec.moves) {
    if (static_cast<Index>(tau.size()) != n) throw Error(ErrorCode::InvalidInput, "move table of wrong size");
    for (Index y : tau)
      if (y < 0 || y >= n) throw Error(ErrorCode::InvalidInput, "move maps outside the state space");
  }

  const auto& lt = spec.log_target;
  double log_m = -std::numeric_limits<double>::infinity();
  for (const auto& tau : spec.moves)
    for (Index x = 0; x < n; ++x)
      if (tau[static_cast<std::size_t>(x)] != x)
        log_m = std::max(log_m, lt[static_cast<std::size_t>(tau[static_cast<std::size_t>(x)])] - lt[static_cast<std::size_t>(x)]);
  if (!std::isfinite(log_m)) log_m = 0.0;

  const double g = static_cast<double>(spec.moves.size());
  std::vector<Triplet> trips;
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (const auto& tau : spec.moves) {
    for (Index x = 0; x < n; ++x) {
      const Index y = tau[static_cast<std::size_t>(x)];
      if (y == x) continue;
      const double rate = std::exp(0.5 * (lt[static_cast<std::size_t>(y)] - lt[static_cast<std::size_t>(x)] - log_m)) / g;
      trips.emplace_back(x, y, rate);
      out[static_cast<std::size_t>(x)] += rate;
    }
  }
  for (Index x = 0; x < n; ++x) trips.emplace_back(x, x, 1.0 - out[static_cast<std::size_t>(x)]);

  const double top = *std::max_element(lt.begin(), lt.end());
  Vector pi(n);
  for (Index x = 0; x < n; ++x) pi(x) = std::exp(lt[static_cast<std::size_t>(x)] - top);
  pi /= pi.sum();

  GlauberChain result{build_chain(from_triplets(n, trips), spec.labels, pi), std::exp(log_m)};
  if (!((result.chain.stationary() - pi).cwiseAbs().maxCoeff() <= 1e-12) || !result.chain.is_reversible(1e-12)) {
    throw Error(ErrorCode::InvalidInput, "moves are not closed under inversion: dynamics is not reversible w.r.t. the target");
  }
  return result;
}

double ising_condition(int max_degree, double beta) {
  return max_degree * (1.0 - std::exp(-2.0 * beta)) * std::exp(2.0 * max_degree * beta);
}

SpinModel build_ising(const Graph& graph, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidInput, "beta must be finite and >= 0");
  const int n = graph.vertices();
  if (n > 62 || (std::size_t{1} << n) > kMaxSpinStates) {
    throw Error(ErrorCode::TooLarge, "Ising state space 2^" + std::to_string(n) + " exceeds the exact-mode cap");
  }
  const Index N = Index{1} << n;
  GlauberSpec spec;
  spec.log_target.resize(static_cast<std::size_t>(N));
  spec.labels.reserve(static_cast<std::size_t>(N));
  for (Index x = 0; x < N; ++x) {
    double energy = 0.0;
    for (auto [i, j] : graph.edges()) {
      const int si = (x >> i & 1) ? 1 : -1;
      const int sj = (x >> j & 1) ? 1 : -1;
      energy += si * sj;
    }
    spec.log_target[static_cast<std::size_t>(x)] = beta * energy;
    spec.labels.push_back(bits_label(static_cast<std::uint64_t>(x), n, '+', '-'));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Index> tau(static_cast<std::size_t>(N));
    for (Index x = 0; x < N; ++x) tau[static_cast<std::size_t>(x)] = x ^ (Index{1} << i);
    spec.moves.push_back(std::move(tau));
  }
  auto glauber = build_glauber(spec);
  SpinModel model{std::move(glauber.chain), graph.max_degree(), glauber.M};
  model.d = model.chain.degree();
  model.condition_value = ising_condition(model.max_degree, beta);
  model.condition_holds = model.condition_value <= 1.0;
  model.M_bound = std::exp(2.0 * beta * model.max_degree);
  model.d_bound = n * model.M_bound;
  return model;
}

SpinModel build_hardcore(const Graph& graph, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidInput, "fugacity must be positive");
  const int n = graph.vertices();
  if (n > 62) throw Error(ErrorCode::TooLarge, "hard-core graphs are capped at 62 vertices");

  std::vector<std::uint64_t> nbr_mask(static_cast<std::size_t>(n), 0);
  for (auto [i, j] : graph.edges()) {
    nbr_mask[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
    nbr_mask[static_cast<std::size_t>(j)] |= std::uint64_t{1} << i;
  }
  std::vector<std::uint64_t> sets;
  // Depth-first enumeration: decide vertices in order, include only if no chosen neighbor.
  std::vector<std::pair<int, std::uint64_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [v, mask] = stack.back();
    stack.pop_back();
    if (v == n) {
      sets.push_back(mask);
      if (sets.size() > kMaxSpinStates) {
        throw Error(ErrorCode::TooLarge, "independent-set count exceeds the exact-mode cap");
      }
      continue;
    }
    stack.emplace_back(v + 1, mask);
    if ((nbr_mask[static_cast<std::size_t>(v)] & mask) == 0) stack.emplace_back(v + 1, mask | std::uint64_t{1} << v);
  }
  std::sort(sets.begin(), sets.end());
  std::unordered_map<std::uint64_t, Index> index;
  for (std::size_t i = 0; i < sets.size(); ++i) index[sets[i]] = static_cast<Index>(i);

  const auto N = static_cast<Index>(sets.size());
  GlauberSpec spec;
  const double log_lambda = std::log(lambda);
  for (auto mask : sets) {
    spec.log_target.push_back(std::popcount(mask) * log_lambda);
    spec.labels.push_back(bits_label(mask, n));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Index> tau(static_cast<std::size_t>(N));
    for (Index x = 0; x < N; ++x) {
      auto it = index.find(sets[static_cast<std::size_t>(x)] ^ (std::uint64_t{1} << i));
      tau[static_cast<std::size_t>(x)] = it == index.end() ? x : it->second;
    }
    spec.moves.push_back(std::move(tau));
  }
  auto glauber = build_glauber(spec);
  SpinModel model{std::move(glauber.chain), graph.max_degree(), glauber.M};
  model.d = model.chain.degree();
  model.condition_value = lambda * model.max_degree;
  model.condition_holds = model.condition_value <= 1.0;
  model.M_bound = 1.0 / lambda;
  model.d_bound = n / lambda;
  return model;
}

}  // namespace cutofflab
