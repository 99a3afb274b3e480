#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cutofflab/types.hpp"

namespace cutofflab {

/// Finite continuous-time Markov chain with generator L = T - Id.
///
/// Immutable after construction. The adjacency relation x ~ y holds iff
/// x != y and T(x,y) > 0; self-loops never enter the degree or the diameter.
class MarkovChain {
 public:
  std::size_t size() const { return static_cast<std::size_t>(pi_.size()); }

  const SparseMatrix& transition() const { return T_; }
  /// Row-compressed transpose, used for pushing measures forward.
  const SparseMatrix& transition_transpose() const { return Tt_; }
  const Vector& stationary() const { return pi_; }

  double degree() const { return degree_; }
  int diameter() const { return diameter_; }

  const std::vector<std::vector<Index>>& neighbors() const { return neighbors_; }
  /// Undirected adjacency edges {x,y} with x < y.
  const std::vector<std::pair<Index, Index>>& edges() const { return edges_; }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Index x) const { return labels_[static_cast<std::size_t>(x)]; }

  double rate(Index x, Index y) const { return T_.coeff(x, y); }

  /// max |pi(x)T(x,y) - pi(y)T(y,x)|.
  double reversibility_defect() const;
  bool is_reversible(double tol = 1e-12) const { return reversibility_defect() <= tol; }

  DenseMatrix dense() const { return DenseMatrix(T_); }

 private:
  friend MarkovChain build_chain(SparseMatrix, std::vector<std::string>, std::optional<Vector>);

  SparseMatrix T_;
  SparseMatrix Tt_;
  Vector pi_;
  double degree_ = 0.0;
  int diameter_ = 0;
  std::vector<std::vector<Index>> neighbors_;
  std::vector<std::pair<Index, Index>> edges_;
  std::vector<std::string> labels_;
};

/// A chain together with a nonempty set of allowed initial states.
struct MarkovTriple {
  MarkovTriple(MarkovChain c, std::vector<Index> starts);

  MarkovChain chain;
  std::vector<Index> start_set;
};

/// Validates T and assembles a chain.
///
/// Rows must be nonnegative and sum to 1 within 1e-10 (they are renormalized
/// afterwards); the off-diagonal support must be symmetric and connected.
/// The stationary law is obtained by a sparse LU solve of pi (T - Id) = 0 with
/// one equation pinned. A caller that already knows pi (group walks, Glauber
/// targets) may pass it as a hint; the hint is used only if it satisfies
/// pi T = pi within 1e-12, otherwise the solver runs anyway.
///
/// Throws Error with NotStochastic, AsymmetricSupport or NotIrreducible.
MarkovChain build_chain(SparseMatrix T, std::vector<std::string> labels = {},
                        std::optional<Vector> stationary_hint = std::nullopt);
MarkovChain build_chain(const DenseMatrix& T, std::vector<std::string> labels = {});

double degree(const MarkovChain& chain);
int diameter(const MarkovChain& chain);

/// Exact diameter of an undirected graph given by adjacency lists.
/// Throws Disconnected.
int graph_diameter(const std::vector<std::vector<Index>>& neighbors);

struct SupportSymmetry {
  bool symmetric = true;
  std::optional<std::pair<Index, Index>> violation;  // (x,y) with T(x,y)>0, T(y,x)=0
};

SupportSymmetry check_support_symmetry(const SparseMatrix& T);
SupportSymmetry check_support_symmetry(const DenseMatrix& T);

/// theta T + (1 - theta) Id; preserves adjacency, slows time by theta.
MarkovChain lazify(const MarkovChain& chain, double theta);

/// Text format: first token N, then whitespace-separated triples "i j value".
SparseMatrix read_sparse_matrix(std::istream& in);
/// Sidecar lines "i label"; unnamed states default to their index.
std::vector<std::string> read_labels(std::istream& in, std::size_t n);

}  // namespace cutofflab
