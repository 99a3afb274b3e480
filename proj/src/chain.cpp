#include "cutofflab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <Eigen/SparseLU>

#include "cutofflab/error.hpp"

namespace cutofflab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::AsymmetricSupport: return "AsymmetricSupport";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NotGenerating: return "NotGenerating";
    case ErrorCode::AsymmetricClass: return "AsymmetricClass";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotLumpable: return "NotLumpable";
    case ErrorCode::UnsupportedTarget: return "UnsupportedTarget";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::ZeroDensity: return "ZeroDensity";
    case ErrorCode::DegenerateDensity: return "DegenerateDensity";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::TotalVariationOne: return "TotalVariationOne";
    case ErrorCode::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

namespace {

constexpr double kInputRowTolerance = 1e-10;
constexpr double kStationaryTolerance = 1e-12;
constexpr Index kPowerCheckThreshold = 20000;

double stationary_residual(const SparseMatrix& Tt, const Vector& pi) {
  return (Tt * pi - pi).cwiseAbs().maxCoeff();
}

bool connected(const std::vector<std::vector<Index>>& nbrs) {
  if (nbrs.empty()) return true;
  std::vector<char> seen(nbrs.size(), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    Index x = stack.back();
    stack.pop_back();
    for (Index y : nbrs[static_cast<std::size_t>(x)]) {
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == nbrs.size();
}

Vector solve_stationary(const SparseMatrix& T, const SparseMatrix& Tt) {
  const Index n = T.rows();
  // (T - Id)^T pi = 0 with the first equation replaced by pi(0) = 1.
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(Tt.nonZeros() + n));
  for (Index r = 1; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(Tt, r); it; ++it) trips.emplace_back(r, it.col(), it.value());
    trips.emplace_back(r, r, -1.0);
  }
  trips.emplace_back(0, 0, 1.0);
  Eigen::SparseMatrix<double, Eigen::ColMajor, std::int64_t> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  Eigen::SparseLU<decltype(A), Eigen::COLAMDOrdering<std::int64_t>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::NotIrreducible, "stationary system is singular");
  }
  Vector b = Vector::Zero(n);
  b(0) = 1.0;
  Vector x = lu.solve(b);
  for (int round = 0; round < 3; ++round) {
    Vector r = b - A * x;
    if (r.cwiseAbs().maxCoeff() < 1e-15 * x.cwiseAbs().maxCoeff()) break;
    x += lu.solve(r);
  }
  x /= x.sum();
  return x;
}

void power_cross_check(const SparseMatrix& Tt, const Vector& pi) {
  // One lazy step from pi must return pi; repeated steps must not drift.
  Vector v = pi;
  for (int k = 0; k < 50; ++k) v = 0.5 * (v + Tt * v);
  if ((v - pi).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::NotIrreducible, "power-iteration cross-check of the stationary law failed");
  }
}

}  // namespace

MarkovTriple::MarkovTriple(MarkovChain c, std::vector<Index> starts)
    : chain(std::move(c)), start_set(std::move(starts)) {
  if (start_set.empty()) throw Error(ErrorCode::InvalidInput, "start set S is empty");
  for (Index o : start_set) {
    if (o < 0 || o >= static_cast<Index>(chain.size())) {
      throw Error(ErrorCode::InvalidInput, "start index " + std::to_string(o) + " out of range");
    }
  }
}

double MarkovChain::reversibility_defect() const {
  double worst = 0.0;
  for (Index x = 0; x < T_.rows(); ++x) {
    for (SparseMatrix::InnerIterator it(T_, x); it; ++it) {
      const Index y = it.col();
      worst = std::max(worst, std::abs(pi_(x) * it.value() - pi_(y) * T_.coeff(y, x)));
    }
  }
  return worst;
}

SupportSymmetry check_support_symmetry(const SparseMatrix& T) {
  for (Index x = 0; x < T.rows(); ++x) {
    for (SparseMatrix::InnerIterator it(T, x); it; ++it) {
      const Index y = it.col();
      if (y != x && it.value() > 0.0 && !(T.coeff(y, x) > 0.0)) {
        return {false, std::make_pair(x, y)};
      }
    }
  }
  return {};
}

SupportSymmetry check_support_symmetry(const DenseMatrix& T) {
  for (Index x = 0; x < T.rows(); ++x) {
    for (Index y = 0; y < T.cols(); ++y) {
      if (y != x && T(x, y) > 0.0 && !(T(y, x) > 0.0)) return {false, std::make_pair(x, y)};
    }
  }
  return {};
}

int graph_diameter(const std::vector<std::vector<Index>>& neighbors) {
  const std::size_t n = neighbors.size();
  if (n <= 1) return 0;
  if (!connected(neighbors)) throw Error(ErrorCode::Disconnected, "adjacency graph is disconnected");

  // Bit-parallel BFS: 64 sources per sweep, one bit per source.
  int diam = 0;
  std::vector<std::uint64_t> visited(n), frontier(n), next(n);
  for (std::size_t base = 0; base < n; base += 64) {
    const std::size_t batch = std::min<std::size_t>(64, n - base);
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    for (std::size_t b = 0; b < batch; ++b) {
      visited[base + b] = frontier[base + b] = std::uint64_t{1} << b;
    }
    int level = 0;
    while (true) {
      bool grew = false;
      for (std::size_t v = 0; v < n; ++v) {
        std::uint64_t acc = 0;
        for (Index u : neighbors[v]) acc |= frontier[static_cast<std::size_t>(u)];
        acc &= ~visited[v];
        next[v] = acc;
        grew |= acc != 0;
      }
      if (!grew) break;
      ++level;
      for (std::size_t v = 0; v < n; ++v) visited[v] |= next[v];
      frontier.swap(next);
    }
    diam = std::max(diam, level);
  }
  return diam;
}

MarkovChain build_chain(SparseMatrix T, std::vector<std::string> labels, std::optional<Vector> hint) {
  const Index n = T.rows();
  if (n == 0 || T.cols() != n) throw Error(ErrorCode::NotStochastic, "transition matrix must be square and nonempty");
  T.makeCompressed();
  T.prune(0.0, 0.0);

  for (Index x = 0; x < n; ++x) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(T, x); it; ++it) {
      if (!(it.value() >= 0.0) || !std::isfinite(it.value())) {
        throw Error(ErrorCode::NotStochastic, "negative or non-finite entry in row " + std::to_string(x));
      }
      sum += it.value();
    }
    if (std::abs(sum - 1.0) > kInputRowTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row " << x << " sums to " << sum;
      throw Error(ErrorCode::NotStochastic, msg.str());
    }
    for (SparseMatrix::InnerIterator it(T, x); it; ++it) it.valueRef() /= sum;
  }

  auto sym = check_support_symmetry(T);
  if (!sym.symmetric) {
    throw Error(ErrorCode::AsymmetricSupport, "T(" + std::to_string(sym.violation->first) + "," +
                                                  std::to_string(sym.violation->second) + ") > 0 but reverse entry is 0");
  }

  MarkovChain chain;
  chain.neighbors_.resize(static_cast<std::size_t>(n));
  double min_rate = 1.0;
  for (Index x = 0; x < n; ++x) {
    for (SparseMatrix::InnerIterator it(T, x); it; ++it) {
      const Index y = it.col();
      if (y == x) continue;
      chain.neighbors_[static_cast<std::size_t>(x)].push_back(y);
      if (x < y) chain.edges_.emplace_back(x, y);
      min_rate = std::min(min_rate, it.value());
    }
  }
  if (!connected(chain.neighbors_)) {
    throw Error(ErrorCode::NotIrreducible, "adjacency graph is disconnected (state 0 cannot reach every state)");
  }

  chain.Tt_ = SparseMatrix(T.transpose());
  chain.Tt_.makeCompressed();
  chain.T_ = std::move(T);

  bool have_pi = false;
  if (hint && hint->size() == n && (hint->array() > 0.0).all()) {
    Vector p = *hint / hint->sum();
    if (stationary_residual(chain.Tt_, p) <= kStationaryTolerance) {
      chain.pi_ = std::move(p);
      have_pi = true;
    }
  }
  if (!have_pi) chain.pi_ = solve_stationary(chain.T_, chain.Tt_);
  if (!(chain.pi_.array() > 0.0).all()) {
    throw Error(ErrorCode::NotIrreducible, "stationary law is not fully supported");
  }
  if (n > kPowerCheckThreshold) power_cross_check(chain.Tt_, chain.pi_);

  chain.degree_ = n == 1 ? 1.0 : 1.0 / min_rate;
  chain.diameter_ = graph_diameter(chain.neighbors_);

  if (labels.empty()) {
    labels.reserve(static_cast<std::size_t>(n));
    for (Index x = 0; x < n; ++x) labels.push_back(std::to_string(x));
  } else if (static_cast<Index>(labels.size()) != n) {
    throw Error(ErrorCode::InvalidInput, "label count does not match state count");
  }
  chain.labels_ = std::move(labels);
  return chain;
}

MarkovChain build_chain(const DenseMatrix& T, std::vector<std::string> labels) {
  if (T.rows() != T.cols()) throw Error(ErrorCode::NotStochastic, "transition matrix must be square");
  SparseMatrix S = T.sparseView(0.0, 0.0);
  return build_chain(std::move(S), std::move(labels));
}

double degree(const MarkovChain& chain) { return chain.degree(); }

int diameter(const MarkovChain& chain) { return chain.diameter(); }

MarkovChain lazify(const MarkovChain& chain, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidInput, "laziness theta must lie in (0,1]");
  const Index n = static_cast<Index>(chain.size());
  SparseMatrix I(n, n);
  I.setIdentity();
  SparseMatrix lazy = theta * chain.transition() + (1.0 - theta) * I;
  return build_chain(std::move(lazy), chain.labels(), chain.stationary());
}

SparseMatrix read_sparse_matrix(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n <= 0) throw Error(ErrorCode::InvalidInput, "sparse matrix: missing or invalid size");
  std::vector<Triplet> trips;
  long long i = 0, j = 0;
  double v = 0.0;
  while (in >> i >> j >> v) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw Error(ErrorCode::InvalidInput, "sparse matrix: index out of range at entry (" + std::to_string(i) + "," +
                                               std::to_string(j) + ")");
    }
    trips.emplace_back(i, j, v);
  }
  if (!in.eof()) throw Error(ErrorCode::InvalidInput, "sparse matrix: malformed entry line");
  SparseMatrix T(n, n);
  T.setFromTriplets(trips.begin(), trips.end());
  T.makeCompressed();
  return T;
}

std::vector<std::string> read_labels(std::istream& in, std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = std::to_string(x);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    long long i = -1;
    if (!(ls >> i)) continue;
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw Error(ErrorCode::InvalidInput, "label index out of range");
    std::string rest;
    std::getline(ls >> std::ws, rest);
    labels[static_cast<std::size_t>(i)] = rest;
  }
  return labels;
}

}  // namespace cutofflab
