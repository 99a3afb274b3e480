#pragma once
// Reference computations the tests compare against. Each one avoids the
// code path it is checking: dense matrix exponentials instead of
// uniformization, BFS on a dense matrix instead of the stored adjacency,
// eigen-solves of the full pi-weighted generator instead of Lanczos.

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cutofflab/chain.hpp"

namespace oracle {

using cutofflab::DenseMatrix;
using cutofflab::Vector;

inline DenseMatrix heat_kernel(const cutofflab::MarkovChain& chain, double t) {
  DenseMatrix T = chain.dense();
  DenseMatrix L = T - DenseMatrix::Identity(T.rows(), T.cols());
  return (t * L).exp();
}

inline Vector stationary(const DenseMatrix& T) {
  const auto n = T.rows();
  DenseMatrix A = (T - DenseMatrix::Identity(n, n)).transpose();
  A.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b(n - 1) = 1.0;
  return A.fullPivLu().solve(b);
}

inline int bfs_diameter(const DenseMatrix& T) {
  const int n = static_cast<int>(T.rows());
  int best = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y = 0; y < n; ++y)
        if (y != x && T(x, y) > 0 && dist[y] < 0) {
          dist[y] = dist[x] + 1;
          q.push(y);
        }
    }
    for (int d : dist) best = std::max(best, d);
  }
  return best;
}

/// Smallest nonzero eigenvalue of -L for a reversible chain, via the
/// symmetrized matrix D^{1/2} (Id - T) D^{-1/2}.
inline double spectral_gap(const cutofflab::MarkovChain& chain) {
  DenseMatrix T = chain.dense();
  Vector s = chain.stationary().cwiseSqrt();
  DenseMatrix S = s.asDiagonal() * (DenseMatrix::Identity(T.rows(), T.cols()) - T) * s.cwiseInverse().asDiagonal();
  S = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(S);
  return es.eigenvalues()(1);
}

inline double tv(const Vector& p, const Vector& q) { return 0.5 * (p - q).cwiseAbs().sum(); }

inline double kl(const Vector& p, const Vector& q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0) s += p(i) * std::log(p(i) / q(i));
  return s;
}

inline Vector random_law(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = e(rng);
  return v / v.sum();
}

}  // namespace oracle
