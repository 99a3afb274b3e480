#include "cutofflab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "cutofflab/parallel.hpp"
#include "cutofflab/semigroup.hpp"

namespace cutofflab {

Vector gamma(const MarkovChain& chain, const Vector& f) { return gamma_bilinear(chain, f, f); }

Vector gamma_bilinear(const MarkovChain& chain, const Vector& f, const Vector& g) {
  const SparseMatrix& T = chain.transition();
  Vector out = Vector::Zero(f.size());
  for (Index x = 0; x < T.outerSize(); ++x) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(T, x); it; ++it) s += it.value() * (f(it.col()) - f(x)) * (g(it.col()) - g(x));
    out(x) = 0.5 * s;
  }
  return out;
}

Vector gamma2(const MarkovChain& chain, const Vector& f) {
  const Vector lf = generator(chain, f);
  return 0.5 * (generator(chain, gamma(chain, f)) - 2.0 * gamma_bilinear(chain, f, lf));
}

LocalForm gamma2_form(const MarkovChain& chain, Index x) {
  const SparseMatrix& T = chain.transition();
  LocalForm form;
  std::unordered_map<Index, Index> local;
  auto add = [&](Index s) {
    if (local.emplace(s, static_cast<Index>(form.ball.size())).second) form.ball.push_back(s);
  };
  add(x);
  for (Index y : chain.neighbors()[static_cast<std::size_t>(x)]) add(y);
  for (Index y : chain.neighbors()[static_cast<std::size_t>(x)])
    for (Index z : chain.neighbors()[static_cast<std::size_t>(y)]) add(z);
  const Index m = static_cast<Index>(form.ball.size());
  DenseMatrix& Q = form.Q;
  Q = DenseMatrix::Zero(m, m);

  // G_y: matrix of Gamma f(y), accumulated with a given weight.
  auto add_gamma_form = [&](Index y, double w) {
    const Index ly = local.at(y);
    for (SparseMatrix::InnerIterator it(T, y); it; ++it) {
      if (it.col() == y) continue;
      const Index lz = local.at(it.col());
      const double c = 0.5 * w * it.value();
      Q(lz, lz) += c;
      Q(ly, ly) += c;
      Q(lz, ly) -= c;
      Q(ly, lz) -= c;
    }
  };
  // Row y of L in local coordinates.
  auto generator_row = [&](Index y) {
    Vector a = Vector::Zero(m);
    for (SparseMatrix::InnerIterator it(T, y); it; ++it) a(local.at(it.col())) += it.value();
    a(local.at(y)) -= 1.0;
    return a;
  };

  const Vector ax = generator_row(x);
  const Index lx = 0;
  for (SparseMatrix::InnerIterator it(T, x); it; ++it) {
    const Index y = it.col();
    if (y == x) continue;
    const double w = it.value();
    // 1/2 T_xy (G_y - G_x)
    add_gamma_form(y, 0.5 * w);
    add_gamma_form(x, -0.5 * w);
    // -1/2 T_xy sym((e_y - e_x)(a_y - a_x)^T)
    const Vector da = generator_row(y) - ax;
    const Index ly = local.at(y);
    for (Index j = 0; j < m; ++j) {
      const double c = 0.25 * w * da(j);
      Q(ly, j) -= c;
      Q(j, ly) -= c;
      Q(lx, j) += c;
      Q(j, lx) += c;
    }
  }
  Q = 0.5 * (Q + Q.transpose()).eval();
  return form;
}

CurvatureReport certify_curvature(const MarkovChain& chain, double tol) {
  const std::size_t n = chain.size();
  CurvatureReport rep;
  rep.tolerance = tol;
  rep.per_state_min_eig.assign(n, 0.0);
  rep.per_state_scale.assign(n, 1.0);
  std::vector<Vector> local_vec(n);
  parallel_for(n, [&](std::size_t i) {
    const LocalForm form = gamma2_form(chain, static_cast<Index>(i));
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(form.Q);
    rep.per_state_min_eig[i] = es.eigenvalues()(0);
    rep.per_state_scale[i] = std::max(1.0, form.Q.cwiseAbs().maxCoeff());
    if (es.eigenvalues()(0) < -tol * rep.per_state_scale[i]) {
      Vector w = Vector::Zero(static_cast<Index>(n));
      const Vector v = es.eigenvectors().col(0);
      for (std::size_t k = 0; k < form.ball.size(); ++k) w(form.ball[k]) = v(static_cast<Index>(k));
      local_vec[i] = std::move(w);
    }
  });
  rep.global_min = n ? *std::min_element(rep.per_state_min_eig.begin(), rep.per_state_min_eig.end()) : 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rel = rep.per_state_min_eig[i] / rep.per_state_scale[i];
    if (rep.per_state_min_eig[i] < -tol * rep.per_state_scale[i] && rel < worst) {
      worst = rel;
      rep.curved = false;
      rep.violating_state = static_cast<Index>(i);
      rep.witness = local_vec[i];
    }
  }
  return rep;
}

SubcommutationReport check_subcommutation(const MarkovChain& chain, double t, const std::vector<Vector>& functions,
                                          double tol) {
  SubcommutationReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < functions.size(); ++k) {
    const Vector& f = functions[k];
    const Vector lhs = gamma(chain, apply_semigroup(chain, f, t));
    const Vector rhs = apply_semigroup(chain, gamma(chain, f), t);
    for (Index x = 0; x < f.size(); ++x) {
      const double excess = lhs(x) - rhs(x) - tol * std::max(1.0, std::abs(rhs(x)));
      if (excess > rep.max_violation) {
        rep.max_violation = excess;
        rep.function_index = k;
        rep.state = x;
      }
    }
  }
  if (functions.empty()) rep.max_violation = 0.0;
  rep.holds = rep.max_violation <= 0.0;
  return rep;
}

}  // namespace cutofflab
