#include "facegeo/manifold.hpp"

#include <Eigen/SVD>
#include <numeric>

namespace facegeo {

PatternGraph pattern_graph(const SupportPattern& s) {
  PatternGraph g;
  g.row_vertices = s.rows();
  g.col_vertices = s.cols();
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j)
      if (!s.zero_mask(i, j)) g.edges.emplace_back(i, j);
  return g;
}

namespace {

// Union-find with path compression.
struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

int component_count(const PatternGraph& g) {
  const int total = g.row_vertices + g.col_vertices;
  DisjointSets ds(total);
  for (const auto& [i, j] : g.edges) ds.unite(i, g.row_vertices + j);
  int count = 0;
  for (int v = 0; v < total; ++v)
    if (ds.find(v) == v) ++count;
  return count;
}

int manifold_dimension(const SupportPattern& s) {
  return s.rows() + s.cols() - component_count(pattern_graph(s));
}

int orbit_differential_rank(const Matrix& x, const Tolerances& tol) {
  tol.validate();
  if (!x.allFinite()) throw std::invalid_argument("orbit_differential_rank: non-finite entries");
  const Eigen::Index n = x.rows(), m = x.cols();
  Matrix rep = Matrix::Zero(n * m, n + m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::Index row = i + j * n;  // column-major vec
      rep(row, i) += x(i, j);              // d/dv_i of Diag(v) X
      rep(row, n + j) += x(i, j);          // d/dw_j of X Diag(w)
    }
  Eigen::JacobiSVD<Matrix> dec(rep);
  return numerical_rank(dec.singularValues(), tol);
}

int subspace_lower_bound(const Matrix& x, const Tolerances& tol) {
  tol.validate();
  const auto nonzero = (x.array().abs() > tol.zero_abs);
  int alpha = 0, beta = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (nonzero.row(i).any()) ++alpha;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    if (nonzero.col(j).any()) ++beta;
  return std::max(alpha, beta);
}

}  // namespace facegeo
