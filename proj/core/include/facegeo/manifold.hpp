#pragma once

#include <utility>
#include <vector>

#include "facegeo/face_geometry.hpp"

namespace facegeo {

// Bipartite graph on n row vertices and m column vertices whose edges are the
// support (the complement of the zero mask). Isolated vertices are kept and
// counted.
struct PatternGraph {
  int row_vertices = 0;
  int col_vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

PatternGraph pattern_graph(const SupportPattern& s);

// Connected components, isolated vertices included.
int component_count(const PatternGraph& g);

// n + m - c(G) for the support graph G of the pattern: the dimension of the
// diagonal-scaling orbit through any matrix with that exact support.
int manifold_dimension(const SupportPattern& s);

// Rank of (v, w) -> Diag(v) X + X Diag(w), computed from its (n*m) x (n+m)
// matrix representation.
int orbit_differential_rank(const Matrix& x, const Tolerances& tol);

// max(number of nonzero rows, number of nonzero columns)
int subspace_lower_bound(const Matrix& x, const Tolerances& tol);

}  // namespace facegeo
