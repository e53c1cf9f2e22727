#pragma once

#include <vector>

#include "facegeo/matrix_io.hpp"
#include "facegeo/rng.hpp"

namespace facegeo {

// <a, x> <= b
struct Halfspace {
  Vector a;
  double b = 0.0;
};

// H-representation of a low-dimensional (dim <= 4) polytope. All oracle
// operations certify boundedness during vertex enumeration and throw
// std::invalid_argument("not a polytope: unbounded") otherwise.
struct Polytope {
  int dim = 0;
  std::vector<Halfspace> halfspaces;
};

// One face as a set of vertex ids (sorted, indices into the lattice's vertex
// list) plus the constraints active on the whole face. The empty face has
// dim == -1 and, by convention, every constraint active.
struct Face {
  int dim = -1;
  std::vector<int> active;
  std::vector<int> vertex_ids;
};

struct FaceLattice {
  std::vector<Vector> vertices;  // canonical order (lexicographic on rounded coords)
  std::vector<Face> faces;       // sorted by dimension, then vertex ids

  int count_of_dim(int d) const;
};

// All vertices, in canonical order. Throws on unbounded or empty input.
std::vector<Vector> enumerate_vertices(const Polytope& q);

// Complete face lattice: brute force over constraint subsets realized as
// intersections of vertex incidence sets, deduplicated by vertex set.
// Includes the empty face and the polytope itself.
FaceLattice enumerate_faces(const Polytope& q);

// Gauge of Q evaluated from the H-representation; requires 0 in int Q
// (every offset strictly positive).
double polytope_gauge(const Polytope& q, const Vector& x);

// Conic membership v in cone{generators} decided by brute force over
// linearly independent subsets (Caratheodory).
bool in_conic_hull(const std::vector<Vector>& generators, const Vector& v);

// H-representation of {x : ||x||_1 + ||x||_inf <= 1} with the normals
// s + sigma * e_i, s in {-1,1}^n, sigma = +-1, deduplicated.
Polytope l1_linf_ball(int n);

// Closed-form extreme points of that ball: all signed permutations of
// (1/(1+k), ..., 1/(1+k), 0, ..., 0) with k leading entries, k = 1..n
// (k = n being the all-equal point). Must agree with enumerate_faces on the
// H-representation.
std::vector<Vector> l1_linf_extreme_points(int n);

// Dubins' rule: the faces of Q1 cap Q2 are exactly the pairwise
// intersections of faces of Q1 with faces of Q2. Checked exhaustively via
// the three lattices; throws if the intersection is empty.
bool check_sum_rule(const Polytope& q1, const Polytope& q2);

// Faces of A^{-1}(Q) are exactly the preimages of faces of Q. `a` maps the
// preimage space into Q's space (rows(a) == q.dim); choose it injective so
// the preimage stays bounded.
bool check_preimage_rule(const Matrix& a, const Polytope& q);

// Minimal exposed face of Q at x: exposes with the sum of the active
// constraint normals (a relative-interior point of the normal cone) and
// returns the argmax face. Throws when x lies outside Q.
Face minimal_exposed_face(const Polytope& q, const Vector& x);

// Checks the normal-cone / gauge-subdifferential equivalence
//   v in N_Q(x)  <=>  <v,x> > 0 and v/<v,x> in the subdifferential of the
// gauge at x, both sides decided polyhedrally. Requires gauge(x) == 1 and
// 0 in int Q; returns the truth of the biconditional (a correct
// implementation always returns true).
bool gauge_subdiff_equivalence(const Polytope& q, const Vector& x, const Vector& v);

// Bounded random polytope containing the unit ball: 6..12 halfspaces tangent
// to the unit sphere plus a bounding box.
Polytope random_polytope(int dim, Rng& rng);

}  // namespace facegeo
