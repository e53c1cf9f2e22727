#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "facegeo/matrix_io.hpp"

namespace facegeo {

enum class BallKind { l1, nuclear, joint };

struct TriangleMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;  // 0-based indices
};

// Norms of the symmetric 2x2 matrix [[a, b], [b, c]]. The l1 value counts the
// off-diagonal entry twice because the norm is taken of the full matrix, not
// of the (a, b, c) coordinates.
double sym_l1(double a, double b, double c);
double sym_nuclear(double a, double b, double c);
double sym_gauge(BallKind kind, double theta, double a, double b, double c);

// Boundary surface of the chosen norm ball restricted to symmetric 2x2
// matrices: a closed lat-long triangulation (poles on the b axis) of
// resolution rings, each boundary point being direction / gauge(direction).
// Resolutions divisible by 4 place mesh vertices exactly on the coordinate
// axes. Requires resolution >= 8.
TriangleMesh mesh_ball(BallKind kind, double theta, int resolution);

// "v x y z" / "f i j k" lines, 1-based indices.
void write_obj(std::ostream& out, const TriangleMesh& mesh);

}  // namespace facegeo
