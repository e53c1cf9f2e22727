#include "facegeo/mesh.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace facegeo {

double sym_l1(double a, double b, double c) {
  return std::abs(a) + 2.0 * std::abs(b) + std::abs(c);
}

double sym_nuclear(double a, double b, double c) {
  // Eigenvalues (a+c +- sqrt((a-c)^2 + 4b^2)) / 2; the sum of their absolute
  // values is max(|trace|, eigenvalue gap).
  const double trace = a + c;
  const double gap = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
  return std::max(std::abs(trace), gap);
}

double sym_gauge(BallKind kind, double theta, double a, double b, double c) {
  switch (kind) {
    case BallKind::l1:
      return sym_l1(a, b, c);
    case BallKind::nuclear:
      return sym_nuclear(a, b, c);
    case BallKind::joint:
      return sym_l1(a, b, c) + theta * sym_nuclear(a, b, c);
  }
  throw std::invalid_argument("sym_gauge: unknown ball kind");
}

TriangleMesh mesh_ball(BallKind kind, double theta, int resolution) {
  if (resolution < 8) throw std::invalid_argument("mesh_ball: resolution must be >= 8");
  if (!(theta > 0.0)) throw std::invalid_argument("mesh_ball: theta must be > 0");

  // Lat-long grid with poles on the b axis: psi in [0, pi] over `resolution`
  // rings, phi in [0, 2pi) over `resolution` columns.
  const int rings = resolution;
  const int cols = resolution;
  TriangleMesh mesh;

  auto emit = [&](double wa, double wb, double wc) {
    const double g = sym_gauge(kind, theta, wa, wb, wc);
    mesh.vertices.push_back({wa / g, wb / g, wc / g});
    return static_cast<int>(mesh.vertices.size()) - 1;
  };

  const int north = emit(0.0, 1.0, 0.0);
  std::vector<std::vector<int>> ring_ids(static_cast<std::size_t>(rings - 1));
  const double pi = std::acos(-1.0);
  for (int i = 1; i < rings; ++i) {
    const double psi = pi * i / rings;
    for (int j = 0; j < cols; ++j) {
      const double phi = 2.0 * pi * j / cols;
      const double wa = std::sin(psi) * std::cos(phi);
      const double wb = std::cos(psi);
      const double wc = std::sin(psi) * std::sin(phi);
      ring_ids[static_cast<std::size_t>(i - 1)].push_back(emit(wa, wb, wc));
    }
  }
  const int south = emit(0.0, -1.0, 0.0);

  const auto& first = ring_ids.front();
  for (int j = 0; j < cols; ++j)
    mesh.triangles.push_back({north, first[static_cast<std::size_t>(j)],
                              first[static_cast<std::size_t>((j + 1) % cols)]});
  for (int i = 0; i + 1 < rings - 1; ++i) {
    const auto& top = ring_ids[static_cast<std::size_t>(i)];
    const auto& bot = ring_ids[static_cast<std::size_t>(i + 1)];
    for (int j = 0; j < cols; ++j) {
      const int jn = (j + 1) % cols;
      mesh.triangles.push_back({top[j], bot[j], bot[jn]});
      mesh.triangles.push_back({top[j], bot[jn], top[jn]});
    }
  }
  const auto& last = ring_ids.back();
  for (int j = 0; j < cols; ++j)
    mesh.triangles.push_back({south, last[static_cast<std::size_t>((j + 1) % cols)],
                              last[static_cast<std::size_t>(j)]});
  return mesh;
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  for (const auto& v : mesh.vertices)
    out << "v " << format_shortest(v[0]) << ' ' << format_shortest(v[1]) << ' '
        << format_shortest(v[2]) << '\n';
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace facegeo
