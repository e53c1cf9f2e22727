#include "facegeo/polytope.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace facegeo {

namespace {

constexpr double kGrid = 1e-9;       // vertex identity grid
constexpr double kActTol = 1e-9;     // constraint activity / feasibility slack
constexpr int kMaxDim = 4;

double slack_tol(const Halfspace& h) { return kActTol * (1.0 + std::abs(h.b)); }

void validate(const Polytope& q) {
  if (q.dim < 1 || q.dim > kMaxDim)
    throw std::invalid_argument("Polytope: dim must lie in [1, 4]");
  if (q.halfspaces.empty()) throw std::invalid_argument("Polytope: no halfspaces");
  for (const auto& h : q.halfspaces)
    if (h.a.size() != q.dim) throw std::invalid_argument("Polytope: normal with wrong dimension");
}

// Partial-pivot elimination on a stack buffer; the subsets are tiny so this
// dominates the vertex enumeration cost.
bool solve_square(const Polytope& q, const int* idx, int d, double* out) {
  double aug[kMaxDim][kMaxDim + 1];
  double scale = 0.0;
  for (int r = 0; r < d; ++r) {
    const Halfspace& h = q.halfspaces[idx[r]];
    for (int c = 0; c < d; ++c) {
      aug[r][c] = h.a(c);
      scale = std::max(scale, std::abs(h.a(c)));
    }
    aug[r][d] = h.b;
  }
  if (scale == 0.0) return false;
  const double pivot_tol = 1e-10 * scale;
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
    if (std::abs(aug[piv][col]) <= pivot_tol) return false;
    if (piv != col)
      for (int c = col; c <= d; ++c) std::swap(aug[piv][c], aug[col][c]);
    for (int r = col + 1; r < d; ++r) {
      const double f = aug[r][col] / aug[col][col];
      if (f == 0.0) continue;
      for (int c = col; c <= d; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  for (int col = d - 1; col >= 0; --col) {
    double s = aug[col][d];
    for (int c = col + 1; c < d; ++c) s -= aug[col][c] * out[c];
    out[col] = s / aug[col][col];
  }
  return true;
}

bool feasible(const Polytope& q, const Vector& x) {
  for (const auto& h : q.halfspaces)
    if (h.a.dot(x) > h.b + slack_tol(h)) return false;
  return true;
}

using VertexKey = std::array<std::int64_t, kMaxDim>;

VertexKey round_key(const Vector& x) {
  VertexKey key{0, 0, 0, 0};
  for (Eigen::Index i = 0; i < x.size(); ++i)
    key[static_cast<std::size_t>(i)] = llround(x(i) / kGrid);
  return key;
}

// Walks all size-k index subsets of [0, n).
template <class F>
void for_each_subset(int n, int k, F&& fn) {
  if (k == 0) {
    fn(static_cast<const int*>(nullptr));
    return;
  }
  if (k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx.data());
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

// The recession cone {x : Ax <= 0} is nontrivial iff the stacked normals are
// rank deficient (the cone contains a line) or some basic direction -- the
// nullspace of d-1 independent constraints -- satisfies every inequality.
void certify_bounded(const Polytope& q) {
  const int d = q.dim;
  const int k = static_cast<int>(q.halfspaces.size());
  Matrix normals(k, d);
  for (int i = 0; i < k; ++i) normals.row(i) = q.halfspaces[i].a.transpose();
  Eigen::JacobiSVD<Matrix> dec(normals, Eigen::ComputeThinV);
  const Vector& sv = dec.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * std::max(1.0, sv(0)))
    throw std::invalid_argument("not a polytope: unbounded (normals do not span)");

  auto is_recession = [&](const Vector& u) {
    for (const auto& h : q.halfspaces)
      if (h.a.dot(u) > 1e-10 * h.a.norm()) return false;
    return true;
  };

  bool unbounded = false;
  for_each_subset(k, d - 1, [&](const int* idx) {
    if (unbounded) return;
    Vector u(d);
    if (d == 1) {
      u(0) = 1.0;
    } else {
      Matrix sys(d - 1, d);
      for (int r = 0; r < d - 1; ++r) sys.row(r) = q.halfspaces[idx[r]].a.transpose();
      Eigen::JacobiSVD<Matrix> s(sys, Eigen::ComputeFullV);
      const Vector& ssv = s.singularValues();
      if (ssv(d - 2) <= 1e-10 * std::max(1.0, ssv(0))) return;  // rank < d-1
      u = s.matrixV().col(d - 1);
    }
    if (is_recession(u) || is_recession(Vector(-u))) unbounded = true;
  });
  if (unbounded) throw std::invalid_argument("not a polytope: unbounded");
}

}  // namespace

std::vector<Vector> enumerate_vertices(const Polytope& q) {
  validate(q);
  certify_bounded(q);
  const int d = q.dim;
  const int k = static_cast<int>(q.halfspaces.size());

  std::map<VertexKey, Vector> found;  // canonical lexicographic order
  double buf[kMaxDim];
  for_each_subset(k, d, [&](const int* idx) {
    if (!solve_square(q, idx, d, buf)) return;
    Vector x = Eigen::Map<const Vector>(buf, d);
    if (!feasible(q, x)) return;
    found.emplace(round_key(x), std::move(x));
  });

  if (found.empty()) throw std::invalid_argument("empty polytope: no vertex is feasible");
  std::vector<Vector> verts;
  verts.reserve(found.size());
  for (auto& [key, x] : found) verts.push_back(std::move(x));
  return verts;
}

int FaceLattice::count_of_dim(int d) const {
  int c = 0;
  for (const auto& f : faces)
    if (f.dim == d) ++c;
  return c;
}

namespace {

int affine_dim(const std::vector<Vector>& verts, const std::vector<int>& ids) {
  if (ids.empty()) return -1;
  if (ids.size() == 1) return 0;
  Matrix diffs(static_cast<Eigen::Index>(ids.size()) - 1, verts[0].size());
  for (std::size_t i = 1; i < ids.size(); ++i)
    diffs.row(static_cast<Eigen::Index>(i) - 1) = (verts[ids[i]] - verts[ids[0]]).transpose();
  Eigen::JacobiSVD<Matrix> dec(diffs);
  const Vector& sv = dec.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-7 * std::max(1.0, sv(0))) ++r;
  return r;
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

FaceLattice enumerate_faces(const Polytope& q) {
  FaceLattice lat;
  lat.vertices = enumerate_vertices(q);
  const int k = static_cast<int>(q.halfspaces.size());
  const int nv = static_cast<int>(lat.vertices.size());

  std::vector<std::vector<int>> incidence(k);
  for (int i = 0; i < k; ++i) {
    const Halfspace& h = q.halfspaces[i];
    for (int v = 0; v < nv; ++v)
      if (std::abs(h.a.dot(lat.vertices[v]) - h.b) <= slack_tol(h)) incidence[i].push_back(v);
  }

  std::vector<int> all(nv);
  for (int v = 0; v < nv; ++v) all[v] = v;

  std::set<std::vector<int>> seen;
  std::deque<const std::vector<int>*> work;
  auto add = [&](std::vector<int> vs) {
    auto [it, inserted] = seen.insert(std::move(vs));
    if (inserted) work.push_back(&*it);
  };
  add(all);
  while (!work.empty()) {
    const std::vector<int>* f = work.front();
    work.pop_front();
    for (int i = 0; i < k; ++i) add(intersect_sorted(*f, incidence[i]));
  }
  seen.insert({});  // the empty face, in case every incidence set is nonempty

  for (const auto& vs : seen) {
    Face face;
    face.vertex_ids = vs;
    face.dim = affine_dim(lat.vertices, vs);
    if (vs.empty()) {
      face.active.resize(k);
      for (int i = 0; i < k; ++i) face.active[i] = i;
    } else {
      for (int i = 0; i < k; ++i)
        if (std::includes(incidence[i].begin(), incidence[i].end(), vs.begin(), vs.end()))
          face.active.push_back(i);
    }
    lat.faces.push_back(std::move(face));
  }
  std::sort(lat.faces.begin(), lat.faces.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertex_ids < b.vertex_ids;
  });
  return lat;
}

double polytope_gauge(const Polytope& q, const Vector& x) {
  validate(q);
  double g = 0.0;
  for (const auto& h : q.halfspaces) {
    if (!(h.b > 0.0))
      throw std::invalid_argument("polytope_gauge: needs 0 in the interior (b > 0)");
    g = std::max(g, h.a.dot(x) / h.b);
  }
  return g;
}

bool in_conic_hull(const std::vector<Vector>& generators, const Vector& v) {
  const double vnorm = v.norm();
  if (vnorm <= 1e-12) return true;
  if (generators.empty()) return false;
  const int d = static_cast<int>(v.size());
  const int g = static_cast<int>(generators.size());
  bool member = false;
  for (int size = 1; size <= std::min(d, g) && !member; ++size) {
    for_each_subset(g, size, [&](const int* idx) {
      if (member) return;
      Matrix cols(d, size);
      for (int c = 0; c < size; ++c) cols.col(c) = generators[idx[c]];
      const Vector lambda = cols.colPivHouseholderQr().solve(v);
      if ((cols * lambda - v).norm() > 1e-9 * (1.0 + vnorm)) return;
      if ((lambda.array() >= -1e-9).all()) member = true;
    });
  }
  return member;
}

Polytope l1_linf_ball(int n) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("l1_linf_ball: n must lie in [1, 4]");
  std::set<std::vector<int>> normals;
  for (int smask = 0; smask < (1 << n); ++smask) {
    for (int i = 0; i < n; ++i) {
      for (int sigma : {-1, 1}) {
        std::vector<int> a(n);
        for (int j = 0; j < n; ++j) a[j] = (smask >> j) & 1 ? 1 : -1;
        a[i] += sigma;
        normals.insert(a);
      }
    }
  }
  Polytope q;
  q.dim = n;
  for (const auto& a : normals) {
    Halfspace h;
    h.a = Vector(n);
    for (int j = 0; j < n; ++j) h.a(j) = a[j];
    h.b = 1.0;
    q.halfspaces.push_back(std::move(h));
  }
  return q;
}

std::vector<Vector> l1_linf_extreme_points(int n) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("l1_linf_extreme_points: n must lie in [1, 4]");
  std::vector<Vector> pts;
  for (int k = 1; k <= n; ++k) {
    const double value = 1.0 / (1.0 + k);
    for_each_subset(n, k, [&](const int* idx) {
      for (int smask = 0; smask < (1 << k); ++smask) {
        Vector x = Vector::Zero(n);
        for (int j = 0; j < k; ++j) x(idx[j]) = (smask >> j) & 1 ? value : -value;
        pts.push_back(std::move(x));
      }
    });
  }
  return pts;
}

namespace {

std::vector<int> active_vertex_set(const Polytope& p, const std::vector<Vector>& verts,
                                   const std::vector<int>& active) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(verts.size()); ++v) {
    bool all_tight = true;
    for (int i : active) {
      const Halfspace& h = p.halfspaces[i];
      if (std::abs(h.a.dot(verts[v]) - h.b) > slack_tol(h)) {
        all_tight = false;
        break;
      }
    }
    if (all_tight) out.push_back(v);
  }
  return out;
}

}  // namespace

bool check_sum_rule(const Polytope& q1, const Polytope& q2) {
  if (q1.dim != q2.dim) throw std::invalid_argument("check_sum_rule: dimension mismatch");
  Polytope p;
  p.dim = q1.dim;
  p.halfspaces = q1.halfspaces;
  p.halfspaces.insert(p.halfspaces.end(), q2.halfspaces.begin(), q2.halfspaces.end());

  FaceLattice lp;
  try {
    lp = enumerate_faces(p);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("check_sum_rule: empty intersection (") + e.what() +
                                ")");
  }
  const FaceLattice l1 = enumerate_faces(q1);
  const FaceLattice l2 = enumerate_faces(q2);
  const int off = static_cast<int>(q1.halfspaces.size());

  std::set<std::vector<int>> lattice_sets;
  for (const auto& f : lp.faces) lattice_sets.insert(f.vertex_ids);

  std::set<std::vector<int>> pair_sets;
  for (const auto& f1 : l1.faces) {
    for (const auto& f2 : l2.faces) {
      if (f1.dim < 0 || f2.dim < 0) {
        pair_sets.insert({});
        continue;
      }
      std::vector<int> act = f1.active;
      for (int i : f2.active) act.push_back(off + i);
      pair_sets.insert(active_vertex_set(p, lp.vertices, act));
    }
  }
  return lattice_sets == pair_sets;
}

bool check_preimage_rule(const Matrix& a, const Polytope& q) {
  if (static_cast<int>(a.rows()) != q.dim)
    throw std::invalid_argument("check_preimage_rule: operator range dimension mismatch");
  const int d = static_cast<int>(a.cols());
  Polytope p;
  p.dim = d;
  for (const auto& h : q.halfspaces) p.halfspaces.push_back({a.transpose() * h.a, h.b});

  FaceLattice lp;
  try {
    lp = enumerate_faces(p);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("check_preimage_rule: bad preimage (") + e.what() +
                                ")");
  }
  const FaceLattice lq = enumerate_faces(q);

  std::set<std::vector<int>> lattice_sets;
  for (const auto& f : lp.faces) lattice_sets.insert(f.vertex_ids);

  std::set<std::vector<int>> preimage_sets;
  for (const auto& m : lq.faces) {
    if (m.dim < 0) {
      preimage_sets.insert({});
      continue;
    }
    preimage_sets.insert(active_vertex_set(p, lp.vertices, m.active));
  }
  return lattice_sets == preimage_sets;
}

Face minimal_exposed_face(const Polytope& q, const Vector& x) {
  validate(q);
  const std::vector<Vector> verts = enumerate_vertices(q);
  std::vector<int> act;
  for (int i = 0; i < static_cast<int>(q.halfspaces.size()); ++i) {
    const Halfspace& h = q.halfspaces[i];
    const double slack = h.b - h.a.dot(x);
    if (slack < -slack_tol(h)) throw std::invalid_argument("minimal_exposed_face: x is not in Q");
    if (slack <= slack_tol(h)) act.push_back(i);
  }

  // A strictly positive combination of the active normals lies in the
  // relative interior of the normal cone; the unweighted sum does.
  Vector v = Vector::Zero(q.dim);
  for (int i : act) v += q.halfspaces[i].a;

  std::vector<double> vals(verts.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    vals[i] = v.dot(verts[i]);
    best = std::max(best, vals[i]);
  }
  Face face;
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (vals[i] >= best - kActTol * (1.0 + std::abs(best))) face.vertex_ids.push_back(static_cast<int>(i));
  face.dim = affine_dim(verts, face.vertex_ids);
  for (int i = 0; i < static_cast<int>(q.halfspaces.size()); ++i) {
    const Halfspace& h = q.halfspaces[i];
    bool tight = true;
    for (int vid : face.vertex_ids)
      if (std::abs(h.a.dot(verts[vid]) - h.b) > slack_tol(h)) {
        tight = false;
        break;
      }
    if (tight) face.active.push_back(i);
  }
  return face;
}

bool gauge_subdiff_equivalence(const Polytope& q, const Vector& x, const Vector& v) {
  validate(q);
  if (v.norm() == 0.0) throw std::invalid_argument("gauge_subdiff_equivalence: v must be nonzero");
  const double gx = polytope_gauge(q, x);
  if (std::abs(gx - 1.0) > 1e-9)
    throw std::invalid_argument("gauge_subdiff_equivalence: x is not on the boundary");

  std::vector<Vector> active_normals;
  for (const auto& h : q.halfspaces)
    if (std::abs(h.a.dot(x) - h.b) <= slack_tol(h)) active_normals.push_back(h.a / h.b);
  // N_Q(x) is generated by the active normals (scaling by 1/b is harmless).
  const bool in_normal_cone = in_conic_hull(active_normals, v);

  const double vx = v.dot(x);
  if (in_normal_cone && vx <= 0.0)
    throw std::logic_error("gauge_subdiff_equivalence: normal vector with <v,x> <= 0");

  // g = v/<v,x> is a subgradient of the gauge at x iff <g,x> = 1 (automatic)
  // and <g,y> <= gauge(y) for all y, which for a polytope reduces to the
  // vertex directions. The division only makes sense on the <v,x> > 0 side.
  bool in_subdiff = false;
  if (vx > 0.0) {
    const Vector g = v / vx;
    const std::vector<Vector> verts = enumerate_vertices(q);
    in_subdiff = true;
    for (const auto& vert : verts) {
      const double gauge_v = polytope_gauge(q, vert);
      if (g.dot(vert) > gauge_v + 1e-9 * (1.0 + std::abs(gauge_v))) {
        in_subdiff = false;
        break;
      }
    }
  }
  return in_normal_cone == in_subdiff;
}

Polytope random_polytope(int dim, Rng& rng) {
  Polytope q;
  q.dim = dim;
  const int tangents = rng.uniform_int(6, 12);
  for (int t = 0; t < tangents; ++t) {
    Vector u(dim);
    double norm = 0.0;
    do {
      for (int i = 0; i < dim; ++i) u(i) = rng.gaussian();
      norm = u.norm();
    } while (norm < 1e-8);
    q.halfspaces.push_back({u / norm, 1.0});
  }
  for (int i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(dim);
    e(i) = 1.0;
    q.halfspaces.push_back({e, 1.5});
    q.halfspaces.push_back({-e, 1.5});
  }
  return q;
}

}  // namespace facegeo
