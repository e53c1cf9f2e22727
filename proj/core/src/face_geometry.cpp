#include "facegeo/face_geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "facegeo/rng.hpp"

namespace facegeo {

SupportPattern support_complement(const Matrix& x, const Tolerances& tol) {
  tol.validate();
  if (!x.allFinite()) throw std::invalid_argument("support_complement: non-finite entries");
  SupportPattern s;
  s.zero_mask = x.array().abs() <= tol.zero_abs;
  return s;
}

namespace {

bool rank_is_fragile(const Vector& sigma, int rank, const Tolerances& tol) {
  if (rank == 0 || sigma(0) <= 0.0) return false;
  // Fragile when the last kept value sits within a decade above the cutoff or
  // the first dropped one within a decade below it.
  const double kept = sigma(rank - 1) / sigma(0);
  if (kept < 10.0 * tol.rank_rel) return true;
  if (rank < sigma.size()) {
    const double dropped = sigma(rank) / sigma(0);
    if (dropped > 0.1 * tol.rank_rel) return true;
  }
  return false;
}

}  // namespace

FaceReport minimal_face_dimension(const Matrix& x, double theta, const Tolerances& tol) {
  tol.validate();
  if (!(theta > 0.0)) throw std::invalid_argument("minimal_face_dimension: theta must be > 0");
  if (!x.allFinite()) throw std::invalid_argument("minimal_face_dimension: non-finite entries");

  FaceReport report;
  report.theta = theta;
  report.tol = tol;
  report.norm_value = joint_norm(x, theta);

  if ((x.array().abs() <= tol.zero_abs).all()) {
    report.origin = true;
    report.zero_count = static_cast<int>(x.size());
    return report;
  }

  // Faces of a gauge are cones: rescale to the unit sphere so that entry-wise
  // zero decisions use a canonical absolute scale.
  const Matrix xs = x / report.norm_value;

  const SvdFactors f = svd(xs);
  const int r = numerical_rank(f.sigma, tol);
  report.rank = r;
  report.rank_fragile = rank_is_fragile(f.sigma, r, tol);
  if (r == 0) {  // cannot happen for a unit-sphere point; guard anyway
    report.origin = true;
    report.zero_count = static_cast<int>(x.size());
    return report;
  }

  const SupportPattern pattern = support_complement(xs, tol);
  report.zero_count = pattern.zero_count();

  const Matrix uhat = f.u.leftCols(r);
  const Matrix vhat = f.v.leftCols(r);
  std::vector<Matrix> family;
  family.reserve(static_cast<std::size_t>(report.zero_count));
  for (int i = 0; i < pattern.rows(); ++i) {
    for (int j = 0; j < pattern.cols(); ++j) {
      if (!pattern.zero_mask(i, j)) continue;
      const Matrix s = uhat.row(i).transpose() * vhat.row(j) +
                       vhat.row(j).transpose() * uhat.row(i);
      family.push_back(s);
    }
  }
  report.span_dim = span_dimension(family, tol);
  report.face_dim = (r * (r + 1) - 2) / 2 - report.span_dim;
  report.is_extreme = (report.face_dim == 0);
  report.is_vertex = is_vertex(x, theta, tol);
  return report;
}

bool check_extreme_inequality(const FaceReport& report, int d) {
  if (d < 0) throw std::invalid_argument("check_extreme_inequality: d must be >= 0");
  return report.rank * (report.rank + 1) / 2 - report.zero_count <= 1 + d;
}

bool is_vertex(const Matrix& x, double theta, const Tolerances& tol) {
  tol.validate();
  if (!(theta > 0.0)) throw std::invalid_argument("is_vertex: theta must be > 0");
  const double nv = joint_norm(x, theta);
  if (!(nv > 0.0) || (x.array().abs() <= tol.zero_abs).all()) return false;
  const Matrix xs = x / nv;
  int live_i = -1, live_j = -1, live = 0;
  for (Eigen::Index i = 0; i < xs.rows(); ++i)
    for (Eigen::Index j = 0; j < xs.cols(); ++j)
      if (std::abs(xs(i, j)) > tol.zero_abs) {
        ++live;
        live_i = static_cast<int>(i);
        live_j = static_cast<int>(j);
      }
  if (live != 1) return false;
  const double expected = 1.0 / (1.0 + theta);
  return std::abs(std::abs(xs(live_i, live_j)) - expected) <= 1e-8 * expected;
}

int subdifferential_dimension_estimate(const Matrix& x, double theta, int samples,
                                       std::uint64_t seed) {
  if (!(theta > 0.0))
    throw std::invalid_argument("subdifferential_dimension_estimate: theta must be > 0");
  if (samples < 2) throw std::invalid_argument("subdifferential_dimension_estimate: samples < 2");
  const Tolerances tol;
  const double nv = joint_norm(x, theta);
  if (!(nv > 0.0) || (x.array().abs() <= tol.zero_abs).all())
    throw std::invalid_argument("subdifferential_dimension_estimate: zero matrix");
  const Matrix xs = x / nv;

  const SvdFactors f = svd(xs);
  const int r = numerical_rank(f.sigma, tol);
  const SupportPattern pattern = support_complement(xs, tol);
  const Eigen::Index n = xs.rows(), m = xs.cols();
  const Eigen::Index k = f.sigma.size();

  Rng rng(seed);
  Matrix signs(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      signs(i, j) = pattern.zero_mask(i, j) ? 0.0 : (xs(i, j) > 0.0 ? 1.0 : -1.0);

  Matrix stacked(samples, n * m);
  Vector w(k);
  for (int s = 0; s < samples; ++s) {
    Matrix g1 = signs;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        if (pattern.zero_mask(i, j)) g1(i, j) = rng.uniform(-1.0, 1.0);
    for (Eigen::Index i = 0; i < k; ++i) w(i) = i < r ? 1.0 : rng.uniform(-1.0, 1.0);
    const Matrix g2 = f.u.leftCols(k) * w.asDiagonal() * f.v.leftCols(k).transpose();
    const Matrix g = g1 + theta * g2;
    stacked.row(s) = Eigen::Map<const Vector>(g.data(), g.size()).transpose();
  }

  // Affine-hull dimension: rank of the differences against the first sample.
  Matrix diffs = stacked.bottomRows(samples - 1);
  diffs.rowwise() -= stacked.row(0);
  Eigen::JacobiSVD<Matrix> dec(diffs);
  const Vector& sv = dec.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-7 * sv(0)) ++dim;
  return dim;
}

}  // namespace facegeo
