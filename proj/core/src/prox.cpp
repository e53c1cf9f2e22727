#include "facegeo/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace facegeo {

Vector soft_threshold(const Vector& x, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("soft_threshold: lambda must be >= 0");
  return x.array().sign() * (x.array().abs() - lambda).max(0.0);
}

Matrix soft_threshold(const Matrix& x, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("soft_threshold: lambda must be >= 0");
  return x.array().sign() * (x.array().abs() - lambda).max(0.0);
}

Matrix svt(const Matrix& x, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("svt: lambda must be >= 0");
  const SvdFactors f = svd(x);
  const Vector thresholded = soft_threshold(f.sigma, lambda);
  return f.u.leftCols(thresholded.size()) * thresholded.asDiagonal() *
         f.v.leftCols(thresholded.size()).transpose();
}

std::pair<Vector, double> project_epi_l1_scaled(const Vector& x, double s, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("project_epi_l1_scaled: c must be > 0");
  const double norm = c * x.array().abs().sum();
  if (norm <= s) return {x, s};

  // KKT: y = soft(x, c*lambda), t = s + lambda with c*||y||_1 = t. The gap
  // g(lambda) = c*||soft(x, c*lambda)||_1 - s - lambda is strictly decreasing,
  // positive at 0, and negative once the shrinkage kills every entry.
  double lo = 0.0;
  double hi = std::max(x.size() > 0 ? x.array().abs().maxCoeff() / c : 0.0, -s) + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g =
        c * (x.array().abs() - c * mid).max(0.0).sum() - s - mid;
    if (g > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * (1.0 + hi)) break;
  }
  const double lambda = 0.5 * (lo + hi);
  return {soft_threshold(x, c * lambda), s + lambda};
}

std::pair<Vector, double> project_epi_l1(const Vector& x, double s) {
  return project_epi_l1_scaled(x, s, 1.0);
}

std::pair<Matrix, double> project_epi_nuclear_scaled(const Matrix& x, double s, double c) {
  const SvdFactors f = svd(x);
  auto [y, t] = project_epi_l1_scaled(f.sigma, s, c);
  const Matrix projected =
      f.u.leftCols(y.size()) * y.asDiagonal() * f.v.leftCols(y.size()).transpose();
  return {projected, t};
}

std::pair<Matrix, double> project_epi_nuclear(const Matrix& x, double s) {
  return project_epi_nuclear_scaled(x, s, 1.0);
}

}  // namespace facegeo
