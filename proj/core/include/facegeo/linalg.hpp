#pragma once

#include <Eigen/Dense>
#include <vector>

#include "facegeo/matrix_io.hpp"

namespace facegeo {

// Thresholds shared by all tolerance-based decisions.
//   rank_rel: singular values count toward the rank while sigma_i > rank_rel * sigma_1
//   zero_abs: |entry| <= zero_abs is treated as an exact zero
//   span_rel: Gram eigenvalues count toward a span dimension while
//             lambda_i > span_rel * lambda_max
struct Tolerances {
  double rank_rel = 1e-8;
  double zero_abs = 1e-10;
  double span_rel = 1e-8;

  void validate() const;
};

// Full factorization X = U * Diag(sigma) * V^T with U in O(n), V in O(m) and
// sigma of length min(n,m), sorted non-increasing.
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;

  Matrix reconstruct() const;
};

SvdFactors svd(const Matrix& x);

// Count of singular values above rank_rel * sigma_1; zero when sigma_1 == 0.
// Requires sigma non-negative and non-increasing.
int numerical_rank(const Vector& sigma, const Tolerances& tol);

// Dimension of span{mats...} via the Gram matrix G_kl = <M_k, M_l> with the
// eigenvalue cutoff span_rel * lambda_max. All matrices must share one shape.
int span_dimension(const std::vector<Matrix>& mats, const Tolerances& tol);

double l1_norm(const Matrix& x);
double nuclear_norm(const Matrix& x);

// ||X||_1 + theta * ||X||_*
double joint_norm(const Matrix& x, double theta);

}  // namespace facegeo
