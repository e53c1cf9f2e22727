#pragma once

#include <cstdint>

#include "facegeo/linalg.hpp"

namespace facegeo {

// Boolean zero mask of a matrix: zero_mask(i,j) is true when the entry is
// treated as zero (|x_ij| <= zero_abs).
struct SupportPattern {
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> zero_mask;

  int rows() const { return static_cast<int>(zero_mask.rows()); }
  int cols() const { return static_cast<int>(zero_mask.cols()); }
  int zero_count() const { return static_cast<int>(zero_mask.count()); }
  int support_count() const { return rows() * cols() - zero_count(); }
};

// Facial data of the joint-norm ball {X : ||X||_1 + theta ||X||_* <= 1} at
// X / norm_value. face_dim is the dimension of the minimal face of the BALL;
// the corresponding face of the norm itself is a cone of dimension
// face_dim + 1.
struct FaceReport {
  double theta = 1.0;
  double norm_value = 0.0;  // joint norm of the input, before rescaling
  int rank = 0;
  int zero_count = 0;
  int span_dim = 0;
  int face_dim = 0;
  bool is_extreme = false;
  bool is_vertex = false;
  bool rank_fragile = false;  // trailing kept/dropped singular value near the rank cutoff
  bool origin = false;        // input was the zero matrix; the minimal face of the norm is {0}
  Tolerances tol;
};

SupportPattern support_complement(const Matrix& x, const Tolerances& tol);

// Minimal-face dimension of the ball at X (internally rescaled to the unit
// sphere of the joint norm): with r the numerical rank, Uhat/Vhat the leading
// r columns of the SVD factors and I the zero set,
//   face_dim = (r (r+1) - 2) / 2 - dim span{ Uhat_i^T Vhat_j + Vhat_j^T Uhat_i : (i,j) in I }
// and X is extreme iff face_dim == 0.
FaceReport minimal_face_dimension(const Matrix& x, double theta, const Tolerances& tol);

// rank (rank+1) / 2 - zero_count <= 1 + d
bool check_extreme_inequality(const FaceReport& report, int d);

// True iff X is a positive multiple of a single-entry matrix; on the unit
// sphere of the joint norm the surviving entry is +-1/(1+theta).
bool is_vertex(const Matrix& x, double theta, const Tolerances& tol);

// Affine-hull dimension of `samples` random subgradients of the joint norm at
// X. Subgradients are G1 + theta * G2 with G1 the sign pattern on the support
// and uniform [-1,1] off it, and G2 = U Diag(w) V^T with w = 1 on the leading
// singular block and uniform [-1,1] on the zero block. A vertex yields
// n*m - 1; a smooth point yields 0. Deterministic for fixed (seed, samples).
int subdifferential_dimension_estimate(const Matrix& x, double theta, int samples,
                                       std::uint64_t seed);

}  // namespace facegeo
