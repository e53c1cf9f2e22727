#pragma once

#include <cstdint>
#include <vector>

#include "facegeo/prox.hpp"

namespace facegeo {

struct SolverConfig {
  int max_iter = 20000;
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  double rho = 1.0;  // ADMM penalty / Douglas-Rachford step scale
  std::uint64_t seed = 0;

  void validate() const;
};

// Measurement operator A(X)_i = <ops[i], X> with right-hand side b. The shape
// (n, m) of the variable is stored explicitly so d = 0 stays representable.
struct LinearMap {
  int n = 0;
  int m = 0;
  std::vector<Matrix> ops;
  Vector b;

  int measurement_count() const { return static_cast<int>(ops.size()); }
  // d x (n*m) matrix whose rows are the vectorized measurement matrices.
  Matrix stacked() const;
  // Rank of the stacked operator: the dimension of the range of A.
  int range_rank(const Tolerances& tol) const;
};

LinearMap make_linear_map(std::vector<Matrix> ops, Vector b);

struct SolveResult {
  Matrix x;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct BallProjection {
  Matrix x;
  double s1 = 0.0;  // l1 budget at the solution
  double s2 = 0.0;  // scaled nuclear budget at the solution
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Euclidean projection onto {X : ||X||_1 + theta ||X||_* <= 1} by Dykstra
// iterations over three lifted sets in (X, s1, s2):
//   C1 = {||X||_1 <= s1},  C2 = {theta ||X||_* <= s2},  C3 = {s1 + s2 <= 1},
// with an outer fixed-point pass that re-anchors (s1, s2) so the X block is
// the exact ball projection in the limit.
BallProjection project_ball_detailed(const Matrix& y, double theta, const SolverConfig& cfg);
Matrix project_ball(const Matrix& y, double theta, const SolverConfig& cfg);

// Re-usable projector onto scale*B that warm-starts the (s1, s2) anchor from
// the previous call; intended for splitting loops where consecutive inputs
// are close.
class BallProjector {
 public:
  BallProjector(double theta, const SolverConfig& cfg, double scale = 1.0);
  BallProjection operator()(const Matrix& y);
  void reset() { has_anchor_ = false; }

 private:
  friend BallProjection project_ball_detailed(const Matrix&, double, const SolverConfig&);
  BallProjection run(const Matrix& y);

  double theta_;
  double scale_;
  SolverConfig cfg_;
  bool has_anchor_ = false;
  double anchor_a_ = 0.0;
  double anchor_b_ = 0.0;
};

// min ||X||_1 + theta ||X||_*  s.t.  A(X) = b, by three-block consensus ADMM
// (soft threshold, singular value thresholding, affine projection). Throws if
// the system is infeasible; non-convergence is flagged on the result.
SolveResult solve_affine_recovery(const LinearMap& a, double theta, const SolverConfig& cfg);

// min <V, X>  s.t.  ||X||_1 + theta ||X||_* <= 1, by Douglas-Rachford between
// the linear term and the ball indicator.
SolveResult minimize_linear_over_ball(const Matrix& v, double theta, const SolverConfig& cfg);

// Picks an extreme point of the solution set {A(X) = b} intersected with
// c_star * B by minimizing <W, X> over it (Douglas-Rachford between the
// affine prox and the scaled-ball projection). For W with a continuous
// distribution the minimizer is almost surely an extreme point.
SolveResult extreme_point_refine(const LinearMap& a, double theta, double c_star,
                                 const Matrix& w, const SolverConfig& cfg);

}  // namespace facegeo
