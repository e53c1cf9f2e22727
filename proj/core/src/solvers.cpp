#include "facegeo/solvers.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace facegeo {

void SolverConfig::validate() const {
  if (max_iter <= 0 || !(abs_tol > 0.0) || !(rel_tol > 0.0) || !(rho > 0.0))
    throw std::invalid_argument("SolverConfig fields must be strictly positive");
}

Matrix LinearMap::stacked() const {
  Matrix s(static_cast<Eigen::Index>(ops.size()), static_cast<Eigen::Index>(n) * m);
  for (std::size_t i = 0; i < ops.size(); ++i)
    s.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Vector>(ops[i].data(), ops[i].size()).transpose();
  return s;
}

int LinearMap::range_rank(const Tolerances& tol) const {
  if (ops.empty()) return 0;
  Eigen::JacobiSVD<Matrix> dec(stacked());
  return numerical_rank(dec.singularValues(), tol);
}

LinearMap make_linear_map(std::vector<Matrix> ops, Vector b) {
  if (ops.empty()) throw std::invalid_argument("make_linear_map: no measurement matrices");
  if (static_cast<Eigen::Index>(ops.size()) != b.size())
    throw std::invalid_argument("make_linear_map: measurement/rhs count mismatch");
  LinearMap a;
  a.n = static_cast<int>(ops.front().rows());
  a.m = static_cast<int>(ops.front().cols());
  for (const auto& op : ops)
    if (op.rows() != ops.front().rows() || op.cols() != ops.front().cols())
      throw std::invalid_argument("make_linear_map: measurement matrices differ in shape");
  a.ops = std::move(ops);
  a.b = std::move(b);
  return a;
}

// ---------------------------------------------------------------------------
// Ball projection
// ---------------------------------------------------------------------------

BallProjector::BallProjector(double theta, const SolverConfig& cfg, double scale)
    : theta_(theta), scale_(scale), cfg_(cfg) {
  if (!(theta > 0.0)) throw std::invalid_argument("BallProjector: theta must be > 0");
  if (!(scale > 0.0)) throw std::invalid_argument("BallProjector: scale must be > 0");
  cfg_.validate();
}

BallProjection BallProjector::operator()(const Matrix& y) {
  if (scale_ == 1.0) return run(y);
  BallProjection p = run(y / scale_);
  p.x *= scale_;
  p.s1 *= scale_;
  p.s2 *= scale_;
  return p;
}

BallProjection BallProjector::run(const Matrix& y) {
  BallProjection out;
  const double l1 = l1_norm(y);
  const double nuc = theta_ * nuclear_norm(y);
  if (l1 + nuc <= 1.0 + cfg_.abs_tol) {
    out.x = y;
    out.s1 = l1;
    out.s2 = nuc;
    out.converged = true;
    return out;
  }

  double a = anchor_a_, b = anchor_b_;
  if (!has_anchor_) {
    a = l1 / (l1 + nuc);
    b = nuc / (l1 + nuc);
  }

  const double fp_tol = std::max(0.5 * cfg_.abs_tol, 1e-13);
  const Eigen::Index n = y.rows(), m = y.cols();

  Matrix x = y;
  double s1 = a, s2 = b;
  Matrix p1x = Matrix::Zero(n, m), p2x = Matrix::Zero(n, m);
  double p1s = 0.0, p2s = 0.0, p3a = 0.0, p3b = 0.0;

  int total = 0;
  double fp_gap = 1.0;
  const int max_outer = 600;
  for (int outer = 0; outer < max_outer && total < cfg_.max_iter; ++outer) {
    // Dykstra over C1, C2, C3, projecting the anchored lifted point (y, a, b).
    x = y;
    s1 = a;
    s2 = b;
    p1x.setZero();
    p2x.setZero();
    p1s = p2s = p3a = p3b = 0.0;
    const double inner_tol = std::max(std::min(1e-7, 1e-2 * fp_gap), 0.05 * cfg_.abs_tol);

    for (int it = 0; it < cfg_.max_iter - total; ++it) {
      const Matrix x_before = x;
      const double s1_before = s1, s2_before = s2;

      Matrix w = x + p1x;
      double ws = s1 + p1s;
      Eigen::Map<const Vector> wv(w.data(), w.size());
      auto [yv, t1] = project_epi_l1(wv, ws);
      x = Eigen::Map<const Matrix>(yv.data(), n, m);
      s1 = t1;
      p1x = w - x;
      p1s = ws - s1;

      w = x + p2x;
      ws = s2 + p2s;
      auto [ym, t2] = project_epi_nuclear_scaled(w, ws, theta_);
      x = ym;
      s2 = t2;
      p2x = w - x;
      p2s = ws - s2;

      const double w1 = s1 + p3a, w2 = s2 + p3b;
      if (w1 + w2 > 1.0) {
        const double shift = 0.5 * (w1 + w2 - 1.0);
        s1 = w1 - shift;
        s2 = w2 - shift;
      } else {
        s1 = w1;
        s2 = w2;
      }
      p3a = w1 - s1;
      p3b = w2 - s2;

      ++total;
      const double change = (x - x_before).norm() + std::abs(s1 - s1_before) +
                            std::abs(s2 - s2_before);
      const double violation = std::max({l1_norm(x) - s1, theta_ * nuclear_norm(x) - s2,
                                         s1 + s2 - 1.0, 0.0});
      if (change <= inner_tol && violation <= 10.0 * inner_tol) break;
    }

    fp_gap = std::abs(s1 - a) + std::abs(s2 - b);
    a = s1;
    b = s2;
    if (fp_gap <= fp_tol) {
      out.converged = true;
      break;
    }
  }

  anchor_a_ = a;
  anchor_b_ = b;
  has_anchor_ = true;

  // Hard membership safeguard: a radial correction of the residual order.
  const double nv = l1_norm(x) + theta_ * nuclear_norm(x);
  if (nv > 1.0) x /= nv;
  out.x = x;
  out.s1 = s1;
  out.s2 = s2;
  out.iterations = total;
  out.residual = fp_gap + std::max(nv - 1.0, 0.0);
  return out;
}

BallProjection project_ball_detailed(const Matrix& y, double theta, const SolverConfig& cfg) {
  BallProjector proj(theta, cfg);
  return proj.run(y);
}

Matrix project_ball(const Matrix& y, double theta, const SolverConfig& cfg) {
  return project_ball_detailed(y, theta, cfg).x;
}

// ---------------------------------------------------------------------------
// Affine-constrained recovery (three-block consensus ADMM)
// ---------------------------------------------------------------------------

namespace {

// Projection onto {x : M x = b} through a precomputed rank-revealing
// factorization of the stacked operator.
class AffineProjector {
 public:
  AffineProjector(const LinearMap& a, double feas_tol) : size_(a.n * a.m), n_(a.n), m_(a.m) {
    if (a.measurement_count() == 0) {
      least_norm_ = Matrix::Zero(n_, m_);
      return;
    }
    stacked_ = a.stacked();
    cod_.compute(stacked_);
    const Vector x0 = cod_.solve(a.b);
    if ((stacked_ * x0 - a.b).norm() > feas_tol * (1.0 + a.b.norm()))
      throw std::invalid_argument("solve_affine_recovery: system A(X) = b is infeasible");
    least_norm_ = Eigen::Map<const Matrix>(x0.data(), n_, m_);
    trivial_ = false;
  }

  const Matrix& least_norm() const { return least_norm_; }

  Matrix project(const Matrix& x, const Vector& b) const {
    if (trivial_) return x;
    const Eigen::Map<const Vector> xv(x.data(), size_);
    const Vector corr = cod_.solve((stacked_ * xv - b).eval());
    Matrix out = x;
    Eigen::Map<Vector>(out.data(), size_) -= corr;
    return out;
  }

 private:
  Eigen::Index size_;
  int n_, m_;
  bool trivial_ = true;
  Matrix stacked_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_;
  Matrix least_norm_;
};

}  // namespace

SolveResult solve_affine_recovery(const LinearMap& a, double theta, const SolverConfig& cfg) {
  cfg.validate();
  if (!(theta > 0.0)) throw std::invalid_argument("solve_affine_recovery: theta must be > 0");
  if (a.n <= 0 || a.m <= 0) throw std::invalid_argument("solve_affine_recovery: empty shape");
  if (a.measurement_count() == 0 && a.b.size() != 0)
    throw std::invalid_argument("solve_affine_recovery: rhs without measurements");

  const AffineProjector affine(a, 1e-9);
  const Eigen::Index nm = static_cast<Eigen::Index>(a.n) * a.m;

  Matrix z = affine.least_norm();
  Matrix u1 = Matrix::Zero(a.n, a.m), u2 = u1, u3 = u1;
  Matrix x1 = z, x2 = z, x3 = z;
  double rho = cfg.rho;

  SolveResult res;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    x1 = soft_threshold(z - u1, 1.0 / rho);
    x2 = svt(z - u2, theta / rho);
    x3 = affine.project(z - u3, a.b);
    const Matrix z_prev = z;
    z = ((x1 + u1) + (x2 + u2) + (x3 + u3)) / 3.0;
    u1 += x1 - z;
    u2 += x2 - z;
    u3 += x3 - z;

    const double primal = std::sqrt((x1 - z).squaredNorm() + (x2 - z).squaredNorm() +
                                    (x3 - z).squaredNorm());
    const double dual = rho * std::sqrt(3.0) * (z - z_prev).norm();
    const double x_scale = std::sqrt(x1.squaredNorm() + x2.squaredNorm() + x3.squaredNorm());
    const double eps_pri = std::sqrt(3.0 * nm) * cfg.abs_tol +
                           cfg.rel_tol * std::max(x_scale, std::sqrt(3.0) * z.norm());
    const double eps_dual =
        std::sqrt(static_cast<double>(nm)) * cfg.abs_tol +
        cfg.rel_tol * rho * std::sqrt(u1.squaredNorm() + u2.squaredNorm() + u3.squaredNorm());
    res.primal_residual = primal;
    res.dual_residual = dual;
    if (primal <= eps_pri && dual <= eps_dual) {
      res.converged = true;
      ++it;
      break;
    }

    // Residual balancing keeps the two residuals within a decade of each
    // other; scaled duals shrink when rho grows.
    if ((it + 1) % 50 == 0) {
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u1 *= 0.5;
        u2 *= 0.5;
        u3 *= 0.5;
      } else if (dual > 10.0 * primal) {
        rho *= 0.5;
        u1 *= 2.0;
        u2 *= 2.0;
        u3 *= 2.0;
      }
    }
  }

  res.x = affine.project(z, a.b);
  res.objective = joint_norm(res.x, theta);
  res.iterations = it;
  return res;
}

// ---------------------------------------------------------------------------
// Linear objective over the ball (Douglas-Rachford)
// ---------------------------------------------------------------------------

SolveResult minimize_linear_over_ball(const Matrix& v, double theta, const SolverConfig& cfg) {
  cfg.validate();
  if (!(theta > 0.0))
    throw std::invalid_argument("minimize_linear_over_ball: theta must be > 0");
  SolveResult res;
  const double vnorm = v.norm();
  if (vnorm == 0.0) {
    res.x = Matrix::Zero(v.rows(), v.cols());
    res.converged = true;
    return res;
  }

  // Step proportional to 1/||V|| makes the iterates invariant under positive
  // scaling of V.
  const double gamma = cfg.rho / vnorm;
  SolverConfig inner = cfg;
  inner.abs_tol = std::max(0.2 * cfg.abs_tol, 1e-13);
  BallProjector proj(theta, inner);

  Matrix z = Matrix::Zero(v.rows(), v.cols());
  Matrix x = z;
  const double stop = gamma * vnorm * cfg.rel_tol + cfg.abs_tol;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    x = proj(z).x;
    const Matrix y = 2.0 * x - z - gamma * v;
    z += y - x;
    const double r = (y - x).norm();
    res.primal_residual = r;
    if (r <= stop) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.x = x;
  res.objective = (v.array() * x.array()).sum();
  res.iterations = it;
  return res;
}

// ---------------------------------------------------------------------------
// Extreme-point refinement (Douglas-Rachford with the objective folded into
// the affine prox)
// ---------------------------------------------------------------------------

SolveResult extreme_point_refine(const LinearMap& a, double theta, double c_star,
                                 const Matrix& w, const SolverConfig& cfg) {
  cfg.validate();
  if (!(theta > 0.0)) throw std::invalid_argument("extreme_point_refine: theta must be > 0");
  if (c_star < 0.0) throw std::invalid_argument("extreme_point_refine: negative optimal value");

  SolveResult res;
  if (c_star <= 1e-14) {
    // Solution set is {0}; the linear system must then be homogeneous.
    if (a.b.size() > 0 && a.b.norm() > 1e-7 * (1.0 + a.b.norm()))
      throw std::invalid_argument("extreme_point_refine: c_star = 0 with b != 0");
    res.x = Matrix::Zero(a.n, a.m);
    res.converged = true;
    return res;
  }

  const AffineProjector affine(a, 1e-9);
  // Slight inflation keeps the intersection with the affine set nonempty when
  // c_star carries solver error.
  const double radius = c_star + 10.0 * (cfg.abs_tol + cfg.rel_tol * c_star);
  SolverConfig inner = cfg;
  inner.abs_tol = std::max(0.2 * cfg.abs_tol, 1e-13);
  BallProjector proj(theta, inner, radius);

  const double wnorm = w.norm();
  const double gamma = wnorm > 0.0 ? cfg.rho * c_star / wnorm : cfg.rho;

  Matrix z = affine.least_norm();
  Matrix x = z;
  const double stop = (cfg.abs_tol + cfg.rel_tol * c_star);
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    x = proj(z).x;
    const Matrix y = affine.project(2.0 * x - z - gamma * w, a.b);
    z += y - x;
    const double r = (y - x).norm();
    res.primal_residual = r;
    if (r <= stop) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.x = affine.project(x, a.b);
  res.objective = joint_norm(res.x, theta);
  res.iterations = it;
  return res;
}

}  // namespace facegeo
