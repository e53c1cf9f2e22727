#include "facegeo/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <stdexcept>

namespace facegeo {

void Tolerances::validate() const {
  if (!(rank_rel > 0.0) || !(zero_abs > 0.0) || !(span_rel > 0.0))
    throw std::invalid_argument("Tolerances must be strictly positive");
}

Matrix SvdFactors::reconstruct() const {
  const Eigen::Index n = u.rows();
  const Eigen::Index m = v.rows();
  Matrix d = Matrix::Zero(n, m);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) d(i, i) = sigma(i);
  return u * d * v.transpose();
}

SvdFactors svd(const Matrix& x) {
  if (x.size() == 0) throw std::invalid_argument("svd: empty matrix");
  if (!x.allFinite()) throw std::invalid_argument("svd: matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> dec(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success)
    throw std::runtime_error("svd: Jacobi iteration failed to converge");
  return SvdFactors{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

int numerical_rank(const Vector& sigma, const Tolerances& tol) {
  tol.validate();
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) < 0.0) throw std::invalid_argument("numerical_rank: negative singular value");
    if (i > 0 && sigma(i) > sigma(i - 1) * (1.0 + 1e-14) + 1e-300)
      throw std::invalid_argument("numerical_rank: singular values not sorted");
  }
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cutoff = tol.rank_rel * sigma(0);
  int r = 0;
  while (r < sigma.size() && sigma(r) > cutoff) ++r;
  return r;
}

int span_dimension(const std::vector<Matrix>& mats, const Tolerances& tol) {
  tol.validate();
  if (mats.empty()) return 0;
  const Eigen::Index rows = mats.front().rows();
  const Eigen::Index cols = mats.front().cols();
  const int k = static_cast<int>(mats.size());
  Matrix gram(k, k);
  for (int a = 0; a < k; ++a) {
    if (mats[a].rows() != rows || mats[a].cols() != cols)
      throw std::invalid_argument("span_dimension: matrices differ in shape");
    for (int b = 0; b <= a; ++b) {
      const double g = (mats[a].array() * mats[b].array()).sum();
      gram(a, b) = g;
      gram(b, a) = g;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  const double lambda_max = ev(k - 1);
  if (lambda_max <= 0.0) return 0;
  const double cutoff = tol.span_rel * lambda_max;
  int dim = 0;
  for (int i = 0; i < k; ++i)
    if (ev(i) > cutoff) ++dim;
  return dim;
}

double l1_norm(const Matrix& x) { return x.array().abs().sum(); }

double nuclear_norm(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> dec(x);
  return dec.singularValues().sum();
}

double joint_norm(const Matrix& x, double theta) { return l1_norm(x) + theta * nuclear_norm(x); }

}  // namespace facegeo
