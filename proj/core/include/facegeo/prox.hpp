#pragma once

#include <utility>

#include "facegeo/linalg.hpp"

namespace facegeo {

// sign(x_i) * max(|x_i| - lambda, 0)
Vector soft_threshold(const Vector& x, double lambda);
Matrix soft_threshold(const Matrix& x, double lambda);

// Singular value thresholding: U Diag(soft_threshold(sigma, lambda)) V^T.
Matrix svt(const Matrix& x, double lambda);

// Euclidean projection onto {(y, t) : c * ||y||_1 <= t} for c > 0. Outside
// points solve c * ||soft_threshold(x, c*lambda)||_1 = s + lambda for
// lambda >= 0 by bisection.
std::pair<Vector, double> project_epi_l1_scaled(const Vector& x, double s, double c);

std::pair<Vector, double> project_epi_l1(const Vector& x, double s);

// Spectral lift of the l1 epigraph projection: acts on singular values.
std::pair<Matrix, double> project_epi_nuclear_scaled(const Matrix& x, double s, double c);

std::pair<Matrix, double> project_epi_nuclear(const Matrix& x, double s);

}  // namespace facegeo
