#pragma once

#include <vector>

#include "gdht/matrix.hpp"

namespace gdht {

/// Entrywise asymmetry allowed by the symmetric kernels, relative to max(1, max|m_ij|).
inline constexpr double kSymmetryTol = 1e-9;

/// Lower-triangular L with L Lᵀ equal to the factored matrix.
struct CholeskyFactor {
  DenseMatrix lower;
};

/// Throws NotSquare / NotSymmetric / NotPositiveDefinite. A pivot at or below
/// 1e-12 * max(diag) counts as a failure.
CholeskyFactor cholesky(const DenseMatrix& m);

/// Non-throwing SPD probe built on the same pivot rule as cholesky().
bool is_positive_definite(const DenseMatrix& m);

double log_det_spd(const DenseMatrix& m);

/// Inverse of an SPD matrix, symmetrized after the triangular solves.
DenseMatrix spd_inverse(const DenseMatrix& m);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m);

double min_eigenvalue_sym(const DenseMatrix& m);
double max_eigenvalue_sym(const DenseMatrix& m);

/// Largest eigenvalue of (1/n) XᵀX by power iteration, without forming the Gram matrix.
double largest_gram_eigenvalue(const DenseMatrix& x);

void require_square(const DenseMatrix& m, const char* context);
void require_symmetric(const DenseMatrix& m, const char* context);

}  // namespace gdht
