#pragma once

#include "fpq/numkit/matrix.hpp"

namespace fpq::numkit {

/// Moore-Penrose inverse (F^T F)^{-1} F^T of a full-column-rank matrix.
///
/// Computed from a Householder QR of F rather than by forming F^T F, which
/// keeps GF = I accurate to a few ulps for well-conditioned frames. The
/// rank test is on F^T F: if its smallest eigenvalue relative to its largest
/// is below 1e-10 a RankError is thrown.
Matrix pseudo_inverse(const Matrix& f);

/// Solve A x = b for square A by LU with partial pivoting.
/// Throws RankError when a pivot underflows relative to the matrix scale.
Vector solve_linear(const Matrix& a, std::span<const double> b);

/// Inverse of a square nonsingular matrix (LU based).
Matrix inverse(const Matrix& a);

struct SymmetricEigen {
    Vector values;   // ascending
    Matrix vectors;  // column j pairs with values[j]
};

/// Cyclic Jacobi eigen-decomposition. Input must be symmetric within 1e-12
/// (relative to its largest entry), otherwise ShapeError.
SymmetricEigen symmetric_eigen(const Matrix& s);

Vector symmetric_eigenvalues(const Matrix& s);

Matrix gram(const Matrix& f);  // F^T F

}  // namespace fpq::numkit
