#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "uforge/errors.hpp"

namespace uforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
// Construction-time invariants.
inline constexpr double hermiticity = 1e-12;  // entrywise |H - H^dag|
inline constexpr double traceless = 1e-12;    // |tr H| <= traceless * d
inline constexpr double norm_one = 1e-10;     // | ||H||_1 - 1 |
inline constexpr double unitarity = 1e-10;    // ||U^dag U - I||_F <= unitarity * d
// Operation guards.
inline constexpr double anti_hermiticity = 1e-10;  // su(d) membership checks
inline constexpr double branch_cut = 1e-8;         // |lambda + 1| for the principal log
inline constexpr double rank_rel = 1e-8;           // default numerical_rank threshold
}  // namespace tol

/// Dense Hermitian matrix with optional traceless / unit-trace-norm flags.
/// Flags are verified at construction, so a flagged instance is a proof that
/// the property holds within tolerance.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix entries, bool traceless = false, bool norm_one = false);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    bool traceless() const { return traceless_; }
    bool norm_one() const { return norm_one_; }

private:
    Matrix entries_;
    bool traceless_;
    bool norm_one_;
};

/// Dense unitary matrix; unitarity and |det| = 1 are verified at construction.
class UnitaryOperator {
public:
    explicit UnitaryOperator(Matrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

    static UnitaryOperator identity(int dim);

private:
    Matrix entries_;
};

/// Real coordinates of a traceless anti-Hermitian matrix in the orthonormal
/// su(d) basis returned by su_basis_matrix().
struct SuVector {
    int dim = 0;
    RealVector coords;
};

/// Sum of singular values (trace norm).
double schatten1_norm(const Matrix& m);

/// Removes the trace part: m - (tr m / d) I.
Matrix project_traceless(Matrix m);

/// Rescales a nonzero Hermitian matrix to unit trace norm.
Matrix normalize_schatten1(const Matrix& m);

/// Matrix commutator [x, y] = xy - yx.
Matrix commutator(const Matrix& x, const Matrix& y);

/// exp(-i H t) for Hermitian H, via eigendecomposition. Accurate to machine
/// precision for moderate ||H t||.
UnitaryOperator mat_exp(const HermitianOperator& h, double t);

/// As mat_exp but unchecked: `h` must be Hermitian to working accuracy.
Matrix mat_exp_raw(const Matrix& h, double t);

/// k-th Hermitian basis element of su(d)'s orthonormal coordinate system,
/// Tr(b_j b_k) = delta_jk. Ordering: symmetric off-diagonal pairs (row-major),
/// then antisymmetric pairs, then the d-1 diagonal elements.
Matrix su_basis_matrix(int d, int k);

/// Coordinates of a traceless anti-Hermitian X: X = sum_k coords[k] * (i b_k).
/// Linear and Frobenius-norm preserving.
SuVector su_vectorize(const Matrix& x);

/// Inverse of su_vectorize.
Matrix su_devectorize(const SuVector& v);

/// Count of singular values of the row-stacked coordinate matrix exceeding
/// rel_tol times the largest one.
int numerical_rank(const std::vector<SuVector>& vectors, double rel_tol = tol::rank_rel);

/// Singular values of the row-stacked coordinate matrix, descending.
RealVector stacked_singular_values(const std::vector<SuVector>& vectors);

/// Principal logarithm of a unitary: anti-Hermitian X with e^X = U and
/// eigenvalue phases in (-pi, pi). Throws BranchCutError when an eigenvalue
/// of U lies within tol::branch_cut of -1.
Matrix matrix_log_principal(const UnitaryOperator& u);

}  // namespace uforge
