#include "uforge/linalg.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace uforge {

namespace {

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << who << ": matrix must be square and non-empty, got " << m.rows() << "x" << m.cols();
        throw InvalidOperandError(os.str());
    }
}

double max_abs(const Matrix& m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries, bool traceless, bool norm_one)
    : entries_(std::move(entries)), traceless_(traceless), norm_one_(norm_one) {
    require_square(entries_, "HermitianOperator");
    const double herm_violation = max_abs(entries_ - entries_.adjoint());
    if (herm_violation > tol::hermiticity) {
        std::ostringstream os;
        os << "HermitianOperator: symmetry violation " << herm_violation << " exceeds "
           << tol::hermiticity;
        throw InvalidOperandError(os.str());
    }
    if (traceless_) {
        const double tr = std::abs(entries_.trace());
        if (tr > tol::traceless * dim()) {
            std::ostringstream os;
            os << "HermitianOperator: |trace| = " << tr << " violates traceless flag";
            throw InvalidOperandError(os.str());
        }
    }
    if (norm_one_) {
        const double s1 = schatten1_norm(entries_);
        if (std::abs(s1 - 1.0) > tol::norm_one) {
            std::ostringstream os;
            os << "HermitianOperator: trace norm " << s1 << " violates norm_one flag";
            throw InvalidOperandError(os.str());
        }
    }
}

UnitaryOperator::UnitaryOperator(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "UnitaryOperator");
    const int d = dim();
    const double defect = (entries_.adjoint() * entries_ - Matrix::Identity(d, d)).norm();
    if (defect > tol::unitarity * d) {
        std::ostringstream os;
        os << "UnitaryOperator: ||U^dag U - I||_F = " << defect << " exceeds "
           << tol::unitarity * d;
        throw InvalidOperandError(os.str());
    }
    const double det_defect = std::abs(std::abs(entries_.determinant()) - 1.0);
    if (det_defect > tol::unitarity) {
        std::ostringstream os;
        os << "UnitaryOperator: | |det| - 1 | = " << det_defect << " exceeds " << tol::unitarity;
        throw InvalidOperandError(os.str());
    }
}

UnitaryOperator UnitaryOperator::identity(int dim) {
    return UnitaryOperator(Matrix::Identity(dim, dim));
}

double schatten1_norm(const Matrix& m) {
    require_square(m, "schatten1_norm");
    // Hermitian fast path: singular values are |eigenvalues|.
    if (max_abs(m - m.adjoint()) <= 1e-10 * std::max(1.0, max_abs(m))) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

Matrix project_traceless(Matrix m) {
    require_square(m, "project_traceless");
    const Complex tr = m.trace();
    m -= (tr / static_cast<double>(m.rows())) * Matrix::Identity(m.rows(), m.cols());
    return m;
}

Matrix normalize_schatten1(const Matrix& m) {
    const double s1 = schatten1_norm(m);
    if (s1 <= 0.0) {
        throw InvalidOperandError("normalize_schatten1: zero matrix");
    }
    return m / s1;
}

Matrix commutator(const Matrix& x, const Matrix& y) {
    return x * y - y * x;
}

Matrix mat_exp_raw(const Matrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) {
        throw InvalidOperandError("mat_exp_raw: eigendecomposition failed");
    }
    const auto& v = es.eigenvectors();
    ComplexVector phases(h.rows());
    for (Eigen::Index j = 0; j < h.rows(); ++j) {
        phases[j] = std::exp(Complex(0.0, -es.eigenvalues()[j] * t));
    }
    return v * phases.asDiagonal() * v.adjoint();
}

UnitaryOperator mat_exp(const HermitianOperator& h, double t) {
    if (!std::isfinite(t)) {
        throw InvalidArgumentError("mat_exp: non-finite duration");
    }
    return UnitaryOperator(mat_exp_raw(h.entries(), t));
}

Matrix su_basis_matrix(int d, int k) {
    if (d < 2) {
        throw InvalidDimensionError("su_basis_matrix: need d >= 2");
    }
    const int off = d * (d - 1) / 2;
    if (k < 0 || k >= d * d - 1) {
        throw InvalidIndexError("su_basis_matrix: index out of range");
    }
    Matrix b = Matrix::Zero(d, d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (k < 2 * off) {
        // Recover the (j, l) pair, row-major over j < l.
        int idx = k % off;
        int j = 0;
        int row_len = d - 1;
        while (idx >= row_len) {
            idx -= row_len;
            ++j;
            --row_len;
        }
        const int l = j + 1 + idx;
        if (k < off) {
            b(j, l) = inv_sqrt2;
            b(l, j) = inv_sqrt2;
        } else {
            b(j, l) = Complex(0.0, -inv_sqrt2);
            b(l, j) = Complex(0.0, inv_sqrt2);
        }
    } else {
        const int l = k - 2 * off + 1;  // 1..d-1
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int m = 0; m < l; ++m) {
            b(m, m) = norm;
        }
        b(l, l) = -static_cast<double>(l) * norm;
    }
    return b;
}

SuVector su_vectorize(const Matrix& x) {
    require_square(x, "su_vectorize");
    const int d = static_cast<int>(x.rows());
    const double scale = std::max(1.0, max_abs(x));
    if (max_abs(x + x.adjoint()) > tol::anti_hermiticity * scale) {
        throw InvalidOperandError("su_vectorize: input is not anti-Hermitian within tolerance");
    }
    if (std::abs(x.trace()) > tol::anti_hermiticity * scale * d) {
        throw InvalidOperandError("su_vectorize: input is not traceless within tolerance");
    }
    // Coordinates of H = -iX in the Hermitian basis, extracted entrywise.
    const Matrix h = Complex(0.0, -1.0) * x;
    const int off = d * (d - 1) / 2;
    SuVector out;
    out.dim = d;
    out.coords = RealVector::Zero(d * d - 1);
    const double sqrt2 = std::sqrt(2.0);
    int idx = 0;
    for (int j = 0; j < d; ++j) {
        for (int l = j + 1; l < d; ++l, ++idx) {
            out.coords[idx] = sqrt2 * h(j, l).real();
            out.coords[off + idx] = -sqrt2 * h(j, l).imag();
        }
    }
    for (int l = 1; l < d; ++l) {
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        double acc = 0.0;
        for (int m = 0; m < l; ++m) {
            acc += h(m, m).real();
        }
        acc -= static_cast<double>(l) * h(l, l).real();
        out.coords[2 * off + l - 1] = norm * acc;
    }
    return out;
}

Matrix su_devectorize(const SuVector& v) {
    const int d = v.dim;
    if (d < 2 || v.coords.size() != d * d - 1) {
        throw InvalidOperandError("su_devectorize: inconsistent dimension");
    }
    const int off = d * (d - 1) / 2;
    Matrix h = Matrix::Zero(d, d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    int idx = 0;
    for (int j = 0; j < d; ++j) {
        for (int l = j + 1; l < d; ++l, ++idx) {
            const Complex z(inv_sqrt2 * v.coords[idx], -inv_sqrt2 * v.coords[off + idx]);
            h(j, l) = z;
            h(l, j) = std::conj(z);
        }
    }
    for (int l = 1; l < d; ++l) {
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        const double c = v.coords[2 * off + l - 1] * norm;
        for (int m = 0; m < l; ++m) {
            h(m, m) += c;
        }
        h(l, l) -= static_cast<double>(l) * c;
    }
    return Complex(0.0, 1.0) * h;
}

namespace {

Eigen::MatrixXd stack_coords(const std::vector<SuVector>& vectors, const char* who) {
    if (vectors.empty()) {
        throw InvalidOperandError(std::string(who) + ": empty vector list");
    }
    const int d = vectors.front().dim;
    Eigen::MatrixXd m(vectors.size(), vectors.front().coords.size());
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        if (vectors[r].dim != d) {
            throw InvalidOperandError(std::string(who) + ": mixed dimensions");
        }
        m.row(static_cast<Eigen::Index>(r)) = vectors[r].coords.transpose();
    }
    return m;
}

}  // namespace

RealVector stacked_singular_values(const std::vector<SuVector>& vectors) {
    Eigen::MatrixXd m = stack_coords(vectors, "stacked_singular_values");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues();
}

int numerical_rank(const std::vector<SuVector>& vectors, double rel_tol) {
    const RealVector sv = stacked_singular_values(vectors);
    if (sv.size() == 0 || sv[0] <= 0.0) {
        return 0;
    }
    const double cutoff = rel_tol * sv[0];
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff) {
            ++rank;
        }
    }
    return rank;
}

Matrix matrix_log_principal(const UnitaryOperator& u) {
    const int d = u.dim();
    Eigen::ComplexSchur<Matrix> schur(u.entries());
    if (schur.info() != Eigen::Success) {
        throw InvalidOperandError("matrix_log_principal: Schur decomposition failed");
    }
    // U is normal, so T is diagonal up to roundoff; the off-diagonal part is
    // discarded, which is well below the tolerances used downstream.
    ComplexVector log_diag(d);
    for (int j = 0; j < d; ++j) {
        Complex lambda = schur.matrixT()(j, j);
        const double mod = std::abs(lambda);
        if (mod > 0.0) {
            lambda /= mod;
        }
        if (std::abs(lambda + Complex(1.0, 0.0)) < tol::branch_cut) {
            throw BranchCutError("matrix_log_principal: eigenvalue at the -1 branch cut");
        }
        log_diag[j] = Complex(0.0, std::arg(lambda));
    }
    const Matrix& q = schur.matrixU();
    return q * log_diag.asDiagonal() * q.adjoint();
}

}  // namespace uforge
