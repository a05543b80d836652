// Test-only reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "uforge/linalg.hpp"

namespace oracle {

using uforge::Complex;
using uforge::ComplexVector;
using uforge::Matrix;

/// Matrix exponential of -i H t by scaling-and-squaring a plain Taylor
/// series. Independent of the eigendecomposition path used by the library.
inline Matrix matexp_taylor(const Matrix& h, double t) {
    Matrix x = Complex(0.0, -t) * h;
    int squarings = 0;
    double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.25) {
        x /= 2.0;
        norm /= 2.0;
        ++squarings;
    }
    const Eigen::Index d = h.rows();
    Matrix result = Matrix::Identity(d, d);
    Matrix term = Matrix::Identity(d, d);
    for (int k = 1; k <= 30; ++k) {
        term = (term * x) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-20) {
            break;
        }
    }
    for (int s = 0; s < squarings; ++s) {
        result = result * result;
    }
    return result;
}

/// Rank of real row vectors from Gram-matrix eigenvalues.
inline int gram_rank(const std::vector<Eigen::VectorXd>& rows, double rel_tol) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            gram(i, j) = rows[static_cast<std::size_t>(i)].dot(rows[static_cast<std::size_t>(j)]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (top <= 0.0) {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        // Gram eigenvalues are squared singular values.
        if (es.eigenvalues()[i] > rel_tol * rel_tol * top) {
            ++rank;
        }
    }
    return rank;
}

/// True when `word` is strictly smaller than all of its non-trivial cyclic
/// rotations (definition-level predicate, used for brute-force enumeration).
inline bool rotation_minimal(const std::vector<int>& word) {
    const std::size_t n = word.size();
    for (std::size_t r = 1; r < n; ++r) {
        std::vector<int> rotated(n);
        for (std::size_t i = 0; i < n; ++i) {
            rotated[i] = word[(i + r) % n];
        }
        if (!(word < rotated)) {
            return false;
        }
    }
    return true;
}

/// Counts Lyndon words of exactly length k over q symbols by enumerating all
/// q^k words against the definition.
inline long brute_force_lyndon_count(int q, int k) {
    std::vector<int> word(static_cast<std::size_t>(k), 0);
    long count = 0;
    while (true) {
        if (rotation_minimal(word)) {
            ++count;
        }
        int pos = k - 1;
        while (pos >= 0 && word[static_cast<std::size_t>(pos)] == q - 1) {
            word[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++word[static_cast<std::size_t>(pos)];
    }
    return count;
}

/// log(e^X e^Y) through third order: X + Y + [X,Y]/2 + [X,[X,Y]]/12
/// - [Y,[X,Y]]/12.
inline Matrix bch_third_order(const Matrix& x, const Matrix& y) {
    const Matrix xy = x * y - y * x;
    const Matrix xxy = x * xy - xy * x;
    const Matrix yxy = y * xy - xy * y;
    return x + y + xy / 2.0 + xxy / 12.0 - yxy / 12.0;
}

/// Sorted eigenvalue phases for spectrum comparisons of unitaries.
inline std::vector<double> sorted_phases(const Matrix& u) {
    Eigen::ComplexEigenSolver<Matrix> es(u, false);
    std::vector<double> phases;
    phases.reserve(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        phases.push_back(std::arg(es.eigenvalues()[i]));
    }
    std::sort(phases.begin(), phases.end());
    return phases;
}

/// m-th matrix power by plain repeated multiplication.
inline Matrix matrix_power(const Matrix& u, int m) {
    Matrix result = Matrix::Identity(u.rows(), u.cols());
    for (int i = 0; i < m; ++i) {
        result = u * result;
    }
    return result;
}

/// GUE-style random Hermitian matrix (not traceless, not normalized).
inline Matrix random_hermitian(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix g(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            g(r, c) = Complex(normal(rng), normal(rng));
        }
    }
    return (g + g.adjoint()) / 2.0;
}

/// Haar-ish random unit vector.
inline ComplexVector random_state(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    ComplexVector v(d);
    for (int i = 0; i < d; ++i) {
        v[i] = Complex(normal(rng), normal(rng));
    }
    v.normalize();
    return v;
}

}  // namespace oracle
