#include "uforge/generators.hpp"

#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace uforge {

namespace {
constexpr double kCommutingTol = 1e-8;
}

ControlPair::ControlPair(HermitianOperator a, HermitianOperator b, PairKind kind,
                         std::uint64_t seed)
    : a_(std::move(a)), b_(std::move(b)), kind_(kind), seed_(seed) {
    if (a_.dim() != b_.dim()) {
        throw InvalidOperandError("ControlPair: dimension mismatch");
    }
    if (!a_.traceless() || !b_.traceless() || !a_.norm_one() || !b_.norm_one()) {
        throw InvalidOperandError("ControlPair: operators must be traceless with unit trace norm");
    }
    commutator_norm_ = commutator(a_.entries(), b_.entries()).norm();
    if (commutator_norm_ <= kCommutingTol) {
        std::ostringstream os;
        os << "ControlPair: operators commute, ||[a,b]||_F = " << commutator_norm_;
        throw InvalidOperandError(os.str());
    }
}

Matrix random_gue_traceless(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix g(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    Matrix h = (g + g.adjoint()) / 2.0;
    return project_traceless(std::move(h));
}

ControlPair random_dense_pair(int dim, std::uint64_t seed) {
    if (dim < 2) {
        throw InvalidDimensionError("random_dense_pair: need dim >= 2");
    }
    std::mt19937_64 rng(seed);
    Matrix a = normalize_schatten1(random_gue_traceless(dim, rng));
    Matrix b = normalize_schatten1(random_gue_traceless(dim, rng));
    return ControlPair(HermitianOperator(std::move(a), true, true),
                       HermitianOperator(std::move(b), true, true), PairKind::DenseRandom, seed);
}

namespace {

// Places a two-qubit block on adjacent qubits (q, q+1), 1-based.
Matrix embed_block(const Matrix& block, int q, int n_qubits) {
    const auto left = static_cast<Eigen::Index>(1) << (q - 1);
    const auto right = static_cast<Eigen::Index>(1) << (n_qubits - q - 1);
    Matrix with_left = Eigen::kroneckerProduct(Matrix::Identity(left, left), block);
    return Eigen::kroneckerProduct(with_left, Matrix::Identity(right, right));
}

}  // namespace

ControlPair local_chain_pair(int n_qubits, std::uint64_t seed, bool homogeneous) {
    if (n_qubits < 3) {
        throw InvalidDimensionError("local_chain_pair: need at least 3 qubits");
    }
    if (n_qubits > 16) {
        throw InvalidDimensionError("local_chain_pair: chain longer than 16 qubits unsupported");
    }
    std::mt19937_64 rng(seed);
    const Eigen::Index d = static_cast<Eigen::Index>(1) << n_qubits;

    const Matrix a_block = random_gue_traceless(4, rng);
    const Matrix b_block = random_gue_traceless(4, rng);

    Matrix a = Matrix::Zero(d, d);
    for (int q = 1; q + 1 <= n_qubits; q += 2) {
        a += embed_block(homogeneous ? a_block : (q == 1 ? a_block : random_gue_traceless(4, rng)),
                         q, n_qubits);
    }
    Matrix b = Matrix::Zero(d, d);
    for (int q = 2; q + 1 <= n_qubits; q += 2) {
        b += embed_block(homogeneous ? b_block : (q == 2 ? b_block : random_gue_traceless(4, rng)),
                         q, n_qubits);
    }
    a = normalize_schatten1(a);
    b = normalize_schatten1(b);
    return ControlPair(HermitianOperator(std::move(a), true, true),
                       HermitianOperator(std::move(b), true, true),
                       homogeneous ? PairKind::LocalHomogeneous : PairKind::LocalRandom, seed);
}

}  // namespace uforge
