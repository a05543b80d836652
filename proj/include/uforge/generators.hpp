#pragma once

#include <cstdint>
#include <random>

#include "uforge/linalg.hpp"

namespace uforge {

enum class PairKind { DenseRandom, LocalRandom, LocalHomogeneous };

/// Two non-commuting traceless unit-trace-norm control Hamiltonians.
class ControlPair {
public:
    ControlPair(HermitianOperator a, HermitianOperator b, PairKind kind, std::uint64_t seed);

    int dim() const { return a_.dim(); }
    const HermitianOperator& a() const { return a_; }
    const HermitianOperator& b() const { return b_; }
    PairKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }

    /// Frobenius norm of [a, b]; positive by the construction invariant.
    double commutator_norm() const { return commutator_norm_; }

private:
    HermitianOperator a_;
    HermitianOperator b_;
    PairKind kind_;
    std::uint64_t seed_;
    double commutator_norm_;
};

/// (G + G^dag)/2 with i.i.d. standard complex Gaussian entries, trace
/// projected out. Not normalized.
Matrix random_gue_traceless(int dim, std::mt19937_64& rng);

/// Dense GUE pair, each rescaled to unit trace norm. Deterministic per seed.
ControlPair random_dense_pair(int dim, std::uint64_t seed);

/// Nearest-neighbour chain pair on n qubits (d = 2^n): A summed over qubit
/// pairs (1,2), (3,4), ...; B over (2,3), (4,5), ... as far as each pattern
/// fits, so the last qubit idles in A for odd n and in B for even n. Each
/// two-qubit block is an independent GUE traceless draw unless `homogeneous`,
/// in which case all A blocks coincide and all B blocks coincide. The summed
/// operators are rescaled to unit trace norm.
ControlPair local_chain_pair(int n_qubits, std::uint64_t seed, bool homogeneous);

}  // namespace uforge
