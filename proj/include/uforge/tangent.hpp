#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uforge/sequence.hpp"

namespace uforge {

/// The first-order motion directions {U^dag dU/dt_k, U^dag dU/dtau_k} of a
/// canonical sequence, in su(d) coordinates and pulse order.
class TangentFrame {
public:
    /// Requires canonical alternating form. Residual traces are projected out
    /// before vectorization.
    static TangentFrame build(const PulseSequence& seq);

    int dim() const { return dim_; }
    const std::vector<SuVector>& vectors() const { return vectors_; }
    const PulseSequence& source() const { return source_; }

private:
    TangentFrame(PulseSequence source, std::vector<SuVector> vectors)
        : source_(std::move(source)), dim_(source_.dim()), vectors_(std::move(vectors)) {}

    PulseSequence source_;
    int dim_;
    std::vector<SuVector> vectors_;
};

int frame_rank(const TangentFrame& frame, double rel_tol = tol::rank_rel);

struct SpanningTrial {
    int rank = 0;
    /// Ratio of the (d^2-1)-th singular value to the largest one.
    double sv_ratio = 0.0;
};

struct SpanningReport {
    std::string kind;  // "dense" or "local-chain"
    int dim = 0;
    int n_qubits = 0;  // 0 for dense pairs
    int pairs = 0;     // (A,B) pairs per sequence; the frame has 2*pairs vectors
    int trials = 0;
    std::uint64_t seed = 0;
    bool homogeneous = false;
    double rel_tol = tol::rank_rel;
    double duration_max = 0.0;
    bool under_parameterized = false;
    std::vector<SpanningTrial> trial_results;
    bool pass = false;

    int target_rank() const { return dim * dim - 1; }
    double min_sv_ratio() const;
};

/// Spanning experiment for dense GUE pairs: per trial draws a fresh pair and
/// random durations, builds the tangent frame and records its rank. Passes
/// when every trial reaches rank d^2-1. pairs_override = 0 selects the
/// default N = ceil(d^2/2).
SpanningReport verify_conjecture_I(int dim, int trials, std::uint64_t seed,
                                   double rel_tol = tol::rank_rel, int pairs_override = 0,
                                   int jobs = 1);

/// Same experiment with nearest-neighbour chain pairs on n qubits
/// (d = 2^n). pairs_override = 0 selects the default N = 2 d^2, which keeps
/// the smallest frame directions well above the rank tolerance.
SpanningReport verify_conjecture_II(int n_qubits, int trials, std::uint64_t seed,
                                    bool homogeneous, double rel_tol = tol::rank_rel,
                                    int pairs_override = 0, int jobs = 1);

namespace detail {
/// Uniform draw from (0, duration_max], the sampling used by the spanning
/// experiments.
std::vector<double> random_durations(std::size_t count, double duration_max,
                                     std::mt19937_64& rng);
}  // namespace detail

}  // namespace uforge
