#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uforge/sequence.hpp"

namespace uforge {

struct TrainingPair {
    ComplexVector input;
    ComplexVector output;
};

/// Input/output state pairs (|psi>, U|psi>) for a common target U. Unit norms
/// are verified; consistency with a single U is the caller's responsibility.
class TrainingSet {
public:
    explicit TrainingSet(std::vector<TrainingPair> pairs);

    /// The d computational-basis pairs (e_j, U e_j), which determine U.
    static TrainingSet basis_pairs(const UnitaryOperator& target);

    int dim() const { return dim_; }
    std::size_t size() const { return pairs_.size(); }
    const std::vector<TrainingPair>& pairs() const { return pairs_; }

private:
    std::vector<TrainingPair> pairs_;
    int dim_ = 0;
};

struct DescentConfig {
    int max_iterations = 20000;
    double initial_step = 1.0;
    double step_shrink = 0.5;           // backtracking factor, in (0,1)
    double convergence_threshold = 1e-10;
    int block_size = 0;                 // (A,B) pairs per block; 0 selects d^2
    int max_blocks = 3;
    std::uint64_t seed = 1;
    double init_duration_scale = 1.0;   // first block: durations uniform (0,1] * scale
    double block_duration_scale = 1e-3; // appended blocks start near the identity
    int stall_window = 50;              // iterations without relative progress ...
    double stall_tolerance = 1e-10;     // ... below this triggers a new block
    bool phase_insensitive = false;     // optimize 1 - (1/M) sum |<out|U|in>|^2 instead
};

struct TraceEntry {
    long iteration = 0;
    double error = 0.0;
    double step = 0.0;  // accepted step length; 0 for the start and block splices
    int blocks = 1;
};

struct DescentReport {
    double final_error = 0.0;
    std::vector<TraceEntry> error_trace;  // start, accepted steps, block splices
    int blocks_used = 0;
    PulseSequence final_sequence;
    bool converged = false;
    long iterations = 0;
};

/// 1 - (1/M) sum_l Re <output_l | evaluate(seq) | input_l>. Zero exactly at
/// a phase-matched solution; 2 at the antipodal phase.
double error_training(const PulseSequence& seq, const TrainingSet& ts);

/// Analytic gradient of error_training with respect to every pulse duration.
RealVector error_gradient(const PulseSequence& seq, const TrainingSet& ts);

/// Phase-insensitive alternative, 1 - (1/M) sum_l |<output_l | U | input_l>|^2,
/// with its gradient. Selected in the descent via
/// DescentConfig::phase_insensitive; the plain loss stays the default.
double error_training_overlap2(const PulseSequence& seq, const TrainingSet& ts);
RealVector error_gradient_overlap2(const PulseSequence& seq, const TrainingSet& ts);

/// Gradient descent over pulse durations with Barzilai-Borwein trial steps
/// safeguarded by backtracking line search. Starts from one random block of
/// block_size (A,B) pairs; on stall, appends a fresh near-identity block up
/// to max_blocks. Deterministic per config seed. Non-convergence is reported,
/// not thrown.
DescentReport synthesize(const TrainingSet& target, std::shared_ptr<const ControlPair> controls,
                         const DescentConfig& cfg);

/// Explicit-unitary overload; reduces to basis-pair training.
DescentReport synthesize(const UnitaryOperator& target,
                         std::shared_ptr<const ControlPair> controls, const DescentConfig& cfg);

struct CompileReport {
    DescentReport descent;          // synthesis of the epsilon-step
    int repetitions = 0;            // m
    double epsilon_used = 0.0;      // |t| / m
    PulseSequence compiled_sequence;
    std::size_t total_pulses = 0;
    double final_frobenius_error = 0.0;  // against exp(-i H t)
};

/// Synthesizes exp(-i H sign(t) eps') with eps' = |t|/ceil(|t|/epsilon), then
/// repeats the sequence m = ceil(|t|/epsilon) times to realize exp(-i H t).
/// Requires unit trace norm, |t| <= pi and 0 < epsilon <= |t|.
CompileReport compile_target(const HermitianOperator& h, double t, double epsilon,
                             std::shared_ptr<const ControlPair> controls,
                             const DescentConfig& cfg);

}  // namespace uforge
