#include "uforge/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uforge/parallel.hpp"

namespace uforge {

namespace detail {

std::vector<double> random_durations(std::size_t count, double duration_max,
                                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> out(count);
    for (double& t : out) {
        t = (1.0 - unit(rng)) * duration_max;  // (0, duration_max]
    }
    return out;
}

}  // namespace detail

TangentFrame TangentFrame::build(const PulseSequence& seq) {
    if (!seq.canonical_form()) {
        throw InvalidFormError("TangentFrame: sequence is not in canonical alternating form");
    }
    std::vector<Matrix> raw = left_translated_derivatives(seq);
    std::vector<SuVector> vectors;
    vectors.reserve(raw.size());
    for (Matrix& x : raw) {
        vectors.push_back(su_vectorize(project_traceless(std::move(x))));
    }
    return TangentFrame(seq, std::move(vectors));
}

int frame_rank(const TangentFrame& frame, double rel_tol) {
    return numerical_rank(frame.vectors(), rel_tol);
}

double SpanningReport::min_sv_ratio() const {
    double m = std::numeric_limits<double>::infinity();
    for (const SpanningTrial& t : trial_results) {
        m = std::min(m, t.sv_ratio);
    }
    return trial_results.empty() ? 0.0 : m;
}

namespace {

// Durations are drawn uniformly from (0, pi]: with unit-trace-norm
// generators this keeps the weakest frame directions well conditioned,
// which sampling from (0, 1] does not for d >= 4.
constexpr double kDurationMax = std::numbers::pi;

SpanningTrial run_trial(const ControlPair& pair, int pairs, double rel_tol,
                        std::uint64_t duration_seed) {
    std::mt19937_64 rng(duration_seed);
    const std::vector<double> durations =
        detail::random_durations(static_cast<std::size_t>(2 * pairs), kDurationMax, rng);
    auto shared = std::make_shared<const ControlPair>(pair);
    const PulseSequence seq = PulseSequence::canonical(shared, durations);
    const TangentFrame frame = TangentFrame::build(seq);
    const RealVector sv = stacked_singular_values(frame.vectors());
    SpanningTrial trial;
    trial.rank = 0;
    const double cutoff = rel_tol * sv[0];
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff) {
            ++trial.rank;
        }
    }
    const int target = pair.dim() * pair.dim() - 1;
    trial.sv_ratio = (sv.size() >= target && sv[0] > 0.0) ? sv[target - 1] / sv[0] : 0.0;
    return trial;
}

std::uint64_t trial_duration_seed(std::uint64_t seed, int index) {
    // Distinct stream from the pair-generation seed.
    return (seed + static_cast<std::uint64_t>(index)) * 0x9e3779b97f4a7c15ULL + 0x51ULL;
}

void finalize(SpanningReport& report, double rel_tol) {
    report.rel_tol = rel_tol;
    report.duration_max = kDurationMax;
    report.under_parameterized = 2 * report.pairs < report.target_rank();
    report.pass = !report.trial_results.empty();
    for (const SpanningTrial& t : report.trial_results) {
        if (t.rank != report.target_rank()) {
            report.pass = false;
        }
    }
}

}  // namespace

SpanningReport verify_conjecture_I(int dim, int trials, std::uint64_t seed, double rel_tol,
                                   int pairs_override, int jobs) {
    if (dim < 2) {
        throw InvalidDimensionError("verify_conjecture_I: need dim >= 2");
    }
    if (trials < 1) {
        throw InvalidArgumentError("verify_conjecture_I: need at least one trial");
    }
    SpanningReport report;
    report.kind = "dense";
    report.dim = dim;
    report.pairs = pairs_override > 0 ? pairs_override : (dim * dim + 1) / 2;
    report.trials = trials;
    report.seed = seed;
    report.trial_results.resize(static_cast<std::size_t>(trials));
    parallel_for_index(trials, jobs, [&](int i) {
        const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(i);
        const ControlPair pair = random_dense_pair(dim, trial_seed);
        report.trial_results[static_cast<std::size_t>(i)] =
            run_trial(pair, report.pairs, rel_tol, trial_duration_seed(seed, i));
    });
    finalize(report, rel_tol);
    return report;
}

SpanningReport verify_conjecture_II(int n_qubits, int trials, std::uint64_t seed, bool homogeneous,
                                    double rel_tol, int pairs_override, int jobs) {
    if (n_qubits < 3) {
        throw InvalidDimensionError("verify_conjecture_II: need at least 3 qubits");
    }
    if (trials < 1) {
        throw InvalidArgumentError("verify_conjecture_II: need at least one trial");
    }
    const int dim = 1 << n_qubits;
    SpanningReport report;
    report.kind = "local-chain";
    report.dim = dim;
    report.n_qubits = n_qubits;
    report.pairs = pairs_override > 0 ? pairs_override : 2 * dim * dim;
    report.trials = trials;
    report.seed = seed;
    report.homogeneous = homogeneous;
    report.trial_results.resize(static_cast<std::size_t>(trials));
    parallel_for_index(trials, jobs, [&](int i) {
        const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(i);
        const ControlPair pair = local_chain_pair(n_qubits, trial_seed, homogeneous);
        report.trial_results[static_cast<std::size_t>(i)] =
            run_trial(pair, report.pairs, rel_tol, trial_duration_seed(seed, i));
    });
    finalize(report, rel_tol);
    return report;
}

}  // namespace uforge
