#include "uforge/optimizer.hpp"

#include <cmath>
#include <sstream>

namespace uforge {

TrainingSet::TrainingSet(std::vector<TrainingPair> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.empty()) {
        throw InvalidOperandError("TrainingSet: empty pair list");
    }
    dim_ = static_cast<int>(pairs_.front().input.size());
    for (const TrainingPair& p : pairs_) {
        if (p.input.size() != dim_ || p.output.size() != dim_) {
            throw InvalidOperandError("TrainingSet: mixed state dimensions");
        }
        if (std::abs(p.input.norm() - 1.0) > 1e-12 || std::abs(p.output.norm() - 1.0) > 1e-12) {
            throw InvalidOperandError("TrainingSet: states must be unit-norm");
        }
    }
}

TrainingSet TrainingSet::basis_pairs(const UnitaryOperator& target) {
    const int d = target.dim();
    std::vector<TrainingPair> pairs;
    pairs.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        TrainingPair p;
        p.input = ComplexVector::Zero(d);
        p.input[j] = Complex(1.0, 0.0);
        p.output = target.entries().col(j);
        pairs.push_back(std::move(p));
    }
    return TrainingSet(std::move(pairs));
}

namespace {

void require_dims(const PulseSequence& seq, const TrainingSet& ts, const char* who) {
    if (seq.dim() != ts.dim()) {
        std::ostringstream os;
        os << who << ": sequence dimension " << seq.dim() << " vs training dimension "
           << ts.dim();
        throw InvalidOperandError(os.str());
    }
}

struct Objective {
    const TrainingSet& ts;
    std::shared_ptr<const ControlPair> controls;
    detail::PairEigensystem eig;
    bool overlap2 = false;

    Objective(const TrainingSet& training, std::shared_ptr<const ControlPair> pair,
              bool phase_insensitive = false)
        : ts(training), controls(std::move(pair)), eig(*controls), overlap2(phase_insensitive) {}

    const Matrix& generator(std::size_t k) const {
        return k % 2 == 0 ? controls->a().entries() : controls->b().entries();
    }

    // E and dE/dt via forward states f_k = F_k..F_1 |in> and co-states
    // b_k = F_{k+1}^dag..F_n^dag |out>:  <out|dU/dk|in> = b_k^dag (-iG) f_k.
    void eval(const std::vector<double>& durations, double& error, RealVector& grad) const {
        const std::size_t n = durations.size();
        const double m = static_cast<double>(ts.size());
        std::vector<Matrix> factors(n);
        for (std::size_t k = 0; k < n; ++k) {
            factors[k] =
                eig.factor(k % 2 == 0 ? Generator::A : Generator::B, durations[k]);
        }
        error = 0.0;
        grad = RealVector::Zero(static_cast<Eigen::Index>(n));
        std::vector<ComplexVector> forward(n + 1);
        for (const TrainingPair& pair : ts.pairs()) {
            forward[0] = pair.input;
            for (std::size_t k = 0; k < n; ++k) {
                forward[k + 1] = factors[k] * forward[k];
            }
            const Complex z = pair.output.dot(forward[n]);
            // Residual forms of 1 - Re z and 1 - |z|^2: algebraically equal
            // for unit-norm states, but free of the 1 - (1 - tiny)
            // cancellation, so tiny errors stay resolvable in line searches.
            error += (overlap2 ? (forward[n] - z * pair.output).squaredNorm()
                               : 0.5 * (forward[n] - pair.output).squaredNorm()) /
                     m;
            ComplexVector co = pair.output;
            for (std::size_t k = n; k-- > 0;) {
                // co currently holds b_k = F_{k+1}^dag ... F_n^dag |out>.
                const ComplexVector gf = generator(k) * forward[k + 1];
                const Complex dz = Complex(0.0, -1.0) * co.dot(gf);
                grad[static_cast<Eigen::Index>(k)] -=
                    (overlap2 ? 2.0 * (std::conj(z) * dz).real() : dz.real()) / m;
                co = factors[k].adjoint() * co;
            }
        }
    }

    double error_only(const std::vector<double>& durations) const {
        const std::size_t n = durations.size();
        const double m = static_cast<double>(ts.size());
        std::vector<Matrix> factors(n);
        for (std::size_t k = 0; k < n; ++k) {
            factors[k] =
                eig.factor(k % 2 == 0 ? Generator::A : Generator::B, durations[k]);
        }
        double error = 0.0;
        for (const TrainingPair& pair : ts.pairs()) {
            ComplexVector state = pair.input;
            for (std::size_t k = 0; k < n; ++k) {
                state = factors[k] * state;
            }
            const Complex z = pair.output.dot(state);
            error += (overlap2 ? (state - z * pair.output).squaredNorm()
                               : 0.5 * (state - pair.output).squaredNorm()) /
                     m;
        }
        return error;
    }
};

}  // namespace

double error_training(const PulseSequence& seq, const TrainingSet& ts) {
    require_dims(seq, ts, "error_training");
    const Matrix u = evaluate(seq).entries();
    double error = 0.0;
    const double m = static_cast<double>(ts.size());
    for (const TrainingPair& pair : ts.pairs()) {
        // (1/2)||U in - out||^2 = 1 - Re<out|U|in> for unit-norm states,
        // evaluated without cancellation.
        error += 0.5 * (u * pair.input - pair.output).squaredNorm() / m;
    }
    return error;
}

RealVector error_gradient(const PulseSequence& seq, const TrainingSet& ts) {
    require_dims(seq, ts, "error_gradient");
    if (!seq.canonical_form()) {
        // The descent only ever produces canonical sequences; support the
        // general case through the one-derivative-at-a-time path.
        RealVector grad(static_cast<Eigen::Index>(seq.size()));
        const double m = static_cast<double>(ts.size());
        for (std::size_t k = 0; k < seq.size(); ++k) {
            const Matrix du = partial_derivative(seq, k);
            double g = 0.0;
            for (const TrainingPair& pair : ts.pairs()) {
                g -= pair.output.dot(du * pair.input).real() / m;
            }
            grad[static_cast<Eigen::Index>(k)] = g;
        }
        return grad;
    }
    Objective obj(ts, seq.controls_ptr());
    std::vector<double> durations(seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) {
        durations[k] = seq.pulses()[k].duration;
    }
    double error = 0.0;
    RealVector grad;
    obj.eval(durations, error, grad);
    return grad;
}

double error_training_overlap2(const PulseSequence& seq, const TrainingSet& ts) {
    require_dims(seq, ts, "error_training_overlap2");
    const Matrix u = evaluate(seq).entries();
    double error = 1.0;
    const double m = static_cast<double>(ts.size());
    for (const TrainingPair& pair : ts.pairs()) {
        error -= std::norm(pair.output.dot(u * pair.input)) / m;
    }
    return error;
}

RealVector error_gradient_overlap2(const PulseSequence& seq, const TrainingSet& ts) {
    require_dims(seq, ts, "error_gradient_overlap2");
    if (!seq.canonical_form()) {
        const Matrix u = evaluate(seq).entries();
        RealVector grad(static_cast<Eigen::Index>(seq.size()));
        const double m = static_cast<double>(ts.size());
        for (std::size_t k = 0; k < seq.size(); ++k) {
            const Matrix du = partial_derivative(seq, k);
            double g = 0.0;
            for (const TrainingPair& pair : ts.pairs()) {
                const Complex z = pair.output.dot(u * pair.input);
                const Complex dz = pair.output.dot(du * pair.input);
                g -= 2.0 * (std::conj(z) * dz).real() / m;
            }
            grad[static_cast<Eigen::Index>(k)] = g;
        }
        return grad;
    }
    Objective obj(ts, seq.controls_ptr(), /*phase_insensitive=*/true);
    std::vector<double> durations(seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) {
        durations[k] = seq.pulses()[k].duration;
    }
    double error = 0.0;
    RealVector grad;
    obj.eval(durations, error, grad);
    return grad;
}

namespace {

std::vector<double> random_block(std::size_t pulses, double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> out(pulses);
    for (double& t : out) {
        t = (1.0 - unit(rng)) * scale;  // (0, scale]
    }
    return out;
}

}  // namespace

DescentReport synthesize(const TrainingSet& target, std::shared_ptr<const ControlPair> controls,
                         const DescentConfig& cfg) {
    if (!controls) {
        throw InvalidOperandError("synthesize: null controls");
    }
    if (target.dim() != controls->dim()) {
        throw InvalidOperandError("synthesize: target and controls dimensions differ");
    }
    if (cfg.max_iterations < 0 || cfg.max_blocks < 1 || cfg.initial_step <= 0.0 ||
        cfg.step_shrink <= 0.0 || cfg.step_shrink >= 1.0 || cfg.convergence_threshold < 0.0) {
        throw InvalidArgumentError("synthesize: invalid descent configuration");
    }
    const int d = controls->dim();
    const std::size_t block_pulses =
        2 * static_cast<std::size_t>(cfg.block_size > 0 ? cfg.block_size : d * d);

    Objective obj(target, controls, cfg.phase_insensitive);
    std::mt19937_64 rng(cfg.seed);

    DescentReport report{0.0, {}, 1, PulseSequence(controls), false, 0};

    // An all-zero block evaluates to the identity; if that already meets the
    // threshold (identity targets), skip the descent.
    std::vector<double> durations(block_pulses, 0.0);
    double error = obj.error_only(durations);
    if (error > cfg.convergence_threshold) {
        durations = random_block(block_pulses, cfg.init_duration_scale, rng);
    }

    RealVector grad;
    obj.eval(durations, error, grad);
    report.error_trace.push_back({0, error, 0.0, 1});

    std::vector<double> prev_durations;
    RealVector prev_grad;
    double step = cfg.initial_step;
    std::vector<double> window;  // accepted errors, for stall detection
    window.push_back(error);

    auto stalled = [&]() {
        if (window.size() < static_cast<std::size_t>(cfg.stall_window) + 1) {
            return false;
        }
        const double before = window[window.size() - 1 - cfg.stall_window];
        return before - error < cfg.stall_tolerance * std::max(error, 1e-300);
    };

    while (report.iterations < cfg.max_iterations && error > cfg.convergence_threshold) {
        ++report.iterations;
        // Barzilai-Borwein trial step from the previous accepted move.
        if (!prev_durations.empty()) {
            double ss = 0.0;
            double sy = 0.0;
            for (std::size_t k = 0; k < durations.size(); ++k) {
                const double s = durations[k] - prev_durations[k];
                const double y = grad[static_cast<Eigen::Index>(k)] -
                                 prev_grad[static_cast<Eigen::Index>(k)];
                ss += s * s;
                sy += s * y;
            }
            if (sy > 0.0 && std::isfinite(ss / sy)) {
                step = ss / sy;
            }
        }
        bool accepted = false;
        std::vector<double> candidate(durations.size());
        double trial = step;
        while (trial > 1e-18) {
            for (std::size_t k = 0; k < durations.size(); ++k) {
                candidate[k] = durations[k] - trial * grad[static_cast<Eigen::Index>(k)];
            }
            const double cand_error = obj.error_only(candidate);
            if (cand_error < error) {
                prev_durations = durations;
                prev_grad = grad;
                durations = candidate;
                obj.eval(durations, error, grad);
                report.error_trace.push_back({report.iterations, error, trial,
                                              report.blocks_used});
                window.push_back(error);
                accepted = true;
                break;
            }
            trial *= cfg.step_shrink;
        }
        if (!accepted || stalled()) {
            if (report.blocks_used >= cfg.max_blocks || error <= cfg.convergence_threshold) {
                break;
            }
            // Append a near-identity block; shrink its scale until the splice
            // does not increase the error.
            const std::vector<double> extension = random_block(block_pulses, 1.0, rng);
            bool spliced = false;
            for (double scale = cfg.block_duration_scale; scale > 1e-16; scale *= 0.1) {
                std::vector<double> extended = durations;
                for (double t : extension) {
                    extended.push_back(t * scale);
                }
                if (obj.error_only(extended) <= error) {
                    durations = std::move(extended);
                    spliced = true;
                    break;
                }
            }
            if (!spliced) {
                break;
            }
            ++report.blocks_used;
            obj.eval(durations, error, grad);
            report.error_trace.push_back({report.iterations, error, 0.0, report.blocks_used});
            prev_durations.clear();
            step = cfg.initial_step;
            window.clear();
            window.push_back(error);
        }
    }

    report.final_error = error;
    report.converged = error <= cfg.convergence_threshold;
    report.final_sequence = PulseSequence::canonical(controls, durations);
    return report;
}

DescentReport synthesize(const UnitaryOperator& target,
                         std::shared_ptr<const ControlPair> controls, const DescentConfig& cfg) {
    return synthesize(TrainingSet::basis_pairs(target), std::move(controls), cfg);
}

CompileReport compile_target(const HermitianOperator& h, double t, double epsilon,
                             std::shared_ptr<const ControlPair> controls,
                             const DescentConfig& cfg) {
    if (std::abs(schatten1_norm(h.entries()) - 1.0) > 1e-8) {
        throw InvalidOperandError("compile_target: target Hamiltonian must have unit trace norm");
    }
    if (!h.traceless() && std::abs(h.entries().trace()) > tol::traceless * h.dim()) {
        throw InvalidOperandError("compile_target: target Hamiltonian must be traceless");
    }
    if (std::abs(t) > std::acos(-1.0) + 1e-12) {
        throw InvalidArgumentError("compile_target: |t| must not exceed pi");
    }
    if (!(epsilon > 0.0) || epsilon > std::abs(t)) {
        throw InvalidArgumentError("compile_target: need 0 < epsilon <= |t|");
    }
    const int m = static_cast<int>(std::ceil(std::abs(t) / epsilon - 1e-12));
    const double eps_exact = std::abs(t) / m;
    const double sign = t < 0.0 ? -1.0 : 1.0;

    const UnitaryOperator step_target = mat_exp(h, sign * eps_exact);
    CompileReport report{synthesize(step_target, controls, cfg),
                         m,
                         eps_exact,
                         PulseSequence(controls),
                         0,
                         0.0};
    report.compiled_sequence = repeat_compile(report.descent.final_sequence, m);
    report.total_pulses = report.compiled_sequence.size();
    const UnitaryOperator full_target = mat_exp(h, t);
    report.final_frobenius_error =
        (evaluate(report.compiled_sequence).entries() - full_target.entries()).norm();
    return report;
}

}  // namespace uforge
