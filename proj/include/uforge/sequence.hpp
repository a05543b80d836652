#pragma once

#include <memory>
#include <vector>

#include "uforge/generators.hpp"
#include "uforge/linalg.hpp"

namespace uforge {

enum class Generator : char { A = 'A', B = 'B' };

struct Pulse {
    Generator generator = Generator::A;
    double duration = 0.0;
};

/// Ordered pulse list over a fixed control pair. Pulse 0 is applied first,
/// i.e. it is the rightmost factor of the evaluated product; appending a
/// pulse multiplies the evaluation on the left. Canonical form means the
/// generators alternate A, B, A, B, ... starting from A.
class PulseSequence {
public:
    explicit PulseSequence(std::shared_ptr<const ControlPair> controls,
                           std::vector<Pulse> pulses = {});

    /// Alternating A, B, ... sequence from a flat duration list
    /// (t1, tau1, t2, tau2, ...).
    static PulseSequence canonical(std::shared_ptr<const ControlPair> controls,
                                   const std::vector<double>& durations);

    int dim() const { return controls_->dim(); }
    std::size_t size() const { return pulses_.size(); }
    const std::vector<Pulse>& pulses() const { return pulses_; }
    const ControlPair& controls() const { return *controls_; }
    const std::shared_ptr<const ControlPair>& controls_ptr() const { return controls_; }
    bool canonical_form() const { return canonical_form_; }

    const Matrix& generator_matrix(Generator g) const {
        return g == Generator::A ? controls_->a().entries() : controls_->b().entries();
    }

private:
    std::shared_ptr<const ControlPair> controls_;
    std::vector<Pulse> pulses_;
    bool canonical_form_;
};

/// Product of the pulse exponentials, rightmost factor first in pulse order.
/// The empty sequence evaluates to the identity.
UnitaryOperator evaluate(const PulseSequence& seq);

/// Reversed pulse order with negated durations; evaluates to the inverse.
PulseSequence inverse(const PulseSequence& seq);

/// `first` applied before `second`; controls must match.
PulseSequence concat(const PulseSequence& first, const PulseSequence& second);

/// m-fold concatenation of seq with itself. m >= 1.
PulseSequence repeat_compile(const PulseSequence& seq, int m);

/// Derivative of evaluate(seq) with respect to the duration of pulse `index`
/// (0-based): the evaluated product with (-i G) inserted immediately left of
/// that pulse's exponential. Not unitary.
Matrix partial_derivative(const PulseSequence& seq, std::size_t index);

/// U^dag dU/d(duration_k) for every pulse k, each a traceless anti-Hermitian
/// matrix. Equivalent to conjugating -i G_k by the partial product of pulses
/// 0..k-1, which is how it is computed.
std::vector<Matrix> left_translated_derivatives(const PulseSequence& seq);

/// V e^{-iB delta} V^dag where V = evaluate(inverse(prefix)): the exponential
/// of the prefix-conjugated B generator.
UnitaryOperator conjugated_generator(const PulseSequence& prefix, double delta);

/// Out-of-time-ordered correlator Tr((U^dag W U)^dag V^dag (U^dag W U) V rho).
/// rho must be Hermitian positive semi-definite with unit trace.
Complex otoc(const Matrix& w, const Matrix& v, const UnitaryOperator& u_t, const Matrix& rho);

namespace detail {
/// Per-pulse factor matrices exp(-i G_k t_k), using one eigendecomposition
/// per generator.
std::vector<Matrix> pulse_factors(const PulseSequence& seq);

/// Eigendecompositions of both generators, for callers that build many
/// factors of the same pair.
struct PairEigensystem {
    RealVector eigenvalues_a, eigenvalues_b;
    Matrix eigenvectors_a, eigenvectors_b;

    explicit PairEigensystem(const ControlPair& pair);
    Matrix factor(Generator g, double duration) const;
};
}  // namespace detail

}  // namespace uforge
