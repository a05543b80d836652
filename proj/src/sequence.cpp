#include "uforge/sequence.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

namespace uforge {

namespace detail {

PairEigensystem::PairEigensystem(const ControlPair& pair) {
    Eigen::SelfAdjointEigenSolver<Matrix> es_a(pair.a().entries());
    Eigen::SelfAdjointEigenSolver<Matrix> es_b(pair.b().entries());
    if (es_a.info() != Eigen::Success || es_b.info() != Eigen::Success) {
        throw InvalidOperandError("PairEigensystem: eigendecomposition failed");
    }
    eigenvalues_a = es_a.eigenvalues();
    eigenvalues_b = es_b.eigenvalues();
    eigenvectors_a = es_a.eigenvectors();
    eigenvectors_b = es_b.eigenvectors();
}

Matrix PairEigensystem::factor(Generator g, double duration) const {
    const RealVector& w = (g == Generator::A) ? eigenvalues_a : eigenvalues_b;
    const Matrix& v = (g == Generator::A) ? eigenvectors_a : eigenvectors_b;
    ComplexVector phases(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        phases[j] = std::exp(Complex(0.0, -w[j] * duration));
    }
    return v * phases.asDiagonal() * v.adjoint();
}

std::vector<Matrix> pulse_factors(const PulseSequence& seq) {
    const PairEigensystem eig(seq.controls());
    std::vector<Matrix> factors;
    factors.reserve(seq.size());
    for (const Pulse& p : seq.pulses()) {
        factors.push_back(eig.factor(p.generator, p.duration));
    }
    return factors;
}

}  // namespace detail

namespace {

bool alternates_from_a(const std::vector<Pulse>& pulses) {
    for (std::size_t k = 0; k < pulses.size(); ++k) {
        const Generator expected = (k % 2 == 0) ? Generator::A : Generator::B;
        if (pulses[k].generator != expected) {
            return false;
        }
    }
    return true;
}

void require_same_controls(const PulseSequence& x, const PulseSequence& y, const char* who) {
    if (x.controls_ptr() == y.controls_ptr()) {
        return;
    }
    const bool same = x.dim() == y.dim() &&
                      x.controls().a().entries() == y.controls().a().entries() &&
                      x.controls().b().entries() == y.controls().b().entries();
    if (!same) {
        throw InvalidArgumentError(std::string(who) + ": sequences use different control pairs");
    }
}

}  // namespace

PulseSequence::PulseSequence(std::shared_ptr<const ControlPair> controls, std::vector<Pulse> pulses)
    : controls_(std::move(controls)), pulses_(std::move(pulses)) {
    if (!controls_) {
        throw InvalidOperandError("PulseSequence: null controls");
    }
    for (const Pulse& p : pulses_) {
        if (!std::isfinite(p.duration)) {
            throw InvalidOperandError("PulseSequence: non-finite duration");
        }
    }
    canonical_form_ = alternates_from_a(pulses_);
}

PulseSequence PulseSequence::canonical(std::shared_ptr<const ControlPair> controls,
                                       const std::vector<double>& durations) {
    std::vector<Pulse> pulses(durations.size());
    for (std::size_t k = 0; k < durations.size(); ++k) {
        pulses[k] = {(k % 2 == 0) ? Generator::A : Generator::B, durations[k]};
    }
    return PulseSequence(std::move(controls), std::move(pulses));
}

UnitaryOperator evaluate(const PulseSequence& seq) {
    const int d = seq.dim();
    if (seq.size() == 0) {
        return UnitaryOperator::identity(d);
    }
    const detail::PairEigensystem eig(seq.controls());
    Matrix u = Matrix::Identity(d, d);
    for (const Pulse& p : seq.pulses()) {
        u = eig.factor(p.generator, p.duration) * u;
    }
    return UnitaryOperator(std::move(u));
}

PulseSequence inverse(const PulseSequence& seq) {
    std::vector<Pulse> pulses(seq.pulses().rbegin(), seq.pulses().rend());
    for (Pulse& p : pulses) {
        p.duration = -p.duration;
    }
    return PulseSequence(seq.controls_ptr(), std::move(pulses));
}

PulseSequence concat(const PulseSequence& first, const PulseSequence& second) {
    require_same_controls(first, second, "concat");
    std::vector<Pulse> pulses = first.pulses();
    pulses.insert(pulses.end(), second.pulses().begin(), second.pulses().end());
    return PulseSequence(first.controls_ptr(), std::move(pulses));
}

PulseSequence repeat_compile(const PulseSequence& seq, int m) {
    if (m < 1) {
        throw InvalidArgumentError("repeat_compile: repetition count must be >= 1");
    }
    std::vector<Pulse> pulses;
    pulses.reserve(seq.size() * static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        pulses.insert(pulses.end(), seq.pulses().begin(), seq.pulses().end());
    }
    return PulseSequence(seq.controls_ptr(), std::move(pulses));
}

Matrix partial_derivative(const PulseSequence& seq, std::size_t index) {
    if (index >= seq.size()) {
        std::ostringstream os;
        os << "partial_derivative: index " << index << " out of range for " << seq.size()
           << " pulses";
        throw InvalidIndexError(os.str());
    }
    const std::vector<Matrix> factors = detail::pulse_factors(seq);
    const int d = seq.dim();
    Matrix m = Matrix::Identity(d, d);
    for (std::size_t k = 0; k < index; ++k) {
        m = factors[k] * m;
    }
    m = factors[index] * m;
    m = Complex(0.0, -1.0) * (seq.generator_matrix(seq.pulses()[index].generator) * m);
    for (std::size_t k = index + 1; k < seq.size(); ++k) {
        m = factors[k] * m;
    }
    return m;
}

std::vector<Matrix> left_translated_derivatives(const PulseSequence& seq) {
    // U^dag dU/dk = P_{k-1}^dag (-i G_k) P_{k-1} with P_k the partial product
    // of the first k factors; G_k commutes with its own exponential.
    const detail::PairEigensystem eig(seq.controls());
    const int d = seq.dim();
    Matrix prefix = Matrix::Identity(d, d);
    std::vector<Matrix> out;
    out.reserve(seq.size());
    for (const Pulse& p : seq.pulses()) {
        const Matrix& g = seq.generator_matrix(p.generator);
        Matrix x = Complex(0.0, -1.0) * (prefix.adjoint() * (g * prefix));
        out.push_back(std::move(x));
        prefix = eig.factor(p.generator, p.duration) * prefix;
    }
    return out;
}

UnitaryOperator conjugated_generator(const PulseSequence& prefix, double delta) {
    const Matrix v = evaluate(inverse(prefix)).entries();
    const Matrix core = mat_exp_raw(prefix.controls().b().entries(), delta);
    return UnitaryOperator(v * core * v.adjoint());
}

Complex otoc(const Matrix& w, const Matrix& v, const UnitaryOperator& u_t, const Matrix& rho) {
    const int d = u_t.dim();
    if (w.rows() != d || w.cols() != d || v.rows() != d || v.cols() != d || rho.rows() != d ||
        rho.cols() != d) {
        throw InvalidOperandError("otoc: dimension mismatch");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw InvalidOperandError("otoc: density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-10) {
        throw InvalidOperandError("otoc: density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw InvalidOperandError("otoc: density matrix has a negative eigenvalue");
    }
    const Matrix w_t = u_t.entries().adjoint() * w * u_t.entries();
    return (w_t.adjoint() * v.adjoint() * w_t * v * rho).trace();
}

}  // namespace uforge
