#include <doctest.h>

#include <memory>
#include <random>

#include "oracles.hpp"
#include "uforge/drift.hpp"
#include "uforge/generators.hpp"
#include "uforge/sequence.hpp"

using namespace uforge;

namespace {

Matrix pauli(char which) {
    Matrix m(2, 2);
    switch (which) {
        case 'x': m << 0, 1, 1, 0; break;
        case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

HermitianOperator normalized(const Matrix& m) {
    return HermitianOperator(normalize_schatten1(project_traceless(m)), true, true);
}

DriftControls qubit_drift() {
    return DriftControls(normalized(pauli('z')), normalized(pauli('x')), normalized(pauli('y')),
                         1.0);
}

}  // namespace

TEST_CASE("DriftControls enforces the commutator assumptions") {
    CHECK_NOTHROW(qubit_drift());
    // Drift parallel to Ha commutes with it: rejected unless relaxed.
    CHECK_THROWS_AS(DriftControls(normalized(pauli('x')), normalized(pauli('x')),
                                  normalized(pauli('y')), 1.0),
                    InvalidOperandError);
    CHECK_NOTHROW(DriftControls(normalized(pauli('x')), normalized(pauli('x')),
                                normalized(pauli('y')), 1.0, /*relaxed=*/true));
    // Commuting controls are rejected in every mode.
    CHECK_THROWS_AS(DriftControls(normalized(pauli('z')), normalized(pauli('x')),
                                  normalized(pauli('x')), 1.0, true),
                    InvalidOperandError);
}

TEST_CASE("drift conjugation with zero durations returns the inserted control") {
    const DriftControls dc = qubit_drift();
    const auto result = drift_conjugated_generator(dc, {0.0, 0.0}, {0.0}, DriftInsertion::Hb);
    CHECK((result.matrix - dc.hb().entries()).norm() < 1e-14);
    CHECK(result.warnings.empty());
}

TEST_CASE("drift conjugation rejects negative durations and warns on large ones") {
    const DriftControls dc = qubit_drift();
    CHECK_THROWS_AS(drift_conjugated_generator(dc, {-0.01}, {}, DriftInsertion::Hb),
                    InvalidArgumentError);
    const auto result = drift_conjugated_generator(dc, {0.2}, {}, DriftInsertion::Hb);
    CHECK(result.warnings.size() == 1);
    CHECK_THROWS_AS(drift_conjugated_generator(dc, {0.01}, {0.01, 0.01}, DriftInsertion::Ha),
                    InvalidArgumentError);
}

TEST_CASE("zero drift reduces to the sequence-module conjugation") {
    const ControlPair pair = random_dense_pair(3, 5);
    const DriftControls dc(HermitianOperator(Matrix::Zero(3, 3), true), pair.a(), pair.b(), 1.0,
                           /*relaxed=*/true);
    const std::vector<double> ts{0.03, 0.02};
    const std::vector<double> taus{0.04};
    const auto result = drift_conjugated_generator(dc, ts, taus, DriftInsertion::Hb);

    auto shared = std::make_shared<const ControlPair>(pair);
    const PulseSequence prefix(shared, {{Generator::A, ts[0]},
                                        {Generator::B, taus[0]},
                                        {Generator::A, ts[1]}});
    const Matrix v = evaluate(inverse(prefix)).entries();
    const Matrix expected = v * pair.b().entries() * v.adjoint();
    CHECK((result.matrix - expected).norm() < 1e-12);
}

TEST_CASE("drift conjugation is Hermitian and isospectral to the insertion") {
    const DriftControls dc = qubit_drift();
    const auto result =
        drift_conjugated_generator(dc, {0.04, 0.03, 0.02}, {0.05, 0.01}, DriftInsertion::Ha);
    CHECK((result.matrix - result.matrix.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> got(result.matrix, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> want(dc.ha().entries(), Eigen::EigenvaluesOnly);
    CHECK((got.eigenvalues() - want.eigenvalues()).norm() < 1e-10);
}

TEST_CASE("time_ordered_exp with constant control matches the closed form") {
    const DriftControls dc = qubit_drift();
    const double gamma0 = 0.7;
    const int m = 64;
    const double total = 1.2;
    const std::vector<double> gamma(m, gamma0);
    const UnitaryOperator u = time_ordered_exp(dc.h0(), dc.ha(), gamma, total / m);
    const Matrix h = dc.h0().entries() + gamma0 * dc.ha().entries();
    const Matrix expected = mat_exp_raw(h, -total);  // exp(+i H T)
    CHECK((u.entries() - expected).norm() < 1e-12);
}

TEST_CASE("time_ordered_exp basics and validation") {
    const DriftControls dc = qubit_drift();
    const UnitaryOperator single = time_ordered_exp(dc.h0(), dc.ha(), {0.3}, 0.5);
    CHECK((single.entries() - mat_exp_raw(dc.h0().entries() + 0.3 * dc.ha().entries(), -0.5))
              .norm() < 1e-13);
    CHECK_THROWS_AS(time_ordered_exp(dc.h0(), dc.ha(), {}, 0.1), InvalidArgumentError);
    CHECK_THROWS_AS(time_ordered_exp(dc.h0(), dc.ha(), {0.1}, 0.0), InvalidArgumentError);
}

TEST_CASE("time_ordered_exp stays unitary for rough schedules") {
    const DriftControls dc = qubit_drift();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> g(-2.0, 2.0);
    std::vector<double> gamma(37);
    for (double& v : gamma) {
        v = g(rng);
    }
    CHECK_NOTHROW(time_ordered_exp(dc.h0(), dc.ha(), gamma, 0.21));
}

TEST_CASE("first-order Trotter error shrinks linearly for a sine schedule") {
    const DriftControls dc = qubit_drift();
    const double total = 1.0;
    // Left-endpoint sampling shows the generic first-order behaviour
    // (midpoint sampling would superconverge at second order).
    auto product = [&](int m) {
        std::vector<double> gamma(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            gamma[static_cast<std::size_t>(i)] = std::sin(i * total / m);
        }
        return time_ordered_exp(dc.h0(), dc.ha(), gamma, total / m).entries();
    };
    const Matrix reference = product(4096);
    std::vector<double> xs, ys;
    for (int m : {8, 16, 32, 64, 128}) {
        xs.push_back(std::log(total / m));
        ys.push_back(std::log((product(m) - reference).norm()));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("drift rank experiment finds all directions on a single qubit") {
    const DriftControls dc = qubit_drift();
    const DriftRankReport report = drift_tangent_rank(dc, 8, 0.02, 3);
    CHECK(report.rank == 3);
    CHECK(report.pass);
}

TEST_CASE("drift rank collapses to the control span as durations vanish") {
    const DriftControls dc = qubit_drift();
    const DriftRankReport report = drift_tangent_rank(dc, 8, 1e-10, 3);
    CHECK(report.rank == 2);
    CHECK_FALSE(report.pass);
}

TEST_CASE("drift rank validates the step count") {
    const DriftControls dc = qubit_drift();
    CHECK_THROWS_AS(drift_tangent_rank(dc, 1, 0.02, 3), InvalidArgumentError);
}

TEST_CASE("relaxed commuting-drift mode reports without a pass claim") {
    const DriftControls dc(normalized(pauli('x')), normalized(pauli('x')), normalized(pauli('y')),
                           1.0, /*relaxed=*/true);
    const DriftRankReport report = drift_tangent_rank(dc, 8, 0.02, 5);
    CHECK(report.relaxed);
    CHECK_FALSE(report.pass);
    CHECK(report.rank >= 2);
}
