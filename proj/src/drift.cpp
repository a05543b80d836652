#include "uforge/drift.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace uforge {

namespace {
constexpr double kCommutingTol = 1e-8;
}

DriftControls::DriftControls(HermitianOperator h0, HermitianOperator ha, HermitianOperator hb,
                             double gamma0, bool relaxed_drift)
    : h0_(std::move(h0)),
      ha_(std::move(ha)),
      hb_(std::move(hb)),
      gamma0_(gamma0),
      relaxed_drift_(relaxed_drift) {
    if (h0_.dim() != ha_.dim() || h0_.dim() != hb_.dim()) {
        throw InvalidOperandError("DriftControls: dimension mismatch");
    }
    const double ab = commutator(ha_.entries(), hb_.entries()).norm();
    if (ab <= kCommutingTol) {
        throw InvalidOperandError("DriftControls: controls Ha and Hb commute");
    }
    if (!relaxed_drift_) {
        const double a0 = commutator(h0_.entries(), ha_.entries()).norm();
        const double b0 = commutator(h0_.entries(), hb_.entries()).norm();
        if (a0 <= kCommutingTol || b0 <= kCommutingTol) {
            throw InvalidOperandError(
                "DriftControls: drift commutes with a control; use relaxed_drift to allow this");
        }
    }
}

namespace {

void check_nonnegative(const std::vector<double>& ds, const char* which) {
    for (double t : ds) {
        if (t < 0.0 || !std::isfinite(t)) {
            std::ostringstream os;
            os << "drift durations (" << which
               << ") must be finite and non-negative; the drift cannot be reversed";
            throw InvalidArgumentError(os.str());
        }
    }
}

void warn_large(const std::vector<double>& ds, const char* which, double bound,
                std::vector<std::string>& warnings) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds[i] > bound) {
            std::ostringstream os;
            os << which << "[" << i << "] = " << ds[i] << " exceeds the smallness bound "
               << bound;
            warnings.push_back(os.str());
        }
    }
}

}  // namespace

ConjugatedGeneratorResult drift_conjugated_generator(const DriftControls& dc,
                                                     const std::vector<double>& ts,
                                                     const std::vector<double>& taus,
                                                     DriftInsertion insertion,
                                                     double duration_bound) {
    if (ts.empty()) {
        throw InvalidArgumentError("drift_conjugated_generator: empty duration list");
    }
    if (taus.size() != ts.size() && taus.size() + 1 != ts.size()) {
        throw InvalidArgumentError(
            "drift_conjugated_generator: tau list must have |t| or |t|-1 entries");
    }
    check_nonnegative(ts, "t");
    check_nonnegative(taus, "tau");

    ConjugatedGeneratorResult result;
    warn_large(ts, "t", duration_bound, result.warnings);
    warn_large(taus, "tau", duration_bound, result.warnings);

    const Matrix ga = dc.effective_a();
    const Matrix gb = dc.effective_b();
    const int d = dc.dim();
    Matrix v = Matrix::Identity(d, d);
    // Leftmost factor first: V = e^{i ga t1} e^{i gb tau1} ...
    for (std::size_t i = 0; i < ts.size(); ++i) {
        v = v * mat_exp_raw(ga, -ts[i]);  // exp(+i H t) = exp(-i H (-t))
        if (i < taus.size()) {
            v = v * mat_exp_raw(gb, -taus[i]);
        }
    }
    const Matrix& ins =
        insertion == DriftInsertion::Ha ? dc.ha().entries() : dc.hb().entries();
    Matrix out = v * ins * v.adjoint();
    // Conjugation preserves Hermiticity; symmetrize away roundoff.
    result.matrix = (out + out.adjoint()) / 2.0;
    return result;
}

UnitaryOperator time_ordered_exp(const HermitianOperator& h0, const HermitianOperator& hc,
                                 const std::vector<double>& gamma, double delta_t) {
    if (gamma.empty()) {
        throw InvalidArgumentError("time_ordered_exp: empty control sample list");
    }
    if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
        throw InvalidArgumentError("time_ordered_exp: step must be positive");
    }
    if (h0.dim() != hc.dim()) {
        throw InvalidOperandError("time_ordered_exp: dimension mismatch");
    }
    const int d = h0.dim();
    Matrix u = Matrix::Identity(d, d);
    for (double g : gamma) {
        const Matrix h = h0.entries() + g * hc.entries();
        u = mat_exp_raw(h, -delta_t) * u;  // exp(+i H dt), first sample rightmost
    }
    return UnitaryOperator(std::move(u));
}

DriftRankReport drift_tangent_rank(const DriftControls& dc, int n_steps, double duration_scale,
                                   std::uint64_t seed, double rel_tol) {
    const int d = dc.dim();
    const int min_steps = (d * d + 1) / 2;
    if (n_steps < min_steps) {
        std::ostringstream os;
        os << "drift_tangent_rank: need at least ceil(d^2/2) = " << min_steps << " steps";
        throw InvalidArgumentError(os.str());
    }
    if (!(duration_scale > 0.0)) {
        throw InvalidArgumentError("drift_tangent_rank: duration scale must be positive");
    }

    DriftRankReport report;
    report.dim = d;
    report.n_steps = n_steps;
    report.duration_scale = duration_scale;
    report.seed = seed;
    report.relaxed = dc.relaxed_drift();
    report.target_rank = d * d - 1;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const Matrix ga = dc.effective_a();
    const Matrix gb = dc.effective_b();
    Matrix v = Matrix::Identity(d, d);
    std::vector<SuVector> directions;
    directions.reserve(2 * static_cast<std::size_t>(n_steps));
    for (int k = 0; k < n_steps; ++k) {
        const double t = (1.0 - unit(rng)) * duration_scale;
        if (t > 0.05) {
            std::ostringstream os;
            os << "step " << k << " duration " << t << " exceeds the smallness bound 0.05";
            report.warnings.push_back(os.str());
        }
        v = v * mat_exp_raw(k % 2 == 0 ? ga : gb, -t);  // forward product, +i convention
        for (const Matrix* ins : {&dc.ha().entries(), &dc.hb().entries()}) {
            Matrix conj = v * (*ins) * v.adjoint();
            conj = (conj + conj.adjoint()) / 2.0;
            directions.push_back(
                su_vectorize(Complex(0.0, 1.0) * project_traceless(std::move(conj))));
        }
    }
    const RealVector sv = stacked_singular_values(directions);
    const double cutoff = rel_tol * sv[0];
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff) {
            ++report.rank;
        }
    }
    report.sv_ratio =
        (sv.size() >= report.target_rank && sv[0] > 0.0) ? sv[report.target_rank - 1] / sv[0] : 0.0;
    report.pass = !report.relaxed && report.rank == report.target_rank;
    return report;
}

}  // namespace uforge
