#include "uforge/bch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uforge {

PulseSequence group_commutator(const PulseSequence& s1, const PulseSequence& s2) {
    return concat(concat(inverse(s1), inverse(s2)), concat(s1, s2));
}

namespace {

PulseSequence compile_rec(const CommutatorTree& tree,
                          const std::shared_ptr<const ControlPair>& controls, double t) {
    if (tree.is_leaf()) {
        const int g = tree.generator();
        if (g != 0 && g != 1) {
            throw InvalidArgumentError("compile_nested: leaves must be generator A or B");
        }
        return PulseSequence(controls,
                             {{g == 0 ? Generator::A : Generator::B, t}});
    }
    // The group commutator's leading log is [log U_{s2}, log U_{s1}], so the
    // left child compiles into the s2 slot.
    return group_commutator(compile_rec(tree.right(), controls, t),
                            compile_rec(tree.left(), controls, t));
}

}  // namespace

CommutatorProgram compile_nested(const CommutatorTree& tree,
                                 std::shared_ptr<const ControlPair> controls, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw InvalidArgumentError("compile_nested: base time must be positive");
    }
    if (!controls) {
        throw InvalidOperandError("compile_nested: null controls");
    }
    CommutatorProgram program{tree, t, compile_rec(tree, controls, t), tree.degree()};
    return program;
}

Matrix program_leading_term(const CommutatorTree& tree, const ControlPair& controls, double t) {
    const int k = tree.degree();
    const Matrix n_k = evaluate_tree(tree, {controls.a().entries(), controls.b().entries()});
    Complex phase(1.0, 0.0);
    for (int i = 0; i < k; ++i) {
        phase *= Complex(0.0, -1.0);
    }
    return phase * std::pow(t, k) * n_k;
}

std::vector<double> default_t_grid() {
    std::vector<double> grid;
    for (int e = 4; e <= 10; ++e) {
        grid.push_back(std::ldexp(1.0, -e));
    }
    return grid;
}

SlopeReport order_slope(const CommutatorProgram& program, const std::vector<double>& t_grid) {
    if (t_grid.size() < 4) {
        throw InvalidArgumentError("order_slope: need at least 4 grid points");
    }
    const auto [min_it, max_it] = std::minmax_element(t_grid.begin(), t_grid.end());
    if (!(*min_it > 0.0)) {
        throw InvalidArgumentError("order_slope: grid points must be positive");
    }
    if (*max_it / *min_it < 4.0) {
        throw InvalidArgumentError("order_slope: grid must span at least two octaves");
    }

    SlopeReport report;
    if (program.tree.degree() == 1) {
        report.applicable = false;
        report.note = "degree-1 program compiles exactly; no error order to fit";
        for (double t : t_grid) {
            const CommutatorProgram p =
                compile_nested(program.tree, program.sequence.controls_ptr(), t);
            const Matrix log_u = matrix_log_principal(evaluate(p.sequence));
            const Matrix lead = program_leading_term(p.tree, p.sequence.controls(), t);
            report.points.push_back({t, (log_u - lead).norm(), false});
        }
        return report;
    }

    std::vector<double> xs, ys;
    std::ostringstream warnings;
    for (double t : t_grid) {
        SlopePoint point;
        point.t = t;
        try {
            const CommutatorProgram p =
                compile_nested(program.tree, program.sequence.controls_ptr(), t);
            const Matrix log_u = matrix_log_principal(evaluate(p.sequence));
            const Matrix lead = program_leading_term(p.tree, p.sequence.controls(), t);
            point.deviation = (log_u - lead).norm();
        } catch (const BranchCutError&) {
            point.excluded = true;
            warnings << "t=" << t << " excluded (principal log branch cut); ";
        }
        report.points.push_back(point);
        if (!point.excluded && point.deviation > 0.0) {
            xs.push_back(std::log(t));
            ys.push_back(std::log(point.deviation));
        }
    }
    report.note = warnings.str();
    if (xs.size() < 4) {
        throw InvalidArgumentError("order_slope: fewer than 4 usable grid points after exclusions");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return report;
}

}  // namespace uforge
