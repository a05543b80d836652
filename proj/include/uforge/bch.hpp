#pragma once

#include <string>
#include <vector>

#include "uforge/freelie.hpp"
#include "uforge/sequence.hpp"

namespace uforge {

/// Pulse program approximating the exponential of a nested commutator: the
/// product's principal log equals (-i)^k t^k N_k + O(t^{k+1}), where N_k is
/// the tree evaluated on (A, B) and k its degree.
struct CommutatorProgram {
    CommutatorTree tree;
    double base_time = 0.0;
    PulseSequence sequence;
    int claimed_order = 0;
};

/// Concatenation realizing evaluate(s2) evaluate(s1) evaluate(s2)^-1
/// evaluate(s1)^-1; length is 2(|s1| + |s2|). Controls must match.
PulseSequence group_commutator(const PulseSequence& s1, const PulseSequence& s2);

/// Recursive compiler: a leaf becomes one pulse of duration t; a node
/// becomes the group commutator of its compiled children. Tree leaves must
/// be generators 0 (A) or 1 (B); t must be positive. A chain of degree k
/// compiles to 3 * 2^(k-1) - 2 pulses.
CommutatorProgram compile_nested(const CommutatorTree& tree,
                                 std::shared_ptr<const ControlPair> controls, double t);

/// The target principal-log term (-i)^k t^k N_k of a program recompiled at
/// base time t.
Matrix program_leading_term(const CommutatorTree& tree, const ControlPair& controls, double t);

struct SlopePoint {
    double t = 0.0;
    double deviation = 0.0;
    bool excluded = false;  // branch-cut failure at this grid point
};

struct SlopeReport {
    double slope = 0.0;
    bool applicable = true;  // false for exactly-compiled degree-1 programs
    std::vector<SlopePoint> points;
    std::string note;
};

/// Geometric default grid 2^-4 .. 2^-10.
std::vector<double> default_t_grid();

/// Least-squares slope of log(deviation) vs log(t), where the deviation is
/// the Frobenius distance between the compiled product's principal log and
/// the target leading term, recompiled at each grid point. Requires at least
/// 4 usable points spanning two octaves. Branch-cut failures are excluded
/// per point and noted.
SlopeReport order_slope(const CommutatorProgram& program, const std::vector<double>& t_grid);

}  // namespace uforge
