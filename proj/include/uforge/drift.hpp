#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uforge/linalg.hpp"

namespace uforge {

/// Always-on drift Hamiltonian plus two switchable controls applied as
/// H0 + gamma0 Ha and H0 + gamma0 Hb. The drift direction cannot be
/// reversed, so all drift-bearing durations must be non-negative; inverses
/// arise only through conjugation structure. By default [H0,Ha], [H0,Hb] and
/// [Ha,Hb] must all be nonzero; `relaxed_drift` lifts the first two
/// requirements (commuting drift).
class DriftControls {
public:
    DriftControls(HermitianOperator h0, HermitianOperator ha, HermitianOperator hb, double gamma0,
                  bool relaxed_drift = false);

    int dim() const { return h0_.dim(); }
    const HermitianOperator& h0() const { return h0_; }
    const HermitianOperator& ha() const { return ha_; }
    const HermitianOperator& hb() const { return hb_; }
    double gamma0() const { return gamma0_; }
    bool relaxed_drift() const { return relaxed_drift_; }

    /// H0 + gamma0 Ha (or Hb).
    Matrix effective_a() const { return h0_.entries() + gamma0_ * ha_.entries(); }
    Matrix effective_b() const { return h0_.entries() + gamma0_ * hb_.entries(); }

private:
    HermitianOperator h0_, ha_, hb_;
    double gamma0_;
    bool relaxed_drift_;
};

enum class DriftInsertion { Ha, Hb };

struct ConjugatedGeneratorResult {
    Matrix matrix;  // Hermitian, isospectral to the inserted control
    std::vector<std::string> warnings;
};

/// V H_ins V^dag where V is the alternating forward product
/// e^{i(H0+g0 Ha)t_1} e^{i(H0+g0 Hb)tau_1} ... over the supplied duration
/// lists (taus may be one shorter than ts, ending the product on an a-type
/// factor). Durations must be non-negative; durations above duration_bound
/// produce warnings, not failures.
ConjugatedGeneratorResult drift_conjugated_generator(const DriftControls& dc,
                                                     const std::vector<double>& ts,
                                                     const std::vector<double>& taus,
                                                     DriftInsertion insertion,
                                                     double duration_bound = 0.05);

/// Ordered product prod_{i=1..m} exp{i (H0 + gamma_i Hc) dt}, factor i=1
/// applied first (rightmost). Exactly unitary.
UnitaryOperator time_ordered_exp(const HermitianOperator& h0, const HermitianOperator& hc,
                                 const std::vector<double>& gamma, double delta_t);

struct DriftRankReport {
    int dim = 0;
    int n_steps = 0;
    double duration_scale = 0.0;
    std::uint64_t seed = 0;
    bool relaxed = false;
    int rank = 0;
    int target_rank = 0;  // d^2 - 1
    double sv_ratio = 0.0;
    bool pass = false;  // meaningful only when !relaxed
    std::vector<std::string> warnings;
};

/// First-order direction experiment: builds the forward drift product with
/// random durations in (0, duration_scale], inserts Ha and Hb after every
/// prefix, vectorizes the conjugated controls and reports the su(d) rank
/// against d^2-1. Requires n_steps >= ceil(d^2/2).
DriftRankReport drift_tangent_rank(const DriftControls& dc, int n_steps, double duration_scale,
                                   std::uint64_t seed, double rel_tol = tol::rank_rel);

}  // namespace uforge
