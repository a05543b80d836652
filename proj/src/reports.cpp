#include "uforge/reports.hpp"

#include <fstream>

namespace uforge {

using nlohmann::json;

json to_json(const SpanningReport& report) {
    json trials = json::array();
    for (const SpanningTrial& t : report.trial_results) {
        trials.push_back({{"rank", t.rank}, {"sv_ratio", t.sv_ratio}});
    }
    json j{{"kind", report.kind},
           {"dimension", report.dim},
           {"pairs", report.pairs},
           {"trials", report.trials},
           {"seed", report.seed},
           {"rel_tol", report.rel_tol},
           {"duration_max", report.duration_max},
           {"target_rank", report.target_rank()},
           {"under_parameterized", report.under_parameterized},
           {"min_sv_ratio", report.min_sv_ratio()},
           {"trial_results", trials},
           {"pass", report.pass}};
    if (report.n_qubits > 0) {
        j["n_qubits"] = report.n_qubits;
        j["homogeneous"] = report.homogeneous;
    }
    return j;
}

json to_json(const CommutatorSpanReport& report) {
    json rows = json::array();
    for (const CommutatorOrderRow& r : report.rows) {
        rows.push_back({{"order", r.order},
                        {"total", r.total},
                        {"independent", r.independent},
                        {"cumulative_words", r.cumulative_words},
                        {"expected_rank", r.expected_rank},
                        {"rank", r.rank}});
    }
    return json{{"dimension", report.dim}, {"max_order", report.max_order},
                {"seed", report.seed},     {"rel_tol", report.rel_tol},
                {"orders", rows},          {"pass", report.pass}};
}

json to_json(const SlopeReport& report) {
    json points = json::array();
    for (const SlopePoint& p : report.points) {
        points.push_back({{"t", p.t}, {"deviation", p.deviation}, {"excluded", p.excluded}});
    }
    return json{{"slope", report.slope},
                {"applicable", report.applicable},
                {"note", report.note},
                {"points", points}};
}

namespace {

json config_json(const DescentConfig& cfg) {
    return json{{"max_iterations", cfg.max_iterations},
                {"initial_step", cfg.initial_step},
                {"step_shrink", cfg.step_shrink},
                {"convergence_threshold", cfg.convergence_threshold},
                {"block_size", cfg.block_size},
                {"max_blocks", cfg.max_blocks},
                {"seed", cfg.seed},
                {"init_duration_scale", cfg.init_duration_scale},
                {"block_duration_scale", cfg.block_duration_scale},
                {"stall_window", cfg.stall_window},
                {"stall_tolerance", cfg.stall_tolerance},
                {"phase_insensitive", cfg.phase_insensitive}};
}

}  // namespace

json to_json(const DescentReport& report, const DescentConfig& cfg) {
    json trace = json::array();
    for (const TraceEntry& e : report.error_trace) {
        trace.push_back({{"iteration", e.iteration},
                         {"error", e.error},
                         {"step", e.step},
                         {"blocks", e.blocks}});
    }
    return json{{"config", config_json(cfg)},
                {"final_error", report.final_error},
                {"iterations", report.iterations},
                {"blocks_used", report.blocks_used},
                {"converged", report.converged},
                {"pulses", report.final_sequence.size()},
                {"sequence_file", "sequence.txt"},
                {"trace", trace}};
}

json to_json(const CompileReport& report, const DescentConfig& cfg) {
    json j = to_json(report.descent, cfg);
    j["repetitions"] = report.repetitions;
    j["epsilon_used"] = report.epsilon_used;
    j["total_pulses"] = report.total_pulses;
    j["final_frobenius_error"] = report.final_frobenius_error;
    return j;
}

json to_json(const DriftRankReport& report) {
    return json{{"dimension", report.dim},
                {"n_steps", report.n_steps},
                {"duration_scale", report.duration_scale},
                {"seed", report.seed},
                {"relaxed_drift", report.relaxed},
                {"rank", report.rank},
                {"target_rank", report.target_rank},
                {"sv_ratio", report.sv_ratio},
                {"pass", report.pass},
                {"warnings", report.warnings}};
}

void save_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

}  // namespace uforge
