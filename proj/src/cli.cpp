#include "uforge/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "uforge/io.hpp"
#include "uforge/reports.hpp"

namespace uforge::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

fs::path resolve_out_dir(const std::string& flag_value) {
    fs::path dir;
    if (!flag_value.empty()) {
        dir = flag_value;
    } else if (const char* env = std::getenv("UFORGE_OUT"); env && *env) {
        dir = env;
    } else {
        dir = ".";
    }
    fs::create_directories(dir);
    return dir;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
}

struct VerifyOptions {
    std::string kind;
    int dim = 3;
    int qubits = 3;
    int trials = 10;
    std::uint64_t seed = 1;
    int max_order = 6;
    double rel_tol = tol::rank_rel;
    int jobs = 1;
    int npairs = 0;
    bool homogeneous = false;
    std::string out;
};

int run_verify(const VerifyOptions& opt) {
    const fs::path out_dir = resolve_out_dir(opt.out);
    if (opt.kind == "I") {
        const SpanningReport report =
            verify_conjecture_I(opt.dim, opt.trials, opt.seed, opt.rel_tol, opt.npairs, opt.jobs);
        save_json(out_dir / "verify_I.json", to_json(report));
        std::cout << "spanning check (dense pairs): d=" << report.dim << " pairs=" << report.pairs
                  << " trials=" << report.trials << "\n";
        for (const SpanningTrial& t : report.trial_results) {
            std::cout << "  rank " << t.rank << "/" << report.target_rank()
                      << "  sv-ratio " << t.sv_ratio << "\n";
        }
        if (report.under_parameterized) {
            std::cout << "  note: under-parameterized (2N < d^2-1); full rank is unreachable\n";
        }
        std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
        return report.pass ? kExitPass : kExitCheckFailed;
    }
    if (opt.kind == "II") {
        const SpanningReport report = verify_conjecture_II(
            opt.qubits, opt.trials, opt.seed, opt.homogeneous, opt.rel_tol, opt.npairs, opt.jobs);
        save_json(out_dir / "verify_II.json", to_json(report));
        std::cout << "spanning check (local chains): n=" << report.n_qubits
                  << " d=" << report.dim << " pairs=" << report.pairs
                  << (report.homogeneous ? " homogeneous" : " heterogeneous")
                  << " trials=" << report.trials << "\n";
        for (const SpanningTrial& t : report.trial_results) {
            std::cout << "  rank " << t.rank << "/" << report.target_rank()
                      << "  sv-ratio " << t.sv_ratio << "\n";
        }
        std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
        return report.pass ? kExitPass : kExitCheckFailed;
    }
    if (opt.kind == "III") {
        const CommutatorSpanReport report =
            verify_conjecture_III(opt.dim, opt.max_order, opt.seed, opt.rel_tol);
        save_json(out_dir / "verify_III.json", to_json(report));
        std::ostringstream csv;
        csv << "order,total,independent,cumulative_words,expected_rank,rank\n";
        std::cout << "nested-commutator span: d=" << report.dim << " (ambient "
                  << report.dim * report.dim - 1 << ")\n";
        std::cout << std::setw(6) << "order" << std::setw(10) << "total" << std::setw(13)
                  << "independent" << std::setw(12) << "cumulative" << std::setw(10) << "rank"
                  << "\n";
        for (const CommutatorOrderRow& r : report.rows) {
            std::cout << std::setw(6) << r.order << std::setw(10) << r.total << std::setw(13)
                      << r.independent << std::setw(12) << r.cumulative_words << std::setw(10)
                      << r.rank << "\n";
            csv << r.order << "," << r.total << "," << r.independent << "," << r.cumulative_words
                << "," << r.expected_rank << "," << r.rank << "\n";
        }
        write_text(out_dir / "verify_III.csv", csv.str());
        std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
        return report.pass ? kExitPass : kExitCheckFailed;
    }
    std::cerr << "unknown verification kind '" << opt.kind << "' (expected I, II or III)\n";
    return kExitUsage;
}

struct SynthesizeOptions {
    std::string target_file;
    std::string pairs_file;
    std::uint64_t seed = 1;
    double epsilon = 0.0;
    double time = 0.0;
    int block_size = 0;
    int max_blocks = 3;
    int max_iterations = 20000;
    double threshold = 1e-10;
    std::string out;
};

int run_synthesize(const SynthesizeOptions& opt) {
    const fs::path out_dir = resolve_out_dir(opt.out);
    if (opt.target_file.empty() == opt.pairs_file.empty()) {
        std::cerr << "exactly one of --target or --pairs is required\n";
        return kExitUsage;
    }

    DescentConfig cfg;
    cfg.seed = opt.seed;
    cfg.block_size = opt.block_size;
    cfg.max_blocks = opt.max_blocks;
    cfg.max_iterations = opt.max_iterations;
    cfg.convergence_threshold = opt.threshold;

    auto emit = [&](const DescentReport& report, const nlohmann::json& j) {
        save_json(out_dir / "descent.json", j);
        save_sequence(out_dir / "sequence.txt", report.final_sequence);
        std::ostringstream csv;
        csv << "iteration,error,step,block_count\n";
        for (const TraceEntry& e : report.error_trace) {
            csv << e.iteration << "," << fmt17(e.error) << "," << fmt17(e.step) << "," << e.blocks
                << "\n";
        }
        write_text(out_dir / "trace.csv", csv.str());
    };

    if (!opt.pairs_file.empty()) {
        const TrainingSet ts = load_training_pairs(opt.pairs_file);
        auto controls = std::make_shared<const ControlPair>(random_dense_pair(ts.dim(), opt.seed));
        save_matrix(out_dir / "controls_a.txt", controls->a().entries());
        save_matrix(out_dir / "controls_b.txt", controls->b().entries());
        const DescentReport report = synthesize(ts, controls, cfg);
        emit(report, to_json(report, cfg));
        std::cout << "final error " << report.final_error << " after " << report.iterations
                  << " iterations, " << report.blocks_used << " block(s)\n";
        return kExitPass;
    }

    const Matrix target = load_matrix(opt.target_file);
    const int d = static_cast<int>(target.rows());
    auto controls = std::make_shared<const ControlPair>(random_dense_pair(d, opt.seed));
    save_matrix(out_dir / "controls_a.txt", controls->a().entries());
    save_matrix(out_dir / "controls_b.txt", controls->b().entries());

    if (opt.time != 0.0) {
        if (!(opt.epsilon > 0.0)) {
            std::cerr << "--time requires --epsilon > 0\n";
            return kExitUsage;
        }
        const HermitianOperator h(target);
        const CompileReport report = compile_target(h, opt.time, opt.epsilon, controls, cfg);
        emit(report.descent, to_json(report, cfg));
        save_sequence(out_dir / "compiled_sequence.txt", report.compiled_sequence);
        std::cout << "epsilon step " << report.epsilon_used << ", " << report.repetitions
                  << " repetitions, " << report.total_pulses << " pulses, Frobenius error "
                  << report.final_frobenius_error << "\n";
        return kExitPass;
    }

    const DescentReport report = synthesize(UnitaryOperator(target), controls, cfg);
    emit(report, to_json(report, cfg));
    std::cout << "final error " << report.final_error << " after " << report.iterations
              << " iterations, " << report.blocks_used << " block(s)\n";
    return kExitPass;
}

struct BchOptions {
    std::string tree;
    int dim = 3;
    std::uint64_t seed = 1;
    std::vector<double> t_grid;
    std::string out;
};

int run_bch(const BchOptions& opt) {
    const fs::path out_dir = resolve_out_dir(opt.out);
    CommutatorTree tree = [&] {
        try {
            return parse_bracket_expression(opt.tree);
        } catch (const ParseError& e) {
            std::ostringstream os;
            os << "cannot parse '" << opt.tree << "' at position " << e.position() << ": "
               << e.what();
            throw IoError(os.str());
        }
    }();
    auto controls = std::make_shared<const ControlPair>(random_dense_pair(opt.dim, opt.seed));
    const std::vector<double> grid = opt.t_grid.empty() ? default_t_grid() : opt.t_grid;
    const CommutatorProgram program = compile_nested(tree, controls, grid.front());
    save_program(out_dir / "program.txt", program);
    const SlopeReport report = order_slope(program, grid);
    nlohmann::json slope_json = to_json(report);
    slope_json["tree"] = tree.bracket_notation();
    slope_json["degree"] = tree.degree();
    slope_json["dim"] = opt.dim;
    slope_json["seed"] = opt.seed;
    slope_json["pulses"] = program.sequence.size();
    save_json(out_dir / "slope.json", slope_json);
    std::ostringstream csv;
    csv << "t,deviation,excluded\n";
    for (const SlopePoint& p : report.points) {
        csv << fmt17(p.t) << "," << fmt17(p.deviation) << "," << (p.excluded ? 1 : 0) << "\n";
    }
    write_text(out_dir / "deviations.csv", csv.str());
    std::cout << "tree " << tree.bracket_notation() << ", degree " << tree.degree() << ", "
              << program.sequence.size() << " pulses\n";
    if (report.applicable) {
        std::cout << "fitted error order: " << report.slope << "\n";
    } else {
        std::cout << "exact compilation; no error order to fit\n";
    }
    if (!report.note.empty()) {
        std::cout << "note: " << report.note << "\n";
    }
    return kExitPass;
}

int run_lyndon(int q, int max_len, const std::string& out) {
    const fs::path out_dir = resolve_out_dir(out);
    const std::vector<LyndonWord> words = lyndon_words(q, max_len);
    std::ostringstream csv;
    csv << "length,word\n";
    std::size_t current = 0;
    for (const LyndonWord& w : words) {
        if (w.length() != current) {
            current = w.length();
            std::cout << "length " << current << ":";
        }
        std::cout << " " << w.str();
        if (&w == &words.back() || (&w + 1)->length() != current) {
            std::cout << "\n";
        }
        csv << w.length() << "," << w.str() << "\n";
    }
    std::cout << words.size() << " words\n";
    write_text(out_dir / "lyndon.csv", csv.str());
    return kExitPass;
}

int run_witt(int q, int max_k, const std::string& out) {
    const fs::path out_dir = resolve_out_dir(out);
    std::ostringstream csv;
    csv << "degree,dimension,total_commutators\n";
    std::cout << std::setw(8) << "degree" << std::setw(12) << "dimension" << std::setw(12)
              << "total" << "\n";
    for (int k = 1; k <= max_k; ++k) {
        const std::int64_t a_k = witt_dimension(q, k);
        const std::int64_t total = nested_commutator_count(q, k);
        std::cout << std::setw(8) << k << std::setw(12) << a_k << std::setw(12) << total << "\n";
        csv << k << "," << a_k << "," << total << "\n";
    }
    write_text(out_dir / "witt.csv", csv.str());
    return kExitPass;
}

struct DriftOptions {
    int dim = 2;
    int steps = 0;
    double scale = 0.02;
    double gamma0 = 1.0;
    std::uint64_t seed = 1;
    bool relaxed = false;
    std::string out;
};

int run_drift_rank(const DriftOptions& opt) {
    const fs::path out_dir = resolve_out_dir(opt.out);
    std::mt19937_64 rng(opt.seed);
    auto draw = [&] {
        return HermitianOperator(normalize_schatten1(random_gue_traceless(opt.dim, rng)), true,
                                 true);
    };
    const HermitianOperator h0 = draw();
    const HermitianOperator ha = draw();
    const HermitianOperator hb = draw();
    const DriftControls dc(h0, ha, hb, opt.gamma0, opt.relaxed);
    const int steps = opt.steps > 0 ? opt.steps : opt.dim * opt.dim;
    const DriftRankReport report = drift_tangent_rank(dc, steps, opt.scale, opt.seed);
    save_json(out_dir / "drift_rank.json", to_json(report));
    std::cout << "drift first-order directions: rank " << report.rank << "/" << report.target_rank
              << " (sv-ratio " << report.sv_ratio << ")\n";
    for (const std::string& w : report.warnings) {
        std::cout << "  warning: " << w << "\n";
    }
    if (report.relaxed) {
        std::cout << "relaxed-drift mode: rank reported without a pass/fail claim\n";
        return kExitPass;
    }
    std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? kExitPass : kExitCheckFailed;
}

struct EvaluateOptions {
    std::string sequence_file;
    std::string a_file;
    std::string b_file;
    std::string target_file;
    std::string out;
};

int run_evaluate(const EvaluateOptions& opt) {
    const fs::path out_dir = resolve_out_dir(opt.out);
    const HermitianOperator a{load_matrix(opt.a_file), true, true};
    const HermitianOperator b{load_matrix(opt.b_file), true, true};
    auto controls = std::make_shared<const ControlPair>(a, b, PairKind::DenseRandom, 0);
    const PulseSequence seq = load_sequence(opt.sequence_file, controls);
    const UnitaryOperator u = evaluate(seq);
    save_matrix(out_dir / "evaluated_unitary.txt", u.entries());
    std::cout << seq.size() << " pulses evaluated; result written to "
              << (out_dir / "evaluated_unitary.txt").string() << "\n";
    if (!opt.target_file.empty()) {
        const Matrix target = load_matrix(opt.target_file);
        if (target.rows() != u.dim()) {
            throw IoError("target dimension does not match the sequence");
        }
        std::cout << "Frobenius distance to target: " << (u.entries() - target).norm() << "\n";
    }
    return kExitPass;
}

struct TrotterOptions {
    std::string h0_file;
    std::string hc_file;
    std::string gamma_file;
    int steps = 16;
    double time = 1.0;
    std::string out;
};

int run_trotter(const TrotterOptions& opt) {
    const fs::path out_dir = resolve_out_dir(opt.out);
    const HermitianOperator h0{load_matrix(opt.h0_file)};
    const HermitianOperator hc{load_matrix(opt.hc_file)};
    const auto samples = load_gamma_samples(opt.gamma_file);
    const std::vector<double> gamma = resample_gamma(samples, opt.steps, opt.time);
    const UnitaryOperator u = time_ordered_exp(h0, hc, gamma, opt.time / opt.steps);
    save_matrix(out_dir / "trotter_unitary.txt", u.entries());
    save_json(out_dir / "trotter.json",
              nlohmann::json{{"h0", opt.h0_file},
                             {"hc", opt.hc_file},
                             {"gamma", opt.gamma_file},
                             {"steps", opt.steps},
                             {"time", opt.time},
                             {"result", "trotter_unitary.txt"}});
    std::cout << "time-ordered product over " << opt.steps << " steps written to "
              << (out_dir / "trotter_unitary.txt").string() << "\n";
    return kExitPass;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"uforge: compile and study unitaries built from two alternating Hamiltonians"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from a configuration file");

    VerifyOptions verify_opt;
    CLI::App* verify = app.add_subcommand(
        "verify", "Run a spanning / independence experiment (kinds I, II, III)");
    verify->add_option("kind", verify_opt.kind, "Experiment kind: I, II or III")->required();
    verify->add_option("--dim", verify_opt.dim, "Hilbert space dimension (kinds I, III)");
    verify->add_option("--qubits", verify_opt.qubits, "Chain length (kind II)");
    verify->add_option("--trials", verify_opt.trials, "Number of independent trials");
    verify->add_option("--seed", verify_opt.seed, "Base seed; trial i uses seed+i");
    verify->add_option("--max-order", verify_opt.max_order, "Highest commutator degree (kind III)");
    verify->add_option("--tol", verify_opt.rel_tol, "Relative rank tolerance");
    verify->add_option("--jobs", verify_opt.jobs, "Worker threads for trials");
    verify->add_option("--npairs", verify_opt.npairs, "Override the (A,B) pair count");
    verify->add_flag("--homogeneous", verify_opt.homogeneous,
                     "Kind II: identical two-qubit blocks");
    verify->add_option("--out", verify_opt.out, "Output directory (default $UFORGE_OUT or .)");

    SynthesizeOptions synth_opt;
    CLI::App* synth = app.add_subcommand(
        "synthesize", "Learn a pulse sequence for a target unitary or training set");
    synth->add_option("--target", synth_opt.target_file,
                      "Matrix file: a unitary target, or a Hamiltonian when --time is given");
    synth->add_option("--pairs", synth_opt.pairs_file, "Training-pair file");
    synth->add_option("--seed", synth_opt.seed, "Seed for controls and descent");
    synth->add_option("--epsilon", synth_opt.epsilon, "Step size for --time compilation");
    synth->add_option("--time", synth_opt.time, "Evolution time; compiles exp(-iHt)");
    synth->add_option("--block-size", synth_opt.block_size, "(A,B) pairs per block (0: d^2)");
    synth->add_option("--max-blocks", synth_opt.max_blocks, "Stacked block limit");
    synth->add_option("--max-iterations", synth_opt.max_iterations, "Iteration budget");
    synth->add_option("--threshold", synth_opt.threshold, "Convergence threshold on the error");
    synth->add_option("--out", synth_opt.out, "Output directory");

    BchOptions bch_opt;
    CLI::App* bch = app.add_subcommand(
        "bch", "Compile a nested commutator and fit its error-scaling order");
    bch->add_option("tree", bch_opt.tree, "Bracket expression, e.g. \"[A,[A,B]]\"")->required();
    bch->add_option("--dim", bch_opt.dim, "Hilbert space dimension");
    bch->add_option("--seed", bch_opt.seed, "Seed for the control pair");
    bch->add_option("--t-grid", bch_opt.t_grid, "Base times for the fit (default 2^-4..2^-10)")
        ->delimiter(',');
    bch->add_option("--out", bch_opt.out, "Output directory");

    int lyndon_q = 2;
    int lyndon_max_len = 5;
    std::string lyndon_out;
    CLI::App* lyndon = app.add_subcommand("lyndon", "List Lyndon words by length");
    lyndon->add_option("--q", lyndon_q, "Alphabet size");
    lyndon->add_option("--max-len", lyndon_max_len, "Maximum word length");
    lyndon->add_option("--out", lyndon_out, "Output directory");

    int witt_q = 2;
    int witt_max_k = 6;
    std::string witt_out;
    CLI::App* witt = app.add_subcommand("witt", "Free Lie algebra dimensions per degree");
    witt->add_option("--q", witt_q, "Alphabet size");
    witt->add_option("--max-k", witt_max_k, "Maximum degree");
    witt->add_option("--out", witt_out, "Output directory");

    DriftOptions drift_opt;
    CLI::App* drift = app.add_subcommand(
        "drift-rank", "First-order direction count under a drift Hamiltonian");
    drift->add_option("--dim", drift_opt.dim, "Hilbert space dimension");
    drift->add_option("--steps", drift_opt.steps, "Forward steps (default d^2)");
    drift->add_option("--scale", drift_opt.scale, "Duration scale");
    drift->add_option("--gamma0", drift_opt.gamma0, "Fixed control amplitude");
    drift->add_option("--seed", drift_opt.seed, "Seed");
    drift->add_flag("--relaxed", drift_opt.relaxed, "Allow a drift that commutes with controls");
    drift->add_option("--out", drift_opt.out, "Output directory");

    EvaluateOptions eval_opt;
    CLI::App* evaluate_cmd = app.add_subcommand(
        "evaluate", "Evaluate a saved pulse sequence against saved control operators");
    evaluate_cmd->add_option("--sequence", eval_opt.sequence_file, "Sequence file")->required();
    evaluate_cmd->add_option("--a", eval_opt.a_file, "Generator A matrix file")->required();
    evaluate_cmd->add_option("--b", eval_opt.b_file, "Generator B matrix file")->required();
    evaluate_cmd->add_option("--target", eval_opt.target_file,
                             "Optional unitary to compare against");
    evaluate_cmd->add_option("--out", eval_opt.out, "Output directory");

    TrotterOptions trotter_opt;
    CLI::App* trotter = app.add_subcommand(
        "trotter", "Time-ordered exponential of a sampled control schedule");
    trotter->add_option("--h0", trotter_opt.h0_file, "Drift Hamiltonian matrix file")->required();
    trotter->add_option("--hc", trotter_opt.hc_file, "Control Hamiltonian matrix file")
        ->required();
    trotter->add_option("--gamma", trotter_opt.gamma_file, "Two-column time/value samples")
        ->required();
    trotter->add_option("--steps", trotter_opt.steps, "Product factors m");
    trotter->add_option("--time", trotter_opt.time, "Total evolution time");
    trotter->add_option("--out", trotter_opt.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (verify->parsed()) {
            return run_verify(verify_opt);
        }
        if (synth->parsed()) {
            return run_synthesize(synth_opt);
        }
        if (bch->parsed()) {
            return run_bch(bch_opt);
        }
        if (lyndon->parsed()) {
            return run_lyndon(lyndon_q, lyndon_max_len, lyndon_out);
        }
        if (witt->parsed()) {
            return run_witt(witt_q, witt_max_k, witt_out);
        }
        if (drift->parsed()) {
            return run_drift_rank(drift_opt);
        }
        if (evaluate_cmd->parsed()) {
            return run_evaluate(eval_opt);
        }
        if (trotter->parsed()) {
            return run_trotter(trotter_opt);
        }
    } catch (const IoError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error at position " << e.position() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace uforge::cli
