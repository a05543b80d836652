#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "uforge/cli.hpp"
#include "uforge/io.hpp"

using namespace uforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("uforge_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"uforge"};
    argv.insert(argv.end(), args.begin(), args.end());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

bool bit_equal(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    return std::memcmp(a.data(), b.data(), sizeof(Complex) * static_cast<std::size_t>(a.size())) ==
           0;
}

}  // namespace

TEST_CASE("matrix files round-trip bit-exactly") {
    TempDir tmp;
    std::mt19937_64 rng(1);
    Matrix m = oracle::random_hermitian(5, rng);
    m(0, 1) = Complex(1.0 / 3.0, -2.0e-17);
    m(1, 0) = std::conj(m(0, 1));
    m(2, 2) = Complex(-0.1 + 0.3, 0.0);  // a value with awkward binary representation
    const fs::path file = tmp.path / "m.txt";
    save_matrix(file, m);
    CHECK(bit_equal(load_matrix(file), m));
}

TEST_CASE("matrix loader reports malformed files with line numbers") {
    TempDir tmp;
    const fs::path file = tmp.path / "bad.txt";
    {
        std::ofstream out(file);
        out << "2\n0 0 1.0 0.0\n0 1 nope 0.0\n";
    }
    try {
        load_matrix(file);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }

    {
        std::ofstream out(file);
        out << "2\n0 0 1 0\n0 0 1 0\n1 0 0 0\n1 1 0 0\n";
    }
    CHECK_THROWS_AS(load_matrix(file), IoError);  // duplicate entry
    CHECK_THROWS_AS(load_matrix(tmp.path / "absent.txt"), IoError);
}

TEST_CASE("sequence files round-trip bit-exactly") {
    TempDir tmp;
    auto controls = std::make_shared<const ControlPair>(random_dense_pair(3, 2));
    const PulseSequence seq(controls, {{Generator::A, 1.0 / 3.0},
                                       {Generator::B, -0.7071067811865476},
                                       {Generator::A, 1e-17}});
    const fs::path file = tmp.path / "seq.txt";
    save_sequence(file, seq);
    const PulseSequence loaded = load_sequence(file, controls);
    REQUIRE(loaded.size() == seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) {
        CHECK(loaded.pulses()[k].generator == seq.pulses()[k].generator);
        CHECK(loaded.pulses()[k].duration == seq.pulses()[k].duration);
    }

    auto other = std::make_shared<const ControlPair>(random_dense_pair(4, 2));
    CHECK_THROWS_AS(load_sequence(file, other), IoError);  // dimension mismatch
}

TEST_CASE("program files carry the bracket header") {
    TempDir tmp;
    auto controls = std::make_shared<const ControlPair>(random_dense_pair(2, 3));
    const CommutatorProgram program =
        compile_nested(parse_bracket_expression("[A,[A,B]]"), controls, 0.03125);
    const fs::path file = tmp.path / "prog.txt";
    save_program(file, program);
    const CommutatorProgram loaded = load_program(file, controls);
    CHECK(loaded.tree.bracket_notation() == "[A,[A,B]]");
    CHECK(loaded.base_time == program.base_time);
    CHECK(loaded.claimed_order == 3);
    {
        std::ifstream raw(file);
        std::string first, second;
        std::getline(raw, first);
        std::getline(raw, second);
        CHECK(first == "[A,[A,B]]");
        CHECK(second.substr(0, 2) == "2 ");  // sequence header follows directly
    }
    REQUIRE(loaded.sequence.size() == program.sequence.size());
    for (std::size_t k = 0; k < program.sequence.size(); ++k) {
        CHECK(loaded.sequence.pulses()[k].duration == program.sequence.pulses()[k].duration);
    }
}

TEST_CASE("gamma samples load and nearest-neighbour resampling is exact on steps") {
    TempDir tmp;
    const fs::path file = tmp.path / "gamma.txt";
    {
        std::ofstream out(file);
        out << "0.125 1.0\n0.375 1.0\n0.625 -2.0\n0.875 -2.0\n";
    }
    const auto samples = load_gamma_samples(file);
    REQUIRE(samples.size() == 4);
    // Piecewise-constant schedule (1, 1, -2, -2) on 4 midpoints of [0, 1].
    const std::vector<double> resampled = resample_gamma(samples, 4, 1.0);
    CHECK(resampled == std::vector<double>{1.0, 1.0, -2.0, -2.0});
    // Refining the grid keeps the plateau values.
    const std::vector<double> fine = resample_gamma(samples, 8, 1.0);
    CHECK(fine.front() == 1.0);
    CHECK(fine.back() == -2.0);

    {
        std::ofstream out(file);
        out << "0.0 1.0\nbroken\n";
    }
    CHECK_THROWS_AS(load_gamma_samples(file), IoError);
}

TEST_CASE("training pairs round-trip and validate") {
    TempDir tmp;
    std::mt19937_64 rng(4);
    std::vector<TrainingPair> pairs;
    for (int i = 0; i < 3; ++i) {
        TrainingPair p;
        p.input = oracle::random_state(3, rng);
        p.output = oracle::random_state(3, rng);
        pairs.push_back(std::move(p));
    }
    const TrainingSet ts(pairs);
    const fs::path file = tmp.path / "pairs.txt";
    save_training_pairs(file, ts);
    const TrainingSet loaded = load_training_pairs(file);
    REQUIRE(loaded.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK((loaded.pairs()[i].input - ts.pairs()[i].input).norm() == 0.0);
        CHECK((loaded.pairs()[i].output - ts.pairs()[i].output).norm() == 0.0);
    }

    {
        std::ofstream out(file);
        out << "2 1\n1 0 0 0\n2 0 0 0\n";  // second state is not normalized
    }
    CHECK_THROWS_AS(load_training_pairs(file), IoError);
}

TEST_CASE("cli witt and lyndon commands succeed") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    CHECK(run_cli({"witt", "--q", "2", "--max-k", "6", "--out", out.c_str()}) == 0);
    CHECK(fs::exists(tmp.path / "witt.csv"));
    CHECK(run_cli({"lyndon", "--q", "2", "--max-len", "5", "--out", out.c_str()}) == 0);
    CHECK(fs::exists(tmp.path / "lyndon.csv"));
    std::ifstream csv(tmp.path / "lyndon.csv");
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) {
        ++lines;
    }
    CHECK(lines == 15);  // header + 14 words
}

TEST_CASE("cli verify exit codes distinguish pass from failed checks") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    CHECK(run_cli({"verify", "I", "--dim", "2", "--trials", "3", "--seed", "5", "--out",
                   out.c_str()}) == 0);
    CHECK(fs::exists(tmp.path / "verify_I.json"));
    // Two pairs cannot span su(3): checked-property failure, exit 1.
    CHECK(run_cli({"verify", "I", "--dim", "3", "--trials", "2", "--seed", "5", "--npairs", "2",
                   "--out", out.c_str()}) == 1);
    // Unknown kind: usage error.
    CHECK(run_cli({"verify", "IV", "--dim", "2", "--out", out.c_str()}) == 2);
    // Unknown flag: usage error.
    CHECK(run_cli({"verify", "I", "--imaginary-flag", "3"}) == 2);
}

TEST_CASE("cli verify III emits the per-order table") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    CHECK(run_cli({"verify", "III", "--dim", "4", "--max-order", "6", "--seed", "11", "--out",
                   out.c_str()}) == 0);
    CHECK(fs::exists(tmp.path / "verify_III.json"));
    std::ifstream csv(tmp.path / "verify_III.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "order,total,independent,cumulative_words,expected_rank,rank");
    std::string row;
    std::getline(csv, row);
    CHECK(row == "1,2,2,2,2,2");
}

TEST_CASE("cli bch fits slopes and rejects malformed trees") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    CHECK(run_cli({"bch", "[A,B]", "--dim", "2", "--seed", "3", "--out", out.c_str()}) == 0);
    CHECK(fs::exists(tmp.path / "slope.json"));
    CHECK(fs::exists(tmp.path / "deviations.csv"));
    CHECK(fs::exists(tmp.path / "program.txt"));
    CHECK(run_cli({"bch", "A", "--dim", "2", "--out", out.c_str()}) == 0);
    CHECK(run_cli({"bch", "[A,B", "--dim", "2", "--out", out.c_str()}) == 2);
}

TEST_CASE("cli synthesize handles matrix targets and bad input files") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    // Near-identity target for a quick converging run.
    std::mt19937_64 rng(5);
    const Matrix h = normalize_schatten1(project_traceless(oracle::random_hermitian(2, rng)));
    const fs::path target = tmp.path / "target.txt";
    save_matrix(target, mat_exp(HermitianOperator(h, true, true), 0.05).entries());
    const std::string target_str = target.string();
    CHECK(run_cli({"synthesize", "--target", target_str.c_str(), "--seed", "3", "--threshold",
                   "1e-8", "--out", out.c_str()}) == 0);
    CHECK(fs::exists(tmp.path / "descent.json"));
    CHECK(fs::exists(tmp.path / "sequence.txt"));
    CHECK(fs::exists(tmp.path / "trace.csv"));

    CHECK(run_cli({"synthesize", "--target", "no_such_file.txt", "--out", out.c_str()}) == 2);
    CHECK(run_cli({"synthesize", "--out", out.c_str()}) == 2);  // neither target nor pairs

    const fs::path broken = tmp.path / "broken.txt";
    {
        std::ofstream bad(broken);
        bad << "2\n0 0 oops 0\n";
    }
    const std::string broken_str = broken.string();
    CHECK(run_cli({"synthesize", "--target", broken_str.c_str(), "--out", out.c_str()}) == 2);
}

TEST_CASE("cli synthesize accepts a training-pair file") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    std::mt19937_64 rng(9);
    const Matrix h = normalize_schatten1(project_traceless(oracle::random_hermitian(2, rng)));
    const Matrix u = mat_exp(HermitianOperator(h, true, true), 0.05).entries();
    std::vector<TrainingPair> pairs;
    for (int i = 0; i < 3; ++i) {
        TrainingPair p;
        p.input = oracle::random_state(2, rng);
        p.output = u * p.input;
        pairs.push_back(std::move(p));
    }
    const fs::path file = tmp.path / "pairs.txt";
    save_training_pairs(file, TrainingSet(pairs));
    const std::string file_str = file.string();
    CHECK(run_cli({"synthesize", "--pairs", file_str.c_str(), "--seed", "4", "--threshold",
                   "1e-8", "--out", out.c_str()}) == 0);
    CHECK(fs::exists(tmp.path / "descent.json"));
    CHECK(fs::exists(tmp.path / "controls_a.txt"));
}

TEST_CASE("cli evaluate closes the synthesize round trip") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    std::mt19937_64 rng(12);
    const Matrix h = normalize_schatten1(project_traceless(oracle::random_hermitian(2, rng)));
    const Matrix target = mat_exp(HermitianOperator(h, true, true), 0.05).entries();
    const fs::path target_file = tmp.path / "target.txt";
    save_matrix(target_file, target);
    const std::string target_str = target_file.string();
    REQUIRE(run_cli({"synthesize", "--target", target_str.c_str(), "--seed", "6", "--threshold",
                     "1e-10", "--out", out.c_str()}) == 0);

    const std::string seq = (tmp.path / "sequence.txt").string();
    const std::string a = (tmp.path / "controls_a.txt").string();
    const std::string b = (tmp.path / "controls_b.txt").string();
    CHECK(run_cli({"evaluate", "--sequence", seq.c_str(), "--a", a.c_str(), "--b", b.c_str(),
                   "--target", target_str.c_str(), "--out", out.c_str()}) == 0);
    const Matrix u = load_matrix(tmp.path / "evaluated_unitary.txt");
    CHECK((u - target).norm() < 1e-4);  // threshold 1e-10 on E implies ~2e-5 in Frobenius
}

TEST_CASE("cli drift-rank and trotter run end to end") {
    TempDir tmp;
    const std::string out = tmp.path.string();
    CHECK(run_cli({"drift-rank", "--dim", "2", "--steps", "8", "--scale", "0.02", "--seed", "7",
                   "--out", out.c_str()}) == 0);
    CHECK(fs::exists(tmp.path / "drift_rank.json"));
    CHECK(run_cli({"drift-rank", "--dim", "2", "--steps", "8", "--scale", "0.02", "--seed", "7",
                   "--relaxed", "--out", out.c_str()}) == 0);

    Matrix z(2, 2);
    z << 0.5, 0, 0, -0.5;
    Matrix x(2, 2);
    x << 0, 0.5, 0.5, 0;
    const fs::path h0 = tmp.path / "h0.txt";
    const fs::path hc = tmp.path / "hc.txt";
    const fs::path gamma = tmp.path / "gamma.txt";
    save_matrix(h0, z);
    save_matrix(hc, x);
    {
        std::ofstream g(gamma);
        g << "0.0 0.5\n1.0 0.5\n";
    }
    const std::string h0s = h0.string(), hcs = hc.string(), gs = gamma.string();
    CHECK(run_cli({"trotter", "--h0", h0s.c_str(), "--hc", hcs.c_str(), "--gamma", gs.c_str(),
                   "--steps", "16", "--time", "1.0", "--out", out.c_str()}) == 0);
    const Matrix u = load_matrix(tmp.path / "trotter_unitary.txt");
    // Constant schedule: exact closed form.
    CHECK((u - mat_exp_raw(z + 0.5 * x, -1.0)).norm() < 1e-12);
}

TEST_CASE("cli reads defaults from a config file") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "uforge.ini";
    {
        std::ofstream out(cfg);
        out << "[witt]\nq=2\nmax-k=4\nout=\"" << tmp.path.string() << "\"\n";
    }
    const std::string cfg_str = cfg.string();
    CHECK(run_cli({"--config", cfg_str.c_str(), "witt"}) == 0);
    std::ifstream csv(tmp.path / "witt.csv");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
    }
    CHECK(rows == 5);  // header + degrees 1..4
}

TEST_CASE("UFORGE_OUT provides the default output directory") {
    TempDir tmp;
    setenv("UFORGE_OUT", tmp.path.string().c_str(), 1);
    CHECK(run_cli({"witt", "--q", "2", "--max-k", "3"}) == 0);
    unsetenv("UFORGE_OUT");
    CHECK(fs::exists(tmp.path / "witt.csv"));
}

TEST_CASE("cli reports are deterministic") {
    TempDir tmp1, tmp2;
    const std::string o1 = tmp1.path.string(), o2 = tmp2.path.string();
    CHECK(run_cli({"verify", "I", "--dim", "3", "--trials", "4", "--seed", "9", "--out",
                   o1.c_str()}) == 0);
    CHECK(run_cli({"verify", "I", "--dim", "3", "--trials", "4", "--seed", "9", "--jobs", "2",
                   "--out", o2.c_str()}) == 0);
    std::ifstream f1(tmp1.path / "verify_I.json"), f2(tmp2.path / "verify_I.json");
    const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}
