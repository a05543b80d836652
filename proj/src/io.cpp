#include "uforge/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace uforge {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

class LineReader {
public:
    explicit LineReader(std::ifstream& in, std::string name)
        : in_(in), name_(std::move(name)) {}

    /// Next non-empty line; throws when the file ends.
    std::istringstream next(const char* expectation) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                return std::istringstream(line);
            }
        }
        fail(std::string("unexpected end of file, expected ") + expectation);
    }

    bool at_end() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                return false;
            }
        }
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << name_ << ":" << line_no_ << ": " << what;
        throw IoError(os.str(), line_no_);
    }

    std::size_t line() const { return line_no_; }

private:
    std::ifstream& in_;
    std::string name_;
    std::size_t line_no_ = 0;
};

}  // namespace

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InvalidOperandError("save_matrix: matrix must be square and non-empty");
    }
    std::ofstream out = open_out(path);
    out << m.rows() << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out << r << " " << c << " " << fmt17(m(r, c).real()) << " " << fmt17(m(r, c).imag())
                << "\n";
        }
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

Matrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    LineReader reader(in, path.string());
    auto header = reader.next("matrix dimension");
    Eigen::Index d = 0;
    if (!(header >> d) || d < 1 || d > 4096) {
        reader.fail("expected a matrix dimension between 1 and 4096");
    }
    Matrix m(d, d);
    std::vector<bool> seen(static_cast<std::size_t>(d * d), false);
    for (Eigen::Index i = 0; i < d * d; ++i) {
        auto line = reader.next("entry line 'row col re im'");
        Eigen::Index r = 0;
        Eigen::Index c = 0;
        double re = 0.0;
        double im = 0.0;
        if (!(line >> r >> c >> re >> im)) {
            reader.fail("expected 'row col re im'");
        }
        if (r < 0 || r >= d || c < 0 || c >= d) {
            reader.fail("entry index out of range");
        }
        const std::size_t flat = static_cast<std::size_t>(r * d + c);
        if (seen[flat]) {
            reader.fail("duplicate entry");
        }
        seen[flat] = true;
        m(r, c) = Complex(re, im);
    }
    if (!reader.at_end()) {
        reader.fail("trailing content after the last matrix entry");
    }
    return m;
}

void save_sequence(const std::filesystem::path& path, const PulseSequence& seq) {
    std::ofstream out = open_out(path);
    out << seq.dim() << " " << seq.size() << "\n";
    for (const Pulse& p : seq.pulses()) {
        out << static_cast<char>(p.generator) << " " << fmt17(p.duration) << "\n";
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

PulseSequence load_sequence(const std::filesystem::path& path,
                            std::shared_ptr<const ControlPair> controls) {
    if (!controls) {
        throw InvalidOperandError("load_sequence: null controls");
    }
    std::ifstream in = open_in(path);
    LineReader reader(in, path.string());
    auto header = reader.next("header 'd N'");
    int d = 0;
    long n = 0;
    if (!(header >> d >> n) || d < 1 || n < 0 || n > 10000000) {
        reader.fail("expected header 'd N' with a sane pulse count");
    }
    if (d != controls->dim()) {
        reader.fail("sequence dimension does not match the control pair");
    }
    std::vector<Pulse> pulses;
    pulses.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        auto line = reader.next("pulse line 'generator duration'");
        std::string gen;
        double duration = 0.0;
        if (!(line >> gen >> duration) || gen.size() != 1 || (gen[0] != 'A' && gen[0] != 'B')) {
            reader.fail("expected 'A|B duration'");
        }
        pulses.push_back({gen[0] == 'A' ? Generator::A : Generator::B, duration});
    }
    if (!reader.at_end()) {
        reader.fail("trailing content after the last pulse");
    }
    return PulseSequence(std::move(controls), std::move(pulses));
}

void save_program(const std::filesystem::path& path, const CommutatorProgram& program) {
    std::ofstream out = open_out(path);
    out << program.tree.bracket_notation() << "\n";
    out << program.sequence.dim() << " " << program.sequence.size() << "\n";
    for (const Pulse& p : program.sequence.pulses()) {
        out << static_cast<char>(p.generator) << " " << fmt17(p.duration) << "\n";
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

CommutatorProgram load_program(const std::filesystem::path& path,
                               std::shared_ptr<const ControlPair> controls) {
    std::ifstream in = open_in(path);
    LineReader reader(in, path.string());
    auto tree_line = reader.next("bracket expression");
    std::string bracket;
    std::getline(tree_line, bracket);
    CommutatorTree tree = [&] {
        try {
            return parse_bracket_expression(bracket);
        } catch (const ParseError& e) {
            reader.fail(std::string("bad bracket expression: ") + e.what());
        }
    }();
    auto header = reader.next("header 'd N'");
    int d = 0;
    long n = 0;
    if (!(header >> d >> n) || d < 1 || n < 0) {
        reader.fail("expected header 'd N'");
    }
    if (d != controls->dim()) {
        reader.fail("program dimension does not match the control pair");
    }
    std::vector<Pulse> pulses;
    for (long i = 0; i < n; ++i) {
        auto line = reader.next("pulse line");
        std::string gen;
        double duration = 0.0;
        if (!(line >> gen >> duration) || gen.size() != 1 || (gen[0] != 'A' && gen[0] != 'B')) {
            reader.fail("expected 'A|B duration'");
        }
        pulses.push_back({gen[0] == 'A' ? Generator::A : Generator::B, duration});
    }
    // The base time is the common magnitude of the leaf pulses.
    const double base_time = pulses.empty() ? 0.0 : std::abs(pulses.front().duration);
    const int degree = tree.degree();
    return CommutatorProgram{std::move(tree), base_time,
                             PulseSequence(std::move(controls), std::move(pulses)), degree};
}

std::vector<std::pair<double, double>> load_gamma_samples(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::vector<std::pair<double, double>> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream ls(line);
        double t = 0.0;
        double v = 0.0;
        if (!(ls >> t >> v)) {
            std::ostringstream os;
            os << path.string() << ":" << line_no << ": expected 'time value'";
            throw IoError(os.str(), line_no);
        }
        samples.emplace_back(t, v);
    }
    if (samples.empty()) {
        throw IoError(path.string() + ": no samples");
    }
    return samples;
}

std::vector<double> resample_gamma(const std::vector<std::pair<double, double>>& samples, int m,
                                   double total_time) {
    if (m < 1) {
        throw InvalidArgumentError("resample_gamma: need at least one sample");
    }
    if (!(total_time > 0.0)) {
        throw InvalidArgumentError("resample_gamma: total time must be positive");
    }
    if (samples.empty()) {
        throw InvalidArgumentError("resample_gamma: empty sample table");
    }
    std::vector<double> out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double t = (i + 0.5) * total_time / m;
        double best_dist = std::numeric_limits<double>::infinity();
        double best_val = samples.front().second;
        for (const auto& [st, sv] : samples) {
            const double dist = std::abs(st - t);
            if (dist < best_dist) {
                best_dist = dist;
                best_val = sv;
            }
        }
        out[static_cast<std::size_t>(i)] = best_val;
    }
    return out;
}

void save_training_pairs(const std::filesystem::path& path, const TrainingSet& ts) {
    std::ofstream out = open_out(path);
    out << ts.dim() << " " << ts.size() << "\n";
    auto write_state = [&](const ComplexVector& v) {
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            out << (j ? " " : "") << fmt17(v[j].real()) << " " << fmt17(v[j].imag());
        }
        out << "\n";
    };
    for (const TrainingPair& p : ts.pairs()) {
        write_state(p.input);
        write_state(p.output);
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

TrainingSet load_training_pairs(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    LineReader reader(in, path.string());
    auto header = reader.next("header 'd M'");
    int d = 0;
    long m = 0;
    if (!(header >> d >> m) || d < 1 || d > 4096 || m < 1 || m > 1000000) {
        reader.fail("expected header 'd M' with sane positive counts");
    }
    auto read_state = [&](const char* what) {
        auto line = reader.next(what);
        ComplexVector v(d);
        for (int j = 0; j < d; ++j) {
            double re = 0.0;
            double im = 0.0;
            if (!(line >> re >> im)) {
                reader.fail(std::string("expected ") + std::to_string(2 * d) +
                            " values for a state");
            }
            v[j] = Complex(re, im);
        }
        return v;
    };
    std::vector<TrainingPair> pairs;
    pairs.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        TrainingPair p;
        p.input = read_state("input state");
        p.output = read_state("output state");
        pairs.push_back(std::move(p));
    }
    if (!reader.at_end()) {
        reader.fail("trailing content after the last pair");
    }
    try {
        return TrainingSet(std::move(pairs));
    } catch (const InvalidOperandError& e) {
        reader.fail(e.what());
    }
}

}  // namespace uforge
