#include "uforge/freelie.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uforge/generators.hpp"

namespace uforge {

LyndonWord::LyndonWord(std::vector<int> symbols, int alphabet)
    : symbols_(std::move(symbols)), alphabet_(alphabet) {
    if (alphabet_ < 2) {
        throw InvalidArgumentError("LyndonWord: alphabet size must be >= 2");
    }
    if (symbols_.empty()) {
        throw InvalidArgumentError("LyndonWord: empty word");
    }
    for (int s : symbols_) {
        if (s < 0 || s >= alphabet_) {
            throw InvalidArgumentError("LyndonWord: symbol outside alphabet");
        }
    }
    if (!is_lyndon(symbols_)) {
        throw InvalidArgumentError("LyndonWord: '" + str() +
                                   "' is not minimal among its rotations");
    }
}

bool LyndonWord::is_lyndon(const std::vector<int>& symbols) {
    const std::size_t n = symbols.size();
    if (n == 0) {
        return false;
    }
    for (std::size_t r = 1; r < n; ++r) {
        // Compare word with its rotation by r; must be strictly smaller.
        bool smaller = false;
        bool larger = false;
        for (std::size_t i = 0; i < n; ++i) {
            const int lhs = symbols[i];
            const int rhs = symbols[(i + r) % n];
            if (lhs != rhs) {
                smaller = lhs < rhs;
                larger = lhs > rhs;
                break;
            }
        }
        if (larger || (!smaller && !larger)) {
            return false;  // equal means periodic, also excluded
        }
    }
    return true;
}

std::string LyndonWord::str() const {
    std::string s;
    s.reserve(symbols_.size());
    for (int c : symbols_) {
        s.push_back(static_cast<char>('a' + c));
    }
    return s;
}

std::vector<LyndonWord> lyndon_words(int alphabet, int max_len) {
    if (alphabet < 2) {
        throw InvalidArgumentError("lyndon_words: alphabet size must be >= 2");
    }
    if (max_len < 1) {
        throw InvalidArgumentError("lyndon_words: max_len must be >= 1");
    }
    // Duval's algorithm emits Lyndon words of length <= max_len in
    // lexicographic order; re-bucket by length afterwards.
    std::vector<std::vector<LyndonWord>> by_length(static_cast<std::size_t>(max_len) + 1);
    std::vector<int> w{0};
    while (!w.empty()) {
        by_length[w.size()].emplace_back(w, alphabet);
        std::vector<int> x(static_cast<std::size_t>(max_len));
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = w[i % w.size()];
        }
        while (!x.empty() && x.back() == alphabet - 1) {
            x.pop_back();
        }
        if (x.empty()) {
            break;
        }
        ++x.back();
        w = std::move(x);
    }
    std::vector<LyndonWord> out;
    for (auto& bucket : by_length) {
        for (auto& word : bucket) {
            out.push_back(std::move(word));
        }
    }
    return out;
}

namespace {

int moebius(int n) {
    int mu = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) {
                return 0;
            }
            mu = -mu;
        }
    }
    if (n > 1) {
        mu = -mu;
    }
    return mu;
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

}  // namespace

std::int64_t witt_dimension(int alphabet, int degree) {
    if (alphabet < 2) {
        throw InvalidArgumentError("witt_dimension: alphabet size must be >= 2");
    }
    if (degree < 1) {
        throw InvalidArgumentError("witt_dimension: degree must be >= 1");
    }
    if (static_cast<double>(degree) * std::log2(static_cast<double>(alphabet)) > 62.0) {
        throw InvalidArgumentError("witt_dimension: q^degree overflows 64-bit arithmetic");
    }
    std::int64_t sum = 0;
    for (int div = 1; div <= degree; ++div) {
        if (degree % div == 0) {
            sum += moebius(degree / div) * ipow(alphabet, div);
        }
    }
    return sum / degree;
}

std::int64_t nested_commutator_count(int alphabet, int degree) {
    if (alphabet < 2) {
        throw InvalidArgumentError("nested_commutator_count: alphabet size must be >= 2");
    }
    if (degree < 1) {
        throw InvalidArgumentError("nested_commutator_count: degree must be >= 1");
    }
    if (degree > (alphabet == 2 ? 41 : 29)) {
        throw InvalidArgumentError("nested_commutator_count: count overflows 64-bit arithmetic");
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(degree) + 1, 0);
    counts[1] = alphabet;
    for (int k = 2; k <= degree; ++k) {
        std::int64_t total = 0;
        for (int i = 1; i < k - i; ++i) {
            total += counts[static_cast<std::size_t>(i)] * counts[static_cast<std::size_t>(k - i)];
        }
        if (k % 2 == 0) {
            const std::int64_t h = counts[static_cast<std::size_t>(k / 2)];
            total += h * (h - 1) / 2;  // unordered distinct pairs, [x,x] = 0
        }
        counts[static_cast<std::size_t>(k)] = total;
    }
    return counts[static_cast<std::size_t>(degree)];
}

std::pair<LyndonWord, LyndonWord> standard_factorization(const LyndonWord& word) {
    const std::vector<int>& s = word.symbols();
    const std::size_t n = s.size();
    if (n < 2) {
        throw InvalidArgumentError("standard_factorization: single-letter word");
    }
    std::size_t best = 1;
    for (std::size_t i = 2; i < n; ++i) {
        // Is the suffix starting at i smaller than the one starting at best?
        if (std::lexicographical_compare(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                                         s.begin() + static_cast<std::ptrdiff_t>(best), s.end())) {
            best = i;
        }
    }
    std::vector<int> prefix(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(best));
    std::vector<int> suffix(s.begin() + static_cast<std::ptrdiff_t>(best), s.end());
    return {LyndonWord(std::move(prefix), word.alphabet()),
            LyndonWord(std::move(suffix), word.alphabet())};
}

struct CommutatorTree::Impl {
    int generator = -1;  // >= 0 for leaves
    std::shared_ptr<const Impl> left;
    std::shared_ptr<const Impl> right;
    int degree = 1;
};

CommutatorTree CommutatorTree::leaf(int generator) {
    if (generator < 0) {
        throw InvalidArgumentError("CommutatorTree: negative generator index");
    }
    auto impl = std::make_shared<Impl>();
    impl->generator = generator;
    impl->degree = 1;
    return CommutatorTree(std::move(impl));
}

CommutatorTree CommutatorTree::node(CommutatorTree left, CommutatorTree right) {
    auto impl = std::make_shared<Impl>();
    impl->degree = left.degree() + right.degree();
    impl->left = std::move(left.impl_);
    impl->right = std::move(right.impl_);
    return CommutatorTree(std::move(impl));
}

bool CommutatorTree::is_leaf() const {
    return impl_->generator >= 0;
}

int CommutatorTree::generator() const {
    if (!is_leaf()) {
        throw InvalidArgumentError("CommutatorTree::generator: not a leaf");
    }
    return impl_->generator;
}

CommutatorTree CommutatorTree::left() const {
    if (is_leaf()) {
        throw InvalidArgumentError("CommutatorTree::left: leaf node");
    }
    return CommutatorTree(impl_->left);
}

CommutatorTree CommutatorTree::right() const {
    if (is_leaf()) {
        throw InvalidArgumentError("CommutatorTree::right: leaf node");
    }
    return CommutatorTree(impl_->right);
}

int CommutatorTree::degree() const {
    return impl_->degree;
}

std::string CommutatorTree::bracket_notation() const {
    if (is_leaf()) {
        return std::string(1, static_cast<char>('A' + generator()));
    }
    return "[" + left().bracket_notation() + "," + right().bracket_notation() + "]";
}

CommutatorTree lyndon_to_commutator(const LyndonWord& word) {
    if (word.length() == 1) {
        return CommutatorTree::leaf(word.symbols().front());
    }
    auto [v, w] = standard_factorization(word);
    return CommutatorTree::node(lyndon_to_commutator(v), lyndon_to_commutator(w));
}

namespace {

class BracketParser {
public:
    explicit BracketParser(std::string_view text) : text_(text) {}

    CommutatorTree parse() {
        CommutatorTree tree = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError("unexpected trailing characters", pos_);
        }
        return tree;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            ++pos_;
        }
    }

    char peek() {
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of expression", pos_);
        }
        return text_[pos_];
    }

    void expect(char c) {
        if (peek() != c) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    CommutatorTree parse_expr() {
        skip_ws();
        const char c = peek();
        if (c == '[') {
            ++pos_;
            CommutatorTree left = parse_expr();
            skip_ws();
            expect(',');
            CommutatorTree right = parse_expr();
            skip_ws();
            expect(']');
            return CommutatorTree::node(std::move(left), std::move(right));
        }
        if (c >= 'A' && c <= 'Z') {
            ++pos_;
            return CommutatorTree::leaf(c - 'A');
        }
        throw ParseError("expected generator letter or '['", pos_);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

CommutatorTree parse_bracket_expression(std::string_view text) {
    return BracketParser(text).parse();
}

Matrix evaluate_tree(const CommutatorTree& tree, const std::vector<Matrix>& generators) {
    if (tree.is_leaf()) {
        const int g = tree.generator();
        if (static_cast<std::size_t>(g) >= generators.size()) {
            std::ostringstream os;
            os << "evaluate_tree: generator " << g << " missing from a list of "
               << generators.size();
            throw InvalidArgumentError(os.str());
        }
        return generators[static_cast<std::size_t>(g)];
    }
    return commutator(evaluate_tree(tree.left(), generators),
                      evaluate_tree(tree.right(), generators));
}

CommutatorSpanReport verify_conjecture_III(int dim, int max_order, std::uint64_t seed,
                                           double rel_tol) {
    if (dim < 2) {
        throw InvalidDimensionError("verify_conjecture_III: need dim >= 2");
    }
    if (max_order < 1) {
        throw InvalidArgumentError("verify_conjecture_III: max_order must be >= 1");
    }
    const ControlPair pair = random_dense_pair(dim, seed);
    const std::vector<Matrix> gens{pair.a().entries(), pair.b().entries()};
    const std::vector<LyndonWord> words = lyndon_words(2, max_order);

    CommutatorSpanReport report;
    report.dim = dim;
    report.max_order = max_order;
    report.seed = seed;
    report.rel_tol = rel_tol;
    const int ambient = dim * dim - 1;

    std::vector<SuVector> stacked;
    std::int64_t cumulative_words = 0;
    std::size_t next_word = 0;
    report.pass = true;
    for (int order = 1; order <= max_order; ++order) {
        while (next_word < words.size() &&
               words[next_word].length() == static_cast<std::size_t>(order)) {
            const CommutatorTree tree = lyndon_to_commutator(words[next_word]);
            Matrix x = evaluate_tree(tree, gens);
            if (order % 2 == 1) {
                x *= Complex(0.0, 1.0);  // odd degrees are Hermitian; rotate into su(d)
            }
            // Deep commutators cancel heavily, so roundoff leaves a spurious
            // Hermitian part that normalization would then amplify; project
            // back onto the anti-Hermitian matrices before vectorizing.
            x = (x - x.adjoint().eval()) / 2.0;
            const double norm = x.norm();
            if (norm > 0.0) {
                x /= norm;  // condition the stack; rank is scale-invariant per vector
            }
            stacked.push_back(su_vectorize(project_traceless(std::move(x))));
            ++next_word;
            ++cumulative_words;
        }
        CommutatorOrderRow row;
        row.order = order;
        row.total = nested_commutator_count(2, order);
        row.independent = witt_dimension(2, order);
        row.cumulative_words = cumulative_words;
        row.expected_rank = static_cast<int>(std::min<std::int64_t>(cumulative_words, ambient));
        row.rank = numerical_rank(stacked, rel_tol);
        if (row.rank != row.expected_rank) {
            report.pass = false;
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace uforge
