#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uforge/linalg.hpp"

namespace uforge {

/// Word over {0, ..., q-1} that is strictly smaller than every non-trivial
/// cyclic rotation of itself. Validated on construction.
class LyndonWord {
public:
    LyndonWord(std::vector<int> symbols, int alphabet);

    static bool is_lyndon(const std::vector<int>& symbols);

    const std::vector<int>& symbols() const { return symbols_; }
    int alphabet() const { return alphabet_; }
    std::size_t length() const { return symbols_.size(); }

    /// Letters rendered 'a', 'b', ... for display.
    std::string str() const;

    bool operator==(const LyndonWord& other) const {
        return alphabet_ == other.alphabet_ && symbols_ == other.symbols_;
    }

private:
    std::vector<int> symbols_;
    int alphabet_;
};

/// All Lyndon words of length <= max_len, sorted by length then
/// lexicographically. Generated with Duval's successor algorithm.
std::vector<LyndonWord> lyndon_words(int alphabet, int max_len);

/// Dimension of the degree-k homogeneous part of the free Lie algebra on q
/// generators: the necklace number (1/k) sum_{d|k} mu(k/d) q^d. Equals the
/// number of Lyndon words of length k.
std::int64_t witt_dimension(int alphabet, int degree);

/// Number of degree-k bracketings in the graded spanning construction
/// L_k = sum_{i+j=k} [L_i, L_j], counting ordered products across distinct
/// grades and unordered pairs within one grade. Includes linearly dependent
/// elements; witt_dimension counts the independent ones.
std::int64_t nested_commutator_count(int alphabet, int degree);

/// Unique split u = v w with w the lexicographically least proper suffix;
/// both parts are Lyndon words and v < w. Requires length >= 2.
std::pair<LyndonWord, LyndonWord> standard_factorization(const LyndonWord& word);

/// Binary bracketing of nested commutators; leaves carry generator indices.
/// Immutable with shared subtrees, so copies are cheap.
class CommutatorTree {
public:
    static CommutatorTree leaf(int generator);
    static CommutatorTree node(CommutatorTree left, CommutatorTree right);

    bool is_leaf() const;
    int generator() const;  // leaves only
    CommutatorTree left() const;
    CommutatorTree right() const;
    int degree() const;

    /// Bracket rendering, e.g. "[A,[A,B]]"; generator i displays as
    /// names[i], falling back to 'A' + i.
    std::string bracket_notation() const;

private:
    struct Impl;
    explicit CommutatorTree(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// The standard bijection onto the Lyndon basis: letters map to leaves,
/// longer words to [map(v), map(w)] via the standard factorization.
CommutatorTree lyndon_to_commutator(const LyndonWord& word);

/// Parses "[A,[A,B]]"-style bracket expressions over single uppercase
/// letters; 'A' is generator 0. Throws ParseError with the offending
/// character position.
CommutatorTree parse_bracket_expression(std::string_view text);

/// Substitutes matrices for leaves and the matrix commutator for nodes.
Matrix evaluate_tree(const CommutatorTree& tree, const std::vector<Matrix>& generators);

struct CommutatorOrderRow {
    int order = 0;
    std::int64_t total = 0;             // nested_commutator_count
    std::int64_t independent = 0;       // witt_dimension
    std::int64_t cumulative_words = 0;  // Lyndon words up to this order
    int expected_rank = 0;              // min(cumulative_words, d^2-1)
    int rank = 0;                       // measured cumulative rank in su(d)
};

struct CommutatorSpanReport {
    int dim = 0;
    int max_order = 0;
    std::uint64_t seed = 0;
    double rel_tol = tol::rank_rel;
    std::vector<CommutatorOrderRow> rows;
    bool pass = false;
};

/// Evaluates every Lyndon-basis commutator of degree <= max_order on a fresh
/// dense random pair, rotates odd degrees into anti-Hermitian form,
/// normalizes, and reports the cumulative su(d) rank per order. Passes when
/// each order reaches min(#words so far, d^2-1).
CommutatorSpanReport verify_conjecture_III(int dim, int max_order, std::uint64_t seed,
                                           double rel_tol = tol::rank_rel);

}  // namespace uforge
