#pragma once

// Partial Latin squares, Latin trades, generalized (t,v,k)-trades and
// intercalates. A Latin trade (P,Q) is a pair of partial Latin squares of the
// same order that share a shape, disagree on every filled cell, and are
// row-wise and column-wise balanced. Its signed frequency vector (+1 on P,
// -1 on Q) lies in the null space of the 2-inclusion matrix M_2(v,3); the
// decomposition below writes any such null vector, for k = t+1, as an integer
// combination of basis intercalates.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oatrade/core.hpp"
#include "oatrade/exact_linalg.hpp"
#include "oatrade/frequency.hpp"
#include "oatrade/inclusion_matrix.hpp"
#include "oatrade/tuples.hpp"

namespace oatrade {

/// Partially filled v x v array with no symbol repeated in a row or column.
/// Rows, columns and symbols are all 0-based, in [0, order).
class PartialLatinSquare {
public:
    using Cell = std::pair<int, int>;  // (row, col)

    explicit PartialLatinSquare(int order) : order_(order) {
        if (order < 1) throw std::invalid_argument("PartialLatinSquare: order must be >= 1");
    }

    int order() const { return order_; }

    /// Fills (row, col) with symbol; rejects out-of-range indices, refilling a
    /// cell, and Latin-property violations.
    void set(int row, int col, int symbol) {
        require_in_range(row, "row");
        require_in_range(col, "col");
        require_in_range(symbol, "symbol");
        if (cells_.count({row, col}))
            throw std::invalid_argument("PartialLatinSquare: cell (" + std::to_string(row) +
                                        "," + std::to_string(col) + ") is already filled");
        for (const auto& [cell, s] : cells_) {
            if (s != symbol) continue;
            if (cell.first == row)
                throw std::invalid_argument("PartialLatinSquare: symbol " +
                                            std::to_string(symbol) + " repeats in row " +
                                            std::to_string(row));
            if (cell.second == col)
                throw std::invalid_argument("PartialLatinSquare: symbol " +
                                            std::to_string(symbol) + " repeats in column " +
                                            std::to_string(col));
        }
        cells_.emplace(Cell{row, col}, symbol);
    }

    std::optional<int> at(int row, int col) const {
        auto it = cells_.find({row, col});
        if (it == cells_.end()) return std::nullopt;
        return it->second;
    }

    const std::map<Cell, int>& cells() const { return cells_; }

    /// The set of filled cells.
    std::set<Cell> shape() const {
        std::set<Cell> s;
        for (const auto& [cell, symbol] : cells_) s.insert(cell);
        return s;
    }

    std::size_t volume() const { return cells_.size(); }

    std::set<int> row_content(int row) const {
        std::set<int> s;
        for (const auto& [cell, symbol] : cells_)
            if (cell.first == row) s.insert(symbol);
        return s;
    }

    std::set<int> col_content(int col) const {
        std::set<int> s;
        for (const auto& [cell, symbol] : cells_)
            if (cell.second == col) s.insert(symbol);
        return s;
    }

    friend bool operator==(const PartialLatinSquare& a, const PartialLatinSquare& b) {
        return a.order_ == b.order_ && a.cells_ == b.cells_;
    }

private:
    void require_in_range(int value, const char* what) const {
        if (value < 0 || value >= order_)
            throw std::invalid_argument(std::string("PartialLatinSquare: ") + what + " " +
                                        std::to_string(value) + " out of range for order " +
                                        std::to_string(order_));
    }

    int order_;
    std::map<Cell, int> cells_;
};

/// The full Latin square with entry (i + j) mod v at (i, j).
inline PartialLatinSquare cyclic_latin_square(int v) {
    PartialLatinSquare sq(v);
    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) sq.set(i, j, (i + j) % v);
    return sq;
}

/// Candidate Latin trade: two partial Latin squares of the same order. The
/// four trade conditions are checked by verify_trade, not enforced here, so
/// that near-misses can be loaded and reported on.
struct LatinTrade {
    PartialLatinSquare first;   // P
    PartialLatinSquare second;  // Q

    LatinTrade(PartialLatinSquare p, PartialLatinSquare q)
        : first(std::move(p)), second(std::move(q)) {
        if (first.order() != second.order())
            throw std::invalid_argument("LatinTrade: the two squares must share an order");
    }
};

struct ConditionResult {
    bool pass = true;
    std::string detail;  // first witness of failure, empty on pass
};

struct TradeReport {
    ConditionResult same_shape;    // S_P = S_Q
    ConditionResult disjoint;      // P and Q differ on every filled cell
    ConditionResult row_balanced;  // equal row contents
    ConditionResult col_balanced;  // equal column contents
    std::size_t volume = 0;

    bool all_pass() const {
        return same_shape.pass && disjoint.pass && row_balanced.pass && col_balanced.pass;
    }
};

/// Evaluates the four trade conditions independently; failures carry the
/// first offending cell, row, or column.
inline TradeReport verify_trade(const LatinTrade& trade) {
    const PartialLatinSquare& p = trade.first;
    const PartialLatinSquare& q = trade.second;
    TradeReport report;
    report.volume = p.volume();

    const std::set<PartialLatinSquare::Cell> sp = p.shape(), sq = q.shape();
    if (sp != sq) {
        report.same_shape.pass = false;
        for (const auto& cell : sp)
            if (!sq.count(cell)) {
                report.same_shape.detail = "cell (" + std::to_string(cell.first) + "," +
                                           std::to_string(cell.second) +
                                           ") filled in the first square only";
                break;
            }
        if (report.same_shape.detail.empty())
            for (const auto& cell : sq)
                if (!sp.count(cell)) {
                    report.same_shape.detail = "cell (" + std::to_string(cell.first) + "," +
                                               std::to_string(cell.second) +
                                               ") filled in the second square only";
                    break;
                }
    }

    for (const auto& [cell, symbol] : p.cells()) {
        auto other = q.at(cell.first, cell.second);
        if (other && *other == symbol) {
            report.disjoint.pass = false;
            report.disjoint.detail = "cell (" + std::to_string(cell.first) + "," +
                                     std::to_string(cell.second) + ") holds " +
                                     std::to_string(symbol) + " in both squares";
            break;
        }
    }

    for (int r = 0; r < p.order(); ++r)
        if (p.row_content(r) != q.row_content(r)) {
            report.row_balanced.pass = false;
            report.row_balanced.detail = "row " + std::to_string(r) + " contents differ";
            break;
        }

    for (int c = 0; c < p.order(); ++c)
        if (p.col_content(c) != q.col_content(c)) {
            report.col_balanced.pass = false;
            report.col_balanced.detail = "column " + std::to_string(c) + " contents differ";
            break;
        }

    return report;
}

/// Signed frequency vector of a trade over triples (row, col, symbol):
/// +1 where the first square is filled, -1 where the second is. v = order,
/// k = 3; coinciding cells cancel.
inline FrequencyVector trade_to_frequency(const LatinTrade& trade) {
    const int v = trade.first.order();
    FrequencyVector f(v, 3);
    for (const auto& [cell, symbol] : trade.first.cells())
        f.add(Tuple({cell.first, cell.second, symbol}, v), Int(1));
    for (const auto& [cell, symbol] : trade.second.cells())
        f.add(Tuple({cell.first, cell.second, symbol}, v), Int(-1));
    return f;
}

/// Formal product prod_l (x_{first_l} - x_{second_l}) over t+1 symbol pairs,
/// with first_l != second_l in every factor.
class GeneralIntercalate {
public:
    explicit GeneralIntercalate(std::vector<std::pair<int, int>> pairs)
        : pairs_(std::move(pairs)) {
        if (pairs_.empty())
            throw std::invalid_argument("GeneralIntercalate: at least one factor required");
        for (const auto& [i, j] : pairs_) {
            if (i < 0 || j < 0)
                throw std::invalid_argument("GeneralIntercalate: symbols must be >= 0");
            if (i == j)
                throw std::invalid_argument(
                    "GeneralIntercalate: the two symbols of a factor must differ");
        }
    }

    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    std::size_t factors() const { return pairs_.size(); }

private:
    std::vector<std::pair<int, int>> pairs_;
};

/// Expands the product into its frequency vector over (v, k = factors):
/// one signed unit entry per choice of one symbol from each factor, with sign
/// (-1)^(number of second-symbol choices). All 2^k chosen tuples are distinct,
/// so every entry is exactly +1 or -1.
inline FrequencyVector general_intercalate(const GeneralIntercalate& g, int v) {
    const std::size_t k = g.factors();
    if (k >= 63) throw size_guard_error("general_intercalate: too many factors");
    for (const auto& [i, j] : g.pairs())
        if (i >= v || j >= v)
            throw std::invalid_argument("general_intercalate: symbol out of range for v = " +
                                        std::to_string(v));
    FrequencyVector f(v, static_cast<int>(k));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        std::vector<int> values(k);
        int sign = 1;
        for (std::size_t l = 0; l < k; ++l) {
            const bool second = (mask >> l) & 1;
            values[l] = second ? g.pairs()[l].second : g.pairs()[l].first;
            if (second) sign = -sign;
        }
        f.add(Tuple(values, v), Int(sign));
    }
    return f;
}

/// Basis member for the given index in {1,...,v-1}^(t+1): the expansion of
/// prod_l (x_0 - x_{index_l}). Its entry at the index tuple itself is
/// (-1)^(t+1); every other basis member vanishes there.
inline FrequencyVector basis_intercalate(const std::vector<int>& index, int v) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(index.size());
    for (int i : index) {
        if (i < 1 || i >= v)
            throw std::invalid_argument("basis_intercalate: index entries must lie in [1, v)");
        pairs.emplace_back(0, i);
    }
    return general_intercalate(GeneralIntercalate(std::move(pairs)), v);
}

/// All (v-1)^(t+1) basis intercalates in lexicographic index order. Spans the
/// null space of M_t(v, t+1) (stacked rank equals the count).
inline std::vector<FrequencyVector> intercalate_basis(unsigned t, int v,
                                                      std::uint64_t max_vectors = 1'000'000) {
    if (v < 2) throw std::invalid_argument("intercalate_basis: v must be >= 2");
    if (t < 1) throw std::invalid_argument("intercalate_basis: t must be >= 1");
    const std::uint64_t count = checked_pow(static_cast<std::uint64_t>(v - 1), t + 1);
    if (count > max_vectors)
        throw size_guard_error("intercalate_basis: " + std::to_string(count) +
                               " vectors exceed the cap of " + std::to_string(max_vectors));

    std::vector<FrequencyVector> basis;
    basis.reserve(count);
    std::vector<int> index(t + 1, 1);
    for (std::uint64_t n = 0; n < count; ++n) {
        basis.push_back(basis_intercalate(index, v));
        for (std::size_t l = t + 1; l-- > 0;) {  // lex successor over {1,...,v-1}^(t+1)
            if (++index[l] < v) break;
            index[l] = 1;
        }
    }
    return basis;
}

/// Integer combination of basis intercalates, terms in lexicographic index
/// order with zero coefficients dropped.
class SignedCombination {
public:
    struct Term {
        Int coefficient;
        std::vector<int> index;

        friend bool operator==(const Term& a, const Term& b) {
            return a.coefficient == b.coefficient && a.index == b.index;
        }
    };

    SignedCombination() = default;

    explicit SignedCombination(const std::map<std::vector<int>, Int>& coefficients) {
        for (const auto& [index, c] : coefficients)
            if (c != 0) terms_.push_back({c, index});
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    friend bool operator==(const SignedCombination& a, const SignedCombination& b) {
        return a.terms_ == b.terms_;
    }

private:
    std::vector<Term> terms_;
};

/// Sum of coefficient * basis_intercalate(index) over the combination's terms.
inline FrequencyVector reconstruct(const SignedCombination& comb, int v, unsigned t) {
    FrequencyVector sum(v, static_cast<int>(t) + 1);
    for (const auto& term : comb.terms()) {
        const FrequencyVector b = basis_intercalate(term.index, v);
        for (const auto& [tuple, entry] : b.entries()) sum.add(tuple, term.coefficient * entry);
    }
    return sum;
}

/// Thrown when a vector offered for decomposition is not annihilated by the
/// inclusion matrix; names the first violated row.
class NullSpaceViolation : public std::runtime_error {
public:
    NullSpaceViolation(RowKey key, const Int& product)
        : std::runtime_error("not in the null space: row " + key.str() +
                             " has product " + product.str()),
          row_key_(std::move(key)) {}

    const RowKey& row_key() const { return row_key_; }

private:
    RowKey row_key_;
};

/// True iff M_t(v,k) * T is the zero vector, i.e. T is a (t,v,k)-trade.
inline bool verify_general_trade(const FrequencyVector& vec, unsigned t,
                                 const BuildLimits& limits = {}) {
    const InclusionMatrix m =
        InclusionMatrix::build(static_cast<int>(t), vec.v(), vec.k(), limits);
    for (const Int& value : multiply(m, vec))
        if (value != 0) return false;
    return true;
}

/// Writes a null vector of M_t(v, t+1) as the unique integer combination of
/// basis intercalates. The coefficient at each index in {1,...,v-1}^(t+1) is
/// read directly off the input: it equals (-1)^(t+1) times the entry there,
/// because every other basis member vanishes at that coordinate. Verifies
/// membership in the null space first (throws NullSpaceViolation otherwise)
/// and checks the reconstruction entrywise before returning.
inline SignedCombination decompose(const FrequencyVector& vec, unsigned t,
                                   const BuildLimits& limits = {}) {
    if (vec.k() != static_cast<int>(t) + 1)
        throw std::invalid_argument("decompose: requires k = t + 1, got k = " +
                                    std::to_string(vec.k()));
    const int v = vec.v();
    const InclusionMatrix m =
        InclusionMatrix::build(static_cast<int>(t), v, static_cast<int>(t) + 1, limits);
    const std::vector<Int> product = multiply(m, vec);
    for (std::size_t r = 0; r < product.size(); ++r)
        if (product[r] != 0)
            throw NullSpaceViolation(m.row_key(r), product[r]);

    const Int sign = (t % 2 == 0) ? -1 : 1;  // (-1)^(t+1)
    std::map<std::vector<int>, Int> coefficients;
    for (const auto& [tuple, entry] : vec.entries())
        if (tuple.weight() == tuple.k())  // all-nonzero coordinate: index tuple
            coefficients[tuple.values()] = sign * entry;

    SignedCombination comb(coefficients);
    if (!(reconstruct(comb, v, t) == vec))
        throw std::logic_error("decompose: reconstruction mismatch");
    return comb;
}

/// Renders a frequency vector as a polynomial in x_0,...,x_{v-1}: positive
/// terms first, then negative, each block in lexicographic tuple order.
/// Coefficients of magnitude 1 appear as a bare sign; others as "c*x_...".
inline std::string to_polynomial(const FrequencyVector& vec) {
    if (vec.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    auto emit = [&](const Tuple& tuple, const Int& coefficient) {
        const bool negative = coefficient < 0;
        const Int magnitude = negative ? Int(-coefficient) : coefficient;
        if (first) {
            if (negative) out << "-";
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        if (magnitude != 1) out << magnitude.str() << "*";
        for (int value : tuple.values()) out << "x_" << value;
    };
    for (const auto& [tuple, coefficient] : vec.entries())
        if (coefficient > 0) emit(tuple, coefficient);
    for (const auto& [tuple, coefficient] : vec.entries())
        if (coefficient < 0) emit(tuple, coefficient);
    return out.str();
}

/// The volume-4 trade exchanging symbols 0 and s on rows {0, i} and columns
/// {0, j}. Its frequency vector equals basis_intercalate({i, j, s}, order).
inline LatinTrade intercalate_trade(int i, int j, int s, int order) {
    for (int value : {i, j, s})
        if (value < 1 || value >= order)
            throw std::invalid_argument("intercalate_trade: parameters must lie in [1, order)");
    PartialLatinSquare p(order), q(order);
    p.set(0, 0, 0);
    p.set(0, j, s);
    p.set(i, 0, s);
    p.set(i, j, 0);
    q.set(0, 0, s);
    q.set(0, j, 0);
    q.set(i, 0, 0);
    q.set(i, j, s);
    return LatinTrade(std::move(p), std::move(q));
}

}  // namespace oatrade
