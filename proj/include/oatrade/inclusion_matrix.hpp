// inclusion_matrix.hpp -- the sparse 0/1 inclusion matrix M_t(v,k) relating
// placed t-tuples (rows) to full k-tuples (columns), plus the column identities
// it satisfies: a pivot-row certificate for every low-weight column, a signed
// shadow relation that annihilates every high-weight column, and the repeated
// reduction that rewrites any column over the weight <= t spanning set.
#pragma once

#include <oatrade/core.hpp>
#include <oatrade/tuples.hpp>

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace oatrade {

/// Whether the placed tuple matches the k-tuple on its positions:
/// u_j == x_{i_j} for every j.
inline bool contains(const RowKey& key, const Tuple& x) {
    if (key.v() != x.v())
        throw std::invalid_argument("contains: alphabet mismatch");
    const PositionSet& I = key.positions();
    if (I.t() > 0 && I.positions().back() > x.k())
        throw std::invalid_argument("contains: position exceeds tuple length");
    for (int j = 0; j < I.t(); ++j)
        if (key.u()[static_cast<std::size_t>(j)] != x.at_position(I[j])) return false;
    return true;
}

struct BuildLimits {
    /// Refuse to build a matrix holding more than this many ones.
    std::uint64_t max_ones = 100'000'000;
};

/// M_t(v,k), stored row-major as sorted column-index lists. Immutable after
/// build; every query is read-only.
class InclusionMatrix {
public:
    static InclusionMatrix build(int t, int v, int k, const BuildLimits& limits = {}) {
        if (v < 2) throw std::invalid_argument("InclusionMatrix: need v >= 2");
        if (k < 1) throw std::invalid_argument("InclusionMatrix: need k >= 1");
        if (t < 0 || t > k) throw std::invalid_argument("InclusionMatrix: need 0 <= t <= k");

        const std::uint64_t ones =
            binomial(static_cast<unsigned>(k), static_cast<unsigned>(t)) *
            checked_pow(static_cast<std::uint64_t>(v), static_cast<unsigned>(k));
        if (ones > limits.max_ones)
            throw size_guard_error("InclusionMatrix: " + std::to_string(ones) +
                                   " ones exceed the cap of " + std::to_string(limits.max_ones));

        InclusionMatrix m;
        m.t_ = t;
        m.v_ = v;
        m.k_ = k;
        m.n_cols_ = column_count(v, k);
        m.rows_.resize(row_count(t, v, k));

        const std::size_t per_row =
            checked_pow(static_cast<std::uint64_t>(v), static_cast<unsigned>(k - t));
        for (auto& row : m.rows_) row.reserve(per_row);

        const auto subsets = t_subsets(k, t);
        const std::size_t vt =
            checked_pow(static_cast<std::uint64_t>(v), static_cast<unsigned>(t));

        // scan columns in lexicographic order; each column meets one row per
        // position subset, so per-row column lists come out sorted
        std::vector<int> x(static_cast<std::size_t>(k), 0);
        for (std::size_t c = 0; c < m.n_cols_; ++c) {
            for (std::size_t b = 0; b < subsets.size(); ++b) {
                std::size_t vu = 0;
                for (int pos : subsets[b].positions())
                    vu = vu * static_cast<std::size_t>(v) +
                         static_cast<std::size_t>(x[static_cast<std::size_t>(pos - 1)]);
                m.rows_[b * vt + vu].push_back(c);
            }
            // next tuple
            for (int i = k - 1; i >= 0; --i) {
                if (++x[static_cast<std::size_t>(i)] < v) break;
                x[static_cast<std::size_t>(i)] = 0;
            }
        }
        return m;
    }

    int t() const { return t_; }
    int v() const { return v_; }
    int k() const { return k_; }
    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return n_cols_; }

    std::uint64_t ones() const {
        std::uint64_t n = 0;
        for (const auto& row : rows_) n += row.size();
        return n;
    }

    /// Sorted column indices of the ones in row r.
    std::span<const std::size_t> row(std::size_t r) const {
        return {rows_.at(r).data(), rows_.at(r).size()};
    }

    /// Entry (r, c) as 0 or 1.
    int entry(std::size_t r, std::size_t c) const {
        const auto& row = rows_.at(r);
        return std::binary_search(row.begin(), row.end(), c) ? 1 : 0;
    }

    RowKey row_key(std::size_t r) const { return RowKey::unrank(r, t_, v_, k_); }
    Tuple column_tuple(std::size_t c) const { return Tuple::unrank(c, v_, k_); }

private:
    InclusionMatrix() = default;

    int t_ = 0, v_ = 0, k_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<std::vector<std::size_t>> rows_;
};

/// The closed-form rank of M_t(v,k): sum_{i=0}^{t} C(k,i) (v-1)^i.
inline Int closed_form_rank(int t, int v, int k) {
    Int total = 0;
    Int power = 1;
    for (int i = 0; i <= t; ++i) {
        total += Int(binomial(static_cast<unsigned>(k), static_cast<unsigned>(i))) * power;
        power *= v - 1;
    }
    return total;
}

/// An exact signed combination of matrix columns, identified by their tuples.
/// Terms are kept sorted by decreasing weight, then lexicographically, with no
/// duplicate columns and no zero coefficients.
class ColumnCombination {
public:
    struct Term {
        Int coeff;
        Tuple column;
    };

    ColumnCombination() = default;

    explicit ColumnCombination(std::map<Tuple, Int> entries) {
        terms_.reserve(entries.size());
        for (auto& [col, coeff] : entries)
            if (coeff != 0) terms_.push_back(Term{std::move(coeff), col});
        std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
            if (a.column.weight() != b.column.weight())
                return a.column.weight() > b.column.weight();
            return a.column < b.column;
        });
    }

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

private:
    std::vector<Term> terms_;
};

/// A row whose first 1 (scanning columns lexicographically) lies in column x.
/// Defined for weight(x) <= t; the position subset is the lexicographically
/// smallest t-subset covering the support of x.
inline RowKey pivot_row(const Tuple& x, int t) {
    const std::vector<int> supp = x.support();
    if (static_cast<int>(supp.size()) > t)
        throw std::invalid_argument("pivot_row: tuple weight " + std::to_string(supp.size()) +
                                    " exceeds t = " + std::to_string(t));
    if (t > x.k()) throw std::invalid_argument("pivot_row: t exceeds k");

    // fill up with the smallest positions not already in the support
    std::vector<int> I = supp;
    for (int pos = 1; static_cast<int>(I.size()) < t; ++pos)
        if (std::find(supp.begin(), supp.end(), pos) == supp.end()) I.push_back(pos);
    std::sort(I.begin(), I.end());

    std::vector<int> u(I.size());
    for (std::size_t j = 0; j < I.size(); ++j) u[j] = x.at_position(I[j]);
    return RowKey(std::move(u), PositionSet(std::move(I)), x.v());
}

/// The signed shadow identity for a tuple of weight > t: the combination
/// sum_{y in shadow(x)} (-1)^{weight(y)} C_y, which evaluates to the zero
/// column of M_t(v,k).
inline ColumnCombination shadow_relation(const Tuple& x, int t) {
    if (x.weight() <= t)
        throw std::invalid_argument("shadow_relation: requires weight(x) > t");
    std::map<Tuple, Int> entries;
    for (const Tuple& y : x.shadow())
        entries.emplace(y, y.weight() % 2 == 0 ? 1 : -1);
    return ColumnCombination(std::move(entries));
}

/// Rewrites column C_x exactly over columns of weight <= t by applying the
/// shadow identity repeatedly (the weight strictly drops, so this terminates).
/// Coefficients are exact integers; memoized per call.
inline ColumnCombination reduce_column(const Tuple& x, int t) {
    if (t < 0 || t > x.k()) throw std::invalid_argument("reduce_column: need 0 <= t <= k");

    std::map<Tuple, std::map<Tuple, Int>> memo;

    auto reduce = [&](auto&& self, const Tuple& tup) -> const std::map<Tuple, Int>& {
        if (auto it = memo.find(tup); it != memo.end()) return it->second;
        std::map<Tuple, Int> result;
        if (tup.weight() <= t) {
            result.emplace(tup, 1);
        } else {
            // C_x = sum_{y in shadow(x), y != x} (-1)^{w(y)-w(x)+1} C_y
            const int wx = tup.weight();
            for (const Tuple& y : tup.shadow()) {
                if (y == tup) continue;
                const int sign = (wx - y.weight()) % 2 == 1 ? 1 : -1;
                for (const auto& [col, coeff] : self(self, y)) {
                    Int& dst = result[col];
                    dst += sign * coeff;
                    if (dst == 0) result.erase(col);
                }
            }
        }
        return memo.emplace(tup, std::move(result)).first->second;
    };

    return ColumnCombination(reduce(reduce, x));
}

/// Evaluates sum_i coeff_i * C_{column_i} against a built matrix; returns the
/// dense length-n_rows result.
inline std::vector<Int> evaluate(const InclusionMatrix& m, const ColumnCombination& comb) {
    std::vector<Int> out(m.n_rows(), 0);
    for (const auto& term : comb.terms()) {
        if (term.column.v() != m.v() || term.column.k() != m.k())
            throw std::invalid_argument("evaluate: column tuple does not match matrix shape");
        const std::size_t c = term.column.rank();
        for (std::size_t r = 0; r < m.n_rows(); ++r)
            if (m.entry(r, c)) out[r] += term.coeff;
    }
    return out;
}

} // namespace oatrade
