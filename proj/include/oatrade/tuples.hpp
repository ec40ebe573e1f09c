// tuples.hpp -- ordered k-tuples over {0,...,v-1}, position subsets and placed
// t-tuples (row keys), together with the lexicographic orderings that pin down
// every row and column index used in the rest of the library.
//
// Conventions, used consistently everywhere:
//   * symbols are 0-based:  each entry of a tuple lies in [0, v)
//   * positions are 1-based: a position subset is a strictly increasing
//     sequence drawn from {1,...,k}
//   * columns are indexed by tuples in lexicographic order
//   * rows are indexed by (position subset, placed tuple): position subsets in
//     lexicographic order form the blocks, placed tuples in lexicographic
//     order within a block
#pragma once

#include <oatrade/core.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace oatrade {

/// An ordered k-tuple of symbols over the alphabet {0,...,v-1}.
/// Immutable value type; indexes a matrix column.
class Tuple {
public:
    Tuple(std::vector<int> values, int v) : values_(std::move(values)), v_(v) {
        if (v_ < 2) throw std::invalid_argument("Tuple: alphabet size must be >= 2");
        if (values_.empty()) throw std::invalid_argument("Tuple: length must be >= 1");
        for (int x : values_)
            if (x < 0 || x >= v_)
                throw std::invalid_argument("Tuple: symbol " + std::to_string(x) +
                                            " out of range [0," + std::to_string(v_) + ")");
    }

    int v() const { return v_; }
    int k() const { return static_cast<int>(values_.size()); }
    const std::vector<int>& values() const { return values_; }

    /// Symbol at 1-based position i.
    int at_position(int i) const { return values_.at(static_cast<std::size_t>(i) - 1); }

    /// 0-based position of this tuple in the lexicographic enumeration of all
    /// v^k tuples; equals sum_i values[i] * v^(k-1-i).
    std::size_t rank() const {
        std::size_t r = 0;
        for (int x : values_) r = r * static_cast<std::size_t>(v_) + static_cast<std::size_t>(x);
        return r;
    }

    /// Inverse of rank(): the tuple at `index` in lexicographic order.
    static Tuple unrank(std::size_t index, int v, int k) {
        if (v < 2 || k < 1) throw std::invalid_argument("Tuple::unrank: need v >= 2, k >= 1");
        std::size_t total = checked_pow(static_cast<std::uint64_t>(v), static_cast<unsigned>(k));
        if (index >= total) throw std::out_of_range("Tuple::unrank: index " + std::to_string(index) +
                                                    " not in [0," + std::to_string(total) + ")");
        std::vector<int> vals(static_cast<std::size_t>(k));
        for (int i = k - 1; i >= 0; --i) {
            vals[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(v));
            index /= static_cast<std::size_t>(v);
        }
        return Tuple(std::move(vals), v);
    }

    /// 1-based positions holding a nonzero symbol, in increasing order.
    std::vector<int> support() const {
        std::vector<int> s;
        for (int i = 0; i < k(); ++i)
            if (values_[static_cast<std::size_t>(i)] != 0) s.push_back(i + 1);
        return s;
    }

    /// Number of nonzero symbols.
    int weight() const {
        return static_cast<int>(std::count_if(values_.begin(), values_.end(),
                                              [](int x) { return x != 0; }));
    }

    /// All 2^weight tuples obtained by zeroing any subset of the nonzero
    /// positions, in lexicographic order (this tuple is the last member).
    std::vector<Tuple> shadow() const {
        const std::vector<int> supp = support();
        const int w = static_cast<int>(supp.size());
        std::vector<Tuple> out;
        out.reserve(std::size_t{1} << w);
        for (std::uint64_t keep = 0; keep < (std::uint64_t{1} << w); ++keep) {
            std::vector<int> vals(values_.size(), 0);
            // bit (w-1-j) governs supp[j]; earlier positions are the high bits,
            // so increasing mask order is lexicographic order of the members
            for (int j = 0; j < w; ++j)
                if (keep >> (w - 1 - j) & 1)
                    vals[static_cast<std::size_t>(supp[static_cast<std::size_t>(j)] - 1)] =
                        values_[static_cast<std::size_t>(supp[static_cast<std::size_t>(j)] - 1)];
            out.emplace_back(std::move(vals), v_);
        }
        return out;
    }

    /// Text form "1,0,2".
    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (i) os << ',';
            os << values_[i];
        }
        return os.str();
    }

    /// Parses the text form "1,0,2" for a given alphabet size.
    static Tuple parse(std::string_view text, int v);

    friend bool operator==(const Tuple& a, const Tuple& b) {
        return a.v_ == b.v_ && a.values_ == b.values_;
    }
    friend std::strong_ordering operator<=>(const Tuple& a, const Tuple& b) {
        if (auto c = a.v_ <=> b.v_; c != 0) return c;
        return std::lexicographical_compare_three_way(a.values_.begin(), a.values_.end(),
                                                      b.values_.begin(), b.values_.end());
    }

private:
    std::vector<int> values_;
    int v_;
};

/// A strictly increasing subset of 1-based positions {1,...,k}.
class PositionSet {
public:
    PositionSet() = default;

    explicit PositionSet(std::vector<int> positions) : positions_(std::move(positions)) {
        for (std::size_t i = 0; i < positions_.size(); ++i) {
            if (positions_[i] < 1)
                throw std::invalid_argument("PositionSet: positions are 1-based");
            if (i > 0 && positions_[i] <= positions_[i - 1])
                throw std::invalid_argument("PositionSet: positions must be strictly increasing");
        }
    }

    int t() const { return static_cast<int>(positions_.size()); }
    const std::vector<int>& positions() const { return positions_; }
    int operator[](int j) const { return positions_.at(static_cast<std::size_t>(j)); }

    bool contains(int pos) const {
        return std::binary_search(positions_.begin(), positions_.end(), pos);
    }

    /// Lexicographic rank among all t-subsets of {1,...,k}:
    /// {1,2} < {1,3} < {2,3} for k = 3.
    std::size_t rank(int k) const {
        const int tt = t();
        if (tt > 0 && positions_.back() > k)
            throw std::invalid_argument("PositionSet::rank: position exceeds k");
        std::size_t r = 0;
        int prev = 0;
        for (int j = 0; j < tt; ++j) {
            for (int m = prev + 1; m < positions_[static_cast<std::size_t>(j)]; ++m)
                r += binomial(static_cast<unsigned>(k - m), static_cast<unsigned>(tt - j - 1));
            prev = positions_[static_cast<std::size_t>(j)];
        }
        return r;
    }

    /// Text form "{1,3}".
    std::string str() const {
        std::ostringstream os;
        os << '{';
        for (std::size_t i = 0; i < positions_.size(); ++i) {
            if (i) os << ',';
            os << positions_[i];
        }
        os << '}';
        return os.str();
    }

    friend bool operator==(const PositionSet&, const PositionSet&) = default;
    friend std::strong_ordering operator<=>(const PositionSet& a, const PositionSet& b) {
        return std::lexicographical_compare_three_way(a.positions_.begin(), a.positions_.end(),
                                                      b.positions_.begin(), b.positions_.end());
    }

private:
    std::vector<int> positions_;
};

/// All C(k,t) position subsets of size t in lexicographic order.
inline std::vector<PositionSet> t_subsets(int k, int t) {
    if (t < 0 || t > k) throw std::invalid_argument("t_subsets: need 0 <= t <= k");
    std::vector<PositionSet> out;
    out.reserve(binomial(static_cast<unsigned>(k), static_cast<unsigned>(t)));
    std::vector<int> cur(static_cast<std::size_t>(t));
    for (int j = 0; j < t; ++j) cur[static_cast<std::size_t>(j)] = j + 1;
    while (true) {
        out.emplace_back(cur);
        // advance to the next combination
        int j = t - 1;
        while (j >= 0 && cur[static_cast<std::size_t>(j)] == k - (t - 1 - j)) --j;
        if (j < 0) break;
        ++cur[static_cast<std::size_t>(j)];
        for (int m = j + 1; m < t; ++m)
            cur[static_cast<std::size_t>(m)] = cur[static_cast<std::size_t>(m - 1)] + 1;
    }
    return out;
}

/// A t-tuple u placed on a position subset I; indexes a matrix row.
class RowKey {
public:
    RowKey(std::vector<int> u, PositionSet I, int v)
        : u_(std::move(u)), positions_(std::move(I)), v_(v) {
        if (v_ < 2) throw std::invalid_argument("RowKey: alphabet size must be >= 2");
        if (static_cast<int>(u_.size()) != positions_.t())
            throw std::invalid_argument("RowKey: |u| must equal |I|");
        for (int x : u_)
            if (x < 0 || x >= v_)
                throw std::invalid_argument("RowKey: symbol out of range");
    }

    int t() const { return positions_.t(); }
    int v() const { return v_; }
    const std::vector<int>& u() const { return u_; }
    const PositionSet& positions() const { return positions_; }

    /// Row index in M_t(v,k): (lex rank of I) * v^t + (lex rank of u).
    std::size_t rank(int k) const {
        std::size_t vu = 0;
        for (int x : u_) vu = vu * static_cast<std::size_t>(v_) + static_cast<std::size_t>(x);
        const std::size_t vt =
            checked_pow(static_cast<std::uint64_t>(v_), static_cast<unsigned>(t()));
        return positions_.rank(k) * vt + vu;
    }

    /// Inverse of rank() for fixed (t, v, k).
    static RowKey unrank(std::size_t row, int t, int v, int k) {
        const std::size_t vt = checked_pow(static_cast<std::uint64_t>(v), static_cast<unsigned>(t));
        const std::size_t nblocks = binomial(static_cast<unsigned>(k), static_cast<unsigned>(t));
        if (row >= nblocks * vt) throw std::out_of_range("RowKey::unrank: row index out of range");
        const std::size_t block = row / vt;
        std::size_t vu = row % vt;
        std::vector<int> u(static_cast<std::size_t>(t));
        for (int j = t - 1; j >= 0; --j) {
            u[static_cast<std::size_t>(j)] = static_cast<int>(vu % static_cast<std::size_t>(v));
            vu /= static_cast<std::size_t>(v);
        }
        return RowKey(std::move(u), t_subsets(k, t)[block], v);
    }

    /// Text form "(1,0)@{1,3}".
    std::string str() const {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < u_.size(); ++i) {
            if (i) os << ',';
            os << u_[i];
        }
        os << ")@" << positions_.str();
        return os.str();
    }

    friend bool operator==(const RowKey&, const RowKey&) = default;

private:
    std::vector<int> u_;
    PositionSet positions_;
    int v_;
};

/// Number of rows of M_t(v,k): C(k,t) * v^t.
inline std::size_t row_count(int t, int v, int k) {
    return binomial(static_cast<unsigned>(k), static_cast<unsigned>(t)) *
           checked_pow(static_cast<std::uint64_t>(v), static_cast<unsigned>(t));
}

/// Number of columns of M_t(v,k): v^k.
inline std::size_t column_count(int v, int k) {
    return checked_pow(static_cast<std::uint64_t>(v), static_cast<unsigned>(k));
}

inline Tuple Tuple::parse(std::string_view text, int v) {
    std::vector<int> vals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string_view field = text.substr(pos, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - pos);
        if (field.empty()) throw std::invalid_argument("Tuple::parse: empty field");
        int value = 0;
        for (char c : field) {
            if (c < '0' || c > '9')
                throw std::invalid_argument("Tuple::parse: invalid symbol '" +
                                            std::string(field) + "'");
            value = value * 10 + (c - '0');
            if (value >= 1'000'000) throw std::invalid_argument("Tuple::parse: symbol too large");
        }
        vals.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Tuple(std::move(vals), v);
}

} // namespace oatrade
