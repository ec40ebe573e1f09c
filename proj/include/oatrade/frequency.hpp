// frequency.hpp -- sparse integer-valued functions on V^k: the (possibly
// signed) multiplicity vectors that orthogonal arrays and trades reduce to.
#pragma once

#include <oatrade/core.hpp>
#include <oatrade/tuples.hpp>

#include <map>
#include <vector>

namespace oatrade {

/// Sparse mapping Tuple -> integer; absent tuples count as zero and zero
/// entries are never stored.
class FrequencyVector {
public:
    FrequencyVector(int v, int k) : v_(v), k_(k) {
        if (v_ < 2 || k_ < 1) throw std::invalid_argument("FrequencyVector: need v >= 2, k >= 1");
    }

    int v() const { return v_; }
    int k() const { return k_; }

    void add(const Tuple& x, const Int& delta) {
        check(x);
        if (delta == 0) return;
        auto [it, inserted] = entries_.emplace(x, delta);
        if (!inserted) {
            it->second += delta;
            if (it->second == 0) entries_.erase(it);
        }
    }

    void set(const Tuple& x, const Int& value) {
        check(x);
        if (value == 0)
            entries_.erase(x);
        else
            entries_.insert_or_assign(x, value);
    }

    Int at(const Tuple& x) const {
        check(x);
        auto it = entries_.find(x);
        return it == entries_.end() ? Int(0) : it->second;
    }

    /// Nonzero entries in lexicographic tuple order.
    const std::map<Tuple, Int>& entries() const { return entries_; }

    std::size_t support_size() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    bool nonnegative() const {
        for (const auto& [_, c] : entries_)
            if (c < 0) return false;
        return true;
    }

    /// Dense column of length v^k indexed by tuple rank.
    std::vector<Int> to_dense() const {
        std::vector<Int> dense(column_count(v_, k_), 0);
        for (const auto& [x, c] : entries_) dense[x.rank()] = c;
        return dense;
    }

    friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;

    friend FrequencyVector operator+(const FrequencyVector& a, const FrequencyVector& b) {
        if (a.v_ != b.v_ || a.k_ != b.k_)
            throw std::invalid_argument("FrequencyVector: shape mismatch in +");
        FrequencyVector out = a;
        for (const auto& [x, c] : b.entries_) out.add(x, c);
        return out;
    }

private:
    void check(const Tuple& x) const {
        if (x.v() != v_ || x.k() != k_)
            throw std::invalid_argument("FrequencyVector: tuple shape (" + std::to_string(x.v()) +
                                        "," + std::to_string(x.k()) + ") does not match (" +
                                        std::to_string(v_) + "," + std::to_string(k_) + ")");
    }

    int v_, k_;
    std::map<Tuple, Int> entries_;
};

} // namespace oatrade
