// exact_linalg.hpp -- exact rank of integer matrices by fraction-free
// elimination, a fast rank screen over GF(p), and exact matrix-vector
// products. No floating point anywhere: rank claims are exact identities, so
// they are checked with exact arithmetic.
#pragma once

#include <oatrade/core.hpp>
#include <oatrade/frequency.hpp>
#include <oatrade/inclusion_matrix.hpp>

#include <cstdint>
#include <vector>

namespace oatrade {

/// Dense row-major matrix over an exact scalar type.
template <class T>
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("DenseMatrix: dimensions must be positive");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap(data_[a * cols_ + j], data_[b * cols_ + j]);
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using IntMatrix = DenseMatrix<Int>;

/// Entrywise copy of an inclusion matrix into a dense exact matrix.
inline IntMatrix materialize(const InclusionMatrix& m) {
    IntMatrix out(m.n_rows(), m.n_cols());
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (std::size_t c : m.row(r)) out(r, c) = 1;
    return out;
}

struct RankLimits {
    /// Refuse the elimination beyond this many columns.
    std::size_t max_cols = 5000;
};

/// Fraction-free (Bareiss) elimination rank over any exact scalar that
/// supports +, -, *, exact / and equality with a default-constructed zero.
/// Pivot choice is pinned: the first nonzero in a row-major scan of the
/// remaining submatrix, so intermediate states are reproducible. Consumes its
/// argument.
template <class T>
std::size_t eliminate_rank(DenseMatrix<T> m) {
    const std::size_t nr = m.rows(), nc = m.cols();
    const T zero{};
    std::vector<bool> col_used(nc, false);
    T prev_pivot{};
    bool have_prev = false;
    std::size_t rank = 0;

    while (rank < nr) {
        // first nonzero in row-major order over unused columns
        std::size_t pr = nr, pc = nc;
        for (std::size_t r = rank; r < nr && pr == nr; ++r)
            for (std::size_t c = 0; c < nc; ++c)
                if (!col_used[c] && !(m(r, c) == zero)) {
                    pr = r;
                    pc = c;
                    break;
                }
        if (pr == nr) break;

        m.swap_rows(rank, pr);
        const T pivot = m(rank, pc);
        for (std::size_t r = rank + 1; r < nr; ++r) {
            const T lead = m(r, pc);
            for (std::size_t c = 0; c < nc; ++c) {
                if (col_used[c]) continue;
                T num = m(r, c) * pivot - lead * m(rank, c);
                m(r, c) = have_prev ? num / prev_pivot : std::move(num);
            }
        }
        prev_pivot = pivot;
        have_prev = true;
        col_used[pc] = true;
        ++rank;
    }
    return rank;
}

/// Exact rank over the rationals (integer matrix, fraction-free elimination).
inline std::size_t exact_rank(const IntMatrix& m, const RankLimits& limits = {}) {
    if (m.cols() > limits.max_cols)
        throw size_guard_error("exact_rank: " + std::to_string(m.cols()) +
                               " columns exceed the cap of " + std::to_string(limits.max_cols));
    return eliminate_rank(m);
}

inline std::size_t exact_rank(const InclusionMatrix& m, const RankLimits& limits = {}) {
    if (m.n_cols() > limits.max_cols)
        throw size_guard_error("exact_rank: " + std::to_string(m.n_cols()) +
                               " columns exceed the cap of " + std::to_string(limits.max_cols));
    return eliminate_rank(materialize(m));
}

/// Primality by complete trial division; valid for p < 2^32 (divisors are
/// enumerated up to sqrt(p) <= 65535, so the answer is exact in that range).
inline bool is_prime(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 32))
        throw std::invalid_argument("is_prime: only supported for p < 2^32");
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Element of GF(p) for prime p < 2^32; carries its modulus so the generic
/// elimination template applies unchanged.
class Fp {
public:
    Fp() : value_(0), p_(0) {}
    Fp(std::uint64_t value, std::uint64_t p) : value_(value % p), p_(p) {}

    static Fp from_int(const Int& value, std::uint64_t p) {
        Int r = value % Int(p);
        if (r < 0) r += Int(p);
        return Fp(static_cast<std::uint64_t>(r), p);
    }

    std::uint64_t value() const { return value_; }

    friend Fp operator+(Fp a, Fp b) { return Fp((a.value_ + b.value_) % a.mod(b), a.mod(b)); }
    friend Fp operator-(Fp a, Fp b) {
        const std::uint64_t p = a.mod(b);
        return Fp((a.value_ + p - b.value_) % p, p);
    }
    friend Fp operator*(Fp a, Fp b) { return Fp(a.value_ * b.value_ % a.mod(b), a.mod(b)); }
    friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
    friend bool operator==(Fp a, Fp b) { return a.value_ == b.value_; }

    Fp inverse() const {
        if (value_ == 0) throw std::domain_error("Fp: division by zero");
        // Fermat: a^(p-2) mod p
        std::uint64_t base = value_, result = 1, e = p_ - 2;
        while (e) {
            if (e & 1) result = result * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return Fp(result, p_);
    }

private:
    // a modulus of 0 marks a default-constructed zero; adopt the peer's
    std::uint64_t mod(Fp other) const { return p_ ? p_ : other.p_; }

    std::uint64_t value_;
    std::uint64_t p_;
};

/// Default screening prime: 2^31 - 1.
inline constexpr std::uint64_t default_screen_prime = 2147483647;

/// Rank over GF(p). Always <= the rational rank, so this is a fast screen,
/// never sole evidence of the exact value.
inline std::size_t rank_mod_p(const IntMatrix& m, std::uint64_t p, const RankLimits& limits = {}) {
    if (!is_prime(p)) throw std::invalid_argument("rank_mod_p: " + std::to_string(p) + " is not prime");
    if (m.cols() > limits.max_cols)
        throw size_guard_error("rank_mod_p: " + std::to_string(m.cols()) +
                               " columns exceed the cap of " + std::to_string(limits.max_cols));
    DenseMatrix<Fp> reduced(m.rows(), m.cols(), Fp(0, p));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) reduced(r, c) = Fp::from_int(m(r, c), p);
    return eliminate_rank(std::move(reduced));
}

inline std::size_t rank_mod_p(const InclusionMatrix& m, std::uint64_t p,
                              const RankLimits& limits = {}) {
    if (!is_prime(p)) throw std::invalid_argument("rank_mod_p: " + std::to_string(p) + " is not prime");
    if (m.n_cols() > limits.max_cols)
        throw size_guard_error("rank_mod_p: " + std::to_string(m.n_cols()) +
                               " columns exceed the cap of " + std::to_string(limits.max_cols));
    DenseMatrix<Fp> reduced(m.n_rows(), m.n_cols(), Fp(0, p));
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (std::size_t c : m.row(r)) reduced(r, c) = Fp(1, p);
    return eliminate_rank(std::move(reduced));
}

/// Exact product M * F over the sparse matrix; length-n_rows result.
inline std::vector<Int> multiply(const InclusionMatrix& m, const FrequencyVector& vec) {
    if (vec.v() != m.v() || vec.k() != m.k())
        throw std::invalid_argument("multiply: vector shape does not match matrix");
    std::vector<Int> dense = vec.to_dense();
    std::vector<Int> out(m.n_rows(), 0);
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (std::size_t c : m.row(r)) out[r] += dense[c];
    return out;
}

inline std::vector<Int> multiply(const IntMatrix& m, const std::vector<Int>& vec) {
    if (vec.size() != m.cols()) throw std::invalid_argument("multiply: length mismatch");
    std::vector<Int> out(m.rows(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m(r, c) != 0) out[r] += m(r, c) * vec[c];
    return out;
}

/// True iff the stacked matrix of the given vectors has full row rank.
/// An empty family is vacuously independent.
inline bool are_independent(const std::vector<FrequencyVector>& vectors,
                            const RankLimits& limits = {}) {
    if (vectors.empty()) return true;
    const int v = vectors.front().v(), k = vectors.front().k();
    for (const auto& vec : vectors)
        if (vec.v() != v || vec.k() != k)
            throw std::invalid_argument("are_independent: mixed vector shapes");
    const std::size_t cols = column_count(v, k);
    if (cols > limits.max_cols)
        throw size_guard_error("are_independent: " + std::to_string(cols) +
                               " columns exceed the cap of " + std::to_string(limits.max_cols));
    IntMatrix stacked(vectors.size(), cols);
    for (std::size_t r = 0; r < vectors.size(); ++r)
        for (const auto& [x, c] : vectors[r].entries()) stacked(r, x.rank()) = c;
    return eliminate_rank(std::move(stacked)) == vectors.size();
}

} // namespace oatrade
