#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "oatrade/exact_linalg.hpp"
#include "oatrade/trades.hpp"
#include "test_support.hpp"

using oatrade::FrequencyVector;
using oatrade::InclusionMatrix;
using oatrade::Int;
using oatrade::IntMatrix;
using oatrade::RankLimits;
using oatrade::Tuple;

namespace {

IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

/// Random matrix of prescribed rank: r independent seed rows (unit pivot plus
/// random tail), remaining rows random small-integer combinations of them.
IntMatrix random_known_rank(std::mt19937& rng, std::size_t rows, std::size_t cols,
                           std::size_t r) {
    IntMatrix m(rows, cols);
    std::uniform_int_distribution<int> entry(-4, 4);
    for (std::size_t i = 0; i < r; ++i) {
        m(i, i) = 1;
        for (std::size_t j = i + 1; j < cols; ++j) m(i, j) = entry(rng);
    }
    for (std::size_t i = r; i < rows; ++i)
        for (std::size_t s = 0; s < r; ++s) {
            const int c = entry(rng);
            for (std::size_t j = 0; j < cols; ++j) m(i, j) += c * m(s, j);
        }
    for (std::size_t swaps = 0; swaps < rows; ++swaps)
        m.swap_rows(rng() % rows, rng() % rows);
    return m;
}

}  // namespace

TEST_CASE("exact rank of reference matrices", "[exact_linalg]") {
    CHECK(oatrade::exact_rank(InclusionMatrix::build(2, 3, 3)) == 19);
    CHECK(oatrade::exact_rank(InclusionMatrix::build(1, 2, 3)) == 4);
    CHECK(oatrade::exact_rank(identity(6)) == 6);
    CHECK(oatrade::exact_rank(IntMatrix(4, 7)) == 0);
}

TEST_CASE("exact rank equals the closed form across small shapes", "[exact_linalg]") {
    for (int v = 2; v <= 3; ++v)
        for (int k = 1; k <= 4; ++k)
            for (int t = 1; t < k; ++t) {
                const InclusionMatrix m = InclusionMatrix::build(t, v, k);
                CHECK(Int(oatrade::exact_rank(m)) == oatrade::closed_form_rank(t, v, k));
            }
}

TEST_CASE("column cap guards the elimination", "[exact_linalg]") {
    const InclusionMatrix m = InclusionMatrix::build(1, 2, 3);
    CHECK_THROWS_AS(oatrade::exact_rank(m, RankLimits{7}), oatrade::size_guard_error);
    CHECK_NOTHROW(oatrade::exact_rank(m, RankLimits{8}));
}

TEST_CASE("primality screen", "[exact_linalg]") {
    CHECK(oatrade::is_prime(2));
    CHECK(oatrade::is_prime(2147483647));
    CHECK_FALSE(oatrade::is_prime(1));
    CHECK_FALSE(oatrade::is_prime(2147483649));
    CHECK_THROWS_AS(oatrade::is_prime(std::uint64_t{1} << 32), std::invalid_argument);
}

TEST_CASE("modular rank screens the exact rank", "[exact_linalg]") {
    CHECK(oatrade::rank_mod_p(InclusionMatrix::build(2, 3, 3),
                              oatrade::default_screen_prime) == 19);
    CHECK(oatrade::rank_mod_p(IntMatrix(3, 3), 7) == 0);
    CHECK(oatrade::rank_mod_p(identity(5), 13) == 5);
    CHECK_THROWS_AS(oatrade::rank_mod_p(identity(2), 15), std::invalid_argument);
    CHECK_THROWS_AS(oatrade::rank_mod_p(identity(2), (std::uint64_t{1} << 32) + 15),
                    std::invalid_argument);

    // a matrix whose rank drops mod 2: [[2]] has rational rank 1
    IntMatrix twos(1, 1);
    twos(0, 0) = 2;
    CHECK(oatrade::exact_rank(twos) == 1);
    CHECK(oatrade::rank_mod_p(twos, 2) == 0);
}

TEST_CASE("modular rank never exceeds the exact rank on random matrices",
          "[exact_linalg]") {
    std::mt19937 rng(424243);
    std::uniform_int_distribution<int> entry(-9, 9);
    for (int trial = 0; trial < 20; ++trial) {
        IntMatrix m(4 + rng() % 3, 4 + rng() % 3);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = entry(rng);
        const std::size_t exact = oatrade::exact_rank(m);
        for (std::uint64_t p : {std::uint64_t{2}, std::uint64_t{3}, std::uint64_t{5},
                                oatrade::default_screen_prime})
            CHECK(oatrade::rank_mod_p(m, p) <= exact);
    }
}

TEST_CASE("rank is invariant under row and column permutations", "[exact_linalg]") {
    std::mt19937 rng(77007);
    const IntMatrix base = random_known_rank(rng, 8, 10, 5);
    REQUIRE(oatrade::exact_rank(base) == 5);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::size_t> rp(base.rows()), cp(base.cols());
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        IntMatrix shuffled(base.rows(), base.cols());
        for (std::size_t r = 0; r < base.rows(); ++r)
            for (std::size_t c = 0; c < base.cols(); ++c)
                shuffled(r, c) = base(rp[r], cp[c]);
        CHECK(oatrade::exact_rank(shuffled) == 5);
        CHECK(oatrade::rank_mod_p(shuffled, 101) ==
              oatrade::rank_mod_p(base, 101));
    }
}

TEST_CASE("prescribed-rank random matrices eliminate to their construction rank",
          "[exact_linalg]") {
    std::mt19937 rng(96321);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t cols = 5 + rng() % 4;
        const std::size_t rows = 4 + rng() % 5;
        const std::size_t r = 1 + rng() % std::min(rows, cols);
        const IntMatrix m = random_known_rank(rng, rows, cols, r);
        CHECK(oatrade::exact_rank(m) == r);
    }
}

TEST_CASE("matrix-vector products", "[exact_linalg]") {
    SECTION("all-ones frequency vector sums each row") {
        const InclusionMatrix m = InclusionMatrix::build(1, 3, 2);
        FrequencyVector ones(3, 2);
        for (std::size_t c = 0; c < m.n_cols(); ++c)
            ones.add(m.column_tuple(c), 1);
        for (const Int& value : oatrade::multiply(m, ones)) CHECK(value == 3);
    }
    SECTION("zero vector maps to zero") {
        const InclusionMatrix m = InclusionMatrix::build(2, 2, 3);
        for (const Int& value : oatrade::multiply(m, FrequencyVector(2, 3)))
            CHECK(value == 0);
    }
    SECTION("cyclic square frequency vector hits every pair once") {
        const oatrade::PartialLatinSquare square = oatrade::cyclic_latin_square(4);
        FrequencyVector f(4, 3);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                f.add(Tuple({r, c, *square.at(r, c)}, 4), 1);
        const InclusionMatrix m = InclusionMatrix::build(2, 4, 3);
        for (const Int& value : oatrade::multiply(m, f)) CHECK(value == 1);
    }
    SECTION("dense overload matches hand product") {
        IntMatrix m(2, 3);
        m(0, 0) = 1;
        m(0, 2) = -2;
        m(1, 1) = 3;
        const std::vector<Int> x = {Int(5), Int(7), Int(1)};
        const std::vector<Int> y = oatrade::multiply(m, x);
        REQUIRE(y.size() == 2);
        CHECK(y[0] == 3);
        CHECK(y[1] == 21);
        CHECK_THROWS_AS(oatrade::multiply(m, std::vector<Int>{Int(1)}),
                        std::invalid_argument);
    }
    SECTION("shape mismatch is rejected") {
        const InclusionMatrix m = InclusionMatrix::build(1, 2, 2);
        CHECK_THROWS_AS(oatrade::multiply(m, FrequencyVector(3, 2)),
                        std::invalid_argument);
    }
}

TEST_CASE("independence of frequency vector families", "[exact_linalg]") {
    CHECK(oatrade::are_independent({}));

    const std::vector<FrequencyVector> basis = oatrade::intercalate_basis(2, 3);
    REQUIRE(basis.size() == 8);
    CHECK(oatrade::are_independent(basis));

    FrequencyVector doubled = basis[0] + basis[0];
    CHECK_FALSE(oatrade::are_independent({basis[0], doubled}));

    FrequencyVector other_shape(2, 3);
    CHECK_THROWS_AS(oatrade::are_independent({basis[0], other_shape}),
                    std::invalid_argument);
}
