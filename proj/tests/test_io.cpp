#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "oatrade/io.hpp"
#include "test_support.hpp"

using oatrade::CoordinateMatrix;
using oatrade::FrequencyVector;
using oatrade::InclusionMatrix;
using oatrade::Int;
using oatrade::LatinTrade;
using oatrade::OrthogonalArray;
using oatrade::ParseError;
using oatrade::PartialLatinSquare;
using oatrade::Tuple;

namespace {

template <class Reader>
auto parse(const std::string& text, Reader reader) {
    std::istringstream in(text);
    return reader(in);
}

PartialLatinSquare pls_of(const std::string& text) {
    return parse(text, [](std::istream& in) { return oatrade::read_pls(in); });
}

FrequencyVector freq_of(const std::string& text, std::optional<int> v = {}) {
    std::istringstream in(text);
    return oatrade::read_frequency(in, v);
}

/// Expects `fn` to throw ParseError at the given 1-based location.
template <class Fn>
void expect_parse_error(Fn fn, std::size_t line, std::size_t field = 0) {
    try {
        fn();
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == line);
        CHECK(e.field() == field);
    }
}

}  // namespace

TEST_CASE("partial Latin square round trip", "[io]") {
    const PartialLatinSquare square = pls_of("0 1 2\n1 2 .\n. . .\n");
    CHECK(square.order() == 3);
    CHECK(square.volume() == 5);
    CHECK(square.at(0, 2) == 2);
    CHECK_FALSE(square.at(1, 2).has_value());

    std::ostringstream out;
    oatrade::write_pls(out, square);
    CHECK(out.str() == "0 1 2\n1 2 .\n. . .\n");
    CHECK(pls_of(out.str()) == square);
}

TEST_CASE("partial Latin square parse errors carry their location", "[io]") {
    // row 2 shorter than the order fixed by row 1
    expect_parse_error([] { pls_of("0 1\n0\n"); }, 2);
    // symbol out of range for order 2
    expect_parse_error([] { pls_of("0 2\n. .\n"); }, 1, 2);
    // Latin violation: symbol repeated in row 1
    expect_parse_error([] { pls_of("0 0\n. .\n"); }, 1, 2);
    // wrong row count
    expect_parse_error([] { pls_of("0 1 .\n1 . 0\n"); }, 1);
    // two blocks where one is expected
    expect_parse_error([] { pls_of("0\n\n0\n"); }, 3);
    // non-integer cell
    expect_parse_error([] { pls_of("0 x\n. .\n"); }, 1, 2);
}

TEST_CASE("trade files round trip through reader and writer", "[io]") {
    const std::string text = testsupport::read_file("trade_order5.txt");
    const LatinTrade trade =
        parse(text, [](std::istream& in) { return oatrade::read_trade(in); });
    CHECK(trade.first.order() == 5);
    CHECK(trade.first.volume() == 19);
    CHECK(trade.second.volume() == 19);

    std::ostringstream out;
    oatrade::write_trade(out, trade);
    const LatinTrade again =
        parse(out.str(), [](std::istream& in) { return oatrade::read_trade(in); });
    CHECK(again.first == trade.first);
    CHECK(again.second == trade.second);
}

TEST_CASE("trade reader rejects malformed files", "[io]") {
    const auto read = [](const std::string& text) {
        std::istringstream in(text);
        return oatrade::read_trade(in);
    };
    CHECK_THROWS_AS(read("0 1\n1 0\n"), ParseError);               // one block
    CHECK_THROWS_AS(read("0\n\n0\n\n0\n"), ParseError);            // three blocks
    CHECK_THROWS_AS(read("0 1\n1 0\n\n0\n"), ParseError);          // order mismatch
}

TEST_CASE("frequency vector round trip preserves every entry", "[io]") {
    FrequencyVector f(4, 3);
    f.add(Tuple({0, 0, 0}, 4), 2);
    f.add(Tuple({1, 2, 3}, 4), -5);
    f.add(Tuple({3, 3, 3}, 4), 1);

    std::ostringstream out;
    oatrade::write_frequency(out, f);
    CHECK(out.str() == "# v=4 k=3\n0,0,0 : 2\n1,2,3 : -5\n3,3,3 : 1\n");
    CHECK(freq_of(out.str()) == f);
}

TEST_CASE("the zero vector round trips via the dimension header", "[io]") {
    std::ostringstream out;
    oatrade::write_frequency(out, FrequencyVector(3, 2));
    const FrequencyVector back = freq_of(out.str());
    CHECK(back.v() == 3);
    CHECK(back.k() == 2);
    CHECK(back.is_zero());
}

TEST_CASE("frequency reader dimension rules", "[io]") {
    SECTION("v defaults to max symbol + 1") {
        const FrequencyVector f = freq_of("0,2 : 1\n1,0 : 3\n");
        CHECK(f.v() == 3);
        CHECK(f.k() == 2);
    }
    SECTION("an override widens the alphabet") {
        const FrequencyVector f = freq_of("0,1 : 1\n", 5);
        CHECK(f.v() == 5);
    }
    SECTION("duplicate tuples are summed") {
        const FrequencyVector f = freq_of("1,1 : 2\n1,1 : 3\n0,0 : 1\n");
        CHECK(f.at(Tuple({1, 1}, 2)) == 5);
        CHECK(f.support_size() == 2);
    }
    SECTION("entries cancelling to zero vanish from the support") {
        const FrequencyVector f = freq_of("1,1 : 2\n1,1 : -2\n0,0 : 1\n");
        CHECK(f.support_size() == 1);
    }
    SECTION("comments and blank lines are skipped") {
        const FrequencyVector f = freq_of("# anything\n\n0,0 : 1\n# more\n");
        CHECK(f.support_size() == 1);
    }
    SECTION("override conflicting with the header is an error") {
        expect_parse_error([] { freq_of("# v=3 k=2\n0,0 : 1\n", 4); }, 1);
    }
    SECTION("symbol beyond the override is an error") {
        expect_parse_error([] { freq_of("0,4 : 1\n", 3); }, 1);
    }
    SECTION("ragged tuple lengths are an error") {
        expect_parse_error([] { freq_of("0,0 : 1\n0,0,0 : 1\n"); }, 2);
    }
    SECTION("missing colon is an error") {
        expect_parse_error([] { freq_of("0,0 1\n"); }, 1);
    }
    SECTION("bad coefficient is an error") {
        CHECK_THROWS_AS(freq_of("0,0 : ten\n"), ParseError);
    }
    SECTION("negative symbols are an error") {
        expect_parse_error([] { freq_of("0,-1 : 1\n"); }, 1, 2);
    }
    SECTION("empty input without a header is an error") {
        expect_parse_error([] { freq_of("\n\n"); }, 1);
    }
}

TEST_CASE("orthogonal array files", "[io]") {
    SECTION("fixture with header round trips") {
        const std::string text = testsupport::read_file("oa_cyclic3.txt");
        std::istringstream in(text);
        const OrthogonalArray a = oatrade::read_oa(in);
        std::ostringstream out;
        oatrade::write_oa(out, a);
        std::istringstream in2(out.str());
        const OrthogonalArray b = oatrade::read_oa(in2);
        CHECK(b.v == a.v);
        CHECK(b.k == a.k);
        CHECK(b.t == a.t);
        CHECK(b.lambda == a.lambda);
        CHECK(b.rows == a.rows);
    }
    SECTION("headerless files take parameters from the caller") {
        std::istringstream in("0 0\n0 1\n1 0\n1 1\n");
        const OrthogonalArray a = oatrade::read_oa(in, 1, 2, 2);
        CHECK(a.k == 2);
        CHECK(a.rows.size() == 4);
        CHECK(oatrade::verify_oa_direct(a).pass);
    }
    SECTION("supplied parameters must match the header") {
        const std::string text = "OA t=2 v=3 k=3 lambda=1\n0 0 0\n";
        std::istringstream in(text);
        CHECK_THROWS_AS(oatrade::read_oa(in, {}, 4, {}), ParseError);
        std::istringstream in2(text);
        CHECK_THROWS_AS(oatrade::read_oa(in2, 1, {}, {}), ParseError);
        std::istringstream in3(text);
        CHECK_THROWS_AS(oatrade::read_oa(in3, {}, {}, Int(2)), ParseError);
        std::istringstream in4(text);
        CHECK_NOTHROW(oatrade::read_oa(in4, 2, 3, Int(1)));
    }
    SECTION("missing parameters are an error") {
        std::istringstream in("0 0\n");
        CHECK_THROWS_AS(oatrade::read_oa(in), ParseError);
        std::istringstream in2("0 0\n");
        CHECK_THROWS_AS(oatrade::read_oa(in2, 1, {}, Int(1)), ParseError);
    }
    SECTION("incomplete header is an error") {
        std::istringstream in("OA t=2 v=3\n0 0 0\n");
        CHECK_THROWS_AS(oatrade::read_oa(in), ParseError);
    }
    SECTION("unknown header field is an error") {
        expect_parse_error(
            [] {
                std::istringstream in("OA t=2 v=3 k=3 lambda=1 runs=9\n");
                oatrade::read_oa(in);
            },
            1, 6);
    }
    SECTION("ragged rows are an error") {
        expect_parse_error(
            [] {
                std::istringstream in("OA t=1 v=2 k=2 lambda=2\n0 0\n0\n");
                oatrade::read_oa(in);
            },
            3);
    }
    SECTION("symbols outside [0, v) are an error") {
        expect_parse_error(
            [] {
                std::istringstream in("OA t=1 v=2 k=2 lambda=1\n0 2\n");
                oatrade::read_oa(in);
            },
            2, 2);
    }
}

TEST_CASE("Matrix Market writer and reader agree with the matrix", "[io]") {
    const InclusionMatrix m = InclusionMatrix::build(1, 2, 2);
    std::ostringstream out;
    oatrade::write_matrix_market(out, m);

    std::istringstream in(out.str());
    const CoordinateMatrix coord = oatrade::read_matrix_market(in);
    CHECK(coord.rows == m.n_rows());
    CHECK(coord.cols == m.n_cols());
    REQUIRE(coord.entries.size() == m.ones());

    // sorted by row, then column; every listed entry is a 1 of the matrix
    for (std::size_t i = 0; i + 1 < coord.entries.size(); ++i)
        CHECK(coord.entries[i] < coord.entries[i + 1]);
    for (const auto& [r, c, value] : coord.entries) {
        CHECK(value == 1);
        CHECK(m.entry(static_cast<std::size_t>(r - 1),
                      static_cast<std::size_t>(c - 1)) == 1);
    }
}

TEST_CASE("Matrix Market reader rejects malformed files", "[io]") {
    const auto read = [](const std::string& text) {
        std::istringstream in(text);
        return oatrade::read_matrix_market(in);
    };
    CHECK_THROWS_AS(read(""), ParseError);
    CHECK_THROWS_AS(read("1 1 0\n"), ParseError);  // missing banner
    CHECK_THROWS_AS(read("%%MatrixMarket matrix coordinate real general\n1 1 0\n"),
                    ParseError);
    CHECK_THROWS_AS(read("%%MatrixMarket matrix coordinate integer general\n"),
                    ParseError);  // no dimensions
    CHECK_THROWS_AS(read("%%MatrixMarket matrix coordinate integer general\n1 1\n"),
                    ParseError);
    // out-of-range indices
    CHECK_THROWS_AS(
        read("%%MatrixMarket matrix coordinate integer general\n2 2 1\n3 1 1\n"),
        ParseError);
    CHECK_THROWS_AS(
        read("%%MatrixMarket matrix coordinate integer general\n2 2 1\n1 0 1\n"),
        ParseError);
    // declared count differs from the listed entries
    CHECK_THROWS_AS(
        read("%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 1\n"),
        ParseError);
    // comment lines after the banner are fine
    std::istringstream ok(
        "%%MatrixMarket matrix coordinate integer general\n% note\n1 1 1\n1 1 1\n");
    CHECK_NOTHROW(oatrade::read_matrix_market(ok));
}

TEST_CASE("dense rendering matches the reference grid", "[io]") {
    const InclusionMatrix m = InclusionMatrix::build(2, 3, 3);
    std::ostringstream out;
    oatrade::write_dense(out, m);

    std::istringstream rendered(out.str());
    std::istringstream reference(testsupport::read_file("inclusion_m2_3_3.txt"));
    std::string line, ref;
    std::size_t r = 0;
    while (std::getline(rendered, line)) {
        REQUIRE(std::getline(reference, ref));
        const std::size_t bar = line.find(" | ");
        REQUIRE(bar != std::string::npos);
        CHECK(line.substr(0, bar) == m.row_key(r).str());  // equal widths, no padding
        CHECK(line.substr(bar + 3) == ref);
        ++r;
    }
    CHECK(r == 27);
}
