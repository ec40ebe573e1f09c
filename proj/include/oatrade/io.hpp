#pragma once

// Readers and writers for the on-disk formats: partial Latin squares, trades,
// frequency vectors, orthogonal arrays, Matrix Market coordinate files, and a
// dense text rendering of inclusion matrices. Symbols in files are decimal
// non-negative integers; "." is the only empty-cell token; fields are
// whitespace-separated. Parse failures throw ParseError with 1-based line and
// field numbers. Every writer produces input its reader maps back to the
// original value.

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oatrade/core.hpp"
#include "oatrade/frequency.hpp"
#include "oatrade/inclusion_matrix.hpp"
#include "oatrade/oa.hpp"
#include "oatrade/trades.hpp"
#include "oatrade/tuples.hpp"

namespace oatrade {

/// Input error with 1-based location; field 0 means the whole line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t field, const std::string& message)
        : std::runtime_error(locate(line, field) + message), line_(line), field_(field) {}

    ParseError(std::size_t line, const std::string& message) : ParseError(line, 0, message) {}

    std::size_t line() const { return line_; }
    std::size_t field() const { return field_; }

private:
    static std::string locate(std::size_t line, std::size_t field) {
        std::string at = "line " + std::to_string(line);
        if (field > 0) at += ", field " + std::to_string(field);
        return at + ": ";
    }

    std::size_t line_;
    std::size_t field_;
};

namespace detail {

inline std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string token;
    while (in >> token) fields.push_back(token);
    return fields;
}

inline bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

inline bool is_comment(const std::string& line) {
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '#';
    }
    return false;
}

inline long long parse_integer(const std::string& token, std::size_t line, std::size_t field) {
    std::size_t consumed = 0;
    long long value = 0;
    try {
        value = std::stoll(token, &consumed);
    } catch (const std::exception&) {
        throw ParseError(line, field, "expected an integer, got \"" + token + "\"");
    }
    if (consumed != token.size())
        throw ParseError(line, field, "expected an integer, got \"" + token + "\"");
    return value;
}

inline int parse_symbol(const std::string& token, int v, std::size_t line, std::size_t field) {
    const long long value = parse_integer(token, line, field);
    if (value < 0 || value >= v)
        throw ParseError(line, field, "symbol " + std::to_string(value) +
                                          " out of range [0, " + std::to_string(v) + ")");
    return static_cast<int>(value);
}

inline Int parse_bigint(const std::string& token, std::size_t line, std::size_t field) {
    try {
        return Int(token);
    } catch (const std::exception&) {
        throw ParseError(line, field, "expected an integer, got \"" + token + "\"");
    }
}

/// Maximal runs of non-blank lines, each tagged with its 1-based start line.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> blocks_of(
    const std::vector<std::string>& lines) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> blocks;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_blank(lines[i])) continue;
        if (blocks.empty() || is_blank(lines[i - 1])) blocks.push_back({i + 1, {}});
        blocks.back().second.push_back(lines[i]);
    }
    return blocks;
}

/// Parses one square block: n lines of n fields, "." or a symbol in [0, n).
inline PartialLatinSquare parse_pls_block(const std::vector<std::string>& lines,
                                          std::size_t first_line) {
    if (lines.empty()) throw ParseError(first_line, "empty partial Latin square block");
    const std::size_t order = split_fields(lines[0]).size();
    if (order == 0) throw ParseError(first_line, "empty partial Latin square block");
    if (lines.size() != order)
        throw ParseError(first_line, "expected " + std::to_string(order) + " rows, got " +
                                         std::to_string(lines.size()));

    PartialLatinSquare square(static_cast<int>(order));
    for (std::size_t r = 0; r < order; ++r) {
        const std::size_t line_no = first_line + r;
        const std::vector<std::string> fields = split_fields(lines[r]);
        if (fields.size() != order)
            throw ParseError(line_no, "expected " + std::to_string(order) + " fields, got " +
                                          std::to_string(fields.size()));
        for (std::size_t c = 0; c < order; ++c) {
            if (fields[c] == ".") continue;
            const int symbol =
                parse_symbol(fields[c], static_cast<int>(order), line_no, c + 1);
            try {
                square.set(static_cast<int>(r), static_cast<int>(c), symbol);
            } catch (const std::invalid_argument& e) {
                throw ParseError(line_no, c + 1, e.what());
            }
        }
    }
    return square;
}

}  // namespace detail

/// Reads one partial Latin square: v lines of v fields.
inline PartialLatinSquare read_pls(std::istream& in) {
    const auto blocks = detail::blocks_of(detail::read_lines(in));
    if (blocks.size() != 1)
        throw ParseError(blocks.empty() ? 1 : blocks[1].first,
                         "expected exactly one partial Latin square block, got " +
                             std::to_string(blocks.size()));
    return detail::parse_pls_block(blocks[0].second, blocks[0].first);
}

inline void write_pls(std::ostream& out, const PartialLatinSquare& square) {
    for (int r = 0; r < square.order(); ++r) {
        for (int c = 0; c < square.order(); ++c) {
            if (c > 0) out << ' ';
            const auto symbol = square.at(r, c);
            if (symbol)
                out << *symbol;
            else
                out << '.';
        }
        out << '\n';
    }
}

/// Reads a trade: two square blocks separated by a blank line (first = P).
inline LatinTrade read_trade(std::istream& in) {
    const auto blocks = detail::blocks_of(detail::read_lines(in));
    if (blocks.size() != 2)
        throw ParseError(blocks.empty() ? 1 : blocks.back().first,
                         "expected two blocks separated by a blank line, got " +
                             std::to_string(blocks.size()));
    PartialLatinSquare p = detail::parse_pls_block(blocks[0].second, blocks[0].first);
    PartialLatinSquare q = detail::parse_pls_block(blocks[1].second, blocks[1].first);
    if (p.order() != q.order())
        throw ParseError(blocks[1].first, "the two squares have different orders");
    return LatinTrade(std::move(p), std::move(q));
}

inline void write_trade(std::ostream& out, const LatinTrade& trade) {
    write_pls(out, trade.first);
    out << '\n';
    write_pls(out, trade.second);
}

/// Reads a frequency vector: lines "x_1,...,x_k : c", duplicates summed.
/// Blank and "#" comment lines are skipped; a "# v=<v> k=<k>" header written
/// by write_frequency pins the dimensions. Otherwise k comes from the first
/// entry line and v from `v_override` or, failing that, max symbol + 1.
/// Dimensions from an override and a header must agree.
inline FrequencyVector read_frequency(std::istream& in, std::optional<int> v_override = {}) {
    const std::vector<std::string> lines = detail::read_lines(in);
    std::optional<int> header_v, header_k;
    std::vector<std::tuple<std::size_t, std::vector<int>, Int>> raw;  // line, symbols, coeff
    int max_symbol = -1;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const std::string& line = lines[i];
        if (detail::is_blank(line)) continue;
        if (detail::is_comment(line)) {
            for (const std::string& field : detail::split_fields(line)) {
                if (field.rfind("v=", 0) == 0)
                    header_v = static_cast<int>(
                        detail::parse_integer(field.substr(2), line_no, 0));
                if (field.rfind("k=", 0) == 0)
                    header_k = static_cast<int>(
                        detail::parse_integer(field.substr(2), line_no, 0));
            }
            continue;
        }

        const std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(line_no, "expected \"x_1,...,x_k : c\"");
        const std::vector<std::string> left = detail::split_fields(line.substr(0, colon));
        const std::vector<std::string> right = detail::split_fields(line.substr(colon + 1));
        if (left.size() != 1 || right.size() != 1)
            throw ParseError(line_no, "expected \"x_1,...,x_k : c\"");

        std::vector<int> symbols;
        std::istringstream tuple_in(left[0]);
        std::string token;
        std::size_t field = 1;
        while (std::getline(tuple_in, token, ',')) {
            const long long value = detail::parse_integer(token, line_no, field++);
            if (value < 0)
                throw ParseError(line_no, field - 1, "symbols must be non-negative");
            symbols.push_back(static_cast<int>(value));
            max_symbol = std::max(max_symbol, static_cast<int>(value));
        }
        if (symbols.empty()) throw ParseError(line_no, "empty tuple");
        raw.emplace_back(line_no, std::move(symbols),
                         detail::parse_bigint(right[0], line_no, 0));
    }

    if (v_override && header_v && *v_override != *header_v)
        throw ParseError(1, "v = " + std::to_string(*v_override) +
                                " conflicts with the header v = " + std::to_string(*header_v));
    std::optional<int> k = header_k;
    for (const auto& [line_no, symbols, coeff] : raw) {
        if (!k) k = static_cast<int>(symbols.size());
        if (static_cast<int>(symbols.size()) != *k)
            throw ParseError(line_no, "expected " + std::to_string(*k) + " symbols, got " +
                                          std::to_string(symbols.size()));
    }
    if (!k) throw ParseError(1, "no frequency entries and no dimension header");

    const int v = v_override  ? *v_override
                  : header_v  ? *header_v
                              : std::max(max_symbol + 1, 2);
    if (v < 1 || max_symbol >= v)
        throw ParseError(1, "symbol " + std::to_string(max_symbol) +
                                " out of range for v = " + std::to_string(v));

    FrequencyVector vec(v, *k);
    for (const auto& [line_no, symbols, coeff] : raw) vec.add(Tuple(symbols, v), coeff);
    return vec;
}

inline void write_frequency(std::ostream& out, const FrequencyVector& vec) {
    out << "# v=" << vec.v() << " k=" << vec.k() << '\n';
    for (const auto& [tuple, coefficient] : vec.entries())
        out << tuple.str() << " : " << coefficient.str() << '\n';
}

/// Reads an orthogonal array. The optional header "OA t=<t> v=<v> k=<k>
/// lambda=<l>" fixes all parameters; without it, t, v and lambda must be
/// supplied (k is taken from the first row). A supplied parameter that
/// disagrees with the header is an error.
inline OrthogonalArray read_oa(std::istream& in, std::optional<unsigned> t = {},
                               std::optional<int> v = {}, std::optional<Int> lambda = {}) {
    const std::vector<std::string> lines = detail::read_lines(in);
    std::optional<unsigned> header_t;
    std::optional<int> header_v, header_k;
    std::optional<Int> header_lambda;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // line, fields

    bool seen_content = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const std::string& line = lines[i];
        if (detail::is_blank(line) || detail::is_comment(line)) continue;
        std::vector<std::string> fields = detail::split_fields(line);
        if (!seen_content && fields[0] == "OA") {
            for (std::size_t f = 1; f < fields.size(); ++f) {
                const std::string& field = fields[f];
                if (field.rfind("t=", 0) == 0)
                    header_t = static_cast<unsigned>(
                        detail::parse_integer(field.substr(2), line_no, f + 1));
                else if (field.rfind("v=", 0) == 0)
                    header_v = static_cast<int>(
                        detail::parse_integer(field.substr(2), line_no, f + 1));
                else if (field.rfind("k=", 0) == 0)
                    header_k = static_cast<int>(
                        detail::parse_integer(field.substr(2), line_no, f + 1));
                else if (field.rfind("lambda=", 0) == 0)
                    header_lambda = detail::parse_bigint(field.substr(7), line_no, f + 1);
                else
                    throw ParseError(line_no, f + 1, "unknown header field \"" + field + "\"");
            }
            if (!header_t || !header_v || !header_k || !header_lambda)
                throw ParseError(line_no, "header must carry t=, v=, k= and lambda=");
            seen_content = true;
            continue;
        }
        seen_content = true;
        rows.emplace_back(line_no, std::move(fields));
    }

    auto merge = [](const auto& supplied, const auto& header, const char* name, auto fallback) {
        if (supplied && header && *supplied != *header)
            throw ParseError(1, std::string("supplied ") + name +
                                    " conflicts with the file header");
        if (supplied) return *supplied;
        if (header) return *header;
        return fallback();
    };

    const unsigned final_t = merge(t, header_t, "t", []() -> unsigned {
        throw ParseError(1, "t is neither supplied nor in a header");
    });
    const int final_v = merge(v, header_v, "v", []() -> int {
        throw ParseError(1, "v is neither supplied nor in a header");
    });
    const Int final_lambda = merge(lambda, header_lambda, "lambda", []() -> Int {
        throw ParseError(1, "lambda is neither supplied nor in a header");
    });
    if (rows.empty() && !header_k) throw ParseError(1, "no rows and no k in a header");
    const int final_k = header_k ? *header_k : static_cast<int>(rows[0].second.size());

    std::vector<Tuple> tuples;
    tuples.reserve(rows.size());
    for (const auto& [line_no, fields] : rows) {
        if (static_cast<int>(fields.size()) != final_k)
            throw ParseError(line_no, "expected " + std::to_string(final_k) +
                                          " symbols, got " + std::to_string(fields.size()));
        std::vector<int> values;
        values.reserve(fields.size());
        for (std::size_t f = 0; f < fields.size(); ++f)
            values.push_back(detail::parse_symbol(fields[f], final_v, line_no, f + 1));
        tuples.emplace_back(values, final_v);
    }
    return OrthogonalArray(final_v, final_k, std::move(tuples), final_t, final_lambda);
}

inline void write_oa(std::ostream& out, const OrthogonalArray& a) {
    out << "OA t=" << a.t << " v=" << a.v << " k=" << a.k << " lambda=" << a.lambda.str()
        << '\n';
    for (const Tuple& row : a.rows) {
        const std::vector<int>& values = row.values();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i > 0) out << ' ';
            out << values[i];
        }
        out << '\n';
    }
}

/// Matrix Market coordinate form of a parsed file: 1-based entries as read.
struct CoordinateMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::array<long long, 3>> entries;  // {row, col, value}

    friend bool operator==(const CoordinateMatrix& a, const CoordinateMatrix& b) {
        return a.rows == b.rows && a.cols == b.cols && a.entries == b.entries;
    }
};

/// Writes the matrix in Matrix Market coordinate integer form, entries sorted
/// by row then column, all values 1.
inline void write_matrix_market(std::ostream& out, const InclusionMatrix& m) {
    out << "%%MatrixMarket matrix coordinate integer general\n";
    out << m.n_rows() << ' ' << m.n_cols() << ' ' << m.ones() << '\n';
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (std::size_t c : m.row(r)) out << r + 1 << ' ' << c + 1 << " 1\n";
}

inline CoordinateMatrix read_matrix_market(std::istream& in) {
    const std::vector<std::string> lines = detail::read_lines(in);
    std::size_t i = 0;
    if (i >= lines.size() || lines[i].rfind("%%MatrixMarket", 0) != 0)
        throw ParseError(1, "missing %%MatrixMarket banner");
    {
        const std::vector<std::string> banner = detail::split_fields(lines[i]);
        const std::vector<std::string> expected = {"%%MatrixMarket", "matrix", "coordinate",
                                                   "integer", "general"};
        if (banner != expected)
            throw ParseError(1, "unsupported Matrix Market type (expected coordinate "
                                "integer general)");
    }
    ++i;
    while (i < lines.size() &&
           (detail::is_blank(lines[i]) || (!lines[i].empty() && lines[i][0] == '%')))
        ++i;
    if (i >= lines.size()) throw ParseError(lines.size(), "missing dimensions line");

    const std::vector<std::string> dims = detail::split_fields(lines[i]);
    if (dims.size() != 3) throw ParseError(i + 1, "expected \"rows cols nonzeros\"");
    CoordinateMatrix m;
    const long long nr = detail::parse_integer(dims[0], i + 1, 1);
    const long long nc = detail::parse_integer(dims[1], i + 1, 2);
    const long long nnz = detail::parse_integer(dims[2], i + 1, 3);
    if (nr < 0 || nc < 0 || nnz < 0) throw ParseError(i + 1, "negative dimension");
    m.rows = static_cast<std::size_t>(nr);
    m.cols = static_cast<std::size_t>(nc);
    ++i;

    for (; i < lines.size(); ++i) {
        if (detail::is_blank(lines[i]) || lines[i][0] == '%') continue;
        const std::vector<std::string> fields = detail::split_fields(lines[i]);
        if (fields.size() != 3) throw ParseError(i + 1, "expected \"row col value\"");
        const long long r = detail::parse_integer(fields[0], i + 1, 1);
        const long long c = detail::parse_integer(fields[1], i + 1, 2);
        const long long value = detail::parse_integer(fields[2], i + 1, 3);
        if (r < 1 || r > nr) throw ParseError(i + 1, 1, "row index out of range");
        if (c < 1 || c > nc) throw ParseError(i + 1, 2, "column index out of range");
        m.entries.push_back({r, c, value});
    }
    if (m.entries.size() != static_cast<std::size_t>(nnz))
        throw ParseError(lines.size(), "entry count " + std::to_string(m.entries.size()) +
                                           " does not match declared " + std::to_string(nnz));
    return m;
}

/// Dense text rendering: one line per row, "<row key> | <cells>" with '1' for
/// an entry and '.' for 0; row keys padded to equal width.
inline void write_dense(std::ostream& out, const InclusionMatrix& m) {
    std::vector<std::string> labels;
    labels.reserve(m.n_rows());
    std::size_t width = 0;
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        labels.push_back(m.row_key(r).str());
        width = std::max(width, labels.back().size());
    }
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        out << labels[r] << std::string(width - labels[r].size(), ' ') << " | ";
        std::string cells(m.n_cols(), '.');
        for (std::size_t c : m.row(r)) cells[c] = '1';
        out << cells << '\n';
    }
}

}  // namespace oatrade
