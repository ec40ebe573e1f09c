#pragma once

// Command-line front door: subcommands matrix, rank, basis, verify (oa |
// trade | freq), decompose, reduce. All verification-style commands exit 0
// only when every check passes; guard violations, parse failures and usage
// mistakes exit 2; a failed verification exits 1. Output is deterministic for
// a fixed invocation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "oatrade/core.hpp"
#include "oatrade/exact_linalg.hpp"
#include "oatrade/frequency.hpp"
#include "oatrade/inclusion_matrix.hpp"
#include "oatrade/io.hpp"
#include "oatrade/oa.hpp"
#include "oatrade/trades.hpp"
#include "oatrade/tuples.hpp"

namespace oatrade {
namespace cli_detail {

struct Options {
    int t = -1;
    int v = -1;
    int k = -1;
    std::string lambda;
    std::string format;
    std::string in_path;
    std::string out_path;
    std::string tuple_text;
    std::string kind = "auto";
    std::string emit_dir;
    std::uint64_t max_ones = BuildLimits{}.max_ones;
    std::uint64_t screen_prime = 0;
};

inline BuildLimits build_limits(const Options& o) { return BuildLimits{o.max_ones}; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Writes through to a file when --out is set, else to the fallback stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
            stream_ = &file_;
        }
    }

    std::ostream& stream() { return *stream_; }
    bool to_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

inline std::string signed_term(const Int& coefficient, const std::string& label) {
    std::string text = coefficient < 0 ? "-" : "+";
    const Int magnitude = coefficient < 0 ? Int(-coefficient) : coefficient;
    if (magnitude != 1) text += magnitude.str() + "*";
    return text + label;
}

inline std::string join_csv(const std::vector<int>& values) {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out << ',';
        out << values[i];
    }
    return out.str();
}

inline Int parse_lambda(const std::string& text) {
    try {
        return Int(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("--lambda expects an integer, got \"" + text + "\"");
    }
}

inline int cmd_matrix(const Options& o, std::ostream& out, std::ostream& err) {
    const InclusionMatrix m = InclusionMatrix::build(o.t, o.v, o.k, build_limits(o));
    Sink sink(o.out_path, out);
    const std::string summary = "rows=" + std::to_string(m.n_rows()) +
                                " cols=" + std::to_string(m.n_cols()) +
                                " ones=" + std::to_string(m.ones());
    if (o.format == "mm") {
        write_matrix_market(sink.stream(), m);
    } else if (o.format == "records") {
        sink.stream() << "rows=" << m.n_rows() << "\ncols=" << m.n_cols()
                      << "\nones=" << m.ones() << '\n';
        for (std::size_t r = 0; r < m.n_rows(); ++r)
            for (std::size_t c : m.row(r)) sink.stream() << "one=" << r + 1 << ',' << c + 1 << '\n';
    } else {  // dense
        write_dense(sink.stream(), m);
    }
    // keep the payload clean on stdout: the summary goes to the other channel
    if (o.format != "records") (sink.to_file() ? out : err) << summary << '\n';
    return 0;
}

inline int cmd_rank(const Options& o, std::ostream& out, std::ostream& err) {
    const InclusionMatrix m = InclusionMatrix::build(o.t, o.v, o.k, build_limits(o));
    const std::size_t rank = exact_rank(m);
    const Int formula = closed_form_rank(o.t, o.v, o.k);
    const Int nullity = Int(m.n_cols()) - Int(rank);
    bool match = Int(rank) == formula;

    std::optional<std::size_t> screen;
    if (o.screen_prime != 0) {
        screen = rank_mod_p(m, o.screen_prime);
        if (*screen != rank) match = false;
    }

    Sink sink(o.out_path, out);
    std::ostream& os = sink.stream();
    if (o.format == "records") {
        os << "t=" << o.t << "\nv=" << o.v << "\nk=" << o.k << '\n';
        os << "rank=" << rank << "\nformula=" << formula.str() << "\nnullity=" << nullity.str()
           << '\n';
        if (screen) os << "screen=" << *screen << "\nprime=" << o.screen_prime << '\n';
        os << "match=" << (match ? "true" : "false") << '\n';
    } else {
        os << "rank=" << rank << " formula=" << formula.str() << " nullity=" << nullity.str()
           << ' ' << (match ? "MATCH" : "MISMATCH") << '\n';
        if (screen) os << "screen=" << *screen << " prime=" << o.screen_prime << '\n';
    }
    (void)err;
    return match ? 0 : 1;
}

inline int cmd_basis(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.t < 1) throw std::invalid_argument("basis requires --t >= 1");
    if (o.v < 2) throw std::invalid_argument("basis requires --v >= 2");
    const std::vector<FrequencyVector> basis = intercalate_basis(o.t, o.v);
    const InclusionMatrix m = InclusionMatrix::build(o.t, o.v, o.t + 1, build_limits(o));

    bool annihilated = true;
    for (const FrequencyVector& b : basis)
        for (const Int& value : multiply(m, b))
            if (value != 0) annihilated = false;

    IntMatrix stacked(basis.size(), m.n_cols(), Int(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const std::vector<Int> dense = basis[i].to_dense();
        for (std::size_t c = 0; c < dense.size(); ++c) stacked(i, c) = dense[c];
    }
    const std::size_t stacked_rank = eliminate_rank(std::move(stacked));
    const std::size_t nullity = m.n_cols() - exact_rank(m);
    const bool independent = stacked_rank == basis.size();
    const bool spans = stacked_rank == nullity;
    const bool pass = annihilated && independent && spans;

    // regenerate the index sequence for labels
    std::vector<int> index(o.t + 1, 1);
    Sink sink(o.out_path, out);
    std::ostream& os = sink.stream();
    for (const FrequencyVector& b : basis) {
        if (o.format == "records")
            os << "index=" << join_csv(index) << " entries=" << b.support_size() << '\n';
        else
            os << "B_(" << join_csv(index) << ") = " << to_polynomial(b) << '\n';
        for (std::size_t l = index.size(); l-- > 0;) {
            if (++index[l] < o.v) break;
            index[l] = 1;
        }
    }
    if (o.format == "records") {
        os << "count=" << basis.size() << "\nstacked_rank=" << stacked_rank
           << "\nnullity=" << nullity << '\n';
        os << "annihilated=" << (annihilated ? "true" : "false") << '\n';
        os << "independent=" << (independent ? "true" : "false") << '\n';
        os << "result=" << (pass ? "pass" : "fail") << '\n';
    } else {
        os << "vectors=" << basis.size() << " stacked_rank=" << stacked_rank
           << " nullity=" << nullity << '\n';
        os << "null space: " << (annihilated ? "PASS" : "FAIL") << '\n';
        os << "independent: " << (independent ? "PASS" : "FAIL") << '\n';
    }
    (void)err;
    return pass ? 0 : 1;
}

inline int cmd_verify_trade(const Options& o, std::ostream& out, std::ostream& err) {
    std::istringstream in(slurp(o.in_path));
    const LatinTrade trade = read_trade(in);
    const TradeReport report = verify_trade(trade);

    const FrequencyVector vec = trade_to_frequency(trade);
    const InclusionMatrix m =
        InclusionMatrix::build(2, trade.first.order(), 3, build_limits(o));
    const std::vector<Int> product = multiply(m, vec);
    bool in_null_space = true;
    std::string violated;
    for (std::size_t r = 0; r < product.size(); ++r)
        if (product[r] != 0) {
            in_null_space = false;
            violated = m.row_key(r).str() + " product=" + product[r].str();
            break;
        }
    const bool pass = report.all_pass() && in_null_space;

    Sink sink(o.out_path, out);
    std::ostream& os = sink.stream();
    auto line = [&](const char* text_label, const char* record_key,
                    const ConditionResult& c) {
        if (o.format == "records") {
            os << record_key << '=' << (c.pass ? "pass" : "fail") << '\n';
        } else {
            os << text_label << ": " << (c.pass ? "PASS" : "FAIL");
            if (!c.pass && !c.detail.empty()) os << " (" << c.detail << ')';
            os << '\n';
        }
    };
    line("condition 1 (same shape)", "shape", report.same_shape);
    line("condition 2 (disjoint)", "disjoint", report.disjoint);
    line("condition 3 (row balance)", "row_balance", report.row_balanced);
    line("condition 4 (column balance)", "col_balance", report.col_balanced);
    os << "volume=" << report.volume << '\n';
    if (o.format == "records") {
        os << "nullspace=" << (in_null_space ? "pass" : "fail") << '\n';
        os << "result=" << (pass ? "pass" : "fail") << '\n';
    } else {
        os << "null space (t=2): " << (in_null_space ? "PASS" : "FAIL");
        if (!in_null_space) os << " (row " << violated << ')';
        os << '\n';
    }
    (void)err;
    return pass ? 0 : 1;
}

inline int cmd_verify_oa(const Options& o, std::ostream& out, std::ostream& err) {
    std::istringstream in(slurp(o.in_path));
    std::optional<unsigned> t;
    std::optional<int> v;
    std::optional<Int> lambda;
    if (o.t >= 0) t = static_cast<unsigned>(o.t);
    if (o.v >= 0) v = o.v;
    if (!o.lambda.empty()) lambda = parse_lambda(o.lambda);
    const OrthogonalArray a = read_oa(in, t, v, lambda);

    const OAReport direct = verify_oa_direct(a);
    const FrequencyCheck matrix =
        verify_frequency(oa_to_frequency(a), a.t, a.lambda, build_limits(o));
    const bool pass = direct.pass && matrix.satisfies;

    Sink sink(o.out_path, out);
    std::ostream& os = sink.stream();
    if (o.format == "records") {
        os << "rows=" << a.rows.size() << '\n';
        os << "direct=" << (direct.pass ? "pass" : "fail") << '\n';
        os << "matrix=" << (matrix.satisfies ? "pass" : "fail") << '\n';
        os << "nonnegative=" << (matrix.nonnegative ? "true" : "false") << '\n';
        for (const auto& [count, keys] : direct.histogram)
            os << "count_" << count << '=' << keys << '\n';
        if (direct.first_violation)
            os << "first_violation=" << direct.first_violation->key.str()
               << " count=" << direct.first_violation->count << '\n';
        os << "result=" << (pass ? "pass" : "fail") << '\n';
    } else {
        os << "rows=" << a.rows.size() << '\n';
        os << "direct: " << (direct.pass ? "PASS" : "FAIL") << '\n';
        if (direct.first_violation)
            os << "first violation: " << direct.first_violation->key.str()
               << " count=" << direct.first_violation->count << '\n';
        if (!direct.pass) {
            os << "counts:";
            for (const auto& [count, keys] : direct.histogram)
                os << ' ' << count << "->" << keys;
            os << '\n';
        }
        os << "matrix: " << (matrix.satisfies ? "PASS" : "FAIL") << '\n';
        os << "nonnegative: " << (matrix.nonnegative ? "yes" : "no") << '\n';
    }
    (void)err;
    return pass ? 0 : 1;
}

inline int cmd_verify_freq(const Options& o, std::ostream& out, std::ostream& err) {
    std::istringstream in(slurp(o.in_path));
    std::optional<int> v;
    if (o.v >= 0) v = o.v;
    const FrequencyVector vec = read_frequency(in, v);
    if (o.t < 0) throw std::invalid_argument("verify freq requires --t");

    Sink sink(o.out_path, out);
    std::ostream& os = sink.stream();
    const bool records = o.format == "records";

    if (!o.lambda.empty()) {
        // signed orthogonal array check: M_t * F = lambda * 1
        const Int lambda = parse_lambda(o.lambda);
        const FrequencyCheck check =
            verify_frequency(vec, static_cast<unsigned>(o.t), lambda, build_limits(o));
        if (records) {
            os << "matrix=" << (check.satisfies ? "pass" : "fail") << '\n';
            os << "nonnegative=" << (check.nonnegative ? "true" : "false") << '\n';
            os << "result=" << (check.satisfies ? "pass" : "fail") << '\n';
        } else {
            os << "matrix: " << (check.satisfies ? "PASS" : "FAIL") << '\n';
            os << "nonnegative: " << (check.nonnegative ? "yes" : "no") << '\n';
        }
        (void)err;
        return check.satisfies ? 0 : 1;
    }

    // no lambda: trade check, M_t * F = 0
    const InclusionMatrix m = InclusionMatrix::build(o.t, vec.v(), vec.k(), build_limits(o));
    const std::vector<Int> product = multiply(m, vec);
    bool in_null_space = true;
    std::string violated;
    for (std::size_t r = 0; r < product.size(); ++r)
        if (product[r] != 0) {
            in_null_space = false;
            violated = m.row_key(r).str() + " product=" + product[r].str();
            break;
        }
    if (records) {
        os << "nullspace=" << (in_null_space ? "pass" : "fail") << '\n';
        os << "result=" << (in_null_space ? "pass" : "fail") << '\n';
    } else {
        os << "null space (t=" << o.t << "): " << (in_null_space ? "PASS" : "FAIL");
        if (!in_null_space) os << " (row " << violated << ')';
        os << '\n';
    }
    (void)err;
    return in_null_space ? 0 : 1;
}

/// A frequency file has a ':' on its first content line; a trade file does not.
inline bool looks_like_frequency(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (detail::is_blank(line) || detail::is_comment(line)) continue;
        return line.find(':') != std::string::npos;
    }
    return false;
}

inline int cmd_decompose(const Options& o, std::ostream& out, std::ostream& err) {
    const std::string text = slurp(o.in_path);
    std::string kind = o.kind;
    if (kind == "auto") kind = looks_like_frequency(text) ? "freq" : "trade";

    const int t = o.t < 0 ? 2 : o.t;
    std::optional<FrequencyVector> vec;
    std::istringstream in(text);
    if (kind == "trade") {
        if (t != 2)
            throw std::invalid_argument("a Latin trade decomposes with t = 2, got t = " +
                                        std::to_string(t));
        vec = trade_to_frequency(read_trade(in));
    } else {
        std::optional<int> v;
        if (o.v >= 0) v = o.v;
        vec = read_frequency(in, v);
    }

    const SignedCombination comb = decompose(*vec, static_cast<unsigned>(t), build_limits(o));

    Sink sink(o.out_path, out);
    std::ostream& os = sink.stream();
    const bool records = o.format == "records";
    for (const auto& term : comb.terms()) {
        if (records)
            os << "term=" << (term.coefficient < 0 ? "" : "+") << term.coefficient.str() << ':'
               << join_csv(term.index) << '\n';
        else
            os << signed_term(term.coefficient, "B_(" + join_csv(term.index) + ")") << '\n';
    }
    if (records) {
        os << "terms=" << comb.terms().size() << '\n';
        os << "reconstruction=exact\n";
    } else {
        if (comb.empty())
            os << "0 terms\n";
        else
            os << "terms=" << comb.terms().size() << '\n';
        os << "reconstruction: EXACT\n";
    }

    if (!o.emit_dir.empty()) {
        if (t != 2)
            throw std::invalid_argument("--emit-dir writes Latin trades and requires t = 2");
        std::filesystem::create_directories(o.emit_dir);
        for (const auto& term : comb.terms()) {
            const std::vector<int>& idx = term.index;
            const LatinTrade trade = intercalate_trade(idx[0], idx[1], idx[2], vec->v());
            std::string name = "B";
            for (int value : idx) name += "_" + std::to_string(value);
            std::ofstream file(std::filesystem::path(o.emit_dir) / (name + ".txt"));
            if (!file) throw std::runtime_error("cannot write into " + o.emit_dir);
            write_trade(file, trade);
        }
    }
    (void)err;
    return 0;
}

inline int cmd_reduce(const Options& o, std::ostream& out, std::ostream& err) {
    const Tuple x = Tuple::parse(o.tuple_text, o.v);
    if (x.k() != o.k)
        throw std::invalid_argument("--tuple has " + std::to_string(x.k()) +
                                    " symbols but --k is " + std::to_string(o.k));
    const ColumnCombination comb = reduce_column(x, o.t);

    const InclusionMatrix m = InclusionMatrix::build(o.t, o.v, o.k, build_limits(o));
    const std::vector<Int> lhs = evaluate(m, comb);
    bool exact = true;
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        if (lhs[r] != Int(m.entry(r, x.rank()) ? 1 : 0)) {
            exact = false;
            break;
        }

    Sink sink(o.out_path, out);
    std::ostream& os = sink.stream();
    const bool records = o.format == "records";
    for (const auto& term : comb.terms()) {
        if (records)
            os << "term=" << (term.coeff < 0 ? "" : "+") << term.coeff.str() << ':'
               << term.column.str() << '\n';
        else
            os << signed_term(term.coeff, "C_(" + term.column.str() + ")") << '\n';
    }
    if (x.weight() <= o.t)
        os << (records ? "identity=true\n" : "1 term (identity)\n");
    else
        os << "terms=" << comb.size() << '\n';
    if (records)
        os << "verified=" << (exact ? "exact" : "mismatch") << '\n';
    else
        os << "verified: " << (exact ? "EXACT" : "MISMATCH") << '\n';
    (void)err;
    return exact ? 0 : 1;
}

}  // namespace cli_detail

/// Parses and runs one invocation; returns the process exit status.
/// 0 = success / all checks passed, 1 = a verification failed, 2 = usage,
/// parse or size-guard error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;
    Options o;
    int status = 0;

    CLI::App app{"Inclusion matrices of orthogonal arrays, exact ranks, Latin trades, "
                 "and intercalate decompositions"};
    app.require_subcommand(1);

    auto add_shape = [&](CLI::App* cmd, bool need_k) {
        cmd->add_option("--t", o.t, "strength / row tuple size")->required();
        cmd->add_option("--v", o.v, "alphabet size")->required();
        if (need_k) cmd->add_option("--k", o.k, "tuple length")->required();
        cmd->add_option("--max-ones", o.max_ones, "size guard on matrix entries");
    };
    // the default format is the first member; o.format stays empty unless set
    auto add_out = [&](CLI::App* cmd, const std::vector<std::string>& formats) {
        std::string help = "output format: ";
        for (std::size_t i = 0; i < formats.size(); ++i)
            help += (i ? "|" : "") + formats[i];
        cmd->add_option("--format", o.format, help)->check(CLI::IsMember(formats));
        cmd->add_option("--out", o.out_path, "write output to this file instead of stdout");
    };

    CLI::App* matrix = app.add_subcommand("matrix", "build and export M_t(v,k)");
    add_shape(matrix, true);
    matrix->callback([&] { status = cmd_matrix(o, out, err); });

    CLI::App* rank = app.add_subcommand(
        "rank", "exact rank of M_t(v,k) against the closed-form value");
    add_shape(rank, true);
    rank->add_option("--screen-prime", o.screen_prime,
                     "also compute the rank over GF(p) and require agreement");
    rank->callback([&] { status = cmd_rank(o, out, err); });

    CLI::App* basis = app.add_subcommand(
        "basis", "intercalate basis of the null space of M_t(v,t+1)");
    add_shape(basis, false);
    basis->callback([&] { status = cmd_basis(o, out, err); });

    CLI::App* verify = app.add_subcommand("verify", "verify an input file");
    verify->require_subcommand(1);

    CLI::App* verify_oa = verify->add_subcommand(
        "oa", "orthogonal array: direct counting and the matrix equation");
    verify_oa->add_option("--in", o.in_path, "orthogonal array file")->required();
    verify_oa->add_option("--t", o.t, "strength (if the file has no header)");
    verify_oa->add_option("--v", o.v, "alphabet size (if the file has no header)");
    verify_oa->add_option("--lambda", o.lambda, "index (if the file has no header)");
    verify_oa->add_option("--max-ones", o.max_ones, "size guard on matrix entries");
    verify_oa->callback([&] { status = cmd_verify_oa(o, out, err); });

    CLI::App* verify_trade = verify->add_subcommand(
        "trade", "Latin trade: the four balance conditions and the null-space check");
    verify_trade->add_option("--in", o.in_path, "trade file")->required();
    verify_trade->add_option("--max-ones", o.max_ones, "size guard on matrix entries");
    verify_trade->callback([&] { status = cmd_verify_trade(o, out, err); });

    CLI::App* verify_freq = verify->add_subcommand(
        "freq", "frequency vector: null space, or M F = lambda 1 when --lambda is given");
    verify_freq->add_option("--in", o.in_path, "frequency vector file")->required();
    verify_freq->add_option("--t", o.t, "strength")->required();
    verify_freq->add_option("--v", o.v, "alphabet size override");
    verify_freq->add_option("--lambda", o.lambda, "check M F = lambda 1 instead of M F = 0");
    verify_freq->add_option("--max-ones", o.max_ones, "size guard on matrix entries");
    verify_freq->callback([&] { status = cmd_verify_freq(o, out, err); });

    for (CLI::App* cmd : {verify_oa, verify_trade, verify_freq})
        add_out(cmd, {"text", "records"});
    add_out(matrix, {"dense", "mm", "records"});
    add_out(rank, {"text", "records"});
    add_out(basis, {"text", "records"});

    CLI::App* decompose_cmd = app.add_subcommand(
        "decompose", "write a null-space vector as a signed sum of basis intercalates");
    decompose_cmd->add_option("--in", o.in_path, "trade or frequency vector file")->required();
    decompose_cmd->add_option("--t", o.t, "strength (default 2; requires k = t+1)");
    decompose_cmd->add_option("--v", o.v, "alphabet size override for frequency input");
    decompose_cmd->add_option("--kind", o.kind, "input kind: auto|trade|freq")
        ->check(CLI::IsMember({"auto", "trade", "freq"}));
    decompose_cmd->add_option("--emit-dir", o.emit_dir,
                              "also write each basis intercalate as a trade file here");
    decompose_cmd->add_option("--max-ones", o.max_ones, "size guard on matrix entries");
    add_out(decompose_cmd, {"text", "records"});
    decompose_cmd->callback([&] { status = cmd_decompose(o, out, err); });

    CLI::App* reduce = app.add_subcommand(
        "reduce", "rewrite a column over weight <= t columns via the shadow identity");
    reduce->add_option("--tuple", o.tuple_text, "column tuple, e.g. 1,0,2")->required();
    add_shape(reduce, true);
    add_out(reduce, {"text", "records"});
    reduce->callback([&] { status = cmd_reduce(o, out, err); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("oatrade");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const NullSpaceViolation& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return status;
}

}  // namespace oatrade
