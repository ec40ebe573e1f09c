#pragma once

// Orthogonal arrays and two independent verifiers. An OA_t(v,k,lambda) is a
// collection of k-tuples over v symbols in which every t-tuple placed on every
// t-subset of positions occurs in exactly lambda rows. The direct verifier
// counts occurrences straight from that definition; the matrix verifier checks
// M_t(v,k) * F = lambda * 1 on the frequency vector F, which also accepts
// signed F (a signed orthogonal array). The two must agree on every
// non-negative input.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oatrade/core.hpp"
#include "oatrade/exact_linalg.hpp"
#include "oatrade/frequency.hpp"
#include "oatrade/inclusion_matrix.hpp"
#include "oatrade/tuples.hpp"

namespace oatrade {

/// Multiset of k-tuples over [0, v) with a claimed strength t and index
/// lambda. Duplicates are permitted; the claim is verified, never inferred.
struct OrthogonalArray {
    int v;
    int k;
    std::vector<Tuple> rows;
    unsigned t;
    Int lambda;

    OrthogonalArray(int v_, int k_, std::vector<Tuple> rows_, unsigned t_, Int lambda_)
        : v(v_), k(k_), rows(std::move(rows_)), t(t_), lambda(std::move(lambda_)) {
        if (v < 2) throw std::invalid_argument("OrthogonalArray: v must be >= 2");
        if (k < 1) throw std::invalid_argument("OrthogonalArray: k must be >= 1");
        if (t < 1 || static_cast<int>(t) > k)
            throw std::invalid_argument("OrthogonalArray: requires 1 <= t <= k");
        if (lambda < 1) throw std::invalid_argument("OrthogonalArray: lambda must be >= 1");
        for (const Tuple& row : rows)
            if (row.v() != v || row.k() != k)
                throw std::invalid_argument("OrthogonalArray: row " + row.str() +
                                            " does not match (v, k)");
    }
};

struct OAViolation {
    RowKey key;         // the placed t-tuple whose count is off
    std::size_t count;  // observed number of containing rows
};

struct OAReport {
    bool pass = true;
    std::optional<OAViolation> first_violation;
    // observed count -> number of placed t-tuples with that count; a genuine
    // OA has a single bucket at lambda, so lambda can be read off on failure
    std::map<std::size_t, std::size_t> histogram;
};

/// Definition-level verifier: counts, for every placed t-tuple (u, I), the
/// rows containing it, and compares each count with lambda. Placed t-tuples
/// are scanned in row-key order, so the first violation is deterministic.
inline OAReport verify_oa_direct(const OrthogonalArray& a) {
    OAReport report;
    const std::size_t n_keys = row_count(static_cast<int>(a.t), a.v, a.k);
    for (std::size_t r = 0; r < n_keys; ++r) {
        const RowKey key = RowKey::unrank(r, static_cast<int>(a.t), a.v, a.k);
        std::size_t count = 0;
        for (const Tuple& row : a.rows)
            if (contains(key, row)) ++count;
        ++report.histogram[count];
        if (Int(count) != a.lambda && !report.first_violation) {
            report.pass = false;
            report.first_violation = OAViolation{key, count};
        }
    }
    return report;
}

/// Frequency vector of the rows: F(x) = multiplicity of x. Entries are
/// non-negative and sum to the number of rows.
inline FrequencyVector oa_to_frequency(const OrthogonalArray& a) {
    FrequencyVector f(a.v, a.k);
    for (const Tuple& row : a.rows) f.add(row, Int(1));
    return f;
}

struct FrequencyCheck {
    bool satisfies = false;    // M_t(v,k) * F = lambda * 1 exactly
    bool nonnegative = false;  // all entries >= 0, i.e. a genuine OA
};

/// Matrix-equation verifier. Accepts signed frequency vectors: a negative
/// entry does not block the check, it only clears the nonnegative flag.
inline FrequencyCheck verify_frequency(const FrequencyVector& f, unsigned t, const Int& lambda,
                                       const BuildLimits& limits = {}) {
    const InclusionMatrix m =
        InclusionMatrix::build(static_cast<int>(t), f.v(), f.k(), limits);
    FrequencyCheck check;
    check.satisfies = true;
    for (const Int& value : multiply(m, f))
        if (value != lambda) {
            check.satisfies = false;
            break;
        }
    check.nonnegative = f.nonnegative();
    return check;
}

}  // namespace oatrade
