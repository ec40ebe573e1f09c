// core.hpp -- shared scalar type, size guards and small combinatorial helpers
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace oatrade {

/// Exact arbitrary-precision integer; all matrix arithmetic is carried out in
/// this type so no intermediate result can silently overflow.
using Int = boost::multiprecision::cpp_int;

/// Thrown when a requested construction would exceed a configured size cap.
class size_guard_error : public std::length_error {
public:
    explicit size_guard_error(const std::string& what) : std::length_error(what) {}
};

/// v^e in 64-bit arithmetic; throws std::overflow_error instead of wrapping.
inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && result > UINT64_MAX / base)
            throw std::overflow_error("checked_pow: " + std::to_string(base) + "^" +
                                      std::to_string(exp) + " exceeds 64 bits");
        result *= base;
    }
    return result;
}

/// C(n, r) in 64-bit arithmetic; throws std::overflow_error on overflow.
inline std::uint64_t binomial(unsigned n, unsigned r) {
    if (r > n) return 0;
    if (r > n - r) r = n - r;
    std::uint64_t result = 1;
    for (unsigned i = 1; i <= r; ++i) {
        // result * (n - r + i) always divides by i exactly at this point
        std::uint64_t factor = n - r + i;
        if (result > UINT64_MAX / factor)
            throw std::overflow_error("binomial(" + std::to_string(n) + "," +
                                      std::to_string(r) + ") exceeds 64 bits");
        result = result * factor / i;
    }
    return result;
}

} // namespace oatrade
