#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tamtl/rational.hpp"

namespace tamtl {

class interval_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Interval over the reals. A missing upper bound means +inf (always open).
struct dense_interval {
    rational lo{0};
    std::optional<rational> hi;
    bool lo_open{true};
    bool hi_open{true};

    [[nodiscard]] static dense_interval make(rational lo, bool lo_open, std::optional<rational> hi, bool hi_open);
    [[nodiscard]] static dense_interval unbounded() { return {}; } // (0, inf)
    [[nodiscard]] static dense_interval point(rational d) { return make(d, false, d, false); }

    [[nodiscard]] bool empty() const { return hi && lo == *hi && (lo_open || hi_open); }
    [[nodiscard]] bool contains(const rational& d) const;
    bool operator==(const dense_interval&) const = default;
};

// Closed integer interval [lo, hi]; empty when lo > hi.
struct discrete_interval {
    std::int64_t lo{0};
    std::optional<std::int64_t> hi;

    [[nodiscard]] static discrete_interval closed(std::int64_t lo, std::optional<std::int64_t> hi) { return {lo, hi}; }
    [[nodiscard]] bool empty() const { return hi && lo > *hi; }
    [[nodiscard]] bool bounded() const { return hi.has_value(); }
    [[nodiscard]] bool contains(std::int64_t d) const { return d >= lo && (!hi || d <= *hi); }
    bool operator==(const discrete_interval&) const = default;
};

[[nodiscard]] std::string to_string(const dense_interval& i);
[[nodiscard]] std::string to_string(const discrete_interval& i);

// Multiplies both endpoints by a positive factor.
[[nodiscard]] dense_interval scale(const dense_interval& i, const rational& factor);

// Integer endpoints with brackets, turned into a closed integer interval:
// an open lower end a becomes a+1, an open upper end b becomes b-1.
[[nodiscard]] discrete_interval normalize_closed(std::int64_t lo, bool lo_open, std::optional<std::int64_t> hi, bool hi_open);

} // namespace tamtl
