#include "tamtl/interval.hpp"

namespace tamtl {

dense_interval dense_interval::make(rational lo, bool lo_open, std::optional<rational> hi, bool hi_open) {
    if (!hi) hi_open = true;
    if (hi && *hi < lo) throw interval_error("interval with lower bound above upper bound");
    return dense_interval{lo, hi, lo_open, hi_open};
}

bool dense_interval::contains(const rational& d) const {
    if (lo_open ? d <= lo : d < lo) return false;
    if (!hi) return true;
    return hi_open ? d < *hi : d <= *hi;
}

std::string to_string(const dense_interval& i) {
    std::string s = i.lo_open ? "(" : "[";
    s += to_string(i.lo);
    s += ",";
    s += i.hi ? to_string(*i.hi) : "inf";
    s += i.hi_open ? ")" : "]";
    return s;
}

std::string to_string(const discrete_interval& i) {
    std::string s = "[" + std::to_string(i.lo) + ",";
    if (i.hi) return s + std::to_string(*i.hi) + "]";
    return s + "inf)";
}

dense_interval scale(const dense_interval& i, const rational& factor) {
    if (factor <= rational(0)) throw interval_error("interval scale factor must be positive");
    std::optional<rational> hi;
    if (i.hi) hi = *i.hi * factor;
    return dense_interval::make(i.lo * factor, i.lo_open, hi, i.hi_open);
}

discrete_interval normalize_closed(std::int64_t lo, bool lo_open, std::optional<std::int64_t> hi, bool hi_open) {
    if (lo_open) ++lo;
    if (hi && hi_open) --*hi;
    return {lo, hi};
}

} // namespace tamtl
