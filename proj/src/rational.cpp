#include "tamtl/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace tamtl {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    return v;
}

} // namespace

rational parse_rational(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    bool neg = false;
    std::string_view body = text;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        neg = body.front() == '-';
        body.remove_prefix(1);
    }
    rational r;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto den = parse_int(body.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
        r = rational(parse_int(body.substr(0, slash), text), den);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto ip = body.substr(0, dot);
        auto fp = body.substr(dot + 1);
        if (fp.size() > 15) throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        std::int64_t whole = ip.empty() ? 0 : parse_int(ip, text);
        std::int64_t frac = fp.empty() ? 0 : parse_int(fp, text);
        r = rational(whole) + rational(frac, scale);
    } else {
        r = rational(parse_int(body, text));
    }
    return neg ? -r : r;
}

std::string to_string(const rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

bool is_integer(const rational& r) { return r.denominator() == 1; }

} // namespace tamtl
