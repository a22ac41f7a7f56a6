#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace tamtl {

using rational = boost::rational<std::int64_t>;

// Accepts "3", "-2", "3/4" and decimals such as "0.25".
[[nodiscard]] rational parse_rational(std::string_view text);
[[nodiscard]] std::string to_string(const rational& r);
[[nodiscard]] bool is_integer(const rational& r);

} // namespace tamtl
