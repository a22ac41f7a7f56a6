#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "tamtl/formula.hpp"
#include "tamtl/rational.hpp"
#include "tamtl/signature.hpp"

namespace tamtl {

class parse_error : public std::runtime_error {
public:
    parse_error(int line, int col, const std::string& msg)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), _line(line), _col(col),
          _msg(msg) {}
    [[nodiscard]] int line() const { return _line; }
    [[nodiscard]] int col() const { return _col; }
    [[nodiscard]] const std::string& message() const { return _msg; }

private:
    int _line;
    int _col;
    std::string _msg;
};

struct formula_env {
    // Named constants usable in interval bounds, e.g. ev(0, T1 + delta){p}.
    const std::map<std::string, rational>* constants{nullptr};
    std::optional<rational> delta;
    // Position of the first character, for error messages.
    int line{1};
    int col{1};
};

// Identifiers are resolved against sig: "x = v" needs item x with value v,
// a bare name needs a proposition.
[[nodiscard]] dense_formula parse_formula(std::string_view text, const signature& sig, const formula_env& env = {});
[[nodiscard]] discrete_formula parse_discrete_formula(std::string_view text, const signature& sig,
                                                      const formula_env& env = {});

// Builds the signature from the names the formula uses.
[[nodiscard]] std::pair<dense_formula, signature> parse_formula_free(std::string_view text,
                                                                     const formula_env& env = {});

// Arithmetic over numbers, constants and delta.
[[nodiscard]] rational parse_rational_expr(std::string_view text, const formula_env& env = {});

} // namespace tamtl
