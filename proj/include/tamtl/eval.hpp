#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tamtl/formula.hpp"
#include "tamtl/signature.hpp"
#include "tamtl/trace.hpp"

namespace tamtl {

// Integer-time evaluator over lasso traces. The formula is compiled once and
// can be evaluated on many traces over the same signature.
class evaluator {
public:
    evaluator(const signature& sig, const discrete_formula& f);

    [[nodiscard]] bool at(const lasso_trace& t, std::int64_t pos) const;
    // Holds at every position of the infinite word.
    [[nodiscard]] bool global(const lasso_trace& t) const;
    [[nodiscard]] std::optional<std::int64_t> first_violation(const lasso_trace& t) const;
    // Positions 0..horizon(t) determine the value at every position.
    [[nodiscard]] std::int64_t horizon(const lasso_trace& t) const;

    struct node {
        op kind{op::top};
        std::uint32_t a{0}, b{0};      // child indices; item index / value index for item_eq
        std::int64_t lo{0};
        std::optional<std::int64_t> hi;
        std::vector<std::uint32_t> kids; // and/or
    };

private:
    std::uint32_t compile(const signature& sig, const discrete_formula& f);

    std::vector<node> _nodes;
    std::uint32_t _root{0};
    std::int64_t _past_reach{0};
};

[[nodiscard]] bool eval_at(const lasso_trace& t, const signature& sig, const discrete_formula& f, std::int64_t pos);
[[nodiscard]] bool eval_global(const lasso_trace& t, const signature& sig, const discrete_formula& f);

} // namespace tamtl
