#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tamtl/formula.hpp"
#include "tamtl/rational.hpp"
#include "tamtl/signature.hpp"

namespace tamtl {

class granularity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Negation normal form: implications and equivalences removed, negations
// only on propositions and item equalities. Sugar nodes are kept (dense) or
// expanded where their negation has no sugar form (discrete).
[[nodiscard]] dense_formula nnf(const dense_formula& f);
[[nodiscard]] discrete_formula nnf(const discrete_formula& f);
[[nodiscard]] dense_formula negate_nnf(const dense_formula& f);
[[nodiscard]] discrete_formula negate_nnf(const discrete_formula& f);

// Derived operators rewritten into until/since/release/trigger, in NNF.
// delta is the sampling period, used by becomesO.
[[nodiscard]] dense_formula expand_derived(const dense_formula& f, const rational& delta);

// Discrete sugar (nowon/uptonow/becomes/becomesO) rewritten with the integer
// definitions; ev/alw/ev_p/alw_p and at0 are kept.
[[nodiscard]] discrete_formula expand_sugar(const discrete_formula& f);

struct aux_definition {
    std::string name;
    dense_formula definition;

    // name <-> definition
    [[nodiscard]] dense_formula as_iff() const;
    // (!name || definition) && (name || nnf(!definition))
    [[nodiscard]] dense_formula as_constraint() const;
};

struct flat_formula {
    dense_formula formula;
    std::vector<aux_definition> aux;
};

// NNF, then every non-propositional argument of a temporal operator is
// replaced by a fresh proposition whose definition is returned alongside.
// Fresh names avoid every name in sig.
[[nodiscard]] flat_formula flatten(const dense_formula& f, const signature& sig);

// All finite, nonzero interval endpoints.
[[nodiscard]] std::vector<rational> finite_bounds(const dense_formula& f);
[[nodiscard]] bool granularity_ok(const dense_formula& f, const rational& delta);
void require_granularity(const dense_formula& f, const rational& delta);

// Canonical form of an integer-time formula: constant folding, empty
// intervals folded, until/release with constant first argument turned into
// ev/alw, future singleton alw into ev, b || ev[a,n]{b} merged when a <= 1,
// and discrete sugar expanded.
[[nodiscard]] discrete_formula simplify(const discrete_formula& f);

} // namespace tamtl
