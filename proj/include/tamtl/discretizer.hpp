#pragma once

#include <string>
#include <vector>

#include "tamtl/formula.hpp"
#include "tamtl/rational.hpp"

namespace tamtl {

enum class approx_kind { under, over };

// Integer-time approximations of a dense formula sampled every delta.
// The formula is put in NNF first; every finite bound must be a multiple of
// delta (granularity_error otherwise).
[[nodiscard]] discrete_formula under_approx(const dense_formula& f, const rational& delta);
[[nodiscard]] discrete_formula over_approx(const dense_formula& f, const rational& delta);
[[nodiscard]] discrete_formula approx(const dense_formula& f, const rational& delta, approx_kind kind);

// Temporal operators whose interval became empty: existential ones can never
// hold, universal ones always hold.
[[nodiscard]] std::vector<std::string> vacuity_warnings(const discrete_formula& f);

} // namespace tamtl
