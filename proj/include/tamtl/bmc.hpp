#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tamtl/cnf.hpp"
#include "tamtl/formula.hpp"
#include "tamtl/signature.hpp"
#include "tamtl/trace.hpp"

namespace tamtl {

class encode_error : public std::runtime_error {
public:
    enum class kind { bound_too_small, contradiction, bad_bound, unknown_symbol };
    encode_error(kind k, const std::string& what) : std::runtime_error(what), _kind(k) {}
    [[nodiscard]] kind code() const { return _kind; }

private:
    kind _kind;
};

class decode_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Variables of the lasso frame: loop selector, one-hot item values and
// propositions at positions 0..k. Auxiliary variables (labels, extended
// positions) follow these and are only counted.
class var_map {
public:
    var_map() = default;
    var_map(const signature& sig, int k);

    [[nodiscard]] int k() const { return _k; }
    [[nodiscard]] const signature& sig() const { return _sig; }
    [[nodiscard]] int loop_var(int l) const { return _loop.at(static_cast<std::size_t>(l - 1)); }
    [[nodiscard]] int prop_var(std::size_t prop, int pos) const {
        return _props.at(static_cast<std::size_t>(pos)).at(prop);
    }
    [[nodiscard]] int value_var(std::size_t item, std::size_t value, int pos) const {
        return _values.at(static_cast<std::size_t>(pos)).at(item).at(value);
    }
    // Number of frame variables; they are numbered 1..frame_vars().
    [[nodiscard]] int frame_vars() const { return _frame_vars; }
    // Signal name and position of a frame variable, e.g. "st=idle", 3.
    [[nodiscard]] std::pair<std::string, int> signal_of(int var) const;

private:
    friend class encoder;
    signature _sig;
    int _k{0};
    int _frame_vars{0};
    std::vector<int> _loop;
    std::vector<std::vector<int>> _props;
    std::vector<std::vector<std::vector<int>>> _values;
};

struct encoding {
    cnf_problem cnf;
    var_map vars;
};

// Formulas asserted at every position of the word, and formulas each of
// which must hold at some position.
struct encode_request {
    std::vector<discrete_formula> globally;
    std::vector<discrete_formula> somewhere;
};

[[nodiscard]] encoding encode(const encode_request& req, const signature& sig, int k);
[[nodiscard]] encoding encode(const std::vector<discrete_formula>& formulas, const signature& sig, int k);

[[nodiscard]] lasso_trace decode(const assignment& model, const var_map& vars);

struct cnf_size {
    int vars{0};
    std::size_t clauses{0};
};
[[nodiscard]] cnf_size cnf_stats(const cnf_problem& p);

// Largest finite interval endpoint in absolute value, 0 if none.
[[nodiscard]] std::int64_t largest_finite_bound(const discrete_formula& f);

} // namespace tamtl
