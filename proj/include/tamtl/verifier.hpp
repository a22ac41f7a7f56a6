#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tamtl/bmc.hpp"
#include "tamtl/discretizer.hpp"
#include "tamtl/model.hpp"
#include "tamtl/solver.hpp"

namespace tamtl {

class verify_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct verify_options {
    std::optional<int> bound;         // overrides the model and the default
    std::optional<rational> delta;    // overrides the model
    solver_config solver{default_solver_config()};
    bool naive_guards{false};         // over-approximate guards without the rewritten form
    bool run_both{false};             // also run the falsification check after a proof
};

// Bound used when neither the options nor the model fix it:
// max(30, 2 * largest finite bound / delta + 2).
[[nodiscard]] int default_bound(const model_file& m, const rational& delta);

// Discrete formulas asserted on one side of the check.
struct system_side {
    approx_kind kind{approx_kind::under};
    signature sig;                       // model signature plus auxiliary propositions
    std::vector<discrete_formula> globally;
    std::vector<std::string> labels;     // one per formula
    std::vector<std::string> warnings;
};

// Automaton axioms of every instance plus the approximated system axioms
// (under: Omega and under-axioms, over: O and over-axioms).
[[nodiscard]] system_side build_side(const model_file& m, const rational& delta, approx_kind kind, bool naive_guards = false);

// The SAT question behind one check: check 1 asserts the under side with the
// negated over-approximated property somewhere, check 2 the over side with
// the negated under-approximated property.
struct check_problem {
    signature sig;
    encode_request request;
    discrete_formula property;   // the approximated property
    std::vector<discrete_formula> system;
    int bound{0};
    std::vector<std::string> warnings;
};

[[nodiscard]] check_problem property_check(const model_file& m, const named_formula& property, int check,
                                           const verify_options& opt = {});
// The under (check 1) or over (check 2) system alone.
[[nodiscard]] check_problem consistency_check(const model_file& m, int check, const verify_options& opt = {});

struct phase_times {
    double build{0};
    double cnf{0};
    double sat{0};
};

struct check_report {
    std::string name;
    bool ran{false};
    solve_result::status result{solve_result::status::unknown};
    std::string reason;
    cnf_size size;
    phase_times times;
};

struct verdict {
    enum class kind { verified, falsified, inconclusive } outcome{kind::inconclusive};
    std::string property;
    int bound{0};
    rational delta{1};
    std::string solver;
    std::optional<lasso_trace> counterexample;
    std::optional<std::int64_t> violation;   // first position where the property fails
    signature trace_sig;                     // signature of the counterexample
    std::vector<std::string> warnings;
    check_report prove;                      // under side, negated over-approximated property
    check_report refute;                     // over side, negated under-approximated property
};

[[nodiscard]] const char* to_string(verdict::kind k);

[[nodiscard]] verdict check_property(const model_file& m, const named_formula& property, const verify_options& opt = {});
[[nodiscard]] verdict check_property(const model_file& m, const std::string& property, const verify_options& opt = {});

struct consistency {
    enum class status { consistent, inconsistent, unknown } outcome{status::unknown};
    int bound{0};
    std::string diagnostic;
    std::optional<lasso_trace> witness; // a run of the over side
    signature trace_sig;
    check_report under;
    check_report over;
};

[[nodiscard]] const char* to_string(consistency::status s);
[[nodiscard]] consistency check_consistency(const model_file& m, const verify_options& opt = {});

[[nodiscard]] std::string format_report(const verdict& v);
[[nodiscard]] std::string to_json(const verdict& v, int indent = 2);
[[nodiscard]] std::string format_report(const consistency& c);
[[nodiscard]] std::string to_json(const consistency& c, int indent = 2);

} // namespace tamtl
