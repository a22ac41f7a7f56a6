#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tamtl/cnf.hpp"

namespace tamtl {

// An empty executable selects the embedded CDCL solver; "builtin:dpll" the
// small DPLL solver. Anything else is run as an external DIMACS solver with
// args followed by the problem file.
struct solver_config {
    std::string executable;
    std::vector<std::string> args;
    double timeout_seconds{600};
    std::string working_directory;

    [[nodiscard]] std::string identity() const;
};

// Configuration from the TAMTL_SOLVER environment variable when set.
[[nodiscard]] solver_config default_solver_config();

struct solve_result {
    enum class status { sat, unsat, unknown };
    status st{status::unknown};
    assignment model; // total over 1..n when sat
    std::string reason;

    [[nodiscard]] bool is_sat() const { return st == status::sat; }
    [[nodiscard]] bool is_unsat() const { return st == status::unsat; }
    [[nodiscard]] static solve_result unknown(std::string why) { return {status::unknown, {}, std::move(why)}; }
};

[[nodiscard]] const char* to_string(solve_result::status s);

// Every sat answer is checked with verify_model before it is returned.
[[nodiscard]] solve_result solve(const cnf_problem& p, const solver_config& cfg);

[[nodiscard]] solve_result solve_cdcl(const cnf_problem& p, double timeout_seconds);
[[nodiscard]] solve_result solve_dpll(const cnf_problem& p, double timeout_seconds);
[[nodiscard]] solve_result solve_external(const cnf_problem& p, const solver_config& cfg);

// Reads "s ..." and "v ..." lines; exit codes 10 and 20 count as a status
// line when none is printed. Missing values default to false.
[[nodiscard]] solve_result parse_solver_output(const std::string& out, int exit_code, int num_vars);

// Competition-style output for a result.
[[nodiscard]] std::string format_solver_output(const solve_result& r);

} // namespace tamtl
