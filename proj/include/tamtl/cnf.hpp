#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tamtl {

// Clauses over variables 1..num_vars, literals as signed integers.
struct cnf_problem {
    int num_vars{0};
    std::vector<std::vector<int>> clauses;
    std::map<int, std::string> comments; // variable id -> signal name

    int new_var() { return ++num_vars; }
    void add_clause(std::vector<int> c) { clauses.push_back(std::move(c)); }
    bool operator==(const cnf_problem&) const = default;
};

class dimacs_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "c <var> <name>" comment lines, then "p cnf" and zero-terminated clauses.
void write_dimacs(std::ostream& out, const cnf_problem& p);
[[nodiscard]] std::string to_dimacs(const cnf_problem& p);
[[nodiscard]] cnf_problem parse_dimacs(std::string_view text);

// assignment[v] for v in 1..num_vars; index 0 is unused.
using assignment = std::vector<bool>;

[[nodiscard]] bool verify_model(const cnf_problem& p, const assignment& a);

} // namespace tamtl
