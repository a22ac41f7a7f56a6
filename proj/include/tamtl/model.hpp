#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tamtl/formula.hpp"
#include "tamtl/rational.hpp"
#include "tamtl/signature.hpp"
#include "tamtl/ta.hpp"

namespace tamtl {

struct named_formula {
    std::string name;
    dense_formula formula;
    int line{0};
};

// A parsed model file: parameters, signature, automata instances, system
// axioms and properties. Instances add their items and propositions to sig.
struct model_file {
    rational delta{1};
    std::optional<int> bound;
    std::map<std::string, rational> constants;
    signature sig;
    std::vector<std::shared_ptr<const timed_automaton>> automata;
    std::vector<instance_binding> instances;
    std::vector<named_formula> axioms;
    std::vector<named_formula> properties;

    [[nodiscard]] const named_formula* property(std::string_view name) const;
};

// Errors are parse_error with line and column.
[[nodiscard]] model_file parse_model(std::string_view text);
[[nodiscard]] model_file load_model(const std::filesystem::path& path);

} // namespace tamtl
