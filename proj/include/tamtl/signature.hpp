#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tamtl {

class signature_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct item_decl {
    std::string name;
    std::vector<std::string> domain;
};

// Items (finite-domain variables) and atomic propositions; names are unique.
class signature {
public:
    void add_item(std::string name, std::vector<std::string> domain);
    void add_proposition(std::string name);

    [[nodiscard]] bool contains(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> item_index(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> prop_index(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> value_index(std::size_t item, std::string_view value) const;

    [[nodiscard]] const std::vector<item_decl>& items() const { return _items; }
    [[nodiscard]] const std::vector<std::string>& propositions() const { return _props; }

    // First name of the form stem, stem1, stem2, ... not yet used.
    [[nodiscard]] std::string fresh_name(std::string_view stem) const;

    bool operator==(const signature& o) const { return _items_eq(o) && _props == o._props; }

private:
    [[nodiscard]] bool _items_eq(const signature& o) const;

    std::vector<item_decl> _items;
    std::vector<std::string> _props;
    std::unordered_map<std::string, std::size_t> _item_ix;
    std::unordered_map<std::string, std::size_t> _prop_ix;
};

} // namespace tamtl
