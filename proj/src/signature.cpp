#include "tamtl/signature.hpp"

#include <algorithm>
#include <unordered_set>

namespace tamtl {

void signature::add_item(std::string name, std::vector<std::string> domain) {
    if (contains(name)) throw signature_error("duplicate name '" + name + "'");
    if (domain.empty()) throw signature_error("item '" + name + "' has an empty domain");
    std::unordered_set<std::string> seen;
    for (const auto& v : domain)
        if (!seen.insert(v).second) throw signature_error("item '" + name + "' repeats value '" + v + "'");
    _item_ix.emplace(name, _items.size());
    _items.push_back({std::move(name), std::move(domain)});
}

void signature::add_proposition(std::string name) {
    if (contains(name)) throw signature_error("duplicate name '" + name + "'");
    _prop_ix.emplace(name, _props.size());
    _props.push_back(std::move(name));
}

bool signature::contains(std::string_view name) const {
    std::string n(name);
    return _item_ix.count(n) || _prop_ix.count(n);
}

std::optional<std::size_t> signature::item_index(std::string_view name) const {
    auto it = _item_ix.find(std::string(name));
    if (it == _item_ix.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> signature::prop_index(std::string_view name) const {
    auto it = _prop_ix.find(std::string(name));
    if (it == _prop_ix.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> signature::value_index(std::size_t item, std::string_view value) const {
    const auto& d = _items.at(item).domain;
    auto it = std::find(d.begin(), d.end(), value);
    if (it == d.end()) return std::nullopt;
    return static_cast<std::size_t>(it - d.begin());
}

std::string signature::fresh_name(std::string_view stem) const {
    std::string s(stem);
    if (!contains(s)) return s;
    for (std::size_t i = 1;; ++i) {
        auto c = s + std::to_string(i);
        if (!contains(c)) return c;
    }
}

bool signature::_items_eq(const signature& o) const {
    if (_items.size() != o._items.size()) return false;
    for (std::size_t i = 0; i < _items.size(); ++i)
        if (_items[i].name != o._items[i].name || _items[i].domain != o._items[i].domain) return false;
    return true;
}

} // namespace tamtl
