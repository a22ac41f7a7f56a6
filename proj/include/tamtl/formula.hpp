#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "tamtl/interval.hpp"

namespace tamtl {

enum class op : std::uint8_t {
    top,
    bottom,
    prop,
    item_eq,
    not_,
    and_,
    or_,
    implies,
    iff,
    until,
    since,
    release,
    trigger,
    // MTL+ variants (discrete only): until*, since* quantify the first
    // argument over [0,d); release*, trigger* over [0,d].
    until_star,
    since_star,
    release_star,
    trigger_star,
    eventually,
    always,
    eventually_past,
    always_past,
    nowon_strict,
    uptonow_strict,
    nowon,
    uptonow,
    becomes,
    becomes_now,
    at_zero,
};

[[nodiscard]] constexpr bool is_leaf(op k) { return k <= op::item_eq; }
[[nodiscard]] constexpr bool is_boolean(op k) { return k >= op::not_ && k <= op::iff; }
[[nodiscard]] constexpr bool is_binary_temporal(op k) { return k >= op::until && k <= op::trigger_star; }
[[nodiscard]] constexpr bool is_star(op k) { return k >= op::until_star && k <= op::trigger_star; }
[[nodiscard]] constexpr bool is_unary_bounded(op k) { return k >= op::eventually && k <= op::always_past; }
[[nodiscard]] constexpr bool has_interval(op k) { return is_binary_temporal(k) || is_unary_bounded(k); }
[[nodiscard]] constexpr bool is_strict_sugar(op k) { return k >= op::nowon_strict && k <= op::uptonow; }
[[nodiscard]] constexpr bool is_temporal(op k) { return k >= op::until && k <= op::becomes_now; }
[[nodiscard]] constexpr bool is_base_temporal(op k) { return is_binary_temporal(k); }

[[nodiscard]] constexpr bool is_past(op k) {
    switch (k) {
    case op::since: case op::trigger: case op::since_star: case op::trigger_star:
    case op::eventually_past: case op::always_past: case op::uptonow_strict: case op::uptonow:
        return true;
    default:
        return false;
    }
}

// Operators whose semantics is a witness search (as opposed to a universal check).
[[nodiscard]] constexpr bool is_existential(op k) {
    switch (k) {
    case op::until: case op::since: case op::until_star: case op::since_star:
    case op::eventually: case op::eventually_past:
        return true;
    default:
        return false;
    }
}

[[nodiscard]] std::string_view keyword(op k);

template <class I>
struct formula_node;

template <class I>
class basic_formula {
public:
    using interval_type = I;
    static constexpr bool dense = std::is_same_v<I, dense_interval>;

    basic_formula() : basic_formula(top()) {}

    [[nodiscard]] static basic_formula top() { return make(op::top, {}, {}, {}, {}); }
    [[nodiscard]] static basic_formula bottom() { return make(op::bottom, {}, {}, {}, {}); }
    [[nodiscard]] static basic_formula prop(std::string name) { return make(op::prop, std::move(name), {}, {}, {}); }
    [[nodiscard]] static basic_formula item_eq(std::string item, std::string value) {
        return make(op::item_eq, std::move(item), std::move(value), {}, {});
    }
    [[nodiscard]] static basic_formula item_ne(std::string item, std::string value) {
        return negation(item_eq(std::move(item), std::move(value)));
    }
    [[nodiscard]] static basic_formula negation(basic_formula f) { return make(op::not_, {}, {}, {}, {std::move(f)}); }
    [[nodiscard]] static basic_formula conj(std::vector<basic_formula> fs) {
        if (fs.empty()) return top();
        if (fs.size() == 1) return fs.front();
        return make(op::and_, {}, {}, {}, std::move(fs));
    }
    [[nodiscard]] static basic_formula disj(std::vector<basic_formula> fs) {
        if (fs.empty()) return bottom();
        if (fs.size() == 1) return fs.front();
        return make(op::or_, {}, {}, {}, std::move(fs));
    }
    [[nodiscard]] static basic_formula conj(basic_formula a, basic_formula b) { return conj({std::move(a), std::move(b)}); }
    [[nodiscard]] static basic_formula disj(basic_formula a, basic_formula b) { return disj({std::move(a), std::move(b)}); }
    [[nodiscard]] static basic_formula implies(basic_formula a, basic_formula b) {
        return make(op::implies, {}, {}, {}, {std::move(a), std::move(b)});
    }
    [[nodiscard]] static basic_formula iff(basic_formula a, basic_formula b) {
        return make(op::iff, {}, {}, {}, {std::move(a), std::move(b)});
    }
    [[nodiscard]] static basic_formula binary(op k, I interval, basic_formula a, basic_formula b) {
        if (!is_binary_temporal(k)) throw std::invalid_argument("not a binary temporal operator");
        if constexpr (dense)
            if (is_star(k)) throw std::invalid_argument("MTL+ operators are discrete only");
        return make(k, {}, {}, std::move(interval), {std::move(a), std::move(b)});
    }
    [[nodiscard]] static basic_formula unary(op k, I interval, basic_formula a) {
        if (!is_unary_bounded(k)) throw std::invalid_argument("not a bounded unary operator");
        return make(k, {}, {}, std::move(interval), {std::move(a)});
    }
    [[nodiscard]] static basic_formula strict(op k, basic_formula a) {
        if (!is_strict_sugar(k)) throw std::invalid_argument("not a nowon/uptonow operator");
        return make(k, {}, {}, {}, {std::move(a)});
    }
    [[nodiscard]] static basic_formula becomes(basic_formula a, basic_formula b) {
        return make(op::becomes, {}, {}, {}, {std::move(a), std::move(b)});
    }
    [[nodiscard]] static basic_formula becomes_now(basic_formula a, basic_formula b) {
        return make(op::becomes_now, {}, {}, {}, {std::move(a), std::move(b)});
    }
    [[nodiscard]] static basic_formula at_zero(basic_formula a) { return make(op::at_zero, {}, {}, {}, {std::move(a)}); }

    [[nodiscard]] static basic_formula until(I i, basic_formula a, basic_formula b) { return binary(op::until, i, a, b); }
    [[nodiscard]] static basic_formula since(I i, basic_formula a, basic_formula b) { return binary(op::since, i, a, b); }
    [[nodiscard]] static basic_formula release(I i, basic_formula a, basic_formula b) { return binary(op::release, i, a, b); }
    [[nodiscard]] static basic_formula trigger(I i, basic_formula a, basic_formula b) { return binary(op::trigger, i, a, b); }
    [[nodiscard]] static basic_formula eventually(I i, basic_formula a) { return unary(op::eventually, i, a); }
    [[nodiscard]] static basic_formula always(I i, basic_formula a) { return unary(op::always, i, a); }
    [[nodiscard]] static basic_formula eventually_past(I i, basic_formula a) { return unary(op::eventually_past, i, a); }
    [[nodiscard]] static basic_formula always_past(I i, basic_formula a) { return unary(op::always_past, i, a); }

    // Rebuilds this node with new children, keeping kind, names and interval.
    [[nodiscard]] basic_formula with_args(std::vector<basic_formula> args) const {
        return make(kind(), name(), value(), interval(), std::move(args));
    }
    [[nodiscard]] basic_formula with_interval(I interval) const {
        return make(kind(), name(), value(), std::move(interval), args());
    }

    [[nodiscard]] op kind() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const std::string& value() const;
    [[nodiscard]] const I& interval() const;
    [[nodiscard]] const std::vector<basic_formula>& args() const;
    [[nodiscard]] const basic_formula& arg(std::size_t i) const { return args().at(i); }
    [[nodiscard]] std::size_t hash() const;
    [[nodiscard]] const formula_node<I>* get() const { return _n.get(); }

    [[nodiscard]] bool is(op k) const { return kind() == k; }
    [[nodiscard]] bool is_top() const { return kind() == op::top; }
    [[nodiscard]] bool is_bottom() const { return kind() == op::bottom; }
    [[nodiscard]] bool is_const() const { return is_top() || is_bottom(); }

    bool operator==(const basic_formula& o) const;
    bool operator!=(const basic_formula& o) const { return !(*this == o); }

private:
    explicit basic_formula(std::shared_ptr<const formula_node<I>> n) : _n(std::move(n)) {}
    static basic_formula make(op k, std::string name, std::string value, I interval, std::vector<basic_formula> args);

    std::shared_ptr<const formula_node<I>> _n;
};

template <class I>
struct formula_node {
    op kind;
    std::string name;
    std::string value;
    I interval;
    std::vector<basic_formula<I>> args;
    std::size_t hash;
};

[[nodiscard]] std::size_t hash_value(const dense_interval& i);
[[nodiscard]] std::size_t hash_value(const discrete_interval& i);

namespace detail {
inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
} // namespace detail

template <class I>
basic_formula<I> basic_formula<I>::make(op k, std::string name, std::string value, I interval, std::vector<basic_formula> args) {
    std::size_t h = std::hash<int>{}(static_cast<int>(k));
    h = detail::hash_mix(h, std::hash<std::string>{}(name));
    h = detail::hash_mix(h, std::hash<std::string>{}(value));
    if (has_interval(k)) h = detail::hash_mix(h, hash_value(interval));
    for (const auto& a : args) h = detail::hash_mix(h, a.hash());
    return basic_formula(std::make_shared<const formula_node<I>>(
        formula_node<I>{k, std::move(name), std::move(value), std::move(interval), std::move(args), h}));
}

template <class I> op basic_formula<I>::kind() const { return _n->kind; }
template <class I> const std::string& basic_formula<I>::name() const { return _n->name; }
template <class I> const std::string& basic_formula<I>::value() const { return _n->value; }
template <class I> const I& basic_formula<I>::interval() const { return _n->interval; }
template <class I> const std::vector<basic_formula<I>>& basic_formula<I>::args() const { return _n->args; }
template <class I> std::size_t basic_formula<I>::hash() const { return _n->hash; }

template <class I>
bool basic_formula<I>::operator==(const basic_formula& o) const {
    if (_n == o._n) return true;
    const auto& a = *_n;
    const auto& b = *o._n;
    if (a.hash != b.hash || a.kind != b.kind || a.name != b.name || a.value != b.value) return false;
    if (has_interval(a.kind) && !(a.interval == b.interval)) return false;
    return a.args == b.args;
}

using dense_formula = basic_formula<dense_interval>;
using discrete_formula = basic_formula<discrete_interval>;

struct formula_hash {
    template <class I>
    std::size_t operator()(const basic_formula<I>& f) const { return f.hash(); }
};

// Concrete syntax; parse(to_string(f)) == f.
[[nodiscard]] std::string to_string(const dense_formula& f);
[[nodiscard]] std::string to_string(const discrete_formula& f);

// Formulas without temporal operators or at0.
template <class I>
[[nodiscard]] bool is_propositional(const basic_formula<I>& f) {
    if (is_temporal(f.kind()) || f.is(op::at_zero)) return false;
    for (const auto& a : f.args())
        if (!is_propositional(a)) return false;
    return true;
}

// Every temporal operator has propositional arguments.
template <class I>
[[nodiscard]] bool is_flat(const basic_formula<I>& f) {
    if (is_temporal(f.kind())) {
        for (const auto& a : f.args())
            if (!is_propositional(a)) return false;
        return true;
    }
    for (const auto& a : f.args())
        if (!is_flat(a)) return false;
    return true;
}

template <class I>
[[nodiscard]] std::size_t formula_size(const basic_formula<I>& f) {
    std::size_t n = 1;
    for (const auto& a : f.args()) n += formula_size(a);
    return n;
}

} // namespace tamtl
