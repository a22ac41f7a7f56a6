#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tamtl/formula.hpp"
#include "tamtl/rational.hpp"
#include "tamtl/signature.hpp"

namespace tamtl {

// Clock constraint over c < k, c >= k, conjunction and disjunction.
struct clock_constraint {
    enum class kind { top, lt, ge, and_, or_ };
    kind k{kind::top};
    std::string clock;
    rational bound{0};
    std::vector<clock_constraint> args;

    [[nodiscard]] static clock_constraint top() { return {}; }
    [[nodiscard]] static clock_constraint lt(std::string c, rational b) { return {kind::lt, std::move(c), b, {}}; }
    [[nodiscard]] static clock_constraint ge(std::string c, rational b) { return {kind::ge, std::move(c), b, {}}; }
    [[nodiscard]] static clock_constraint conj(clock_constraint a, clock_constraint b) {
        return {kind::and_, {}, 0, {std::move(a), std::move(b)}};
    }
    [[nodiscard]] static clock_constraint disj(clock_constraint a, clock_constraint b) {
        return {kind::or_, {}, 0, {std::move(a), std::move(b)}};
    }
    // c = b, i.e. b <= c < b + delta
    [[nodiscard]] static clock_constraint exactly(const std::string& c, rational b, const rational& delta) {
        return conj(ge(c, b), lt(c, b + delta));
    }
    bool operator==(const clock_constraint&) const = default;
};

[[nodiscard]] std::string to_string(const clock_constraint& g);

struct ta_edge {
    std::string src;
    std::string dst;
    clock_constraint guard;
    std::vector<std::string> resets;
    int line{0};
};

struct timed_automaton {
    std::string name;
    std::vector<std::string> alphabet; // empty: the single symbol "tau"
    std::vector<std::string> locations;
    std::vector<std::string> initial;
    std::map<std::string, std::vector<std::string>> labels; // missing state: whole alphabet
    std::vector<std::string> clocks;
    std::vector<ta_edge> edges;

    [[nodiscard]] std::vector<std::string> input_alphabet() const;
    [[nodiscard]] std::vector<std::string> label_of(const std::string& s) const;
    [[nodiscard]] std::vector<const ta_edge*> edges_between(const std::string& a, const std::string& b) const;
    [[nodiscard]] std::vector<std::string> successors(const std::string& s) const;
};

// Rule violations (empty when the automaton is well formed): unknown states
// or clocks, self-loops, empty initial set or labels, and guard constants that
// are not positive multiples of delta (c >= k additionally needs k >= 2 delta).
[[nodiscard]] std::vector<std::string> validate(const timed_automaton& a, const rational& delta);

// One copy of an automaton: items st_<name>, in_<name> and one proposition
// rest_<name>_<clock> per clock.
struct instance_binding {
    std::shared_ptr<const timed_automaton> automaton;
    std::string name;

    [[nodiscard]] std::string st_item() const { return "st_" + name; }
    [[nodiscard]] std::string in_item() const { return "in_" + name; }
    [[nodiscard]] std::string rest_prop(const std::string& clock) const { return "rest_" + name + "_" + clock; }
    void declare(signature& sig) const;
};

[[nodiscard]] dense_formula xi_dense(const clock_constraint& g, const instance_binding& b);
[[nodiscard]] dense_formula xi_arrow(const clock_constraint& g, const instance_binding& b, const rational& delta);

enum class axiom_family { state_change, forbidden, invariance, reset, init, liveness };
[[nodiscard]] const char* to_string(axiom_family f);

template <class F>
struct axiom {
    axiom_family family;
    std::string label;
    F formula;
};

[[nodiscard]] std::vector<axiom<dense_formula>> dense_axioms(const instance_binding& b, const rational& delta);
[[nodiscard]] std::vector<axiom<discrete_formula>> under_axioms(const instance_binding& b, const rational& delta);

struct over_options {
    // Use the mechanical over-approximation of the dense guard formula
    // instead of the adapted one (kept to demonstrate vacuity detection).
    bool naive_guards{false};
};
[[nodiscard]] std::vector<axiom<discrete_formula>> over_axioms(const instance_binding& b, const rational& delta,
                                                               const over_options& opts = {});

} // namespace tamtl
