#include "tamtl/ta.hpp"

#include <algorithm>
#include <set>

#include "tamtl/discretizer.hpp"

namespace tamtl {

std::string to_string(const clock_constraint& g) {
    using K = clock_constraint::kind;
    switch (g.k) {
    case K::top: return "true";
    case K::lt: return g.clock + " < " + to_string(g.bound);
    case K::ge: return g.clock + " >= " + to_string(g.bound);
    case K::and_: {
        auto side = [](const clock_constraint& c) {
            return c.k == K::or_ ? "(" + to_string(c) + ")" : to_string(c);
        };
        return side(g.args[0]) + " && " + side(g.args[1]);
    }
    case K::or_: return to_string(g.args[0]) + " || " + to_string(g.args[1]);
    }
    return "?";
}

const char* to_string(axiom_family f) {
    switch (f) {
    case axiom_family::state_change: return "state-change";
    case axiom_family::forbidden: return "forbidden";
    case axiom_family::invariance: return "invariance";
    case axiom_family::reset: return "reset";
    case axiom_family::init: return "init";
    case axiom_family::liveness: return "liveness";
    }
    return "?";
}

std::vector<std::string> timed_automaton::input_alphabet() const {
    if (alphabet.empty()) return {"tau"};
    return alphabet;
}

std::vector<std::string> timed_automaton::label_of(const std::string& s) const {
    auto it = labels.find(s);
    if (it == labels.end()) return input_alphabet();
    return it->second;
}

std::vector<const ta_edge*> timed_automaton::edges_between(const std::string& a, const std::string& b) const {
    std::vector<const ta_edge*> out;
    for (const auto& e : edges)
        if (e.src == a && e.dst == b) out.push_back(&e);
    return out;
}

std::vector<std::string> timed_automaton::successors(const std::string& s) const {
    std::vector<std::string> out;
    for (const auto& l : locations)
        if (l != s && !edges_between(s, l).empty()) out.push_back(l);
    return out;
}

namespace {

void check_guard(const clock_constraint& g, const timed_automaton& a, const rational& delta, const std::string& where,
                 std::vector<std::string>& out) {
    using K = clock_constraint::kind;
    if (g.k == K::and_ || g.k == K::or_) {
        for (const auto& c : g.args) check_guard(c, a, delta, where, out);
        return;
    }
    if (g.k == K::top) return;
    if (std::find(a.clocks.begin(), a.clocks.end(), g.clock) == a.clocks.end())
        out.push_back(where + ": unknown clock '" + g.clock + "'");
    if (g.bound <= rational(0)) out.push_back(where + ": guard constant " + to_string(g.bound) + " must be positive");
    auto q = g.bound / delta;
    if (!is_integer(q)) {
        out.push_back(where + ": guard constant " + to_string(g.bound) + " is not a multiple of delta");
        return;
    }
    if (g.k == K::ge && q.numerator() < 2)
        out.push_back(where + ": guard " + to_string(g) + " needs a constant of at least 2*delta");
}

} // namespace

std::vector<std::string> validate(const timed_automaton& a, const rational& delta) {
    std::vector<std::string> out;
    std::set<std::string> states(a.locations.begin(), a.locations.end());
    if (states.size() != a.locations.size()) out.push_back("duplicate state name");
    std::set<std::string> clocks(a.clocks.begin(), a.clocks.end());
    if (clocks.size() != a.clocks.size()) out.push_back("duplicate clock name");
    if (a.initial.empty()) out.push_back("no initial state");
    for (const auto& s : a.initial)
        if (!states.count(s)) out.push_back("unknown initial state '" + s + "'");
    auto sigma = a.input_alphabet();
    for (const auto& [s, l] : a.labels) {
        if (!states.count(s)) out.push_back("label for unknown state '" + s + "'");
        if (l.empty()) out.push_back("state '" + s + "' has an empty label");
        for (const auto& x : l)
            if (std::find(sigma.begin(), sigma.end(), x) == sigma.end())
                out.push_back("state '" + s + "' is labelled with unknown symbol '" + x + "'");
    }
    for (const auto& e : a.edges) {
        std::string where = "edge " + e.src + " -> " + e.dst;
        if (!states.count(e.src)) out.push_back(where + ": unknown state '" + e.src + "'");
        if (!states.count(e.dst)) out.push_back(where + ": unknown state '" + e.dst + "'");
        if (e.src == e.dst) out.push_back(where + ": self-loops are not allowed");
        for (const auto& c : e.resets)
            if (!clocks.count(c)) out.push_back(where + ": unknown clock '" + c + "'");
        check_guard(e.guard, a, delta, where, out);
    }
    return out;
}

void instance_binding::declare(signature& sig) const {
    sig.add_item(st_item(), automaton->locations);
    sig.add_item(in_item(), automaton->input_alphabet());
    for (const auto& c : automaton->clocks) sig.add_proposition(rest_prop(c));
}

namespace {

using df = dense_formula;
using zf = discrete_formula;

template <class F>
F rest(const instance_binding& b, const std::string& c, bool positive = true) {
    auto p = F::prop(b.rest_prop(c));
    return positive ? p : F::negation(p);
}

template <class F>
F st(const instance_binding& b, const std::string& s) {
    return F::item_eq(b.st_item(), s);
}

// Maps a guard through per-atom formulas, preserving its Boolean shape.
template <class F, class Atom>
F map_guard(const clock_constraint& g, const Atom& atom) {
    using K = clock_constraint::kind;
    switch (g.k) {
    case K::top: return F::top();
    case K::and_: return F::conj(map_guard<F>(g.args[0], atom), map_guard<F>(g.args[1], atom));
    case K::or_: return F::disj(map_guard<F>(g.args[0], atom), map_guard<F>(g.args[1], atom));
    default: return atom(g);
    }
}

std::int64_t k_steps(const clock_constraint& g, const rational& delta) { return (g.bound / delta).numerator(); }

dense_interval open_upto(const rational& k) { return dense_interval::make(0, true, k, true); }

zf under_guard(const clock_constraint& g, const instance_binding& b, const rational& delta) {
    return map_guard<zf>(g, [&](const clock_constraint& a) {
        auto n = k_steps(a, delta);
        auto r = rest<zf>(b, a.clock);
        auto nr = rest<zf>(b, a.clock, false);
        if (a.k == clock_constraint::kind::lt) {
            auto iv = discrete_interval::closed(0, n);
            return zf::disj(zf::conj(r, zf::eventually_past(iv, nr)), zf::conj(nr, zf::eventually_past(iv, r)));
        }
        return zf::disj(zf::conj(r, zf::always_past(discrete_interval::closed(1, n - 2), r)),
                        zf::conj(nr, zf::always_past(discrete_interval::closed(0, n - 2), nr)));
    });
}

zf over_guard(const clock_constraint& g, const instance_binding& b, const rational& delta) {
    auto i01 = discrete_interval::closed(0, 1);
    return map_guard<zf>(g, [&](const clock_constraint& a) {
        auto n = k_steps(a, delta);
        auto r = rest<zf>(b, a.clock);
        auto nr = rest<zf>(b, a.clock, false);
        if (a.k == clock_constraint::kind::lt) {
            auto iv = discrete_interval::closed(1, n - 1);
            return zf::disj(zf::conj(zf::always_past(i01, r), zf::eventually_past(iv, nr)),
                            zf::conj(zf::always_past(i01, nr), zf::eventually_past(iv, r)));
        }
        auto iv = discrete_interval::closed(0, n + 1);
        return zf::disj(zf::conj(zf::always_past(i01, r), zf::always_past(iv, r)),
                        zf::conj(zf::always_past(i01, nr), zf::always_past(iv, nr)));
    });
}

struct pair_edges {
    std::string src, dst;
    std::vector<const ta_edge*> edges;
};

std::vector<pair_edges> connected_pairs(const timed_automaton& a) {
    std::vector<pair_edges> out;
    for (const auto& si : a.locations)
        for (const auto& sj : a.locations) {
            if (si == sj) continue;
            auto es = a.edges_between(si, sj);
            if (!es.empty()) out.push_back({si, sj, es});
        }
    return out;
}

std::vector<std::pair<std::string, std::string>> unconnected_pairs(const timed_automaton& a) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& si : a.locations)
        for (const auto& sj : a.locations)
            if (si != sj && a.edges_between(si, sj).empty()) out.emplace_back(si, sj);
    return out;
}

// Edges resetting clock c, one entry per ordered state pair.
std::vector<std::pair<std::string, std::string>> resetting_pairs(const timed_automaton& a, const std::string& c) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : a.edges)
        if (std::find(e.resets.begin(), e.resets.end(), c) != e.resets.end()) {
            std::pair<std::string, std::string> p{e.src, e.dst};
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        }
    return out;
}

template <class F>
F invariance(const instance_binding& b, const std::string& s) {
    std::vector<F> ins;
    for (const auto& x : b.automaton->label_of(s)) ins.push_back(F::item_eq(b.in_item(), x));
    return F::implies(st<F>(b, s), F::disj(std::move(ins)));
}

template <class F>
F all_rest(const instance_binding& b, bool positive) {
    std::vector<F> cs;
    for (const auto& c : b.automaton->clocks) cs.push_back(rest<F>(b, c, positive));
    return F::conj(std::move(cs));
}

template <class F>
F liveness(const instance_binding& b, const std::string& s, typename F::interval_type iv) {
    std::vector<F> next;
    for (const auto& t : b.automaton->successors(s)) next.push_back(st<F>(b, t));
    return F::implies(st<F>(b, s), F::eventually(iv, F::disj(std::move(next))));
}

std::string pair_label(const std::string& a, const std::string& b) { return a + " -> " + b; }

// Positions >= 1 only: "nothing in the past" holds exactly at position 0.
zf from_one(zf f) {
    return zf::disj(zf::always_past(discrete_interval::closed(1, std::nullopt), zf::bottom()), std::move(f));
}

} // namespace

df xi_dense(const clock_constraint& g, const instance_binding& b) {
    return map_guard<df>(g, [&](const clock_constraint& a) {
        auto r = rest<df>(b, a.clock);
        auto nr = rest<df>(b, a.clock, false);
        auto iv = open_upto(a.bound);
        bool lt = a.k == clock_constraint::kind::lt;
        auto body = [&](const df& x) { return lt ? df::eventually_past(iv, x) : df::always_past(iv, x); };
        return df::disj(df::conj(df::strict(op::uptonow_strict, r), body(lt ? nr : r)),
                        df::conj(df::strict(op::uptonow_strict, nr), body(lt ? r : nr)));
    });
}

df xi_arrow(const clock_constraint& g, const instance_binding& b, const rational& delta) {
    return map_guard<df>(g, [&](const clock_constraint& a) {
        auto r = rest<df>(b, a.clock);
        auto nr = rest<df>(b, a.clock, false);
        if (a.k == clock_constraint::kind::lt) {
            auto iv = open_upto(a.bound);
            return df::disj(df::conj(r, df::eventually_past(iv, nr)), df::conj(nr, df::eventually_past(iv, r)));
        }
        auto hi = a.bound - delta;
        auto iv = hi > rational(0) ? open_upto(hi) : dense_interval::make(0, true, 0, true);
        return df::disj(df::conj(r, df::always_past(iv, r)), df::conj(nr, df::always_past(iv, nr)));
    });
}

std::vector<axiom<df>> dense_axioms(const instance_binding& b, const rational& delta) {
    const auto& a = *b.automaton;
    std::vector<axiom<df>> out;
    for (const auto& p : connected_pairs(a)) {
        std::vector<df> alts;
        for (const auto* e : p.edges) {
            std::vector<df> parts{xi_dense(e->guard, b)};
            for (const auto& c : e->resets)
                parts.push_back(df::disj(df::becomes(rest<df>(b, c, false), rest<df>(b, c)),
                                         df::becomes(rest<df>(b, c), rest<df>(b, c, false))));
            alts.push_back(df::conj(std::move(parts)));
        }
        out.push_back({axiom_family::state_change, pair_label(p.src, p.dst),
                       df::implies(df::becomes(st<df>(b, p.src), st<df>(b, p.dst)), df::disj(std::move(alts)))});
    }
    for (const auto& [si, sj] : unconnected_pairs(a))
        out.push_back({axiom_family::forbidden, pair_label(si, sj),
                       df::negation(df::becomes(st<df>(b, si), st<df>(b, sj)))});
    for (const auto& s : a.locations) out.push_back({axiom_family::invariance, s, invariance<df>(b, s)});
    for (const auto& c : a.clocks) {
        std::vector<df> changes;
        for (const auto& [si, sj] : resetting_pairs(a, c)) changes.push_back(df::becomes(st<df>(b, si), st<df>(b, sj)));
        out.push_back({axiom_family::reset, c + " set",
                       df::implies(df::becomes(rest<df>(b, c, false), rest<df>(b, c)), df::disj(changes))});
        for (const auto& s0 : a.initial)
            changes.push_back(df::always_past(dense_interval::unbounded(), df::conj(all_rest<df>(b, true), st<df>(b, s0))));
        out.push_back({axiom_family::reset, c + " unset",
                       df::implies(df::becomes(rest<df>(b, c), rest<df>(b, c, false)), df::disj(changes))});
    }
    std::vector<df> inits;
    for (const auto& s0 : a.initial) inits.push_back(df::strict(op::nowon, st<df>(b, s0)));
    out.push_back({axiom_family::init, "init",
                   df::at_zero(df::conj({all_rest<df>(b, true),
                                         df::eventually(dense_interval::make(0, false, 2 * delta, false),
                                                        all_rest<df>(b, false)),
                                         df::disj(std::move(inits))}))});
    for (const auto& s : a.locations)
        out.push_back({axiom_family::liveness, s, liveness<df>(b, s, dense_interval::unbounded())});
    return out;
}

namespace {

std::vector<axiom<zf>> discrete_axioms(const instance_binding& b, const rational& delta, bool under,
                                       const over_options& opts) {
    const auto& a = *b.automaton;
    auto i01 = discrete_interval::closed(0, 1);
    auto i02 = discrete_interval::closed(0, 2);
    std::vector<axiom<zf>> out;
    for (const auto& p : connected_pairs(a)) {
        std::vector<zf> alts;
        for (const auto* e : p.edges) {
            zf guard;
            if (under) guard = under_guard(e->guard, b, delta);
            else if (opts.naive_guards) guard = over_approx(xi_dense(e->guard, b), delta);
            else guard = over_guard(e->guard, b, delta);
            std::vector<zf> parts{guard};
            for (const auto& c : e->resets) {
                auto r = rest<zf>(b, c);
                auto nr = rest<zf>(b, c, false);
                if (under) {
                    parts.push_back(zf::disj(zf::becomes_now(nr, r), zf::becomes_now(r, nr)));
                } else {
                    auto to = st<zf>(b, p.dst);
                    parts.push_back(zf::disj(zf::conj(zf::always_past(i01, nr), zf::always(i02, zf::implies(to, r))),
                                             zf::conj(zf::always_past(i01, r), zf::always(i02, zf::implies(to, nr)))));
                }
            }
            alts.push_back(zf::conj(std::move(parts)));
        }
        out.push_back({axiom_family::state_change, pair_label(p.src, p.dst),
                       zf::implies(zf::becomes_now(st<zf>(b, p.src), st<zf>(b, p.dst)), zf::disj(std::move(alts)))});
    }
    for (const auto& [si, sj] : unconnected_pairs(a))
        out.push_back({axiom_family::forbidden, pair_label(si, sj),
                       zf::negation(zf::becomes_now(st<zf>(b, si), st<zf>(b, sj)))});
    for (const auto& s : a.locations) out.push_back({axiom_family::invariance, s, invariance<zf>(b, s)});
    for (const auto& c : a.clocks) {
        for (bool set : {true, false}) {
            auto from = rest<zf>(b, c, !set);
            auto to = rest<zf>(b, c, set);
            std::vector<zf> changes;
            for (const auto& [si, sj] : resetting_pairs(a, c)) {
                if (under)
                    changes.push_back(zf::becomes_now(st<zf>(b, si), st<zf>(b, sj)));
                else
                    changes.push_back(zf::conj(zf::always_past(i01, st<zf>(b, si)),
                                               zf::always(i02, zf::implies(to, st<zf>(b, sj)))));
            }
            out.push_back({axiom_family::reset, c + (set ? " set" : " unset"),
                           from_one(zf::implies(zf::becomes_now(from, to), zf::disj(std::move(changes))))});
        }
    }
    std::vector<zf> inits;
    for (const auto& s0 : a.initial)
        inits.push_back(under ? st<zf>(b, s0) : zf::always(i01, st<zf>(b, s0)));
    auto toggle = under ? discrete_interval::closed(1, 2) : discrete_interval::closed(1, 1);
    out.push_back({axiom_family::init, "init",
                   zf::at_zero(zf::conj({all_rest<zf>(b, true), zf::eventually(toggle, all_rest<zf>(b, false)),
                                         zf::disj(std::move(inits))}))});
    for (const auto& s : a.locations)
        out.push_back({axiom_family::liveness, s, liveness<zf>(b, s, discrete_interval::closed(1, std::nullopt))});
    return out;
}

} // namespace

std::vector<axiom<zf>> under_axioms(const instance_binding& b, const rational& delta) {
    return discrete_axioms(b, delta, true, {});
}

std::vector<axiom<zf>> over_axioms(const instance_binding& b, const rational& delta, const over_options& opts) {
    return discrete_axioms(b, delta, false, opts);
}

} // namespace tamtl
