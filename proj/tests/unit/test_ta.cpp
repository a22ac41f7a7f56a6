#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "tamtl/corpus.hpp"
#include "tamtl/discretizer.hpp"
#include "tamtl/eval.hpp"
#include "tamtl/kernel.hpp"
#include "tamtl/ta.hpp"

using namespace tamtl;
using df = dense_formula;
using zf = discrete_formula;

namespace {

discrete_interval zi(std::int64_t lo, std::optional<std::int64_t> hi) { return discrete_interval::closed(lo, hi); }

std::shared_ptr<timed_automaton> two_states(clock_constraint g, std::vector<std::string> resets = {}) {
    auto a = std::make_shared<timed_automaton>();
    a->name = "t";
    a->locations = {"a", "b"};
    a->initial = {"a"};
    a->clocks = {"c"};
    a->edges.push_back({"a", "b", std::move(g), std::move(resets), 0});
    return a;
}

template <class F>
std::vector<axiom<F>> family(const std::vector<axiom<F>>& all, axiom_family f) {
    std::vector<axiom<F>> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), [&](const auto& x) { return x.family == f; });
    return out;
}

template <class F>
const axiom<F>& find(const std::vector<axiom<F>>& all, axiom_family f, const std::string& label) {
    for (const auto& x : all)
        if (x.family == f && x.label == label) return x;
    throw std::logic_error("missing axiom " + label);
}

instance_binding protocol_binding() {
    auto m = corpus_protocol(1, 3, 6, 18, 30);
    return m.instances.front();
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

} // namespace

TEST_CASE("validation") {
    auto b = protocol_binding();
    CHECK(validate(*b.automaton, 1).empty());
    CHECK(b.automaton->edges.size() == 14);
    CHECK(b.automaton->locations.size() == 10);

    auto loop = std::make_shared<timed_automaton>(*two_states(clock_constraint::top()));
    loop->edges.push_back({"b", "b", clock_constraint::top(), {}, 0});
    CHECK(mentions(validate(*loop, 1), "self-loop"));
    CHECK(mentions(validate(*two_states(clock_constraint::ge("c", 1)), 1), "at least 2*delta"));
    CHECK(validate(*two_states(clock_constraint::ge("c", 2)), 1).empty());
    CHECK(mentions(validate(*two_states(clock_constraint::lt("c", rational(1, 2))), 1), "not a multiple of delta"));
    CHECK(mentions(validate(*two_states(clock_constraint::lt("d", 2)), 1), "unknown clock"));
    CHECK(mentions(validate(*two_states(clock_constraint::top(), {"d"}), 1), "unknown clock"));
    auto no_init = two_states(clock_constraint::top());
    no_init->initial.clear();
    CHECK_FALSE(validate(*no_init, 1).empty());
    auto bad_label = two_states(clock_constraint::top());
    bad_label->labels["a"] = {};
    CHECK_FALSE(validate(*bad_label, 1).empty());
}

TEST_CASE("clock constraint translations") {
    instance_binding b{two_states(clock_constraint::top()), "X"};
    auto r = df::prop("rest_X_c");
    auto nr = df::negation(r);
    auto open6 = dense_interval::make(0, true, rational(6), true);
    CHECK(xi_dense(clock_constraint::lt("c", 6), b) ==
          df::disj(df::conj(df::strict(op::uptonow_strict, r), df::eventually_past(open6, nr)),
                   df::conj(df::strict(op::uptonow_strict, nr), df::eventually_past(open6, r))));
    auto open3 = dense_interval::make(0, true, rational(3), true);
    CHECK(xi_dense(clock_constraint::ge("c", 3), b) ==
          df::disj(df::conj(df::strict(op::uptonow_strict, r), df::always_past(open3, r)),
                   df::conj(df::strict(op::uptonow_strict, nr), df::always_past(open3, nr))));
    auto g1 = clock_constraint::lt("c", 6), g2 = clock_constraint::ge("c", 3);
    CHECK(xi_dense(clock_constraint::conj(g1, g2), b) == df::conj(xi_dense(g1, b), xi_dense(g2, b)));
    CHECK(xi_arrow(clock_constraint::disj(g1, g2), b, 1) == df::disj(xi_arrow(g1, b, 1), xi_arrow(g2, b, 1)));

    auto open5 = dense_interval::make(0, true, rational(5), true);
    CHECK(xi_arrow(clock_constraint::ge("c", 6), b, 1) ==
          df::disj(df::conj(r, df::always_past(open5, r)), df::conj(nr, df::always_past(open5, nr))));
    CHECK(xi_arrow(g1, b, 1) ==
          df::disj(df::conj(r, df::eventually_past(open6, nr)), df::conj(nr, df::eventually_past(open6, r))));
}

TEST_CASE("dense axiom families") {
    auto b = protocol_binding();
    auto ax = dense_axioms(b, 1);
    CHECK(family(ax, axiom_family::state_change).size() == 14);
    CHECK(family(ax, axiom_family::forbidden).size() == 10 * 9 - 14);
    CHECK(family(ax, axiom_family::invariance).size() == 10);
    CHECK(family(ax, axiom_family::reset).size() == 6);
    CHECK(family(ax, axiom_family::init).size() == 1);
    CHECK(family(ax, axiom_family::liveness).size() == 10);

    instance_binding one{two_states(clock_constraint::top()), "X"};
    auto small = dense_axioms(one, 1);
    auto forbidden = family(small, axiom_family::forbidden);
    REQUIRE(forbidden.size() == 1);
    CHECK(forbidden[0].label == "b -> a");
    std::set<axiom_family> kinds;
    for (const auto& x : small) kinds.insert(x.family);
    CHECK(kinds.size() == 6);

    auto live = find(ax, axiom_family::liveness, "s1").formula;
    auto st = [](const std::string& v) { return df::item_eq("st_A", v); };
    CHECK(live == df::implies(st("s1"), df::eventually(dense_interval::unbounded(),
                                                       df::disj({st("ok1"), st("ko1"), st("tout1")}))));
    for (const auto& x : ax) CHECK(is_flat(x.formula));
}

TEST_CASE("under axioms") {
    auto b = protocol_binding();
    auto ax = under_axioms(b, 1);
    auto r = [](const std::string& c) { return zf::prop("rest_A_" + c); };
    auto all = [&](bool pos) {
        std::vector<zf> cs;
        for (const char* c : {"G", "S", "A"}) cs.push_back(pos ? r(c) : zf::negation(r(c)));
        return zf::conj(std::move(cs));
    };
    CHECK(find(ax, axiom_family::init, "init").formula ==
          zf::at_zero(zf::conj({all(true), zf::eventually(zi(1, 2), all(false)), zf::item_eq("st_A", "idle")})));
    for (const auto& x : ax) CHECK(is_flat(x.formula));

    instance_binding x{two_states(clock_constraint::ge("c", 6)), "X"};
    auto sc = find(under_axioms(x, 1), axiom_family::state_change, "a -> b").formula;
    auto rc = zf::prop("rest_X_c");
    REQUIRE(sc.is(op::implies));
    CHECK(sc.arg(0) == zf::becomes_now(zf::item_eq("st_X", "a"), zf::item_eq("st_X", "b")));
    CHECK(sc.arg(1) == zf::disj(zf::conj(rc, zf::always_past(zi(1, 4), rc)),
                                zf::conj(zf::negation(rc), zf::always_past(zi(0, 4), zf::negation(rc)))));
}

TEST_CASE("under guards match the mechanical approximation") {
    std::mt19937_64 rng(3);
    for (auto g : {clock_constraint::ge("c", 6), clock_constraint::lt("c", 6), clock_constraint::ge("c", 2),
                   clock_constraint::lt("c", 1), clock_constraint::conj(clock_constraint::ge("c", 3), clock_constraint::lt("c", 5))}) {
        INFO(to_string(g));
        instance_binding x{two_states(g), "X"};
        signature sig;
        x.declare(sig);
        auto guard = find(under_axioms(x, 1), axiom_family::state_change, "a -> b").formula.arg(1);
        auto mech = under_approx(xi_arrow(g, x, 1), 1);
        evaluator e(sig, zf::iff(guard, mech));
        auto rest = *sig.prop_index("rest_X_c");
        for (int n = 0; n < 3000; ++n) {
            int k = 2 + static_cast<int>(rng() % 9);
            std::vector<position_state> states(static_cast<std::size_t>(k) + 1);
            for (auto& s : states) {
                s.values.assign(sig.items().size(), 0);
                s.props.assign(sig.propositions().size(), 0);
                s.props[rest] = static_cast<std::uint8_t>(rng() % 2);
            }
            lasso_trace t(k, 1 + static_cast<int>(rng() % static_cast<unsigned>(k)), states);
            REQUIRE(e.global(t));
        }
    }
}

TEST_CASE("over axioms") {
    auto b = protocol_binding();
    auto ax = over_axioms(b, 1);
    for (const auto& x : ax) CHECK(is_flat(x.formula));
    auto init = find(ax, axiom_family::init, "init").formula;
    REQUIRE(init.is(op::at_zero));
    auto parts = init.arg(0).args();
    CHECK(parts[1].interval() == zi(1, 1));
    CHECK(parts[2] == zf::always(zi(0, 1), zf::item_eq("st_A", "idle")));

    instance_binding x{two_states(clock_constraint::ge("c", 6)), "X"};
    auto sc = find(over_axioms(x, 1), axiom_family::state_change, "a -> b").formula;
    auto rc = zf::prop("rest_X_c");
    auto nrc = zf::negation(rc);
    CHECK(sc.arg(1) == zf::disj(zf::conj(zf::always_past(zi(0, 1), rc), zf::always_past(zi(0, 7), rc)),
                                zf::conj(zf::always_past(zi(0, 1), nrc), zf::always_past(zi(0, 7), nrc))));
    instance_binding y{two_states(clock_constraint::lt("c", 6)), "X"};
    auto lt = find(over_axioms(y, 1), axiom_family::state_change, "a -> b").formula;
    CHECK(lt.arg(1) == zf::disj(zf::conj(zf::always_past(zi(0, 1), rc), zf::eventually_past(zi(1, 5), nrc)),
                                zf::conj(zf::always_past(zi(0, 1), nrc), zf::eventually_past(zi(1, 5), rc))));

    auto reset = find(ax, axiom_family::reset, "A set").formula;
    CHECK(to_string(reset).find("alw[0,2]") != std::string::npos);
    auto naive = over_axioms(x, 1, {true});
    CHECK(find(naive, axiom_family::state_change, "a -> b").formula != sc);
}
