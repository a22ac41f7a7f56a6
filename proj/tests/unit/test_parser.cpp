#include "doctest.h"

#include "gen.hpp"
#include "tamtl/corpus.hpp"
#include "tamtl/model.hpp"
#include "tamtl/parser.hpp"

using namespace tamtl;
using df = dense_formula;
using zf = discrete_formula;

namespace {

signature state_signature() {
    signature sig;
    sig.add_item("st", {"idle", "try", "s1"});
    sig.add_proposition("p");
    sig.add_proposition("q");
    return sig;
}

df random_dense(gen::formula_gen& g, int depth) {
    if (depth <= 0 || g.coin(20)) {
        switch (g.pick(6)) {
        case 0: return df::top();
        case 1: return df::bottom();
        case 2: return df::item_eq("st", g.coin(50) ? "idle" : "s1");
        default: return df::prop(g.coin(50) ? "p" : "q");
        }
    }
    auto interval = [&] {
        rational lo(g.pick(4), 1 + g.pick(2));
        if (g.coin(20)) return dense_interval::make(lo, g.coin(50), std::nullopt, true);
        rational hi = lo + rational(g.pick(5), 1 + g.pick(2));
        bool lo_open = g.coin(50), hi_open = g.coin(50);
        if (lo == hi) lo_open = hi_open = false;
        return dense_interval::make(lo, lo_open, hi, hi_open);
    };
    switch (g.pick(12)) {
    case 0: return df::negation(random_dense(g, depth - 1));
    case 1: return df::conj(random_dense(g, depth - 1), random_dense(g, depth - 1));
    case 2: return df::disj(random_dense(g, depth - 1), random_dense(g, depth - 1));
    case 3: return df::implies(random_dense(g, depth - 1), random_dense(g, depth - 1));
    case 4: return df::iff(random_dense(g, depth - 1), random_dense(g, depth - 1));
    case 5: {
        static const op u[] = {op::eventually, op::always, op::eventually_past, op::always_past};
        return df::unary(u[g.pick(4)], interval(), random_dense(g, depth - 1));
    }
    case 6: {
        static const op s[] = {op::nowon_strict, op::uptonow_strict, op::nowon, op::uptonow};
        return df::strict(s[g.pick(4)], random_dense(g, depth - 1));
    }
    case 7:
        return g.coin(50) ? df::becomes(random_dense(g, depth - 1), random_dense(g, depth - 1))
                          : df::becomes_now(random_dense(g, depth - 1), random_dense(g, depth - 1));
    case 8: return df::at_zero(random_dense(g, depth - 1));
    default: {
        static const op b[] = {op::until, op::since, op::release, op::trigger};
        return df::binary(b[g.pick(4)], interval(), random_dense(g, depth - 1), random_dense(g, depth - 1));
    }
    }
}

template <class Fn>
parse_error error_of(Fn&& fn) {
    try {
        fn();
    } catch (const parse_error& e) {
        return e;
    }
    FAIL("no parse error");
    return parse_error(0, 0, "");
}

const char* const small_model = R"(# two-state toggle
param
  delta = 1
  bound = 8
  K = 3

automaton toggle
  states off, on
  initial off
  clocks c
  alphabet up, down
  label off : down
  label on : up
  edge off -> on when c >= K reset c
  edge on -> off when c < K || c = 2

instance X of toggle

signature
  prop p

axiom
  p -> ev[0,K]{st_X = on}

property stays
  st_X = on -> uptonow_strict{st_X = off} || alw_p(0, K){st_X = on}
)";

} // namespace

TEST_CASE("parse formula examples") {
    auto sig = state_signature();
    auto f = parse_formula("st = s1 -> ev_p(0,12]{st = try}", sig);
    REQUIRE(f.is(op::implies));
    CHECK(f.arg(0) == df::item_eq("st", "s1"));
    CHECK(f.arg(1).is(op::eventually_past));
    CHECK(f.arg(1).interval() == dense_interval::make(0, true, rational(12), false));
    CHECK(parse_formula(to_string(f), sig) == f);

    auto u = parse_formula("until(0,inf)(p, q)", sig);
    CHECK(u == df::until(dense_interval::unbounded(), df::prop("p"), df::prop("q")));
    CHECK(parse_formula("until(p, q)", sig) == u);
    CHECK(to_string(df::prop("p")) == "p");
    CHECK(to_string(zf::eventually(discrete_interval::closed(1, 1), zf::prop("p"))) == "ev[1,1]{p}");
    CHECK(parse_formula("ev[=3]{p}", sig).interval() == dense_interval::point(3));
    CHECK(parse_formula("ev[<3]{p}", sig).interval() == dense_interval::make(0, true, rational(3), true));
    CHECK(parse_formula("ev[>=3]{p}", sig).interval() == dense_interval::make(3, false, std::nullopt, true));
    CHECK(parse_formula("ev{p}", sig).interval() == dense_interval::unbounded());
    CHECK(parse_formula("st != idle", sig) == df::negation(df::item_eq("st", "idle")));
    CHECK(parse_formula("p -> q -> p", sig) == df::implies(df::prop("p"), df::implies(df::prop("q"), df::prop("p"))));
    CHECK(parse_formula("p || q && p", sig) == df::disj(df::prop("p"), df::conj(df::prop("q"), df::prop("p"))));
    CHECK(parse_formula("ev(p || q)", sig) == df::eventually(dense_interval::unbounded(), df::disj(df::prop("p"), df::prop("q"))));
    CHECK(parse_formula("ev(0,3){p}", sig).interval() == dense_interval::make(0, true, rational(3), true));
}

TEST_CASE("interval bounds use constants and delta") {
    auto sig = state_signature();
    std::map<std::string, rational> consts{{"T1", 3}, {"T2", 6}};
    formula_env env;
    env.constants = &consts;
    env.delta = rational(1, 2);
    auto f = parse_formula("ev_p(0, 2*T1 + T2 + delta){p}", sig, env);
    CHECK(f.interval().hi == rational(25, 2));
    CHECK(parse_rational_expr("(T1 + 1) / 2", env) == rational(2));
    CHECK_THROWS_AS((void)parse_formula("ev(0, T9){p}", sig, env), parse_error);
}

TEST_CASE("discrete formulas accept the star operators") {
    auto sig = state_signature();
    auto f = parse_discrete_formula("until*[0,2](p, q) && trigger*[1,inf)(p, !q) || becomesO(p, q)", sig);
    CHECK(parse_discrete_formula(to_string(f), sig) == f);
    CHECK_THROWS_AS((void)parse_formula("until*[0,2](p, q)", sig), parse_error);
}

TEST_CASE("pretty/parse round trip on random formulas") {
    auto sig = state_signature();
    gen::formula_gen g(11, {});
    for (int i = 0; i < 2000; ++i) {
        auto f = random_dense(g, 6);
        auto text = to_string(f);
        INFO(text);
        CHECK(parse_formula(text, sig) == f);
    }
    auto psig = gen::props_signature(2);
    for (int i = 0; i < 2000; ++i) {
        auto f = g.coin(50) ? g.nested(5) : g.flat(3);
        auto text = to_string(f);
        INFO(text);
        CHECK(parse_discrete_formula(text, psig) == f);
    }
}

TEST_CASE("formula errors carry positions") {
    auto sig = state_signature();
    auto e = error_of([&] { (void)parse_formula("p && (q", sig); });
    CHECK(e.line() == 1);
    CHECK(e.col() == 8);
    e = error_of([&] { (void)parse_formula("p &&\n  st = nowhere", sig); });
    CHECK(e.line() == 2);
    CHECK(e.col() == 8);
    e = error_of([&] { (void)parse_formula("r", sig); });
    CHECK(e.col() == 1);
    e = error_of([&] { (void)parse_formula("ev(3,1){p}", sig); });
    CHECK(e.line() == 1);
    for (const char* bad : {"", "p q", "until(p)", "ev[1,2]", "!(", "p ->", "ev[a,2]{p}", "st = ", "&& p"}) {
        std::string text(bad);
        INFO(text);
        auto err = error_of([&] { (void)parse_formula(text, sig); });
        CHECK(err.line() == 1);
        CHECK(err.col() >= 1);
        CHECK(static_cast<std::size_t>(err.col()) <= text.size() + 1);
    }
}

TEST_CASE("parse_formula_free infers the signature") {
    auto [f, sig] = parse_formula_free("st = a && p -> ev{st = b || q}");
    CHECK(sig.contains("st"));
    CHECK(sig.contains("p"));
    CHECK(sig.contains("q"));
    CHECK(parse_formula(to_string(f), sig) == f);
}

TEST_CASE("model file parsing") {
    auto m = parse_model(small_model);
    CHECK(m.delta == rational(1));
    CHECK(m.bound == 8);
    CHECK(m.constants.at("K") == rational(3));
    REQUIRE(m.automata.size() == 1);
    const auto& a = *m.automata.front();
    CHECK(a.locations.size() == 2);
    CHECK(a.alphabet == std::vector<std::string>{"up", "down"});
    REQUIRE(a.edges.size() == 2);
    CHECK(a.edges[0].guard == clock_constraint::ge("c", 3));
    CHECK(a.edges[0].resets == std::vector<std::string>{"c"});
    CHECK(a.edges[1].guard ==
          clock_constraint::disj(clock_constraint::lt("c", 3), clock_constraint::exactly("c", 2, 1)));
    CHECK(m.instances.size() == 1);
    CHECK(m.sig.contains("st_X"));
    CHECK(m.sig.contains("in_X"));
    CHECK(m.sig.contains("rest_X_c"));
    CHECK(m.sig.contains("p"));
    REQUIRE(m.axioms.size() == 1);
    CHECK(m.axioms[0].name == "axiom1");
    REQUIRE(m.property("stays") != nullptr);
    CHECK(m.property("stays")->line == 26);
    CHECK(m.property("missing") == nullptr);
}

TEST_CASE("exact guards desugar to a delta-wide window") {
    auto m = parse_model("param\n  delta = 1/2\nautomaton t\n  states a, b\n  initial a\n  clocks c\n"
                         "  edge a -> b when c = 3\n  edge b -> a when c < 1\n");
    const auto& g = m.automata.front()->edges[0].guard;
    REQUIRE(g.k == clock_constraint::kind::and_);
    CHECK(g.args[0] == clock_constraint::ge("c", 3));
    CHECK(g.args[1] == clock_constraint::lt("c", rational(7, 2)));
}

TEST_CASE("pure MTL model") {
    auto m = parse_model("signature\n  prop p, q\naxiom\n  alw (p -> ev[0,3] q)\n");
    CHECK(m.automata.empty());
    REQUIRE(m.axioms.size() == 1);
    CHECK(m.axioms[0].formula.is(op::always));
}

TEST_CASE("model file errors") {
    struct bad_case {
        const char* text;
        int line;
    };
    const bad_case cases[] = {
        {"param\n  delta = 0\n", 2},
        {"param\n  bound = 1\n", 2},
        {"param\n  T = 1\n  T = 2\n", 3},
        {"signature\n  item x : {}\n", 2},
        {"signature\n  prop p\n  prop p\n", 3},
        {"automaton t\n  states a, b\n  initial a\n  edge a -> a\n", 4},
        {"automaton t\n  states a, b\n  initial a\n  edge a -> c\n", 4},
        {"automaton t\n  states a, b\n  initial a\n  clocks c\n  edge a -> b when c < 1/2\n", 5},
        {"automaton t\n  states a, b\n  initial a\n  clocks c\n  edge a -> b when c >= 1\n", 5},
        {"automaton t\n  states a, a\n  initial a\n", 1},
        {"automaton t\n  states a\n  wobble\n", 3},
        {"instance A of nothing\n", 1},
        {"signature\n  prop p\naxiom\n  p &&\n", 4},
        {"signature\n  prop p\nproperty\n  p\n", 3},
        {"signature\n  prop p\nproperty x\n  p\nproperty x\n  p\n", 5},
        {"param\n  delta = 2\nsignature\n  prop p\naxiom\n  ev(0,3){p}\n", 6},
        {"stray text\n", 1},
    };
    for (const auto& c : cases) {
        INFO(c.text);
        auto e = error_of([&] { (void)parse_model(c.text); });
        CHECK(e.line() == c.line);
    }
    CHECK_THROWS_AS((void)load_model("/nonexistent/model.tv"), std::runtime_error);
}

TEST_CASE("protocol corpus parses and round-trips") {
    auto m = corpus_protocol(1, 3, 6, 18, 30);
    REQUIRE(m.automata.size() == 1);
    const auto& a = *m.automata.front();
    CHECK(a.locations.size() == 10);
    CHECK(a.clocks.size() == 3);
    CHECK(a.edges.size() == 14);
    CHECK(m.bound == 30);
    CHECK(m.properties.size() == 6);
    for (const auto& p : m.properties) CHECK(parse_formula(to_string(p.formula), m.sig) == p.formula);
    auto m2 = corpus_protocol(2, 3, 6, 18, 30);
    CHECK(m2.instances.size() == 2);
    CHECK(m2.axioms.size() == 1);
    CHECK(m2.properties.size() == 2);
    CHECK(corpus_protocol(4, 3, 6, 18, 30).axioms.size() == 6);
}
