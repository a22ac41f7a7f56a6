#include "doctest.h"

#include "gen.hpp"
#include "tamtl/bmc.hpp"
#include "tamtl/corpus.hpp"
#include "tamtl/eval.hpp"
#include "tamtl/parser.hpp"
#include "tamtl/solver.hpp"
#include "tamtl/ta.hpp"

using namespace tamtl;
using zf = discrete_formula;

namespace {

bool sat(const cnf_problem& p) {
    auto r = solve_cdcl(p, 60);
    REQUIRE_FALSE(r.st == solve_result::status::unknown);
    return r.is_sat();
}

bool encoded_sat(const std::vector<zf>& fs, const signature& sig, int k) {
    try {
        return sat(encode(fs, sig, k).cnf);
    } catch (const encode_error& e) {
        if (e.code() != encode_error::kind::contradiction) throw;
        return false;
    }
}

bool exists_model(const zf& f, const signature& sig, int k) {
    evaluator e(sig, f);
    return !gen::for_each_trace(sig, k, [&](const lasso_trace& t) { return !e.global(t); });
}

// Pins the frame variables to a given trace.
cnf_problem with_trace(encoding enc, const lasso_trace& t) {
    const auto& v = enc.vars;
    for (int l = 1; l <= t.k(); ++l) enc.cnf.add_clause({l == t.loop() ? v.loop_var(l) : -v.loop_var(l)});
    for (int pos = 0; pos <= t.k(); ++pos) {
        const auto& s = t.states()[static_cast<std::size_t>(pos)];
        for (std::size_t i = 0; i < s.props.size(); ++i)
            enc.cnf.add_clause({s.props[i] ? v.prop_var(i, pos) : -v.prop_var(i, pos)});
        for (std::size_t i = 0; i < s.values.size(); ++i) enc.cnf.add_clause({v.value_var(i, s.values[i], pos)});
    }
    return std::move(enc.cnf);
}

zf parse(const std::string& text, const signature& sig) { return parse_discrete_formula(text, sig); }

} // namespace

TEST_CASE("single atom") {
    signature sig = gen::props_signature(1);
    auto empty = encode(std::vector<zf>{}, sig, 2);
    CHECK(cnf_stats(empty.cnf).vars == 2 + 3);
    CHECK(cnf_stats(empty.cnf).clauses == 2); // at least one loop, not both
    auto enc = encode({zf::prop("p")}, sig, 2);
    CHECK(enc.cnf.clauses.size() == empty.cnf.clauses.size() + 3);
    auto r = solve_cdcl(enc.cnf, 10);
    REQUIRE(r.is_sat());
    auto t = decode(r.model, enc.vars);
    for (const auto& s : t.states()) CHECK(s.props[0] == 1);
}

TEST_CASE("next-step eventually over all traces") {
    signature sig = gen::props_signature(1);
    auto f = parse("ev[1,1]{p}", sig);
    auto enc = encode({f}, sig, 3);
    int models = 0;
    gen::for_each_trace(sig, 3, [&](const lasso_trace& t) {
        bool expected = true;
        for (int i = 1; i <= 3; ++i) expected = expected && t.at(i).props[0];
        CHECK(eval_global(t, sig, f) == expected);
        CHECK(sat(with_trace(enc, t)) == expected);
        models += expected;
        return true;
    });
    CHECK(models == 2 * 3);
    auto r = solve_cdcl(enc.cnf, 10);
    REQUIRE(r.is_sat());
    auto t = decode(r.model, enc.vars);
    for (int i = 1; i <= 10; ++i) CHECK(t.at(i).props[0] == 1);
}

TEST_CASE("constant trace") {
    signature sig = gen::props_signature(1);
    auto f = parse("p <-> ev[1,1]{p}", sig);
    auto enc = encode({f, parse("!p", sig), parse("alw[0,1]{!p} -> !p", sig)}, sig, 2);
    auto r = solve_cdcl(enc.cnf, 10);
    REQUIRE(r.is_sat());
    auto t = decode(r.model, enc.vars);
    for (const auto& s : t.states()) CHECK(s.props[0] == 0);
}

TEST_CASE("errors") {
    signature sig = gen::props_signature(1);
    CHECK_THROWS_AS((void)encode({parse("ev[0,4]{p}", sig)}, sig, 3), encode_error);
    try {
        (void)encode({parse("ev[0,4]{p}", sig)}, sig, 3);
    } catch (const encode_error& e) {
        CHECK(e.code() == encode_error::kind::bound_too_small);
        CHECK(std::string(e.what()).find('4') != std::string::npos);
    }
    CHECK_NOTHROW((void)encode({parse("ev[0,4]{p}", sig)}, sig, 4));
    CHECK_THROWS_AS((void)encode({zf::prop("p")}, sig, 1), encode_error);
    CHECK_THROWS_AS((void)encode({zf::prop("q")}, sig, 3), encode_error);
    try {
        (void)encode({zf::bottom()}, sig, 3);
        FAIL("no error");
    } catch (const encode_error& e) {
        CHECK(e.code() == encode_error::kind::contradiction);
    }
    try {
        (void)encode(encode_request{{}, {zf::bottom()}}, sig, 3);
        FAIL("no error");
    } catch (const encode_error& e) {
        CHECK(e.code() == encode_error::kind::contradiction);
    }
}

TEST_CASE("decode rejects broken frames") {
    signature sig;
    sig.add_item("st", {"a", "b", "c"});
    sig.add_proposition("p");
    auto enc = encode(std::vector<zf>{}, sig, 3);
    auto r = solve_cdcl(enc.cnf, 10);
    REQUIRE(r.is_sat());
    auto t = decode(r.model, enc.vars);
    for (const auto& s : t.states()) CHECK(s.values.size() == 1);
    auto two_loops = r.model;
    two_loops[static_cast<std::size_t>(enc.vars.loop_var(1))] = true;
    two_loops[static_cast<std::size_t>(enc.vars.loop_var(2))] = true;
    CHECK_THROWS_AS((void)decode(two_loops, enc.vars), decode_error);
    auto no_value = r.model;
    for (std::size_t j = 0; j < 3; ++j) no_value[static_cast<std::size_t>(enc.vars.value_var(0, j, 1))] = false;
    CHECK_THROWS_AS((void)decode(no_value, enc.vars), decode_error);
    auto two_values = r.model;
    for (std::size_t j = 0; j < 2; ++j) two_values[static_cast<std::size_t>(enc.vars.value_var(0, j, 2))] = true;
    CHECK_THROWS_AS((void)decode(two_values, enc.vars), decode_error);
    CHECK(enc.vars.signal_of(enc.vars.value_var(0, 1, 2)) == std::make_pair(std::string("st=b"), 2));
    CHECK(enc.vars.signal_of(enc.vars.loop_var(3)) == std::make_pair(std::string("loop"), 3));
    CHECK(enc.cnf.comments.at(enc.vars.prop_var(0, 3)) == "p@3");
}

TEST_CASE("determinism") {
    signature sig = gen::props_signature(2);
    gen::formula_gen g(5, {});
    for (int i = 0; i < 50; ++i) {
        auto f = g.flat(3);
        try {
            auto a = encode({f}, sig, 4);
            auto b = encode({f}, sig, 4);
            CHECK(a.cnf == b.cnf);
            CHECK(to_dimacs(a.cnf) == to_dimacs(b.cnf));
        } catch (const encode_error&) {
        }
    }
}

TEST_CASE("satisfiability matches exhaustive enumeration") {
    signature sig = gen::props_signature(2);
    gen::formula_gen g(11, {});
    int sat_cases = 0, unsat_cases = 0;
    for (int i = 0; i < 1500; ++i) {
        auto f = i % 3 == 2 ? g.nested(3) : g.flat(3);
        int k = 2 + g.pick(4);
        k = std::max<int>(k, static_cast<int>(largest_finite_bound(f)));
        INFO(to_string(f), " k=", k);
        bool expected = exists_model(f, sig, k);
        REQUIRE(encoded_sat({f}, sig, k) == expected);
        (expected ? sat_cases : unsat_cases)++;
    }
    CHECK(sat_cases > 100);
    CHECK(unsat_cases > 100);
}

TEST_CASE("models agree with the evaluator trace by trace") {
    signature sig = gen::props_signature(2);
    gen::formula_gen g(17, {});
    for (int i = 0; i < 300; ++i) {
        auto f = i % 2 ? g.nested(3) : g.flat(3);
        int k = std::max<int>(2 + g.pick(3), static_cast<int>(largest_finite_bound(f)));
        INFO(to_string(f), " k=", k);
        encoding enc;
        try {
            enc = encode({f}, sig, k);
        } catch (const encode_error& e) {
            REQUIRE(e.code() == encode_error::kind::contradiction);
            continue;
        }
        evaluator e(sig, f);
        for (int j = 0; j < 12; ++j) {
            auto t = g.trace(sig, k);
            REQUIRE(sat(with_trace(enc, t)) == e.global(t));
        }
    }
}

TEST_CASE("somewhere assertions") {
    signature sig = gen::props_signature(2);
    gen::formula_gen g(23, {});
    for (int i = 0; i < 400; ++i) {
        auto f = g.flat(2);
        auto h = g.flat(2);
        int k = std::max<int>(2 + g.pick(3), static_cast<int>(std::max(largest_finite_bound(f), largest_finite_bound(h))));
        INFO(to_string(f), " / ", to_string(h), " k=", k);
        evaluator ef(sig, f), eh(sig, h);
        bool expected = !gen::for_each_trace(sig, k, [&](const lasso_trace& t) {
            return !(ef.global(t) && !eh.global(t));
        });
        bool got = false;
        try {
            got = sat(encode(encode_request{{f}, {zf::negation(h)}}, sig, k).cnf);
        } catch (const encode_error& e) {
            REQUIRE(e.code() == encode_error::kind::contradiction);
        }
        REQUIRE(got == expected);
    }
}

TEST_CASE("round trip through the solver") {
    signature sig = gen::props_signature(2);
    gen::formula_gen g(29, {});
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        std::vector<zf> fs{g.flat(2), g.flat(2)};
        int k = 3 + g.pick(5);
        encoding enc;
        try {
            enc = encode(fs, sig, k);
        } catch (const encode_error&) {
            continue;
        }
        auto r = solve_cdcl(enc.cnf, 10);
        REQUIRE_FALSE(r.st == solve_result::status::unknown);
        if (!r.is_sat()) continue;
        auto t = decode(r.model, enc.vars);
        for (const auto& f : fs) CHECK(eval_global(t, sig, f));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("automaton axioms") {
    auto a = std::make_shared<timed_automaton>();
    a->name = "t";
    a->locations = {"a", "b"};
    a->initial = {"a"};
    a->clocks = {"c"};
    a->edges.push_back({"a", "b", clock_constraint::ge("c", 2), {"c"}, 0});
    a->edges.push_back({"b", "a", clock_constraint::lt("c", 3), {}, 0});
    instance_binding x{a, "X"};
    signature sig;
    x.declare(sig);
    std::vector<zf> fs;
    for (const auto& ax : under_axioms(x, 1)) fs.push_back(ax.formula);
    auto enc = encode(fs, sig, 6);
    auto r = solve_cdcl(enc.cnf, 30);
    REQUIRE(r.is_sat());
    auto t = decode(r.model, enc.vars);
    for (const auto& f : fs) CHECK(eval_global(t, sig, f));
}

TEST_CASE("protocol encoding size") {
    auto m = corpus_protocol(1, 3, 6, 18, 30);
    std::vector<zf> fs;
    for (const auto& ax : under_axioms(m.instances.front(), 1)) fs.push_back(ax.formula);
    auto enc = encode(fs, m.sig, 30);
    auto st = cnf_stats(enc.cnf);
    MESSAGE("protocol under axioms at k=30: ", st.vars, " vars, ", st.clauses, " clauses");
    CHECK(st.clauses > 10000);
    CHECK(st.clauses < 5000000);
    auto r = solve_cdcl(enc.cnf, 120);
    REQUIRE(r.is_sat());
    auto t = decode(r.model, enc.vars);
    for (const auto& f : fs) CHECK(eval_global(t, m.sig, f));
}
