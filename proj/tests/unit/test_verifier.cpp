#include "doctest.h"

#include "json.hpp"
#include "tamtl/corpus.hpp"
#include "tamtl/eval.hpp"
#include "tamtl/parser.hpp"
#include "tamtl/verifier.hpp"

using namespace tamtl;
using vk = verdict::kind;

namespace {

const model_file& protocol() {
    static const model_file m = corpus_protocol(1, 3, 6, 18, 30);
    return m;
}

const char* reset_model = R"(param
  delta = 1
  bound = 12
automaton t
  states a, b
  initial a
  clocks c
  edge a -> b when c >= 3 reset c
  edge b -> a when c < 4
instance X of t
)";

std::string state_at(const lasso_trace& t, const signature& sig, const std::string& item, std::int64_t pos) {
    auto i = *sig.item_index(item);
    return sig.items()[i].domain[t.at(pos).values[i]];
}

bool prop_at(const lasso_trace& t, const signature& sig, const std::string& p, std::int64_t pos) {
    return t.at(pos).props[*sig.prop_index(p)] != 0;
}

// Every state change along an edge that resets a clock is accompanied by a
// toggle of the clock's reset proposition at the change or one step later.
void check_reset_toggles(const lasso_trace& t, const signature& sig, const instance_binding& b) {
    for (std::int64_t h = 1; h <= t.k() + t.period(); ++h) {
        auto from = state_at(t, sig, b.st_item(), h - 1), to = state_at(t, sig, b.st_item(), h);
        if (from == to) continue;
        for (const auto* e : b.automaton->edges_between(from, to))
            for (const auto& c : e->resets) {
                auto r = b.rest_prop(c);
                bool toggled = prop_at(t, sig, r, h - 1) != prop_at(t, sig, r, h) ||
                               prop_at(t, sig, r, h) != prop_at(t, sig, r, h + 1);
                INFO("change ", from, " -> ", to, " at ", h, " resetting ", c);
                CHECK(toggled);
            }
    }
}

} // namespace

TEST_CASE("protocol verdicts") {
    const auto& m = protocol();
    CHECK(check_property(m, "p1").outcome == vk::verified);
    CHECK(check_property(m, "p3").outcome == vk::inconclusive);
    CHECK(check_property(m, "p3p").outcome == vk::verified);
    CHECK(check_property(m, "p4").outcome == vk::verified);
    CHECK(check_property(m, "p5").outcome == vk::verified);
    auto p1 = check_property(m, "p1");
    CHECK(p1.bound == 30);
    CHECK(p1.prove.ran);
    CHECK_FALSE(p1.refute.ran);
    CHECK(p1.prove.size.clauses > 10000);
}

TEST_CASE("property 2 counterexample") {
    const auto& m = protocol();
    auto v = check_property(m, "p2");
    REQUIRE(v.outcome == vk::falsified);
    REQUIRE(v.counterexample);
    REQUIRE(v.violation);
    const auto& t = *v.counterexample;
    auto over = build_side(m, v.delta, approx_kind::over);
    for (const auto& f : over.globally) CHECK(eval_global(t, v.trace_sig, f));
    auto p = under_approx(m.property("p2")->formula, v.delta);
    CHECK_FALSE(eval_at(t, v.trace_sig, p, *v.violation));
    // a failed round followed by a successful one before returning to idle
    bool ko = false, ok_after_ko = false;
    for (std::int64_t pos = *v.violation; pos <= t.k() + t.period() && !ok_after_ko; ++pos) {
        auto s = state_at(t, v.trace_sig, "st_A", pos);
        if (s == "ko1" || s == "ko2") ko = true;
        if (ko && (s == "ok1" || s == "ok2")) ok_after_ko = true;
        if (s == "idle") break;
    }
    CHECK(ok_after_ko);
    check_reset_toggles(t, v.trace_sig, m.instances.front());

    auto later = check_property(m, "p2", {.bound = 36});
    CHECK(later.outcome == vk::falsified);
}

TEST_CASE("both checks never decide together") {
    const auto& m = protocol();
    verify_options o;
    o.run_both = true;
    for (const char* p : {"p1", "p2", "p3", "p3p", "p4", "p5"}) {
        auto v = check_property(m, p, o);
        INFO(p);
        CHECK(v.prove.ran);
        CHECK(v.refute.ran);
        CHECK_FALSE((v.prove.result == solve_result::status::unsat && v.refute.result == solve_result::status::sat));
        for (const auto& w : v.warnings) CHECK(w.find("internal") == std::string::npos);
    }
}

TEST_CASE("consistency") {
    auto c = check_consistency(protocol());
    CHECK(c.outcome == consistency::status::consistent);
    REQUIRE(c.witness);
    auto over = build_side(protocol(), 1, approx_kind::over);
    for (const auto& f : over.globally) CHECK(eval_global(*c.witness, c.trace_sig, f));
    check_reset_toggles(*c.witness, c.trace_sig, protocol().instances.front());

    auto m = parse_model(reset_model);
    auto massaged = check_consistency(m);
    CHECK(massaged.outcome == consistency::status::consistent);
    REQUIRE(massaged.witness);
    check_reset_toggles(*massaged.witness, massaged.trace_sig, m.instances.front());
    verify_options naive;
    naive.naive_guards = true;
    auto bad = check_consistency(m, naive);
    CHECK(bad.outcome == consistency::status::inconsistent);
    CHECK(bad.diagnostic.find("over-approximated") != std::string::npos);

    auto contradiction = parse_model("signature\n  prop p\naxiom broken\n  p && !p\n");
    CHECK(check_consistency(contradiction).outcome == consistency::status::inconsistent);
}

TEST_CASE("bounds and errors") {
    const auto& m = protocol();
    CHECK(default_bound(m, 1) == 2 * 19 + 2);
    auto small = parse_model("signature\n  prop p\nproperty q\n  ev[0,3]{p} -> p\n");
    CHECK(default_bound(small, 1) == 30);
    CHECK(check_property(small, "q").bound == 30);
    CHECK_THROWS_AS((void)check_property(m, "p9"), verify_error);
    CHECK_THROWS_AS((void)check_property(m, "p1", {.bound = 10}), verify_error);
    CHECK_THROWS_AS((void)check_property(m, "p1", {.delta = rational(2)}), verify_error);
    verify_options broken;
    broken.solver.executable = "/nonexistent/solver";
    auto v = check_property(m, "p1", broken);
    CHECK(v.outcome == vk::inconclusive);
    CHECK(v.prove.result == solve_result::status::unknown);
    CHECK_FALSE(v.prove.reason.empty());
}

TEST_CASE("pure temporal logic models") {
    auto m = parse_model(R"(signature
  prop p, q
axiom p_then_q
  p -> ev[1,4]{q}
property weak
  p -> ev[0,5]{q}
property strong
  p -> ev[0,1]{q}
)");
    CHECK(check_property(m, "weak").outcome == vk::verified);
    auto s = check_property(m, "strong");
    CHECK(s.outcome == vk::falsified);
    REQUIRE(s.counterexample);
    CHECK(eval_global(*s.counterexample, s.trace_sig, parse_discrete_formula("p -> ev[2,3]{q}", s.trace_sig)));
}

TEST_CASE("nested properties are flattened") {
    auto m = parse_model(R"(signature
  prop p, q
axiom always_p
  p
property nested
  ev[0,inf){alw[0,4]{p}}
property nested_false
  alw[0,inf){ev[0,4]{q}}
)");
    auto v = check_property(m, "nested");
    CHECK(v.outcome == vk::verified);
    auto f = check_property(m, "nested_false");
    CHECK(f.outcome == vk::falsified);
    CHECK(f.trace_sig.propositions().size() > 2);
}

TEST_CASE("reports") {
    auto v = check_property(protocol(), "p2");
    auto text = format_report(v);
    CHECK(text.find("FALSIFIED") != std::string::npos);
    CHECK(text.find("loop:") != std::string::npos);
    auto j = nlohmann::json::parse(to_json(v));
    CHECK(j["verdict"] == "FALSIFIED");
    CHECK(j["bound"] == 30);
    CHECK(j["checks"].size() == 2);
    CHECK(j["counterexample"]["states"].size() == 31);
    CHECK(j["checks"][0]["seconds"].contains("sat"));
    auto c = nlohmann::json::parse(to_json(check_consistency(protocol())));
    CHECK(c["consistency"] == "CONSISTENT");
}
