#include "doctest.h"

#include "gen.hpp"
#include "tamtl/discretizer.hpp"
#include "tamtl/kernel.hpp"
#include "tamtl/parser.hpp"

using namespace tamtl;
using df = dense_formula;
using zf = discrete_formula;

namespace {

discrete_interval zi(std::int64_t lo, std::optional<std::int64_t> hi) { return discrete_interval::closed(lo, hi); }

signature pq() { return gen::props_signature(2); }

df dense(const std::string& text) { return parse_formula(text, pq()); }
zf discrete(const std::string& text) { return parse_discrete_formula(text, pq()); }

zf under(const std::string& text, rational delta = 1) { return simplify(under_approx(dense(text), delta)); }
zf normal(const zf& f) { return simplify(nnf(f)); }
zf over(const std::string& text, rational delta = 1) { return simplify(over_approx(dense(text), delta)); }

// Same Boolean skeleton: And/Or nodes line up; below a temporal or derived
// node the approximation may introduce its own connectives.
bool same_skeleton(const df& d, const zf& z) {
    if (!d.is(op::and_) && !d.is(op::or_)) return true;
    if (d.kind() != z.kind() || d.args().size() != z.args().size()) return false;
    for (std::size_t i = 0; i < d.args().size(); ++i)
        if (!same_skeleton(d.arg(i), z.arg(i))) return false;
    return true;
}

// Flat dense formula in NNF over p, q.
df random_flat_dense(gen::formula_gen& g, int depth, const rational& delta) {
    auto lit = [&] {
        auto p = df::prop(g.coin(50) ? "p" : "q");
        return g.coin(30) ? df::negation(p) : p;
    };
    auto arg = [&] { return g.coin(70) ? lit() : df::conj(lit(), lit()); };
    if (depth <= 0 || g.coin(30)) {
        rational lo = rational(g.pick(3)) * delta;
        auto hi = lo + rational(g.pick(4)) * delta;
        bool lo_open = g.coin(50), hi_open = g.coin(50);
        if (lo == hi) lo_open = hi_open = false;
        auto iv = dense_interval::make(lo, lo_open, hi, hi_open);
        static const op b[] = {op::until, op::since, op::release, op::trigger};
        static const op u[] = {op::eventually, op::always, op::eventually_past, op::always_past};
        switch (g.pick(4)) {
        case 0: return df::binary(b[g.pick(4)], iv, arg(), arg());
        case 1: return df::unary(u[g.pick(4)], iv, arg());
        case 2: {
            static const op s[] = {op::nowon_strict, op::uptonow_strict, op::nowon, op::uptonow};
            return df::strict(s[g.pick(4)], arg());
        }
        default: return g.coin(50) ? df::becomes(lit(), lit()) : lit();
        }
    }
    return g.coin(50) ? df::conj(random_flat_dense(g, depth - 1, delta), random_flat_dense(g, depth - 1, delta))
                      : df::disj(random_flat_dense(g, depth - 1, delta), random_flat_dense(g, depth - 1, delta));
}

void collect_nodes(const zf& f, std::vector<zf>& out) {
    if (is_temporal(f.kind())) out.push_back(f);
    for (const auto& a : f.args()) collect_nodes(a, out);
}

void collect_nodes(const df& f, std::vector<df>& out) {
    if (is_temporal(f.kind())) out.push_back(f);
    for (const auto& a : f.args()) collect_nodes(a, out);
}

} // namespace

TEST_CASE("approximation identities") {
    auto i01 = zi(0, 1);
    auto p = zf::prop("p");
    CHECK(under("alw(0,1){p}") == zf::top());
    CHECK(under("p && alw(0,1){p}") == p);
    CHECK(over("ev[0,2]{p}") == zf::eventually(zi(1, 1), p));
    CHECK(over("p || ev[0,2]{p}") == zf::eventually(i01, p));
    CHECK(under_approx(dense("nowon_strict{p}"), 1) == zf::eventually(i01, p));
    CHECK(over_approx(dense("nowon_strict{p}"), 1) == zf::always(i01, p));
    CHECK(under_approx(dense("uptonow_strict{p}"), 1) == zf::eventually_past(i01, p));
    CHECK(over_approx(dense("uptonow_strict{p}"), 1) == zf::always_past(i01, p));
    auto bn = dense("becomesO(p, q)");
    CHECK(normal(under_approx(df::negation(bn), 1)) == normal(zf::negation(under_approx(bn, 1))));
    CHECK(normal(under_approx(df::negation(bn), 1)) ==
          zf::disj(zf::negation(p), zf::eventually(zi(1, 1), zf::negation(zf::prop("q")))));
}

TEST_CASE("interval rules") {
    auto b1 = zf::prop("p");
    auto b2 = zf::prop("q");
    CHECK(under_approx(dense("until(0,18](p, q)"), 3) == zf::binary(op::until_star, zi(0, 6), b1, b2));
    CHECK(over_approx(dense("until(0,18](p, q)"), 3) == zf::until(zi(1, 5), b1, b2));
    CHECK(under_approx(dense("release(0,18](p, q)"), 3) == zf::binary(op::release_star, zi(1, 6), b1, b2));
    CHECK(over_approx(dense("release(0,18](p, q)"), 3) == zf::release(zi(-1, 7), b1, b2));
    CHECK(under_approx(dense("since[3,6)(p, q)"), 3) == zf::binary(op::since_star, zi(1, 2), b1, b2));
    CHECK(under_approx(dense("ev(0,inf){p}"), 1) == zf::eventually(zi(0, std::nullopt), b1));
    CHECK(over_approx(dense("ev(0,inf){p}"), 1) == zf::eventually(zi(1, std::nullopt), b1));
    CHECK(under_approx(dense("ev(0,3/2){p}"), rational(1, 2)) == zf::eventually(zi(0, 3), b1));
    CHECK_THROWS_AS((void)under_approx(dense("ev(0,3){p}"), 2), granularity_error);
}

TEST_CASE("derived operators") {
    auto p = zf::prop("p");
    auto q = zf::prop("q");
    auto i01 = zi(0, 1);
    CHECK(under_approx(dense("nowon{p}"), 1) == zf::conj(p, zf::eventually(i01, p)));
    CHECK(over_approx(dense("nowon{p}"), 1) == zf::always(i01, p));
    CHECK(under_approx(dense("becomes(p, q)"), 1) == zf::conj(zf::eventually_past(i01, p), zf::eventually(i01, q)));
    CHECK(over_approx(dense("becomes(p, q)"), 1) ==
          zf::conj(zf::always_past(i01, p), zf::disj(q, zf::always(i01, q))));
    CHECK(under_approx(dense("becomesO(p, q)"), 1) == zf::becomes_now(p, q));
    auto ob = over_approx(dense("becomesO(p, q)"), 1);
    CHECK(simplify(ob) == zf::bottom());
    CHECK(vacuity_warnings(ob).size() == 1);
    CHECK(under_approx(dense("at0{p}"), 1) == zf::at_zero(p));
    CHECK(vacuity_warnings(under_approx(dense("alw(0,1){p}"), 1)).size() == 1);
    CHECK(vacuity_warnings(under_approx(dense("alw(0,2){p}"), 1)).empty());
}

TEST_CASE("approximation of atoms and flat results") {
    for (auto kind : {approx_kind::under, approx_kind::over}) {
        CHECK(approx(dense("p"), rational(1, 3), kind) == zf::prop("p"));
        CHECK(is_flat(approx(dense("becomes(p, q) -> until(0,4](!p, q || p) && nowon{q}"), 1, kind)));
    }
}

TEST_CASE("skeleton and interval containment") {
    gen::formula_gen g(21, {});
    for (int i = 0; i < 1500; ++i) {
        rational delta(1 + g.pick(2), 1 + g.pick(2));
        auto f = random_flat_dense(g, 3, delta);
        INFO(to_string(f));
        auto u = under_approx(f, delta);
        auto o = over_approx(f, delta);
        CHECK(same_skeleton(f, u));
        CHECK(same_skeleton(f, o));
        CHECK(is_flat(u));
        CHECK(is_flat(o));
        std::vector<df> dn;
        std::vector<zf> un, on;
        collect_nodes(f, dn);
        collect_nodes(u, un);
        collect_nodes(o, on);
        REQUIRE(un.size() == on.size());
        for (std::size_t j = 0; j < un.size(); ++j) {
            if (!is_binary_temporal(on[j].kind()) || !is_existential(on[j].kind())) continue;
            const auto& ui = un[j].interval();
            const auto& oi = on[j].interval();
            if (ui.empty() || oi.empty()) continue;
            CHECK(oi.lo >= ui.lo);
            if (ui.hi) CHECK((oi.hi && *oi.hi <= *ui.hi));
        }
    }
}
