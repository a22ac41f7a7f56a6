#include "tamtl/kernel.hpp"

#include <algorithm>

namespace tamtl {

namespace {

using df = dense_formula;
using zf = discrete_formula;

template <class F>
typename F::interval_type unbounded_interval() {
    if constexpr (F::dense)
        return dense_interval::unbounded();
    else
        return discrete_interval::closed(1, std::nullopt);
}

op dual(op k, bool dense) {
    switch (k) {
    case op::until: return dense ? op::release : op::release_star;
    case op::release: return dense ? op::until : op::until_star;
    case op::since: return dense ? op::trigger : op::trigger_star;
    case op::trigger: return dense ? op::since : op::since_star;
    case op::until_star: return op::release;
    case op::release_star: return op::until;
    case op::since_star: return op::trigger;
    case op::trigger_star: return op::since;
    case op::eventually: return op::always;
    case op::always: return op::eventually;
    case op::eventually_past: return op::always_past;
    case op::always_past: return op::eventually_past;
    default: throw std::logic_error("no dual operator");
    }
}

template <class F>
F nnf_pos(const F& f);

template <class F>
F nnf_neg(const F& f) {
    switch (f.kind()) {
    case op::top: return F::bottom();
    case op::bottom: return F::top();
    case op::prop:
    case op::item_eq: return F::negation(f);
    case op::not_: return nnf_pos(f.arg(0));
    case op::and_:
    case op::or_: {
        std::vector<F> cs;
        for (const auto& a : f.args()) cs.push_back(nnf_neg(a));
        return f.is(op::and_) ? F::disj(std::move(cs)) : F::conj(std::move(cs));
    }
    case op::implies: return F::conj(nnf_pos(f.arg(0)), nnf_neg(f.arg(1)));
    case op::iff:
        return F::disj(F::conj(nnf_pos(f.arg(0)), nnf_neg(f.arg(1))), F::conj(nnf_neg(f.arg(0)), nnf_pos(f.arg(1))));
    case op::at_zero:
        return F::conj(F::always_past(unbounded_interval<F>(), F::bottom()), nnf_neg(f.arg(0)));
    default:
        break;
    }
    if (is_binary_temporal(f.kind()))
        return F::binary(dual(f.kind(), F::dense), f.interval(), nnf_neg(f.arg(0)), nnf_neg(f.arg(1)));
    if (is_unary_bounded(f.kind())) return F::unary(dual(f.kind(), F::dense), f.interval(), nnf_neg(f.arg(0)));
    if constexpr (F::dense) {
        switch (f.kind()) {
        case op::nowon_strict:
        case op::uptonow_strict: return F::strict(f.kind(), nnf_neg(f.arg(0)));
        case op::nowon: return F::disj(nnf_neg(f.arg(0)), F::strict(op::nowon_strict, nnf_neg(f.arg(0))));
        case op::uptonow: return F::disj(nnf_neg(f.arg(0)), F::strict(op::uptonow_strict, nnf_neg(f.arg(0))));
        case op::becomes:
            return F::disj(F::strict(op::uptonow_strict, nnf_neg(f.arg(0))),
                           F::conj(nnf_neg(f.arg(1)), F::strict(op::nowon_strict, nnf_neg(f.arg(1)))));
        case op::becomes_now: return F::disj(nnf_neg(f.arg(0)), F::becomes_now(F::top(), nnf_neg(f.arg(1))));
        default: break;
        }
    } else {
        return nnf_neg(expand_sugar(f));
    }
    throw std::logic_error("nnf: unhandled operator");
}

template <class F>
F nnf_pos(const F& f) {
    switch (f.kind()) {
    case op::top:
    case op::bottom:
    case op::prop:
    case op::item_eq: return f;
    case op::not_: return nnf_neg(f.arg(0));
    case op::implies: return F::disj(nnf_neg(f.arg(0)), nnf_pos(f.arg(1)));
    case op::iff:
        return F::conj(F::disj(nnf_neg(f.arg(0)), nnf_pos(f.arg(1))), F::disj(nnf_pos(f.arg(0)), nnf_neg(f.arg(1))));
    default: break;
    }
    std::vector<F> cs;
    for (const auto& a : f.args()) cs.push_back(nnf_pos(a));
    return f.with_args(std::move(cs));
}

zf zbase(op k, discrete_interval i, zf a, zf b) { return zf::binary(k, i, std::move(a), std::move(b)); }

zf expand_strict(op k, const zf& b) {
    auto inf1 = discrete_interval::closed(1, std::nullopt);
    bool past = is_past(k);
    auto ex = zbase(past ? op::since : op::until, inf1, b, zf::top());
    auto un = zbase(past ? op::trigger : op::release, inf1, b, zf::bottom());
    return zf::disj(ex, zf::conj(zf::negation(b), un));
}

} // namespace

df nnf(const df& f) { return nnf_pos(f); }
zf nnf(const zf& f) { return nnf_pos(f); }
df negate_nnf(const df& f) { return nnf_neg(f); }
zf negate_nnf(const zf& f) { return nnf_neg(f); }

zf expand_sugar(const zf& f) {
    std::vector<zf> cs;
    for (const auto& a : f.args()) cs.push_back(expand_sugar(a));
    switch (f.kind()) {
    case op::nowon_strict:
    case op::uptonow_strict: return expand_strict(f.kind(), cs[0]);
    case op::nowon: return zf::conj(cs[0], expand_strict(op::nowon_strict, cs[0]));
    case op::uptonow: return zf::conj(cs[0], expand_strict(op::uptonow_strict, cs[0]));
    case op::becomes:
        return zf::conj(zf::eventually_past(discrete_interval::closed(1, 1), cs[0]),
                        zf::eventually(discrete_interval::closed(0, 1), cs[1]));
    case op::becomes_now: return zf::conj(cs[0], zf::eventually(discrete_interval::closed(1, 1), cs[1]));
    default: return cs.empty() ? f : f.with_args(std::move(cs));
    }
}

namespace {

df expand_dense(const df& f, const rational& delta) {
    std::vector<df> cs;
    for (const auto& a : f.args()) cs.push_back(expand_dense(a, delta));
    auto inf = dense_interval::unbounded();
    auto strict = [&](op k, const df& b) {
        bool past = is_past(k);
        return df::disj(df::binary(past ? op::since : op::until, inf, b, df::top()),
                        df::conj(negate_nnf(b), df::binary(past ? op::trigger : op::release, inf, b, df::bottom())));
    };
    switch (f.kind()) {
    case op::eventually: return df::until(f.interval(), df::top(), cs[0]);
    case op::always: return df::release(f.interval(), df::bottom(), cs[0]);
    case op::eventually_past: return df::since(f.interval(), df::top(), cs[0]);
    case op::always_past: return df::trigger(f.interval(), df::bottom(), cs[0]);
    case op::nowon_strict:
    case op::uptonow_strict: return strict(f.kind(), cs[0]);
    case op::nowon: return df::conj(cs[0], strict(op::nowon_strict, cs[0]));
    case op::uptonow: return df::conj(cs[0], strict(op::uptonow_strict, cs[0]));
    case op::becomes:
        return df::conj(strict(op::uptonow_strict, cs[0]), df::disj(cs[1], strict(op::nowon_strict, cs[1])));
    case op::becomes_now: return df::conj(cs[0], df::until(dense_interval::point(delta), df::top(), cs[1]));
    case op::at_zero: return df::disj(df::since(inf, df::top(), df::top()), cs[0]);
    default: return cs.empty() ? f : f.with_args(std::move(cs));
    }
}

} // namespace

df expand_derived(const df& f, const rational& delta) { return expand_dense(nnf(f), delta); }

df aux_definition::as_iff() const { return df::iff(df::prop(name), definition); }

df aux_definition::as_constraint() const {
    return df::conj(df::disj(df::negation(df::prop(name)), definition),
                    df::disj(df::prop(name), negate_nnf(definition)));
}

namespace {

struct flattener {
    signature names;
    std::vector<aux_definition> aux;

    df go(const df& f) {
        if (is_propositional(f)) return f;
        std::vector<df> cs;
        if (is_temporal(f.kind())) {
            for (const auto& a : f.args()) {
                if (is_propositional(a)) {
                    cs.push_back(a);
                    continue;
                }
                auto def = go(a);
                auto name = names.fresh_name("aux");
                names.add_proposition(name);
                aux.push_back({name, def});
                cs.push_back(df::prop(name));
            }
        } else {
            for (const auto& a : f.args()) cs.push_back(go(a));
        }
        return f.with_args(std::move(cs));
    }
};

} // namespace

flat_formula flatten(const df& f, const signature& sig) {
    flattener fl{sig, {}};
    auto top = fl.go(nnf(f));
    return {top, std::move(fl.aux)};
}

namespace {

void collect_bounds(const df& f, std::vector<rational>& out) {
    if (has_interval(f.kind())) {
        if (f.interval().lo != rational(0)) out.push_back(f.interval().lo);
        if (f.interval().hi && *f.interval().hi != rational(0)) out.push_back(*f.interval().hi);
    }
    for (const auto& a : f.args()) collect_bounds(a, out);
}

} // namespace

std::vector<rational> finite_bounds(const df& f) {
    std::vector<rational> out;
    collect_bounds(f, out);
    return out;
}

bool granularity_ok(const df& f, const rational& delta) {
    if (delta <= rational(0)) return false;
    for (const auto& b : finite_bounds(f))
        if (!is_integer(b / delta)) return false;
    return true;
}

void require_granularity(const df& f, const rational& delta) {
    if (delta <= rational(0)) throw granularity_error("sampling period must be positive");
    for (const auto& b : finite_bounds(f))
        if (!is_integer(b / delta))
            throw granularity_error("bound " + to_string(b) + " is not a multiple of delta = " + to_string(delta));
}

namespace {

op sugar_of(op k) {
    switch (k) {
    case op::until:
    case op::until_star: return op::eventually;
    case op::release:
    case op::release_star: return op::always;
    case op::since:
    case op::since_star: return op::eventually_past;
    case op::trigger:
    case op::trigger_star: return op::always_past;
    default: return k;
    }
}

// b together with ev[a,n]{b} (a in {0,1}) inside an Or, or alw in an And.
void merge_neighbourhood(std::vector<zf>& cs, bool is_or) {
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < cs.size() && !changed; ++i) {
            const auto c = cs[i];
            bool kind_ok = is_or ? (c.is(op::eventually) || c.is(op::eventually_past))
                                 : (c.is(op::always) || c.is(op::always_past));
            if (!kind_ok) continue;
            auto iv = c.interval();
            if (iv.lo != 0 && iv.lo != 1) continue;
            auto it = std::find(cs.begin(), cs.end(), c.arg(0));
            if (it == cs.end()) continue;
            cs[i] = zf::unary(c.kind(), discrete_interval::closed(0, iv.hi), c.arg(0));
            cs.erase(it);
            changed = true;
        }
    }
}

zf simplify_once(const zf& f);

zf simplify_nary(const zf& f) {
    bool is_and = f.is(op::and_);
    std::vector<zf> cs;
    for (const auto& a0 : f.args()) {
        auto a = simplify_once(a0);
        if (a.kind() == f.kind()) {
            for (const auto& b : a.args())
                if (std::find(cs.begin(), cs.end(), b) == cs.end()) cs.push_back(b);
            continue;
        }
        if (is_and ? a.is_top() : a.is_bottom()) continue;
        if (is_and ? a.is_bottom() : a.is_top()) return a;
        if (std::find(cs.begin(), cs.end(), a) == cs.end()) cs.push_back(a);
    }
    merge_neighbourhood(cs, !is_and);
    if (cs.empty()) return is_and ? zf::top() : zf::bottom();
    if (cs.size() == 1) return cs.front();
    return f.with_args(std::move(cs));
}

zf simplify_temporal(op k, const discrete_interval& iv, std::vector<zf> cs) {
    if (is_binary_temporal(k)) {
        bool ex = is_existential(k);
        if (ex ? cs[0].is_top() : cs[0].is_bottom()) return simplify_temporal(sugar_of(k), iv, {cs[1]});
        if (ex && cs[1].is_bottom()) return zf::bottom();
        if (!ex && cs[1].is_top()) return zf::top();
        if (iv.empty()) return ex ? zf::bottom() : zf::top();
        return zf::binary(k, iv, cs[0], cs[1]);
    }
    if (k == op::always && iv.hi && iv.lo == *iv.hi && iv.lo >= 0) k = op::eventually;
    bool ex = is_existential(k);
    if (iv.empty()) return ex ? zf::bottom() : zf::top();
    if (ex && cs[0].is_bottom()) return zf::bottom();
    if (!ex && cs[0].is_top()) return zf::top();
    return zf::unary(k, iv, cs[0]);
}

zf simplify_once(const zf& f) {
    switch (f.kind()) {
    case op::top:
    case op::bottom:
    case op::prop:
    case op::item_eq: return f;
    case op::not_: {
        auto a = simplify_once(f.arg(0));
        if (a.is_top()) return zf::bottom();
        if (a.is_bottom()) return zf::top();
        if (a.is(op::not_)) return a.arg(0);
        return zf::negation(a);
    }
    case op::and_:
    case op::or_: return simplify_nary(f);
    case op::implies: {
        auto a = simplify_once(f.arg(0));
        auto b = simplify_once(f.arg(1));
        if (a.is_bottom() || b.is_top() || a == b) return zf::top();
        if (a.is_top()) return b;
        if (b.is_bottom()) return simplify_once(zf::negation(a));
        return zf::implies(a, b);
    }
    case op::iff: {
        auto a = simplify_once(f.arg(0));
        auto b = simplify_once(f.arg(1));
        if (a == b) return zf::top();
        if (a.is_top()) return b;
        if (b.is_top()) return a;
        if (a.is_bottom()) return simplify_once(zf::negation(b));
        if (b.is_bottom()) return simplify_once(zf::negation(a));
        return zf::iff(a, b);
    }
    case op::at_zero: {
        auto a = simplify_once(f.arg(0));
        if (a.is_top()) return a;
        return zf::at_zero(a);
    }
    case op::nowon_strict:
    case op::uptonow_strict:
    case op::nowon:
    case op::uptonow:
    case op::becomes:
    case op::becomes_now: return simplify_once(expand_sugar(f));
    default: break;
    }
    std::vector<zf> cs;
    for (const auto& a : f.args()) cs.push_back(simplify_once(a));
    return simplify_temporal(f.kind(), f.interval(), std::move(cs));
}

} // namespace

zf simplify(const zf& f) {
    auto cur = simplify_once(f);
    for (;;) {
        auto next = simplify_once(cur);
        if (next == cur) return cur;
        cur = next;
    }
}

} // namespace tamtl
