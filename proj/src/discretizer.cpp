#include "tamtl/discretizer.hpp"

#include "tamtl/kernel.hpp"

namespace tamtl {

namespace {

using df = dense_formula;
using zf = discrete_formula;

std::int64_t steps(const rational& r, const rational& delta) {
    auto q = r / delta;
    if (!is_integer(q)) throw granularity_error("bound " + to_string(r) + " is not a multiple of delta");
    return q.numerator();
}

op under_op(op k) {
    switch (k) {
    case op::until: return op::until_star;
    case op::since: return op::since_star;
    case op::release: return op::release_star;
    case op::trigger: return op::trigger_star;
    default: return k;
    }
}

class approximator {
public:
    approximator(const rational& delta, approx_kind kind) : _delta(delta), _kind(kind) {}

    zf go(const df& f) const {
        auto i01 = discrete_interval::closed(0, 1);
        switch (f.kind()) {
        case op::top: return zf::top();
        case op::bottom: return zf::bottom();
        case op::prop: return zf::prop(f.name());
        case op::item_eq: return zf::item_eq(f.name(), f.value());
        case op::not_: return zf::negation(go(f.arg(0)));
        case op::and_:
        case op::or_: {
            std::vector<zf> cs;
            for (const auto& a : f.args()) cs.push_back(go(a));
            return f.is(op::and_) ? zf::conj(std::move(cs)) : zf::disj(std::move(cs));
        }
        case op::at_zero: return zf::at_zero(go(f.arg(0)));
        case op::nowon_strict:
            return under() ? zf::eventually(i01, go(f.arg(0))) : zf::always(i01, go(f.arg(0)));
        case op::uptonow_strict:
            return under() ? zf::eventually_past(i01, go(f.arg(0))) : zf::always_past(i01, go(f.arg(0)));
        case op::nowon:
            if (under()) return zf::conj(go(f.arg(0)), zf::eventually(i01, go(f.arg(0))));
            return zf::always(i01, go(f.arg(0)));
        case op::uptonow:
            if (under()) return zf::conj(go(f.arg(0)), zf::eventually_past(i01, go(f.arg(0))));
            return zf::always_past(i01, go(f.arg(0)));
        case op::becomes: {
            auto a = go(f.arg(0));
            auto b = go(f.arg(1));
            if (under()) return zf::conj(zf::eventually_past(i01, a), zf::eventually(i01, b));
            return zf::conj(zf::always_past(i01, a), zf::disj(b, zf::always(i01, b)));
        }
        case op::becomes_now: {
            auto a = go(f.arg(0));
            auto b = go(f.arg(1));
            if (under()) return zf::becomes_now(a, b);
            return zf::conj(a, zf::eventually(interval(op::eventually, dense_interval::point(_delta)), b));
        }
        default: break;
        }
        auto iv = interval(f.kind(), f.interval());
        if (is_unary_bounded(f.kind())) return zf::unary(f.kind(), iv, go(f.arg(0)));
        op k = under() ? under_op(f.kind()) : f.kind();
        return zf::binary(k, iv, go(f.arg(0)), go(f.arg(1)));
    }

private:
    bool under() const { return _kind == approx_kind::under; }

    discrete_interval interval(op k, const dense_interval& i) const {
        std::int64_t lo = steps(i.lo, _delta);
        std::optional<std::int64_t> hi;
        if (i.hi) hi = steps(*i.hi, _delta);
        bool ex = is_existential(k);
        if (under()) {
            if (ex) return discrete_interval::closed(lo, hi);
            return normalize_closed(lo, i.lo_open, hi, i.hi_open);
        }
        std::int64_t shift = ex ? 1 : -1;
        if (hi) hi = *hi - shift;
        return discrete_interval::closed(lo + shift, hi);
    }

    rational _delta;
    approx_kind _kind;
};

} // namespace

zf approx(const df& f, const rational& delta, approx_kind kind) {
    require_granularity(f, delta);
    return approximator(delta, kind).go(nnf(f));
}

zf under_approx(const df& f, const rational& delta) { return approx(f, delta, approx_kind::under); }
zf over_approx(const df& f, const rational& delta) { return approx(f, delta, approx_kind::over); }

namespace {

void collect_vacuous(const zf& f, std::vector<std::string>& out) {
    if (has_interval(f.kind()) && f.interval().empty()) {
        out.push_back(to_string(f) + (is_existential(f.kind()) ? " can never hold (empty interval)"
                                                                 : " holds trivially (empty interval)"));
    }
    for (const auto& a : f.args()) collect_vacuous(a, out);
}

} // namespace

std::vector<std::string> vacuity_warnings(const zf& f) {
    std::vector<std::string> out;
    collect_vacuous(f, out);
    return out;
}

} // namespace tamtl
