#include "tamtl/eval.hpp"

#include <algorithm>
#include <stdexcept>

#include "tamtl/kernel.hpp"

namespace tamtl {

namespace {

std::int64_t reach_back(const evaluator::node& n) {
    switch (n.kind) {
    case op::since:
    case op::since_star:
    case op::trigger:
    case op::trigger_star: return n.hi ? *n.hi : std::max<std::int64_t>(n.lo, 0) + 1;
    case op::until:
    case op::until_star:
    case op::release:
    case op::release_star: return std::max<std::int64_t>(-n.lo, 0);
    default: return 0;
    }
}

} // namespace

evaluator::evaluator(const signature& sig, const discrete_formula& f) {
    _root = compile(sig, expand_sugar(f));
    std::vector<std::int64_t> reach(_nodes.size(), 0);
    // children are compiled before parents
    for (std::size_t i = 0; i < _nodes.size(); ++i) {
        const auto& n = _nodes[i];
        std::int64_t r = 0;
        if (is_binary_temporal(n.kind)) r = std::max(reach[n.a], reach[n.b]);
        else if (n.kind == op::not_ || n.kind == op::at_zero) r = reach[n.a];
        else if (n.kind == op::implies || n.kind == op::iff) r = std::max(reach[n.a], reach[n.b]);
        for (auto c : n.kids) r = std::max(r, reach[c]);
        reach[i] = r + reach_back(n);
    }
    _past_reach = reach[_root];
}

std::uint32_t evaluator::compile(const signature& sig, const discrete_formula& f) {
    node n;
    n.kind = f.kind();
    switch (f.kind()) {
    case op::top:
    case op::bottom: break;
    case op::prop: {
        auto ix = sig.prop_index(f.name());
        if (!ix) throw std::invalid_argument("unknown proposition '" + f.name() + "'");
        n.a = static_cast<std::uint32_t>(*ix);
        break;
    }
    case op::item_eq: {
        auto ix = sig.item_index(f.name());
        if (!ix) throw std::invalid_argument("unknown item '" + f.name() + "'");
        auto v = sig.value_index(*ix, f.value());
        if (!v) throw std::invalid_argument("value '" + f.value() + "' not in domain of '" + f.name() + "'");
        n.a = static_cast<std::uint32_t>(*ix);
        n.b = static_cast<std::uint32_t>(*v);
        break;
    }
    case op::not_:
    case op::at_zero: n.a = compile(sig, f.arg(0)); break;
    case op::and_:
    case op::or_:
        for (const auto& a : f.args()) n.kids.push_back(compile(sig, a));
        break;
    case op::implies:
    case op::iff:
        n.a = compile(sig, f.arg(0));
        n.b = compile(sig, f.arg(1));
        break;
    case op::eventually:
    case op::always:
    case op::eventually_past:
    case op::always_past: {
        bool ex = is_existential(f.kind());
        n.kind = f.is(op::eventually) ? op::until
                 : f.is(op::always)   ? op::release
                 : f.is(op::eventually_past) ? op::since
                                             : op::trigger;
        n.a = compile(sig, ex ? discrete_formula::top() : discrete_formula::bottom());
        n.b = compile(sig, f.arg(0));
        n.lo = f.interval().lo;
        n.hi = f.interval().hi;
        break;
    }
    default:
        if (!is_binary_temporal(f.kind())) throw std::logic_error("evaluator: unexpanded operator");
        n.a = compile(sig, f.arg(0));
        n.b = compile(sig, f.arg(1));
        n.lo = f.interval().lo;
        n.hi = f.interval().hi;
        break;
    }
    _nodes.push_back(std::move(n));
    return static_cast<std::uint32_t>(_nodes.size() - 1);
}

namespace {

class run {
public:
    run(const std::vector<evaluator::node>& nodes, const lasso_trace& t) : _nodes(nodes), _t(t), _memo(nodes.size()) {
        _unbounded_span = 2 * (static_cast<std::int64_t>(t.k()) + 1) + 2;
    }

    bool eval(std::uint32_t i, std::int64_t p) {
        auto& m = _memo[i];
        auto idx = static_cast<std::size_t>(p);
        if (idx >= m.size()) m.resize(idx + 16, -1);
        if (m[idx] >= 0) return m[idx] != 0;
        bool v = compute(i, p);
        _memo[i][idx] = v ? 1 : 0;
        return v;
    }

private:
    bool compute(std::uint32_t i, std::int64_t p) {
        const auto& n = _nodes[i];
        switch (n.kind) {
        case op::top: return true;
        case op::bottom: return false;
        case op::prop: return _t.at(p).props[n.a] != 0;
        case op::item_eq: return _t.at(p).values[n.a] == n.b;
        case op::not_: return !eval(n.a, p);
        case op::and_:
            for (auto c : n.kids)
                if (!eval(c, p)) return false;
            return true;
        case op::or_:
            for (auto c : n.kids)
                if (eval(c, p)) return true;
            return false;
        case op::implies: return !eval(n.a, p) || eval(n.b, p);
        case op::iff: return eval(n.a, p) == eval(n.b, p);
        case op::at_zero: return p != 0 || eval(n.a, 0);
        case op::until:
        case op::until_star: return future_exists(n, p, n.kind == op::until);
        case op::release:
        case op::release_star: return future_forall(n, p, n.kind == op::release_star);
        case op::since:
        case op::since_star: return past_exists(n, p, n.kind == op::since);
        case op::trigger:
        case op::trigger_star: return past_forall(n, p, n.kind == op::trigger_star);
        default: throw std::logic_error("evaluator: bad node");
        }
    }

    std::int64_t future_hi(const evaluator::node& n) const {
        return n.hi ? *n.hi : std::max<std::int64_t>(n.lo, 0) + _unbounded_span;
    }

    // exists d in I: b(p+d) and a on [p, p+d] (closed) or [p, p+d) (open)
    bool future_exists(const evaluator::node& n, std::int64_t p, bool closed) {
        std::int64_t hi = future_hi(n);
        std::int64_t d = n.lo;
        for (; d < 0 && d <= hi; ++d)
            if (p + d >= 0 && eval(n.b, p + d)) return true;
        // a holds on [p, p+d) for the current d
        for (std::int64_t u = 0; u < d; ++u)
            if (!eval(n.a, p + u)) return false;
        for (; d <= hi; ++d) {
            if (closed) {
                if (!eval(n.a, p + d)) return false;
                if (eval(n.b, p + d)) return true;
            } else {
                if (eval(n.b, p + d)) return true;
                if (!eval(n.a, p + d)) return false;
            }
        }
        return false;
    }

    // forall d in I: b(p+d) or exists u in [0,d) (open) / [0,d] (closed) with a(p+u)
    bool future_forall(const evaluator::node& n, std::int64_t p, bool closed) {
        std::int64_t hi = future_hi(n);
        std::int64_t d = n.lo;
        for (; d < 0 && d <= hi; ++d)
            if (p + d >= 0 && !eval(n.b, p + d)) return false;
        for (std::int64_t u = 0; u < d; ++u)
            if (eval(n.a, p + u)) return true;
        for (; d <= hi; ++d) {
            if (closed) {
                if (eval(n.a, p + d)) return true;
                if (!eval(n.b, p + d)) return false;
            } else {
                if (!eval(n.b, p + d)) return false;
                if (eval(n.a, p + d)) return true;
            }
        }
        return true;
    }

    // exists d in I, p-d >= 0: b(p-d) and a on [p-d, p] (closed) or (p-d, p] (open)
    bool past_exists(const evaluator::node& n, std::int64_t p, bool closed) {
        std::int64_t hi = n.hi ? std::min(*n.hi, p) : p;
        std::int64_t d = n.lo;
        for (; d < 0 && d <= hi; ++d)
            if (eval(n.b, p - d)) return true;
        for (std::int64_t u = 0; u < d && u <= p; ++u)
            if (!eval(n.a, p - u)) return false;
        for (; d <= hi; ++d) {
            if (closed) {
                if (!eval(n.a, p - d)) return false;
                if (eval(n.b, p - d)) return true;
            } else {
                if (eval(n.b, p - d)) return true;
                if (!eval(n.a, p - d)) return false;
            }
        }
        return false;
    }

    bool past_forall(const evaluator::node& n, std::int64_t p, bool closed) {
        std::int64_t hi = n.hi ? std::min(*n.hi, p) : p;
        std::int64_t d = n.lo;
        for (; d < 0 && d <= hi; ++d)
            if (!eval(n.b, p - d)) return false;
        for (std::int64_t u = 0; u < d && u <= p; ++u)
            if (eval(n.a, p - u)) return true;
        for (; d <= hi; ++d) {
            if (closed) {
                if (eval(n.a, p - d)) return true;
                if (!eval(n.b, p - d)) return false;
            } else {
                if (!eval(n.b, p - d)) return false;
                if (eval(n.a, p - d)) return true;
            }
        }
        return true;
    }

    const std::vector<evaluator::node>& _nodes;
    const lasso_trace& _t;
    std::vector<std::vector<std::int8_t>> _memo;
    std::int64_t _unbounded_span{0};
};

} // namespace

bool evaluator::at(const lasso_trace& t, std::int64_t pos) const {
    if (pos < 0) throw std::invalid_argument("negative position");
    run r(_nodes, t);
    return r.eval(_root, pos);
}

std::int64_t evaluator::horizon(const lasso_trace& t) const {
    return 3 * (static_cast<std::int64_t>(t.k()) + 1) + _past_reach + 2;
}

std::optional<std::int64_t> evaluator::first_violation(const lasso_trace& t) const {
    run r(_nodes, t);
    auto h = horizon(t);
    std::optional<std::int64_t> bad;
    for (std::int64_t p = 0; p <= h; ++p)
        if (!r.eval(_root, p)) {
            bad = p;
            break;
        }
    auto len = static_cast<std::int64_t>(t.period());
    for (std::int64_t p = h - len + 1; p <= h; ++p)
        if (r.eval(_root, p) != r.eval(_root, p - len))
            throw std::logic_error("evaluator: value not periodic within the horizon");
    return bad;
}

bool evaluator::global(const lasso_trace& t) const { return !first_violation(t); }

bool eval_at(const lasso_trace& t, const signature& sig, const discrete_formula& f, std::int64_t pos) {
    return evaluator(sig, f).at(t, pos);
}

bool eval_global(const lasso_trace& t, const signature& sig, const discrete_formula& f) {
    return evaluator(sig, f).global(t);
}

} // namespace tamtl
