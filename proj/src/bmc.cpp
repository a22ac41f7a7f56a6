#include "tamtl/bmc.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

#include "tamtl/kernel.hpp"

namespace tamtl {

var_map::var_map(const signature& sig, int k) : _sig(sig), _k(k) {
    int next = 0;
    for (int l = 1; l <= k; ++l) _loop.push_back(++next);
    for (int pos = 0; pos <= k; ++pos) {
        auto& vals = _values.emplace_back();
        for (const auto& it : sig.items()) {
            auto& v = vals.emplace_back();
            for (std::size_t j = 0; j < it.domain.size(); ++j) v.push_back(++next);
        }
        auto& ps = _props.emplace_back();
        for (std::size_t j = 0; j < sig.propositions().size(); ++j) ps.push_back(++next);
    }
    _frame_vars = next;
}

std::pair<std::string, int> var_map::signal_of(int var) const {
    if (var < 1 || var > _frame_vars) throw std::out_of_range("not a frame variable: " + std::to_string(var));
    if (var <= _k) return {"loop", var};
    for (int pos = 0; pos <= _k; ++pos) {
        const auto& vals = _values[static_cast<std::size_t>(pos)];
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = 0; j < vals[i].size(); ++j)
                if (vals[i][j] == var) return {_sig.items()[i].name + "=" + _sig.items()[i].domain[j], pos};
        const auto& ps = _props[static_cast<std::size_t>(pos)];
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (ps[i] == var) return {_sig.propositions()[i], pos};
    }
    throw std::logic_error("var_map: unmapped variable");
}

namespace {

constexpr int lit_true = INT_MAX;
constexpr int lit_false = -INT_MAX;

struct node {
    enum class kind { tru, fls, prop, value, neg, conj, disj, equiv, future, past, at0 } k{kind::tru};
    std::size_t a{0}, b{0}; // children, or item/prop and value index
    std::vector<std::size_t> kids{};
    bool closed{true};      // first argument also required at the witness position
    std::int64_t lo{0};
    std::optional<std::int64_t> hi{};
    std::int64_t reach{0};  // values are periodic from loop + reach on
};

std::string node_key(const node& n) {
    std::string s = std::to_string(static_cast<int>(n.k)) + ":" + std::to_string(n.a) + ":" + std::to_string(n.b) +
                    ":" + (n.closed ? "c" : "s") + std::to_string(n.lo) + ":" + (n.hi ? std::to_string(*n.hi) : "inf");
    for (auto c : n.kids) s += "," + std::to_string(c);
    return s;
}

} // namespace

class encoder {
public:
    encoder(const signature& sig, int k) : _sig(sig), _k(k) {
        _out.vars = var_map(sig, k);
        _out.cnf.num_vars = _out.vars.frame_vars();
        frame();
        _tru = intern({node::kind::tru});
        _fls = intern({node::kind::fls});
    }

    std::size_t compile(const discrete_formula& f) {
        using K = node::kind;
        auto un = [&](K k, std::size_t a) {
            node n{k};
            n.a = a;
            return intern(n);
        };
        switch (f.kind()) {
        case op::top: return _tru;
        case op::bottom: return _fls;
        case op::prop: {
            auto ix = _sig.prop_index(f.name());
            if (!ix) throw encode_error(encode_error::kind::unknown_symbol, "unknown proposition " + f.name());
            node n{K::prop};
            n.a = *ix;
            return intern(n);
        }
        case op::item_eq: {
            auto it = _sig.item_index(f.name());
            if (!it) throw encode_error(encode_error::kind::unknown_symbol, "unknown item " + f.name());
            auto v = _sig.value_index(*it, f.value());
            if (!v) throw encode_error(encode_error::kind::unknown_symbol, "unknown value " + f.value() + " of " + f.name());
            node n{K::value};
            n.a = *it;
            n.b = *v;
            return intern(n);
        }
        case op::not_: return negate(compile(f.arg(0)));
        case op::and_:
        case op::or_: {
            node n{f.is(op::and_) ? K::conj : K::disj};
            for (const auto& a : f.args()) n.kids.push_back(compile(a));
            return intern(n);
        }
        case op::implies: {
            node n{K::disj};
            n.kids = {negate(compile(f.arg(0))), compile(f.arg(1))};
            return intern(n);
        }
        case op::iff: {
            node n{K::equiv};
            n.a = compile(f.arg(0));
            n.b = compile(f.arg(1));
            return intern(n);
        }
        case op::at_zero: return un(K::at0, compile(f.arg(0)));
        case op::eventually: return temporal(false, true, f.interval(), _tru, compile(f.arg(0)));
        case op::eventually_past: return temporal(true, true, f.interval(), _tru, compile(f.arg(0)));
        case op::always: return negate(temporal(false, false, f.interval(), _tru, negate(compile(f.arg(0)))));
        case op::always_past: return negate(temporal(true, false, f.interval(), _tru, negate(compile(f.arg(0)))));
        case op::until: return temporal(false, true, f.interval(), compile(f.arg(0)), compile(f.arg(1)));
        case op::until_star: return temporal(false, false, f.interval(), compile(f.arg(0)), compile(f.arg(1)));
        case op::since: return temporal(true, true, f.interval(), compile(f.arg(0)), compile(f.arg(1)));
        case op::since_star: return temporal(true, false, f.interval(), compile(f.arg(0)), compile(f.arg(1)));
        // release = !until*(!a, !b), release* = !until(!a, !b), and alike for trigger
        case op::release:
            return negate(temporal(false, false, f.interval(), negate(compile(f.arg(0))), negate(compile(f.arg(1)))));
        case op::release_star:
            return negate(temporal(false, true, f.interval(), negate(compile(f.arg(0))), negate(compile(f.arg(1)))));
        case op::trigger:
            return negate(temporal(true, false, f.interval(), negate(compile(f.arg(0))), negate(compile(f.arg(1)))));
        case op::trigger_star:
            return negate(temporal(true, true, f.interval(), negate(compile(f.arg(0))), negate(compile(f.arg(1)))));
        default: return compile(expand_sugar(f));
        }
    }

    void assert_globally(std::size_t id) {
        for (std::int64_t i = 0; i <= _k + _nodes[id].reach; ++i) assert_at(id, i);
    }

    void assert_somewhere(std::size_t id) {
        std::vector<int> c;
        for (std::int64_t i = 0; i <= _k + _nodes[id].reach; ++i) {
            int l = lit(id, i);
            if (l == lit_true) return;
            if (l != lit_false) c.push_back(l);
        }
        if (c.empty()) throw encode_error(encode_error::kind::contradiction, "formula holds at no position");
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        clause(std::move(c));
    }

    encoding finish() && { return std::move(_out); }

private:
    using K = node::kind;

    std::size_t intern(node n) {
        n.reach = reach_of(n);
        auto key = node_key(n);
        if (auto it = _ids.find(key); it != _ids.end()) return it->second;
        _nodes.push_back(std::move(n));
        _ids.emplace(std::move(key), _nodes.size() - 1);
        return _nodes.size() - 1;
    }

    std::size_t negate(std::size_t id) {
        const auto& n = _nodes[id];
        if (n.k == K::neg) return n.a;
        if (n.k == K::tru) return _fls;
        if (n.k == K::fls) return _tru;
        node m{K::neg};
        m.a = id;
        return intern(m);
    }

    std::size_t temporal(bool past, bool closed, const discrete_interval& iv, std::size_t a, std::size_t b) {
        if (iv.empty() || _nodes[b].k == K::fls) return _fls;
        node n{past ? K::past : K::future};
        n.closed = closed;
        n.lo = iv.lo;
        n.hi = iv.hi;
        n.a = a;
        n.b = b;
        // with a constant witness the shortest distance is the weakest
        if (!n.hi && _nodes[b].k == K::tru) n.hi = std::max<std::int64_t>(n.lo, 0);
        return intern(n);
    }

    std::int64_t reach_of(const node& n) const {
        auto r = [&](std::size_t i) { return _nodes[i].reach; };
        switch (n.k) {
        case K::tru:
        case K::fls:
        case K::prop:
        case K::value:
        case K::at0: return 0;
        case K::neg: return r(n.a);
        case K::equiv: return std::max(r(n.a), r(n.b));
        case K::conj:
        case K::disj: {
            std::int64_t m = 0;
            for (auto c : n.kids) m = std::max(m, r(c));
            return m;
        }
        case K::future: return std::max(r(n.a), r(n.b)) + std::max<std::int64_t>(0, -n.lo);
        case K::past:
            if (n.hi) return std::max(r(n.a), r(n.b)) + std::max<std::int64_t>(0, *n.hi);
            return std::max(r(n.a), r(n.b)) + _k + std::max<std::int64_t>(0, n.lo);
        }
        return 0;
    }

    // -- clauses and gates

    void clause(std::vector<int> c) { _out.cnf.add_clause(std::move(c)); }

    int fresh() { return _out.cnf.new_var(); }

    int gate_and(std::vector<int> xs) {
        std::vector<int> ys;
        for (int x : xs) {
            if (x == lit_false) return lit_false;
            if (x != lit_true) ys.push_back(x);
        }
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        for (std::size_t i = 0; i + 1 < ys.size(); ++i)
            if (std::binary_search(ys.begin() + static_cast<std::ptrdiff_t>(i) + 1, ys.end(), -ys[i])) return lit_false;
        if (ys.empty()) return lit_true;
        if (ys.size() == 1) return ys[0];
        if (auto it = _and_cache.find(ys); it != _and_cache.end()) return it->second;
        int g = fresh();
        std::vector<int> big{g};
        for (int y : ys) {
            clause({-g, y});
            big.push_back(-y);
        }
        clause(std::move(big));
        _and_cache.emplace(std::move(ys), g);
        return g;
    }

    int gate_or(std::vector<int> xs) {
        for (int& x : xs) x = -x;
        return -gate_and(std::move(xs));
    }

    int gate_iff(int a, int b) {
        if (a == lit_true) return b;
        if (a == lit_false) return -b;
        if (b == lit_true) return a;
        if (b == lit_false) return -a;
        if (a == b) return lit_true;
        if (a == -b) return lit_false;
        if (std::abs(a) > std::abs(b)) std::swap(a, b);
        if (a < 0) {
            a = -a;
            b = -b;
        }
        auto key = std::make_pair(a, b);
        int g = 0;
        if (auto it = _iff_cache.find(key); it != _iff_cache.end()) {
            g = it->second;
        } else {
            g = fresh();
            clause({-g, -a, b});
            clause({-g, a, -b});
            clause({g, a, b});
            clause({g, -a, -b});
            _iff_cache.emplace(key, g);
        }
        return g;
    }

    // x <-> value of the word at pos - period(l), for each loop position l
    void tie(int x, const std::function<int(std::int64_t)>& earlier, std::int64_t pos) {
        for (int l = 1; l <= _k; ++l) {
            int y = earlier(pos - (_k - l + 1));
            int s = _out.vars.loop_var(l);
            if (y == lit_true) clause({-s, x});
            else if (y == lit_false) clause({-s, -x});
            else {
                clause({-s, -x, y});
                clause({-s, x, -y});
            }
        }
    }

    void exactly_one(const std::vector<int>& xs) {
        clause(xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j < xs.size(); ++j) clause({-xs[i], -xs[j]});
    }

    void frame() {
        const auto& v = _out.vars;
        std::vector<int> loops;
        for (int l = 1; l <= _k; ++l) {
            loops.push_back(v.loop_var(l));
            _out.cnf.comments[v.loop_var(l)] = "loop@" + std::to_string(l);
        }
        exactly_one(loops);
        for (int pos = 0; pos <= _k; ++pos) {
            auto at = "@" + std::to_string(pos);
            for (std::size_t i = 0; i < _sig.items().size(); ++i) {
                const auto& it = _sig.items()[i];
                std::vector<int> xs;
                for (std::size_t j = 0; j < it.domain.size(); ++j) {
                    xs.push_back(v.value_var(i, j, pos));
                    _out.cnf.comments[xs.back()] = it.name + "=" + it.domain[j] + at;
                }
                exactly_one(xs);
            }
            for (std::size_t i = 0; i < _sig.propositions().size(); ++i)
                _out.cnf.comments[v.prop_var(i, pos)] = _sig.propositions()[i] + at;
        }
    }

    // -- signals

    // Frame variable of a proposition (item = npos) or item value, extended
    // beyond k through the loop.
    int atom(std::size_t item, std::size_t index, std::int64_t pos) {
        if (pos <= _k) {
            int p = static_cast<int>(pos);
            return item == npos ? _out.vars.prop_var(index, p) : _out.vars.value_var(item, index, p);
        }
        auto key = std::make_tuple(item, index, pos);
        if (auto it = _ext.find(key); it != _ext.end()) return it->second;
        int x = fresh();
        _ext.emplace(key, x);
        tie(x, [&](std::int64_t q) { return atom(item, index, q); }, pos);
        return x;
    }

    struct future_core {
        std::int64_t top{0};  // values at 0..top+1 are defined by the recursion
        std::vector<int> lits;
        std::map<std::int64_t, int> beyond;
    };

    int step(bool closed, int a, int b, int next) {
        return closed ? gate_and({a, gate_or({b, next})}) : gate_or({b, gate_and({a, next})});
    }

    // Unbounded until from distance 0: closed a(j) && (b(j) || core(j+1)),
    // otherwise b(j) || (a(j) && core(j+1)).
    int core_at(const node& n, std::int64_t j) {
        auto key = std::make_tuple(n.a, n.b, n.closed);
        auto it = _future.find(key);
        if (it == _future.end()) {
            future_core c;
            std::int64_t s = std::max(_nodes[n.a].reach, _nodes[n.b].reach);
            c.top = _k + s;
            // one sweep over a period that starts where the arguments repeat
            std::vector<int> sweep(static_cast<std::size_t>(c.top + 2), lit_false);
            for (std::int64_t q = c.top; q >= 1 + s; --q)
                sweep[static_cast<std::size_t>(q)] =
                    step(n.closed, lit(n.a, q), lit(n.b, q), sweep[static_cast<std::size_t>(q + 1)]);
            std::vector<int> close;
            for (int l = 1; l <= _k; ++l)
                close.push_back(gate_and({_out.vars.loop_var(l), sweep[static_cast<std::size_t>(l + s)]}));
            c.lits.assign(static_cast<std::size_t>(c.top + 2), lit_false);
            c.lits[static_cast<std::size_t>(c.top + 1)] = gate_or(std::move(close));
            for (std::int64_t q = c.top; q >= 0; --q)
                c.lits[static_cast<std::size_t>(q)] =
                    step(n.closed, lit(n.a, q), lit(n.b, q), c.lits[static_cast<std::size_t>(q + 1)]);
            it = _future.emplace(key, std::move(c)).first;
        }
        auto& c = it->second;
        if (j <= c.top + 1) return c.lits[static_cast<std::size_t>(j)];
        if (auto b = c.beyond.find(j); b != c.beyond.end()) return b->second;
        int x = fresh();
        c.beyond.emplace(j, x);
        tie(x, [&](std::int64_t q) { return core_at(n, q); }, j);
        return x;
    }

    // Unbounded since from distance 0, by forward recursion from position 0.
    int past_core_at(const node& n, std::int64_t j) {
        auto& v = _past[std::make_tuple(n.a, n.b, n.closed)];
        while (static_cast<std::int64_t>(v.size()) <= j) {
            auto q = static_cast<std::int64_t>(v.size());
            int prev = v.empty() ? lit_false : v.back();
            v.push_back(step(n.closed, lit(n.a, q), lit(n.b, q), prev));
        }
        return v[static_cast<std::size_t>(j)];
    }

    int temporal_at(const node& n, std::int64_t i) {
        std::vector<int> terms;
        int dir = n.k == K::future ? 1 : -1;
        // negative distances look the other way with an empty first-argument range
        for (std::int64_t d = n.lo; d < 0 && (!n.hi || d <= *n.hi); ++d) {
            std::int64_t q = i + dir * d;
            if (q >= 0) terms.push_back(lit(n.b, q));
        }
        std::int64_t start = std::max<std::int64_t>(n.lo, 0);
        std::int64_t last = n.hi ? *n.hi : start - 1;
        int prefix = lit_true; // a over distances 0..d-1
        for (std::int64_t d = 0; d <= std::max(last, start - 1); ++d) {
            std::int64_t q = i + dir * d;
            if (q < 0) break;
            int through = gate_and({prefix, lit(n.a, q)});
            if (d >= start && d <= last) terms.push_back(gate_and({lit(n.b, q), n.closed ? through : prefix}));
            prefix = through;
            if (prefix == lit_false) break;
        }
        if (!n.hi) {
            std::int64_t q = i + dir * start;
            int pre = lit_true;
            for (std::int64_t d = 0; d < start && q >= 0; ++d) pre = gate_and({pre, lit(n.a, i + dir * d)});
            if (q >= 0 && pre != lit_false)
                terms.push_back(gate_and({pre, n.k == K::future ? core_at(n, q) : past_core_at(n, q)}));
        }
        return gate_or(std::move(terms));
    }

    int lit(std::size_t id, std::int64_t i) {
        const auto& n = _nodes[id];
        switch (n.k) {
        case K::tru: return lit_true;
        case K::fls: return lit_false;
        case K::prop: return atom(npos, n.a, i);
        case K::value: return atom(n.a, n.b, i);
        case K::neg: return -lit(n.a, i);
        default: break;
        }
        auto key = (static_cast<std::uint64_t>(id) << 32) | static_cast<std::uint64_t>(i);
        if (auto it = _memo.find(key); it != _memo.end()) return it->second;
        int r = 0;
        switch (n.k) {
        case K::conj:
        case K::disj: {
            std::vector<int> xs;
            for (auto c : n.kids) xs.push_back(lit(c, i));
            r = n.k == K::conj ? gate_and(std::move(xs)) : gate_or(std::move(xs));
            break;
        }
        case K::equiv: r = gate_iff(lit(n.a, i), lit(n.b, i)); break;
        case K::at0: r = i == 0 ? lit(n.a, 0) : lit_true; break;
        default: r = temporal_at(n, i); break;
        }
        _memo.emplace(key, r);
        return r;
    }

    void assert_at(std::size_t id, std::int64_t i) {
        const auto& n = _nodes[id];
        if (n.k == K::conj) {
            for (auto c : n.kids) assert_at(c, i);
            return;
        }
        if (n.k == K::at0) {
            if (i == 0) assert_at(n.a, 0);
            return;
        }
        std::vector<int> c;
        auto add = [&](int l) {
            if (l == lit_true) return false;
            if (l != lit_false) c.push_back(l);
            return true;
        };
        if (n.k == K::disj) {
            for (auto k : n.kids)
                if (!add(lit(k, i))) return;
        } else if (!add(lit(id, i))) {
            return;
        }
        if (c.empty())
            throw encode_error(encode_error::kind::contradiction,
                               "formula is false at position " + std::to_string(i) + " on every trace");
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        clause(std::move(c));
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    const signature& _sig;
    std::int64_t _k;
    encoding _out;
    std::vector<node> _nodes;
    std::unordered_map<std::string, std::size_t> _ids;
    std::size_t _tru{0}, _fls{0};
    std::unordered_map<std::uint64_t, int> _memo;
    std::map<std::vector<int>, int> _and_cache;
    std::map<std::pair<int, int>, int> _iff_cache;
    std::map<std::tuple<std::size_t, std::size_t, std::int64_t>, int> _ext;
    std::map<std::tuple<std::size_t, std::size_t, bool>, future_core> _future;
    std::map<std::tuple<std::size_t, std::size_t, bool>, std::vector<int>> _past;
};

std::int64_t largest_finite_bound(const discrete_formula& f) {
    std::int64_t m = 0;
    if (has_interval(f.kind())) {
        m = std::max(m, std::abs(f.interval().lo));
        if (f.interval().hi) m = std::max(m, std::abs(*f.interval().hi));
    }
    for (const auto& a : f.args()) m = std::max(m, largest_finite_bound(a));
    return m;
}

encoding encode(const encode_request& req, const signature& sig, int k) {
    if (k < 2) throw encode_error(encode_error::kind::bad_bound, "the bound k must be at least 2");
    for (const auto* fs : {&req.globally, &req.somewhere})
        for (const auto& f : *fs)
            if (auto b = largest_finite_bound(f); b > k)
                throw encode_error(encode_error::kind::bound_too_small,
                                   "bound k=" + std::to_string(k) + " is smaller than the interval bound " +
                                       std::to_string(b) + " in " + to_string(f));
    encoder e(sig, k);
    std::vector<std::size_t> globals, somewhere;
    for (const auto& f : req.globally) globals.push_back(e.compile(f));
    for (const auto& f : req.somewhere) somewhere.push_back(e.compile(f));
    for (auto id : globals) e.assert_globally(id);
    for (auto id : somewhere) e.assert_somewhere(id);
    return std::move(e).finish();
}

encoding encode(const std::vector<discrete_formula>& formulas, const signature& sig, int k) {
    return encode(encode_request{formulas, {}}, sig, k);
}

lasso_trace decode(const assignment& model, const var_map& vars) {
    auto val = [&](int v) {
        if (static_cast<std::size_t>(v) >= model.size()) throw decode_error("assignment too short for the encoding");
        return static_cast<bool>(model[static_cast<std::size_t>(v)]);
    };
    const auto& sig = vars.sig();
    int k = vars.k();
    std::optional<int> loop;
    for (int l = 1; l <= k; ++l) {
        if (!val(vars.loop_var(l))) continue;
        if (loop) throw decode_error("more than one loop position selected");
        loop = l;
    }
    if (!loop) throw decode_error("no loop position selected");
    std::vector<position_state> states(static_cast<std::size_t>(k) + 1);
    for (int pos = 0; pos <= k; ++pos) {
        auto& s = states[static_cast<std::size_t>(pos)];
        for (std::size_t i = 0; i < sig.items().size(); ++i) {
            std::optional<std::uint32_t> chosen;
            for (std::size_t j = 0; j < sig.items()[i].domain.size(); ++j) {
                if (!val(vars.value_var(i, j, pos))) continue;
                if (chosen)
                    throw decode_error("item " + sig.items()[i].name + " has two values at position " +
                                       std::to_string(pos));
                chosen = static_cast<std::uint32_t>(j);
            }
            if (!chosen)
                throw decode_error("item " + sig.items()[i].name + " has no value at position " + std::to_string(pos));
            s.values.push_back(*chosen);
        }
        for (std::size_t i = 0; i < sig.propositions().size(); ++i)
            s.props.push_back(val(vars.prop_var(i, pos)) ? 1 : 0);
    }
    return lasso_trace(k, *loop, std::move(states));
}

cnf_size cnf_stats(const cnf_problem& p) { return {p.num_vars, p.clauses.size()}; }

} // namespace tamtl
