#include "tamtl/parser.hpp"

#include <algorithm>
#include <unordered_map>

#include "lexer.hpp"

namespace tamtl {

using detail::tok;
using detail::token;
using detail::token_stream;

namespace {

const std::unordered_map<std::string, op>& keywords() {
    static const std::unordered_map<std::string, op> table{
        {"until", op::until},
        {"since", op::since},
        {"release", op::release},
        {"trigger", op::trigger},
        {"ev", op::eventually},
        {"alw", op::always},
        {"ev_p", op::eventually_past},
        {"alw_p", op::always_past},
        {"nowon_strict", op::nowon_strict},
        {"uptonow_strict", op::uptonow_strict},
        {"nowon", op::nowon},
        {"uptonow", op::uptonow},
        {"becomes", op::becomes},
        {"becomesO", op::becomes_now},
        {"at0", op::at_zero},
    };
    return table;
}

bool reserved(const std::string& s) { return s == "true" || s == "false" || s == "inf" || keywords().count(s); }

op star_of(op k) {
    switch (k) {
    case op::until: return op::until_star;
    case op::since: return op::since_star;
    case op::release: return op::release_star;
    case op::trigger: return op::trigger_star;
    default: return k;
    }
}

struct free_names {
    std::vector<std::pair<std::string, std::vector<std::string>>> items;
    std::vector<std::string> props;
};

struct raw_interval {
    rational lo{0};
    std::optional<rational> hi;
    bool lo_open{true};
    bool hi_open{true};
};

template <class F>
class formula_parser {
public:
    formula_parser(token_stream& ts, const signature* sig, free_names* names) : _ts(ts), _sig(sig), _names(names) {}

    F parse_all() {
        auto f = formula();
        if (!_ts.at(tok::end)) token_stream::fail(_ts.peek(), "unexpected " + detail::describe(_ts.peek()));
        return f;
    }

private:
    F formula() { return iff(); }

    F iff() {
        auto f = implies();
        while (_ts.accept(tok::darrow)) f = F::iff(f, implies());
        return f;
    }

    F implies() {
        auto f = disj();
        if (_ts.accept(tok::arrow)) return F::implies(f, implies());
        return f;
    }

    F disj() {
        std::vector<F> cs{conj()};
        while (_ts.accept(tok::or_)) cs.push_back(conj());
        return cs.size() == 1 ? cs.front() : F::disj(std::move(cs));
    }

    F conj() {
        std::vector<F> cs{unary()};
        while (_ts.accept(tok::and_)) cs.push_back(unary());
        return cs.size() == 1 ? cs.front() : F::conj(std::move(cs));
    }

    F unary() {
        if (_ts.accept(tok::bang)) return F::negation(unary());
        return primary();
    }

    F primary() {
        const auto& t = _ts.peek();
        if (_ts.accept(tok::lparen)) {
            auto f = formula();
            _ts.expect(tok::rparen, "')'");
            return f;
        }
        if (t.kind != tok::ident) token_stream::fail(t, "expected a formula, found " + detail::describe(t));
        if (t.text == "true") {
            _ts.next();
            return F::top();
        }
        if (t.text == "false") {
            _ts.next();
            return F::bottom();
        }
        if (auto it = keywords().find(t.text); it != keywords().end()) {
            token kw = _ts.next();
            return keyword_form(kw, it->second);
        }
        token name = _ts.next();
        if (_ts.at(tok::eq) || _ts.at(tok::neq)) {
            bool eq = _ts.next().kind == tok::eq;
            const auto& v = _ts.peek();
            if (v.kind != tok::ident && v.kind != tok::number)
                token_stream::fail(v, "expected a value, found " + detail::describe(v));
            token value = _ts.next();
            resolve_item(name, value);
            auto f = F::item_eq(name.text, value.text);
            return eq ? f : F::negation(f);
        }
        resolve_prop(name);
        return F::prop(name.text);
    }

    F keyword_form(const token& kw, op k) {
        if (_ts.at(tok::star) && is_binary_temporal(k)) {
            auto star = _ts.next();
            if constexpr (F::dense) token_stream::fail(star, "'" + kw.text + "*' is only available in integer time");
            k = star_of(k);
        }
        if (is_binary_temporal(k)) {
            auto iv = optional_interval(true);
            _ts.expect(tok::lparen, "'('");
            auto a = formula();
            _ts.expect(tok::comma, "','");
            auto b = formula();
            _ts.expect(tok::rparen, "')'");
            return F::binary(k, iv.value_or(default_interval()), a, b);
        }
        if (k == op::becomes || k == op::becomes_now) {
            _ts.expect(tok::lparen, "'('");
            auto a = formula();
            _ts.expect(tok::comma, "','");
            auto b = formula();
            _ts.expect(tok::rparen, "')'");
            return k == op::becomes ? F::becomes(a, b) : F::becomes_now(a, b);
        }
        std::optional<typename F::interval_type> iv;
        if (is_unary_bounded(k)) iv = optional_interval(false);
        F arg;
        if (_ts.accept(tok::lbrace)) {
            arg = formula();
            _ts.expect(tok::rbrace, "'}'");
        } else {
            arg = unary();
        }
        if (is_unary_bounded(k)) return F::unary(k, iv.value_or(default_interval()), arg);
        if (k == op::at_zero) return F::at_zero(arg);
        return F::strict(k, arg);
    }

    static typename F::interval_type default_interval() {
        if constexpr (F::dense)
            return dense_interval::unbounded();
        else
            return discrete_interval::closed(1, std::nullopt);
    }

    std::optional<typename F::interval_type> optional_interval(bool binary) {
        if (_ts.at(tok::lbrack)) return interval();
        if (!_ts.at(tok::lparen)) return std::nullopt;
        bool comma = false;
        auto close = _ts.matching_close(0, &comma);
        if (close == std::string::npos) return std::nullopt;
        if (_ts.peek(close).kind == tok::rbrack) return interval();
        if (binary ? _ts.peek(close + 1).kind == tok::lparen : comma) return interval();
        return std::nullopt;
    }

    typename F::interval_type interval() {
        const auto& open = _ts.next();
        raw_interval r;
        r.lo_open = open.kind == tok::lparen;
        if (open.kind == tok::lbrack && (_ts.at(tok::eq) || _ts.at(tok::lt) || _ts.at(tok::ge))) {
            auto rel = _ts.next().kind;
            auto v = _ts.expr();
            _ts.expect(tok::rbrack, "']'");
            if (rel == tok::eq) r = {v, v, false, false};
            else if (rel == tok::lt) r = {0, v, true, true};
            else r = {v, std::nullopt, false, true};
            return convert(open, r);
        }
        r.lo = _ts.expr();
        _ts.expect(tok::comma, "','");
        if (_ts.peek().kind == tok::ident && _ts.peek().text == "inf") {
            _ts.next();
            r.hi.reset();
        } else {
            r.hi = _ts.expr();
        }
        const auto& close = _ts.peek();
        if (close.kind != tok::rparen && close.kind != tok::rbrack)
            token_stream::fail(close, "expected ')' or ']', found " + detail::describe(close));
        _ts.next();
        r.hi_open = close.kind == tok::rparen || !r.hi;
        return convert(open, r);
    }

    typename F::interval_type convert(const token& at, const raw_interval& r) {
        if constexpr (F::dense) {
            if (r.hi && *r.hi < r.lo) token_stream::fail(at, "interval lower bound exceeds upper bound");
            return dense_interval::make(r.lo, r.lo_open, r.hi, r.hi_open);
        } else {
            if (!is_integer(r.lo) || (r.hi && !is_integer(*r.hi)))
                token_stream::fail(at, "integer-time interval needs integer bounds");
            std::optional<std::int64_t> hi;
            if (r.hi) hi = r.hi->numerator();
            return normalize_closed(r.lo.numerator(), r.lo_open, hi, r.hi_open);
        }
    }

    void resolve_prop(const token& name) {
        if (reserved(name.text)) token_stream::fail(name, "'" + name.text + "' is a reserved word");
        if (_sig) {
            if (!_sig->prop_index(name.text)) {
                if (_sig->item_index(name.text))
                    token_stream::fail(name, "item '" + name.text + "' used without a value");
                token_stream::fail(name, "unknown proposition '" + name.text + "'");
            }
            return;
        }
        for (const auto& [n, d] : _names->items)
            if (n == name.text) token_stream::fail(name, "item '" + name.text + "' used without a value");
        if (std::find(_names->props.begin(), _names->props.end(), name.text) == _names->props.end())
            _names->props.push_back(name.text);
    }

    void resolve_item(const token& name, const token& value) {
        if (reserved(name.text)) token_stream::fail(name, "'" + name.text + "' is a reserved word");
        if (_sig) {
            auto ix = _sig->item_index(name.text);
            if (!ix) token_stream::fail(name, "unknown item '" + name.text + "'");
            if (!_sig->value_index(*ix, value.text))
                token_stream::fail(value, "unknown item value '" + value.text + "' for item '" + name.text + "'");
            return;
        }
        if (std::find(_names->props.begin(), _names->props.end(), name.text) != _names->props.end())
            token_stream::fail(name, "proposition '" + name.text + "' compared with a value");
        for (auto& [n, d] : _names->items)
            if (n == name.text) {
                if (std::find(d.begin(), d.end(), value.text) == d.end()) d.push_back(value.text);
                return;
            }
        _names->items.push_back({name.text, {value.text}});
    }

    token_stream& _ts;
    const signature* _sig;
    free_names* _names;
};

} // namespace

dense_formula parse_formula(std::string_view text, const signature& sig, const formula_env& env) {
    token_stream ts(detail::lex(text, env.line, env.col), env);
    return formula_parser<dense_formula>(ts, &sig, nullptr).parse_all();
}

discrete_formula parse_discrete_formula(std::string_view text, const signature& sig, const formula_env& env) {
    token_stream ts(detail::lex(text, env.line, env.col), env);
    return formula_parser<discrete_formula>(ts, &sig, nullptr).parse_all();
}

std::pair<dense_formula, signature> parse_formula_free(std::string_view text, const formula_env& env) {
    token_stream ts(detail::lex(text, env.line, env.col), env);
    free_names names;
    auto f = formula_parser<dense_formula>(ts, nullptr, &names).parse_all();
    signature sig;
    for (auto& [n, d] : names.items) sig.add_item(n, d);
    for (auto& p : names.props) sig.add_proposition(p);
    return {f, sig};
}

rational parse_rational_expr(std::string_view text, const formula_env& env) {
    token_stream ts(detail::lex(text, env.line, env.col), env);
    auto v = ts.expr();
    if (!ts.at(tok::end)) token_stream::fail(ts.peek(), "unexpected " + detail::describe(ts.peek()));
    return v;
}

} // namespace tamtl
