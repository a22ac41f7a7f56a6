#include "tamtl/formula.hpp"

namespace tamtl {

std::string_view keyword(op k) {
    switch (k) {
    case op::top: return "true";
    case op::bottom: return "false";
    case op::prop: return "prop";
    case op::item_eq: return "=";
    case op::not_: return "!";
    case op::and_: return "&&";
    case op::or_: return "||";
    case op::implies: return "->";
    case op::iff: return "<->";
    case op::until: return "until";
    case op::since: return "since";
    case op::release: return "release";
    case op::trigger: return "trigger";
    case op::until_star: return "until*";
    case op::since_star: return "since*";
    case op::release_star: return "release*";
    case op::trigger_star: return "trigger*";
    case op::eventually: return "ev";
    case op::always: return "alw";
    case op::eventually_past: return "ev_p";
    case op::always_past: return "alw_p";
    case op::nowon_strict: return "nowon_strict";
    case op::uptonow_strict: return "uptonow_strict";
    case op::nowon: return "nowon";
    case op::uptonow: return "uptonow";
    case op::becomes: return "becomes";
    case op::becomes_now: return "becomesO";
    case op::at_zero: return "at0";
    }
    return "?";
}

std::size_t hash_value(const dense_interval& i) {
    std::size_t h = std::hash<std::int64_t>{}(i.lo.numerator());
    h = detail::hash_mix(h, std::hash<std::int64_t>{}(i.lo.denominator()));
    h = detail::hash_mix(h, i.hi ? std::hash<std::int64_t>{}(i.hi->numerator() * 31 + i.hi->denominator()) : 7);
    return detail::hash_mix(h, (i.lo_open ? 2u : 0u) | (i.hi_open ? 1u : 0u));
}

std::size_t hash_value(const discrete_interval& i) {
    std::size_t h = std::hash<std::int64_t>{}(i.lo);
    return detail::hash_mix(h, i.hi ? std::hash<std::int64_t>{}(*i.hi) : 0x5bd1e995);
}

namespace {

template <class I>
int level(const basic_formula<I>& f) {
    switch (f.kind()) {
    case op::iff: return 1;
    case op::implies: return 2;
    case op::or_: return 3;
    case op::and_: return 4;
    case op::not_: return f.arg(0).is(op::item_eq) ? 6 : 5;
    default: return 6;
    }
}

template <class I>
void print(const basic_formula<I>& f, std::string& out);

template <class I>
void print_at(const basic_formula<I>& f, int min_level, std::string& out) {
    if (level(f) < min_level) {
        out += '(';
        print(f, out);
        out += ')';
    } else {
        print(f, out);
    }
}

template <class I>
void print(const basic_formula<I>& f, std::string& out) {
    switch (f.kind()) {
    case op::top: out += "true"; return;
    case op::bottom: out += "false"; return;
    case op::prop: out += f.name(); return;
    case op::item_eq: out += f.name() + " = " + f.value(); return;
    case op::not_:
        if (f.arg(0).is(op::item_eq)) {
            out += f.arg(0).name() + " != " + f.arg(0).value();
            return;
        }
        out += '!';
        print_at(f.arg(0), 5, out);
        return;
    case op::and_:
    case op::or_: {
        int lv = level(f);
        const char* sep = f.is(op::and_) ? " && " : " || ";
        for (std::size_t i = 0; i < f.args().size(); ++i) {
            if (i) out += sep;
            print_at(f.arg(i), lv + 1, out);
        }
        return;
    }
    case op::implies:
        print_at(f.arg(0), 3, out);
        out += " -> ";
        print_at(f.arg(1), 3, out);
        return;
    case op::iff:
        print_at(f.arg(0), 2, out);
        out += " <-> ";
        print_at(f.arg(1), 2, out);
        return;
    case op::at_zero:
    case op::nowon_strict:
    case op::uptonow_strict:
    case op::nowon:
    case op::uptonow:
        out += keyword(f.kind());
        out += '{';
        print(f.arg(0), out);
        out += '}';
        return;
    case op::becomes:
    case op::becomes_now:
        out += keyword(f.kind());
        out += '(';
        print(f.arg(0), out);
        out += ", ";
        print(f.arg(1), out);
        out += ')';
        return;
    default:
        break;
    }
    out += keyword(f.kind());
    out += to_string(f.interval());
    if (is_unary_bounded(f.kind())) {
        out += '{';
        print(f.arg(0), out);
        out += '}';
    } else {
        out += '(';
        print(f.arg(0), out);
        out += ", ";
        print(f.arg(1), out);
        out += ')';
    }
}

} // namespace

std::string to_string(const dense_formula& f) {
    std::string s;
    print(f, s);
    return s;
}

std::string to_string(const discrete_formula& f) {
    std::string s;
    print(f, s);
    return s;
}

} // namespace tamtl
