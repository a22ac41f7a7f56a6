#include "tamtl/model.hpp"

#include <fstream>
#include <sstream>

#include "lexer.hpp"
#include "tamtl/kernel.hpp"
#include "tamtl/parser.hpp"

namespace tamtl {

using detail::tok;
using detail::token;
using detail::token_stream;

const named_formula* model_file::property(std::string_view name) const {
    for (const auto& p : properties)
        if (p.name == name) return &p;
    return nullptr;
}

namespace {

struct line_info {
    int number;
    std::size_t offset; // of the first character in the source
    std::string_view text;
};

struct section {
    line_info header;
    std::vector<line_info> body;
};

const char* const section_words[] = {"param", "signature", "automaton", "instance", "axiom", "property"};

bool is_header(std::string_view line) {
    for (const char* w : section_words) {
        std::string_view sw(w);
        if (line.substr(0, sw.size()) == sw &&
            (line.size() == sw.size() || line[sw.size()] == ' ' || line[sw.size()] == '\t' || line[sw.size()] == '#' ||
             line[sw.size()] == '\r'))
            return true;
    }
    return false;
}

std::vector<section> split_sections(std::string_view text) {
    std::vector<section> out;
    std::size_t start = 0;
    int number = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        line_info li{++number, start, text.substr(start, end - start)};
        start = end + 1;
        if (is_header(li.text)) {
            out.push_back({li, {}});
            continue;
        }
        auto toks = detail::lex(li.text, li.number, 1);
        if (toks.size() == 1) continue; // blank or comment
        if (out.empty()) token_stream::fail(toks.front(), "expected a section header (param, signature, automaton, instance, axiom, property)");
        out.back().body.push_back(li);
    }
    return out;
}

std::vector<std::string> name_list(token_stream& ts) {
    std::vector<std::string> out;
    do {
        const auto& t = ts.peek();
        if (t.kind != tok::ident && t.kind != tok::number)
            token_stream::fail(t, "expected a name, found " + detail::describe(t));
        out.push_back(ts.next().text);
    } while (ts.accept(tok::comma));
    return out;
}

void expect_end(token_stream& ts) {
    if (!ts.at(tok::end)) token_stream::fail(ts.peek(), "unexpected " + detail::describe(ts.peek()));
}

class model_parser {
public:
    explicit model_parser(std::string_view text) : _text(text) {}

    model_file run() {
        auto sections = split_sections(_text);
        for (const auto& s : sections)
            if (word(s) == "param") params(s);
        for (const auto& s : sections)
            if (word(s) == "signature") signature_section(s);
        for (const auto& s : sections)
            if (word(s) == "automaton") automaton_section(s);
        for (const auto& s : sections)
            if (word(s) == "instance") instance_section(s);
        for (const auto& s : sections) {
            auto w = word(s);
            if (w == "axiom" || w == "property") formula_section(s, w == "property");
        }
        return std::move(_m);
    }

private:
    static std::string word(const section& s) {
        auto t = detail::lex(s.header.text, s.header.number, 1);
        return t.front().text;
    }

    formula_env env(int line = 1, int col = 1) const {
        formula_env e;
        e.constants = &_m.constants;
        e.delta = _m.delta;
        e.line = line;
        e.col = col;
        return e;
    }

    token_stream stream(const line_info& li) const { return token_stream(detail::lex(li.text, li.number, 1), env()); }

    void params(const section& s) {
        auto hs = stream(s.header);
        hs.next();
        expect_end(hs);
        for (const auto& li : s.body) {
            auto ts = stream(li);
            const auto& name = ts.expect(tok::ident, "a parameter name");
            ts.expect(tok::eq, "'='");
            token at = ts.peek();
            rational v = ts.expr();
            expect_end(ts);
            if (name.text == "delta") {
                if (v <= rational(0)) token_stream::fail(at, "delta must be positive");
                _m.delta = v;
            } else if (name.text == "bound") {
                if (!is_integer(v) || v < rational(2)) token_stream::fail(at, "bound must be an integer >= 2");
                _m.bound = static_cast<int>(v.numerator());
            } else {
                if (_m.constants.count(name.text)) token_stream::fail(name, "constant '" + name.text + "' defined twice");
                _m.constants[name.text] = v;
            }
        }
    }

    void signature_section(const section& s) {
        for (const auto& li : s.body) {
            auto ts = stream(li);
            const auto& kw = ts.expect(tok::ident, "'item' or 'prop'");
            try {
                if (kw.text == "item") {
                    auto name = ts.expect(tok::ident, "an item name").text;
                    ts.expect(tok::colon, "':'");
                    bool brace = ts.accept(tok::lbrace);
                    auto values = name_list(ts);
                    if (brace) ts.expect(tok::rbrace, "'}'");
                    expect_end(ts);
                    _m.sig.add_item(name, values);
                } else if (kw.text == "prop") {
                    auto names = name_list(ts);
                    expect_end(ts);
                    for (auto& n : names) _m.sig.add_proposition(n);
                } else {
                    token_stream::fail(kw, "expected 'item' or 'prop'");
                }
            } catch (const signature_error& e) {
                throw parse_error(kw.line, kw.col, e.what());
            }
        }
    }

    clock_constraint guard(token_stream& ts) {
        auto g = guard_term(ts);
        while (ts.accept(tok::or_)) g = clock_constraint::disj(g, guard_term(ts));
        return g;
    }

    clock_constraint guard_term(token_stream& ts) {
        auto g = guard_atom(ts);
        while (ts.accept(tok::and_)) g = clock_constraint::conj(g, guard_atom(ts));
        return g;
    }

    clock_constraint guard_atom(token_stream& ts) {
        if (ts.accept(tok::lparen)) {
            auto g = guard(ts);
            ts.expect(tok::rparen, "')'");
            return g;
        }
        const auto& c = ts.expect(tok::ident, "a clock name");
        if (c.text == "true") return clock_constraint::top();
        const auto& rel = ts.peek();
        if (rel.kind != tok::lt && rel.kind != tok::ge && rel.kind != tok::eq)
            token_stream::fail(rel, "expected '<', '>=' or '=', found " + detail::describe(rel));
        ts.next();
        auto k = ts.expr();
        if (rel.kind == tok::lt) return clock_constraint::lt(c.text, k);
        if (rel.kind == tok::ge) return clock_constraint::ge(c.text, k);
        return clock_constraint::exactly(c.text, k, _m.delta);
    }

    void automaton_section(const section& s) {
        auto hs = stream(s.header);
        hs.next();
        auto a = std::make_shared<timed_automaton>();
        a->name = hs.expect(tok::ident, "an automaton name").text;
        expect_end(hs);
        for (const auto& prev : _m.automata)
            if (prev->name == a->name) throw parse_error(s.header.number, 1, "automaton '" + a->name + "' defined twice");
        for (const auto& li : s.body) {
            auto ts = stream(li);
            const auto& kw = ts.expect(tok::ident, "an automaton clause");
            if (kw.text == "states") {
                a->locations = name_list(ts);
            } else if (kw.text == "initial") {
                a->initial = name_list(ts);
            } else if (kw.text == "clocks") {
                a->clocks = name_list(ts);
            } else if (kw.text == "alphabet") {
                a->alphabet = name_list(ts);
            } else if (kw.text == "label") {
                auto st = ts.expect(tok::ident, "a state name").text;
                ts.expect(tok::colon, "':'");
                a->labels[st] = name_list(ts);
            } else if (kw.text == "edge") {
                ta_edge e;
                e.line = li.number;
                e.src = ts.expect(tok::ident, "a state name").text;
                ts.expect(tok::arrow, "'->'");
                e.dst = ts.expect(tok::ident, "a state name").text;
                if (ts.peek().kind == tok::ident && ts.peek().text == "when") {
                    ts.next();
                    e.guard = guard(ts);
                }
                if (ts.peek().kind == tok::ident && ts.peek().text == "reset") {
                    ts.next();
                    e.resets = name_list(ts);
                }
                a->edges.push_back(std::move(e));
            } else {
                token_stream::fail(kw, "unknown automaton clause '" + kw.text + "'");
            }
            expect_end(ts);
        }
        auto problems = validate(*a, _m.delta);
        if (!problems.empty()) {
            int line = s.header.number;
            for (const auto& e : a->edges)
                if (problems.front().rfind("edge " + e.src + " -> " + e.dst, 0) == 0) {
                    line = e.line;
                    break;
                }
            throw parse_error(line, 1, "automaton '" + a->name + "': " + problems.front());
        }
        _m.automata.push_back(a);
    }

    void instance_section(const section& s) {
        auto ts = stream(s.header);
        ts.next();
        const auto& name = ts.expect(tok::ident, "an instance name");
        const auto& of = ts.expect(tok::ident, "'of'");
        if (of.text != "of") token_stream::fail(of, "expected 'of'");
        const auto& an = ts.expect(tok::ident, "an automaton name");
        expect_end(ts);
        if (!s.body.empty()) {
            auto bt = stream(s.body.front());
            token_stream::fail(bt.peek(), "an instance line has no body");
        }
        std::shared_ptr<const timed_automaton> a;
        for (const auto& x : _m.automata)
            if (x->name == an.text) a = x;
        if (!a) token_stream::fail(an, "unknown automaton '" + an.text + "'");
        instance_binding b{a, name.text};
        try {
            b.declare(_m.sig);
        } catch (const signature_error& e) {
            throw parse_error(name.line, name.col, e.what());
        }
        _m.instances.push_back(std::move(b));
    }

    void formula_section(const section& s, bool is_property) {
        auto hs = stream(s.header);
        hs.next();
        std::string name;
        if (hs.at(tok::ident)) name = hs.next().text;
        expect_end(hs);
        if (name.empty()) {
            if (is_property) token_stream::fail(hs.peek(), "a property needs a name");
            name = "axiom" + std::to_string(_m.axioms.size() + 1);
        }
        if (s.body.empty()) throw parse_error(s.header.number, 1, "'" + name + "' has no formula");
        const auto& first = s.body.front();
        const auto& last = s.body.back();
        auto body = _text.substr(first.offset, last.offset + last.text.size() - first.offset);
        auto f = parse_formula(body, _m.sig, env(first.number, 1));
        if (!granularity_ok(f, _m.delta))
            throw parse_error(first.number, 1, "'" + name + "' has a bound that is not a multiple of delta");
        auto& list = is_property ? _m.properties : _m.axioms;
        for (const auto& x : list)
            if (x.name == name) throw parse_error(s.header.number, 1, "'" + name + "' defined twice");
        list.push_back({name, f, first.number});
    }

    std::string_view _text;
    model_file _m;
};

} // namespace

model_file parse_model(std::string_view text) { return model_parser(text).run(); }

model_file load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

} // namespace tamtl
