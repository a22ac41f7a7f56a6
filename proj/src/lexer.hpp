#pragma once

#include <string>
#include <string_view>
#include <algorithm>
#include <vector>

#include "tamtl/parser.hpp"

namespace tamtl::detail {

enum class tok : unsigned char {
    ident,
    number,
    lparen,
    rparen,
    lbrack,
    rbrack,
    lbrace,
    rbrace,
    comma,
    colon,
    eq,
    neq,
    lt,
    le,
    gt,
    ge,
    bang,
    and_,
    or_,
    arrow,
    darrow,
    plus,
    minus,
    star,
    slash,
    end,
};

struct token {
    tok kind;
    std::string text;
    int line;
    int col;
};

// Splits text into tokens; '#' starts a comment running to the end of line.
std::vector<token> lex(std::string_view text, int line = 1, int col = 1);

std::string describe(const token& t);

class token_stream {
public:
    token_stream(std::vector<token> toks, const formula_env& env) : _t(std::move(toks)), _env(env) {}

    const token& peek(std::size_t ahead = 0) const { return _t[std::min(_i + ahead, _t.size() - 1)]; }
    bool at(tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
    const token& next() {
        const auto& t = _t[_i];
        if (_i + 1 < _t.size()) ++_i;
        return t;
    }
    bool accept(tok k) {
        if (!at(k)) return false;
        next();
        return true;
    }
    const token& expect(tok k, const char* what) {
        if (!at(k)) fail(peek(), std::string("expected ") + what + ", found " + detail::describe(peek()));
        return next();
    }
    [[noreturn]] static void fail(const token& t, const std::string& msg) { throw parse_error(t.line, t.col, msg); }

    // Index of the token closing the group opened at offset `ahead`.
    std::size_t matching_close(std::size_t ahead, bool* top_level_comma) const {
        int depth = 0;
        for (std::size_t j = _i + ahead; j < _t.size(); ++j) {
            auto k = _t[j].kind;
            if (k == tok::lparen || k == tok::lbrack || k == tok::lbrace) ++depth;
            else if (k == tok::rparen || k == tok::rbrack || k == tok::rbrace) {
                if (--depth == 0) return j - _i;
            } else if (k == tok::comma && depth == 1 && top_level_comma) {
                *top_level_comma = true;
            } else if (k == tok::end) {
                break;
            }
        }
        return std::string::npos;
    }

    // sum := term (('+'|'-') term)*
    rational expr() {
        rational v = term();
        for (;;) {
            if (accept(tok::plus)) v += term();
            else if (accept(tok::minus)) v -= term();
            else return v;
        }
    }

    const formula_env& env() const { return _env; }

private:
    rational term() {
        rational v = factor();
        for (;;) {
            if (accept(tok::star)) {
                v *= factor();
            } else if (at(tok::slash)) {
                const auto& t = next();
                auto d = factor();
                if (d == rational(0)) fail(t, "division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    rational factor() {
        const auto& t = peek();
        if (accept(tok::minus)) return -factor();
        if (accept(tok::lparen)) {
            auto v = expr();
            expect(tok::rparen, "')'");
            return v;
        }
        if (t.kind == tok::number) {
            next();
            return parse_rational(t.text);
        }
        if (t.kind == tok::ident) {
            next();
            if (_env.constants) {
                auto it = _env.constants->find(t.text);
                if (it != _env.constants->end()) return it->second;
            }
            if (t.text == "delta" && _env.delta) return *_env.delta;
            fail(t, "unknown constant '" + t.text + "'");
        }
        fail(t, "expected a number, found " + detail::describe(t));
    }

    std::vector<token> _t;
    std::size_t _i{0};
    formula_env _env;
};


} // namespace tamtl::detail
