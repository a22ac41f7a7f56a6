#include "lexer.hpp"

#include <cctype>

namespace tamtl::detail {

std::vector<token> lex(std::string_view text, int line, int col) {
    std::vector<token> out;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t j = 0; j < n; ++j) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto emit = [&](tok k, std::size_t n) {
        out.push_back({k, std::string(text.substr(i, n)), line, col});
        advance(n);
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t n = 1;
            while (i + n < text.size() && (std::isalnum(static_cast<unsigned char>(text[i + n])) || text[i + n] == '_')) ++n;
            emit(tok::ident, n);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t n = 1;
            while (i + n < text.size() && std::isdigit(static_cast<unsigned char>(text[i + n]))) ++n;
            if (i + n + 1 < text.size() && text[i + n] == '.' && std::isdigit(static_cast<unsigned char>(text[i + n + 1]))) {
                ++n;
                while (i + n < text.size() && std::isdigit(static_cast<unsigned char>(text[i + n]))) ++n;
            }
            emit(tok::number, n);
            continue;
        }
        auto two = text.substr(i, 2);
        auto three = text.substr(i, 3);
        if (three == "<->") { emit(tok::darrow, 3); continue; }
        if (two == "->") { emit(tok::arrow, 2); continue; }
        if (two == "!=") { emit(tok::neq, 2); continue; }
        if (two == "<=") { emit(tok::le, 2); continue; }
        if (two == ">=") { emit(tok::ge, 2); continue; }
        if (two == "&&") { emit(tok::and_, 2); continue; }
        if (two == "||") { emit(tok::or_, 2); continue; }
        switch (c) {
        case '(': emit(tok::lparen, 1); continue;
        case ')': emit(tok::rparen, 1); continue;
        case '[': emit(tok::lbrack, 1); continue;
        case ']': emit(tok::rbrack, 1); continue;
        case '{': emit(tok::lbrace, 1); continue;
        case '}': emit(tok::rbrace, 1); continue;
        case ',': emit(tok::comma, 1); continue;
        case ':': emit(tok::colon, 1); continue;
        case '=': emit(tok::eq, 1); continue;
        case '<': emit(tok::lt, 1); continue;
        case '>': emit(tok::gt, 1); continue;
        case '!': emit(tok::bang, 1); continue;
        case '+': emit(tok::plus, 1); continue;
        case '-': emit(tok::minus, 1); continue;
        case '*': emit(tok::star, 1); continue;
        case '/': emit(tok::slash, 1); continue;
        default: break;
        }
        throw parse_error(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({tok::end, "", line, col});
    return out;
}

std::string describe(const token& t) {
    if (t.kind == tok::end) return "end of input";
    return "'" + t.text + "'";
}

} // namespace tamtl::detail
