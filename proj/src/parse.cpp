#include "confsym/parse.hpp"

#include <cctype>

namespace confsym {
namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        Expr e = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (consume('+')) {
                e = e + term();
            } else if (consume('-')) {
                e = e - term();
            } else {
                return e;
            }
        }
    }

    Expr term() {
        ExprList factors{unary()};
        auto collapse = [&factors]() {
            Expr e = factors.size() == 1 ? factors[0] : product(std::move(factors));
            factors.clear();
            return e;
        };
        for (;;) {
            if (consume('*')) {
                factors.push_back(unary());
            } else if (consume('/')) {
                Expr num = collapse();
                factors.push_back(quotient(std::move(num), unary()));
            } else {
                return collapse();
            }
        }
    }

    Expr unary() {
        if (consume('-')) return negate(unary());
        if (consume('+')) return unary();
        return postfix();
    }

    Expr postfix() {
        Expr base = atom();
        if (consume('^')) return power(std::move(base), unary());
        return base;
    }

    Expr atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("expected expression");
    }

    Expr number() {
        skip_ws();
        const size_t start = pos_;
        std::int64_t int_part = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            int_part = int_part * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            std::int64_t frac = 0, scale = 1;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                frac = frac * 10 + (text_[pos_] - '0');
                scale *= 10;
                ++pos_;
            }
            if (scale == 1 && pos_ == start + 1) fail("malformed number");
            return constant(Rational(int_part) + Rational(frac, scale));
        }
        if (pos_ == start) fail("malformed number");
        return constant(Rational(int_part));
    }

    Expr identifier() {
        skip_ws();
        const size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (peek() == '(') {
            ++pos_;
            Expr arg = expression();
            if (!consume(')')) fail("expected ')' after function argument");
            if (name == "sqrt") return power(std::move(arg), constant(Rational(1, 2)));
            if (auto f = find_func(name)) return apply(*f, std::move(arg));
            pos_ = start;
            fail("unknown function '" + std::string(name) + "'");
        }
        if (auto id = find_symbol(name)) return symbol(*id);
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace confsym
