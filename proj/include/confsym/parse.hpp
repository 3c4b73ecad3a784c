#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "confsym/expr.hpp"

namespace confsym {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
    size_t position;
};

// Parses infix expression text over the fixed symbol alphabet.
// Grammar: + - * / ^ with usual precedence, ^ right-associative and binding
// tighter than unary minus; decimal and integer literals; sqrt/sin/cos/exp/log
// calls (sqrt(e) is sugar for e^(1/2)).
Expr parse(std::string_view text);

}  // namespace confsym
