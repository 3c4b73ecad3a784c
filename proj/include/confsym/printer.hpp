#pragma once

#include <string>

#include "confsym/expr.hpp"

namespace confsym {

// Canonical text form; stable under parse/print round trips.
std::string to_string(const Expr& e);

}  // namespace confsym
