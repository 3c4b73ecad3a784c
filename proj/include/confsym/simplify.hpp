#pragma once

#include "confsym/expr.hpp"

namespace confsym {

// Rewrites to the canonical form: negations and quotients become products and
// negative powers, sums and products are flattened and sorted under the fixed
// total order, like terms and like bases are combined with exact rational
// arithmetic, products distribute over sums, and zero summands / unit factors
// disappear. Idempotent and value-preserving wherever both sides are defined.
Expr simplify(const Expr& e);

}  // namespace confsym
