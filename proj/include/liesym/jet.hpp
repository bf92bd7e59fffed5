#pragma once

#include "liesym/expr.hpp"

namespace liesym {

/// Total derivative D_wrt e = de/dwrt + sum over jet atoms u present in e of
/// u_{J+wrt} * de/du_J (order-0 dependent symbols included). `wrt` must be an
/// independent variable and e must be free of exponential atoms.
Expr total_derivative(const Expr& e, const Atom& wrt);

/// Iterated total derivative D_J; well defined in any order because total
/// derivatives commute.
Expr total_derivative(const Expr& e, const MultiIndex& J);

/// All multi-indices over `vars` with 1 <= order <= n (or including 0 when
/// `include_zero`), in canonical (graded, then lexicographic) order.
std::vector<MultiIndex> multi_indices_up_to(const std::vector<Atom>& vars, int n,
                                            bool include_zero = false);

}  // namespace liesym
