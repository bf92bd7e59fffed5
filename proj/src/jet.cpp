#include "liesym/jet.hpp"

#include <algorithm>

namespace liesym {

Expr total_derivative(const Expr& e, const Atom& wrt) {
  if (wrt.kind() != SymKind::Independent || wrt.is_jet() || wrt.is_exp())
    throw ValidationError("total derivative requires an independent variable, got " +
                          wrt.text());
  Expr out = e.partial(wrt);
  for (const Atom& a : e.atoms()) {
    if (a.is_exp())
      throw ValidationError("total derivative over exponential atom " + a.text());
    if (a.kind() != SymKind::Dependent) continue;
    Atom shifted = Atom::jet(a.name(), a.index().plus(wrt.name()));
    out += Expr::atom(shifted) * e.partial(a);
  }
  return out;
}

Expr total_derivative(const Expr& e, const MultiIndex& J) {
  Expr out = e;
  for (const auto& [var, count] : J.entries()) {
    Atom v = Atom::symbol(SymKind::Independent, var);
    for (int i = 0; i < count; ++i) out = total_derivative(out, v);
  }
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(const std::vector<Atom>& vars, int n,
                                            bool include_zero) {
  std::vector<MultiIndex> out;
  std::vector<MultiIndex> frontier = {MultiIndex()};
  if (include_zero) out.push_back(MultiIndex());
  for (int order = 1; order <= n; ++order) {
    std::vector<MultiIndex> next;
    for (const auto& J : frontier)
      for (const auto& v : vars) next.push_back(J.plus(v.name()));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace liesym
