#pragma once

#include <random>

#include "liesym/dsl.hpp"
#include "liesym/vfield.hpp"

namespace liesym::testgen {

// Deterministic random values for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Rat rat(int lo = -5, int hi = 5, int dmax = 3) {
    Rat r(pick(lo, hi), pick(1, dmax));
    r.canonicalize();
    return r;
  }

  Rat nonzero_rat(int lo = -5, int hi = 5, int dmax = 3) {
    int n = pick(lo, hi);
    while (n == 0) n = pick(lo, hi);
    Rat r(n, pick(1, dmax));
    r.canonicalize();
    return r;
  }

  const Atom& choice(const std::vector<Atom>& atoms) { return atoms[pick(0, atoms.size() - 1)]; }

  Monomial monomial(const std::vector<Atom>& atoms, int maxdeg) {
    int deg = pick(0, maxdeg);
    Monomial m;
    for (int i = 0; i < deg; ++i) m = m.times(Monomial::atom(choice(atoms)));
    return m;
  }

  Expr poly(const std::vector<Atom>& atoms, int maxdeg, int maxterms) {
    Expr e;
    int terms = pick(0, maxterms);
    for (int i = 0; i < terms; ++i) e += Expr::monomial(rat(), monomial(atoms, maxdeg));
    return e;
  }

  Expr nonzero_poly(const std::vector<Atom>& atoms, int maxdeg, int maxterms) {
    for (int i = 0; i < 50; ++i) {
      Expr e = poly(atoms, maxdeg, maxterms);
      if (!e.is_zero()) return e;
    }
    return Expr(1L);
  }

  // Point field with polynomial coefficients over the base coordinates.
  VectorField field(const Context& ctx, int maxdeg = 1, int maxterms = 2) {
    VectorField f;
    std::vector<Atom> coords = ctx.base_coordinates();
    for (const auto& z : coords)
      if (pick(0, 1)) f.set(z, poly(coords, maxdeg, maxterms));
    return f;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Shared fixture context: x y | U V P T | nu k alpha (all nonzero).
struct Fixture {
  Context ctx;
  Atom x, y, U, V, P, T, nu, k, alpha;

  Fixture()
      : x(ctx.declare(SymKind::Independent, "x")),
        y(ctx.declare(SymKind::Independent, "y")),
        U(ctx.declare(SymKind::Dependent, "U")),
        V(ctx.declare(SymKind::Dependent, "V")),
        P(ctx.declare(SymKind::Dependent, "P")),
        T(ctx.declare(SymKind::Dependent, "T")),
        nu(ctx.declare(SymKind::Parameter, "nu", true)),
        k(ctx.declare(SymKind::Parameter, "k", true)),
        alpha(ctx.declare(SymKind::Parameter, "alpha", true)) {}

  Atom jet(const std::string& dep, const std::string& vars) const {
    MultiIndex idx;
    for (char c : vars) idx = idx.plus(std::string(1, c));
    return Atom::jet(dep, idx);
  }
  Expr j(const std::string& dep, const std::string& vars) const {
    return Expr::atom(jet(dep, vars));
  }
  Expr a(const Atom& at) const { return Expr::atom(at); }
};

// Random structured DSL specs for the parse/render round trip.
inline SourceSpec random_spec(Gen& g) {
  SourceSpec s;
  int ni = g.pick(1, 3), nd = g.pick(1, 3), np = g.pick(0, 2);
  for (int i = 0; i < ni; ++i) s.independents.push_back("x" + std::to_string(i));
  for (int i = 0; i < nd; ++i) s.dependents.push_back("u" + std::to_string(i));
  for (int i = 0; i < np; ++i) s.parameters.push_back({"p" + std::to_string(i), true});

  auto ident = [&]() -> std::string {
    int which = g.pick(0, ni + nd + np - 1);
    if (which < ni) return s.independents[which];
    if (which < ni + nd) return s.dependents[which - ni];
    return s.parameters[which - ni - nd].name;
  };
  std::function<ExprTree(int)> tree = [&](int depth) -> ExprTree {
    int kind = depth <= 0 ? g.pick(0, 2) : g.pick(0, 7);
    switch (kind) {
      case 0: return ExprTree::number(Rat(g.pick(0, 9)));
      case 1: return ExprTree::ident_ref(ident());
      case 2: {
        std::vector<std::string> vars;
        int nv = g.pick(1, 2);
        for (int i = 0; i < nv; ++i) vars.push_back(s.independents[g.pick(0, ni - 1)]);
        return ExprTree::jet_ref(s.dependents[g.pick(0, nd - 1)], vars);
      }
      case 3: return ExprTree::node(ExprTree::Op::Add, {tree(depth - 1), tree(depth - 1)});
      case 4: return ExprTree::node(ExprTree::Op::Sub, {tree(depth - 1), tree(depth - 1)});
      case 5: return ExprTree::node(ExprTree::Op::Mul, {tree(depth - 1), tree(depth - 1)});
      case 6: {
        if (np == 0) return ExprTree::node(ExprTree::Op::Neg, {tree(depth - 1)});
        ExprTree den = ExprTree::ident_ref(s.parameters[g.pick(0, np - 1)].name);
        return ExprTree::node(ExprTree::Op::Div, {tree(depth - 1), den});
      }
      default: return ExprTree::power(tree(depth - 1), g.pick(0, 3));
    }
  };

  int neq = g.pick(1, 3);
  for (int i = 0; i < neq; ++i) {
    SourceSpec::Equation eq;
    eq.lhs = tree(2);
    eq.rhs = tree(2);
    if (g.pick(0, 2) == 0) {
      std::vector<std::string> vars = {s.independents[g.pick(0, ni - 1)]};
      eq.leading = std::make_pair(s.dependents[g.pick(0, nd - 1)], vars);
    }
    s.equations.push_back(std::move(eq));
  }
  int nvf = g.pick(0, 2);
  for (int i = 0; i < nvf; ++i) {
    SourceSpec::VFieldDecl decl;
    decl.name = "w" + std::to_string(i);
    int nt = g.pick(1, 2);
    for (int t = 0; t < nt; ++t) {
      SourceSpec::VFieldTerm term;
      term.sign = g.pick(0, 1) ? 1 : -1;
      if (g.pick(0, 1)) term.coeff = tree(1);
      int which = g.pick(0, ni + nd - 1);
      term.coord = which < ni ? s.independents[which] : s.dependents[which - ni];
      decl.terms.push_back(std::move(term));
    }
    s.vfields.push_back(std::move(decl));
  }
  if (g.pick(0, 1)) s.options.push_back({"ansatz_degree", g.pick(0, 4)});
  if (g.pick(0, 1)) s.options.push_back({"prolong_order", g.pick(1, 3)});
  return s;
}

}  // namespace liesym::testgen
