#include "liesym/model.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace liesym {

namespace {

// Expression with a parameter-monomial denominator, for clearing "/ param".
struct Frac {
  Expr num;
  Monomial den;
};

Frac lower_tree(const Context& ctx, const ExprTree& t, bool allow_param_division) {
  switch (t.op) {
    case ExprTree::Op::Num:
      return {Expr(t.value), Monomial()};
    case ExprTree::Op::Ident: {
      const Atom* a = ctx.find(t.ident);
      if (!a) throw ValidationError("undeclared identifier " + t.ident);
      return {Expr::atom(*a), Monomial()};
    }
    case ExprTree::Op::Jet: {
      MultiIndex idx;
      for (const auto& v : t.jet_vars) idx = idx.plus(v);
      return {Expr::atom(Atom::jet(t.ident, idx)), Monomial()};
    }
    case ExprTree::Op::Add:
    case ExprTree::Op::Sub: {
      Frac a = lower_tree(ctx, t.kids[0], allow_param_division);
      Frac b = lower_tree(ctx, t.kids[1], allow_param_division);
      Monomial den = Monomial::lcm(a.den, b.den);
      Expr na = a.num * Expr::monomial(Rat(1), den.divide_exact(a.den));
      Expr nb = b.num * Expr::monomial(Rat(1), den.divide_exact(b.den));
      return {t.op == ExprTree::Op::Add ? na + nb : na - nb, den};
    }
    case ExprTree::Op::Mul: {
      Frac a = lower_tree(ctx, t.kids[0], allow_param_division);
      Frac b = lower_tree(ctx, t.kids[1], allow_param_division);
      return {a.num * b.num, a.den.times(b.den)};
    }
    case ExprTree::Op::Div: {
      Frac a = lower_tree(ctx, t.kids[0], allow_param_division);
      const ExprTree& d = t.kids[1];
      if (d.op == ExprTree::Op::Num) {
        if (d.value == 0) throw ValidationError("division by zero");
        return {a.num.scaled(Rat(1) / d.value), a.den};
      }
      const Atom* p = ctx.find(d.ident);
      if (!p || p->kind() != SymKind::Parameter)
        throw ValidationError("division is only allowed by a nonzero parameter, got " + d.ident);
      if (!ctx.nonzero(*p))
        throw ValidationError("division by parameter " + d.ident +
                              " requires it to be declared nonzero");
      if (!allow_param_division)
        throw ValidationError("parameter division is not allowed here (" + d.ident + ")");
      return {a.num, a.den.times(Monomial::atom(*p))};
    }
    case ExprTree::Op::Pow: {
      Frac a = lower_tree(ctx, t.kids[0], allow_param_division);
      return {a.num.pow(t.exponent), a.den.pow(t.exponent)};
    }
    case ExprTree::Op::Neg: {
      Frac a = lower_tree(ctx, t.kids[0], allow_param_division);
      return {-a.num, a.den};
    }
  }
  throw InternalError("unhandled tree node");
}

}  // namespace

const VectorField* Model::find_field(const std::string& name) const {
  for (const auto& [n, f] : fields)
    if (n == name) return &f;
  return nullptr;
}

VectorField Model::combination(const std::string& text) const {
  // tiny grammar: [coef '*'] (name | d/dCoord) (('+'|'-') ...)*
  VectorField out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  bool first = true;
  while (true) {
    skip_ws();
    if (i >= text.size()) {
      if (first) throw ValidationError("empty field expression");
      break;
    }
    Rat sign(1);
    if (text[i] == '+' || text[i] == '-') {
      if (text[i] == '-') sign = -1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw ValidationError("expected '+' or '-' in field expression at position " +
                            std::to_string(i));
    }
    std::string digits;
    while (i < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/'))
      digits += text[i++];
    Rat coef(1);
    if (!digits.empty()) {
      coef = rat_parse(digits);
      skip_ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip_ws();
      }
    }
    if (text.compare(i, 3, "d/d") == 0) {
      i += 3;
      std::string coord;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        coord += text[i++];
      const Atom* z = ctx.find(coord);
      if (!z || (z->kind() != SymKind::Independent && z->kind() != SymKind::Dependent))
        throw ValidationError("'" + coord + "' is not a base coordinate");
      VectorField unit;
      unit.set(*z, Expr(1L));
      out = out.plus(unit.scaled(sign * coef));
      first = false;
      continue;
    }
    std::string name;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      name += text[i++];
    if (name.empty())
      throw ValidationError("expected a field name in '" + text + "' at position " +
                            std::to_string(i));
    const VectorField* f = find_field(name);
    if (!f) throw ValidationError("unknown vector field '" + name + "'");
    out = out.plus(f->scaled(sign * coef));
    first = false;
  }
  return out;
}

Model build_model(const SourceSpec& spec) {
  Model m;
  m.spec = spec;
  for (const auto& n : spec.independents) m.ctx.declare(SymKind::Independent, n);
  for (const auto& n : spec.dependents) m.ctx.declare(SymKind::Dependent, n);
  for (const auto& p : spec.parameters) m.ctx.declare(SymKind::Parameter, p.name, p.nonzero);

  std::vector<Expr> equations;
  std::vector<std::optional<Atom>> leading;
  for (const auto& eq : spec.equations) {
    Frac l = lower_tree(m.ctx, eq.lhs, true);
    Frac r = lower_tree(m.ctx, eq.rhs, true);
    Monomial den = Monomial::lcm(l.den, r.den);
    Expr cleared = l.num * Expr::monomial(Rat(1), den.divide_exact(l.den)) -
                   r.num * Expr::monomial(Rat(1), den.divide_exact(r.den));
    if (cleared.is_zero())
      throw ValidationError("equation " + std::to_string(equations.size() + 1) +
                            " is identically zero");
    equations.push_back(cleared);
    if (eq.leading) {
      MultiIndex idx;
      for (const auto& v : eq.leading->second) idx = idx.plus(v);
      leading.push_back(Atom::jet(eq.leading->first, idx));
    } else {
      leading.push_back(std::nullopt);
    }
  }
  m.system = make_system(m.ctx, std::move(equations), leading);

  for (const auto& decl : spec.vfields) {
    VectorField f;
    for (const auto& term : decl.terms) {
      const Atom* coord = m.ctx.find(term.coord);
      if (!coord) throw ValidationError("undeclared coordinate " + term.coord);
      Expr coeff(1L);
      if (term.coeff) coeff = lower_tree(m.ctx, *term.coeff, false).num;
      f.set(*coord, f.coeff(*coord) + coeff.scaled(Rat(term.sign)));
    }
    validate_point_field(m.ctx, f);
    m.fields.push_back({decl.name, std::move(f)});
  }

  for (const auto& [name, value] : spec.options) {
    if (value < 0 || value > 6)
      throw ValidationError("option " + name + " out of range [0, 6]");
    if (name == "ansatz_degree") m.ansatz_degree = static_cast<int>(value);
    if (name == "prolong_order") m.prolong_order = static_cast<int>(value);
  }
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return build_model(parse_spec(buf.str()));
}

}  // namespace liesym
