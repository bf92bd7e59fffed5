#include "liesym/vfield.hpp"

#include <algorithm>

namespace liesym {

namespace {

bool is_base_coordinate(const Atom& a) {
  return !a.is_jet() && !a.is_exp() &&
         (a.kind() == SymKind::Independent || a.kind() == SymKind::Dependent);
}

// One summand "coeff * op"; `negative` reports a leading minus pulled out.
std::string coeff_text(Expr e, const std::string& op, bool star, bool* negative) {
  *negative = false;
  if (e.term_count() == 1) {
    const auto& [m, c] = *e.terms().begin();
    if (c < 0) {
      *negative = true;
      e = -e;
    }
    (void)m;
  }
  if (e == Expr(1L)) return op;
  std::string c = e.text();
  if (e.term_count() > 1) c = "(" + c + ")";
  return c + (star ? " * " : " ") + op;
}

std::string join_field_terms(const Context& ctx, const VectorField& v, const std::string& op_prefix,
                             bool star) {
  std::string out;
  for (const auto& z : ctx.base_coordinates()) {
    Expr c = v.coeff(z);
    if (c.is_zero()) continue;
    bool negative = false;
    std::string piece = coeff_text(c, op_prefix + z.name(), star, &negative);
    if (out.empty())
      out = (negative ? "-" : "") + piece;
    else
      out += (negative ? " - " : " + ") + piece;
  }
  return out.empty() ? "0" : out;
}

}  // namespace

Expr VectorField::coeff(const Atom& z) const {
  auto it = coeffs.find(z);
  return it == coeffs.end() ? Expr() : it->second;
}

VectorField& VectorField::set(const Atom& z, Expr e) {
  if (e.is_zero())
    coeffs.erase(z);
  else
    coeffs[z] = std::move(e);
  return *this;
}

bool VectorField::is_zero() const {
  for (const auto& [z, e] : coeffs)
    if (!e.is_zero()) return false;
  return true;
}

VectorField VectorField::plus(const VectorField& o) const {
  VectorField out = *this;
  for (const auto& [z, e] : o.coeffs) out.set(z, out.coeff(z) + e);
  return out;
}

VectorField VectorField::scaled(const Rat& c) const {
  VectorField out;
  for (const auto& [z, e] : coeffs) out.set(z, e.scaled(c));
  return out;
}

bool VectorField::operator==(const VectorField& o) const {
  for (const auto& [z, e] : coeffs)
    if (!(o.coeff(z) == e)) return false;
  for (const auto& [z, e] : o.coeffs)
    if (!(coeff(z) == e)) return false;
  return true;
}

std::string VectorField::dsl_text(const Context& ctx) const {
  return join_field_terms(ctx, *this, "d/d", true);
}

std::string VectorField::pretty_text(const Context& ctx) const {
  return join_field_terms(ctx, *this, "∂_", false);
}

void validate_point_field(const Context& ctx, const VectorField& v, bool allow_unknowns) {
  for (const auto& [z, e] : v.coeffs) {
    if (!is_base_coordinate(z))
      throw ValidationError("vector field coordinate is not a base coordinate: " + z.text());
    if (!ctx.is_declared(z.name()))
      throw ValidationError("vector field over undeclared coordinate " + z.name());
    for (const Atom& a : e.atoms()) {
      bool ok = is_base_coordinate(a) || a.kind() == SymKind::Parameter ||
                (allow_unknowns && a.kind() == SymKind::Unknown);
      if (!ok)
        throw ValidationError("point-field coefficient of " + z.name() +
                              " mentions non-point atom " + a.text());
    }
  }
}

std::map<Atom, Expr> characteristic(const Context& ctx, const VectorField& v) {
  std::map<Atom, Expr> out;
  for (const auto& dep : ctx.dependents()) {
    Expr q = v.coeff(dep);
    for (const auto& x : ctx.independents()) {
      Atom first = Atom::jet(dep.name(), MultiIndex::single(x.name()));
      q -= v.coeff(x) * Expr::atom(first);
    }
    out[dep] = q;
  }
  return out;
}

ProlongedField prolong(const Context& ctx, const VectorField& v, int n) {
  if (n < 0) throw ValidationError("prolongation order must be >= 0");
  ProlongedField out;
  out.base = v;
  out.order = n;
  auto q = characteristic(ctx, v);
  for (const auto& dep : ctx.dependents()) {
    for (const auto& J : multi_indices_up_to(ctx.independents(), n)) {
      Expr coeff = total_derivative(q[dep], J);
      for (const auto& x : ctx.independents())
        coeff += v.coeff(x) * Expr::atom(Atom::jet(dep.name(), J.plus(x.name())));
      out.jet_coeffs[Atom::jet(dep.name(), J)] = coeff;
    }
  }
  return out;
}

Expr apply_base(const Context& ctx, const VectorField& v, const Expr& e) {
  (void)ctx;
  Expr out;
  for (const auto& [z, c] : v.coeffs) out += c * e.partial(z);
  return out;
}

Expr apply(const Context& ctx, const ProlongedField& pv, const Expr& e) {
  for (const Atom& a : e.atoms())
    if (a.is_jet() && a.jet_order() > pv.order)
      throw ValidationError("expression mentions " + a.text() + " beyond prolongation order " +
                            std::to_string(pv.order));
  Expr out = apply_base(ctx, pv.base, e);
  for (const auto& [u, c] : pv.jet_coeffs) out += c * e.partial(u);
  return out;
}

VectorField lie_bracket(const Context& ctx, const VectorField& v, const VectorField& w) {
  VectorField out;
  for (const auto& z : ctx.base_coordinates())
    out.set(z, apply_base(ctx, v, w.coeff(z)) - apply_base(ctx, w, v.coeff(z)));
  return out;
}

Expr PointMap::image(const Atom& z) const {
  auto it = images.find(z);
  return it == images.end() ? Expr::atom(z) : it->second;
}

PointMap PointMap::after(const Context& ctx, const PointMap& inner) const {
  std::map<Atom, Expr> bind;
  for (const auto& z : ctx.base_coordinates()) bind[z] = inner.image(z);
  PointMap out;
  out.eps = eps;
  for (const auto& z : ctx.base_coordinates()) out.images[z] = image(z).substitute(bind);
  return out;
}

std::string PointMap::text(const Context& ctx) const {
  std::string out = "(";
  bool first = true;
  for (const auto& z : ctx.base_coordinates()) {
    if (!first) out += ", ";
    first = false;
    out += image(z).text();
  }
  return out + ")";
}

namespace {

// Decomposes a coefficient as a + b*z with b rational and a free of every
// base coordinate; throws NotSupportedError otherwise.
struct AffineCoeff {
  Expr a;
  Rat b;
};

AffineCoeff affine_in_own_coordinate(const Context& ctx, const Atom& z, const Expr& c) {
  for (const Atom& a : c.atoms()) {
    if (is_base_coordinate(a) && !(a == z))
      throw NotSupportedError("coefficient of " + z.name() + " depends on " + a.name() +
                              "; only decoupled affine fields are supported");
    if (a.is_jet() || a.is_exp())
      throw NotSupportedError("coefficient of " + z.name() + " mentions " + a.text());
  }
  (void)ctx;
  auto parts = c.collect(std::set<Atom>{z});
  AffineCoeff out;
  out.b = 0;
  for (const auto& [m, e] : parts) {
    int d = m.exponent_of(z);
    if (d == 0) {
      out.a = e;
    } else if (d == 1) {
      if (!e.is_constant())
        throw NotSupportedError("linear part of the coefficient of " + z.name() +
                                " is not a rational constant");
      out.b = e.constant_value();
    } else {
      throw NotSupportedError("coefficient of " + z.name() +
                              " is nonlinear; only decoupled affine fields are supported");
    }
  }
  return out;
}

}  // namespace

PointMap flow(const Context& ctx, const VectorField& v, const Atom& eps) {
  if (eps.kind() != SymKind::GroupParam || eps.is_exp())
    throw ValidationError("flow parameter must be a group parameter");
  validate_point_field(ctx, v);
  PointMap out;
  out.eps = eps;
  Expr e = Expr::atom(eps);
  for (const auto& z : ctx.base_coordinates()) {
    Expr c = v.coeff(z);
    if (c.is_zero()) {
      out.images[z] = Expr::atom(z);
      continue;
    }
    AffineCoeff ac = affine_in_own_coordinate(ctx, z, c);
    if (ac.b == 0) {
      out.images[z] = Expr::atom(z) + ac.a * e;
    } else {
      Expr growth = Expr::atom(Atom::exponential(eps.name(), ac.b));
      Rat inv_b = Rat(1) / ac.b;
      out.images[z] = Expr::atom(z) * growth + ac.a.scaled(inv_b) * (growth - Expr(1L));
    }
  }
  return out;
}

std::vector<Expr> invariants(const Context& ctx, const VectorField& v) {
  validate_point_field(ctx, v);
  const auto coords = ctx.base_coordinates();

  struct Moving {
    std::size_t pos;
    Atom z;
    AffineCoeff c;
  };
  std::vector<Moving> translated, scaled;
  // (primary coordinate position, secondary position, invariant)
  std::vector<std::tuple<std::size_t, std::size_t, Expr>> found;

  for (std::size_t i = 0; i < coords.size(); ++i) {
    Expr c = v.coeff(coords[i]);
    if (c.is_zero()) {
      found.emplace_back(i, i, Expr::atom(coords[i]));
      continue;
    }
    AffineCoeff ac = affine_in_own_coordinate(ctx, coords[i], c);
    (ac.b == 0 ? translated : scaled).push_back({i, coords[i], ac});
  }

  // Jointly translated coordinates: a*z0 - a0*z is annihilated.
  for (std::size_t k = 1; k < translated.size(); ++k) {
    const auto& ref = translated[0];
    const auto& cur = translated[k];
    Expr inv = cur.c.a * Expr::atom(ref.z) - ref.c.a * Expr::atom(cur.z);
    found.emplace_back(ref.pos, cur.pos, inv);
  }

  // Oppositely scaled shifted coordinates: (z_i + a_i/b_i)^m (z_j + a_j/b_j)^n
  // with m*b_i + n*b_j = 0, m,n positive integers.
  for (std::size_t k = 1; k < scaled.size(); ++k) {
    for (std::size_t r = 0; r < k; ++r) {
      if (sgn(scaled[r].c.b) == sgn(scaled[k].c.b)) continue;
      Rat ratio = -scaled[k].c.b / scaled[r].c.b;  // m/n, positive
      auto m = ratio.get_num();
      auto n = ratio.get_den();
      if (!m.fits_sint_p() || !n.fits_sint_p()) continue;
      auto shifted = [](const Moving& mv) {
        return Expr::atom(mv.z) + mv.c.a.scaled(Rat(1) / mv.c.b);
      };
      Expr inv = shifted(scaled[r]).pow(static_cast<int>(m.get_si())) *
                 shifted(scaled[k]).pow(static_cast<int>(n.get_si()));
      found.emplace_back(scaled[r].pos, scaled[k].pos, inv);
      break;
    }
  }

  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) {
              if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
              return std::get<1>(a) < std::get<1>(b);
            });
  std::vector<Expr> out;
  for (auto& [p, s, e] : found) {
    if (!apply_base(ctx, v, e).is_zero())
      throw InternalError("invariant candidate not annihilated: " + e.text());
    out.push_back(std::move(e));
  }
  return out;
}

Expr negate_group_param(const Expr& e, const Atom& eps) {
  std::map<Atom, Expr> bind;
  bind[eps] = -Expr::atom(eps);
  for (const Atom& a : e.atoms())
    if (a.is_exp() && a.name() == eps.name())
      bind[a] = Expr::atom(Atom::exponential(eps.name(), -a.rate()));
  return e.substitute(bind);
}

Expr group_param_to_zero(const Expr& e, const Atom& eps) {
  std::map<Atom, Expr> bind;
  bind[eps] = Expr();
  for (const Atom& a : e.atoms())
    if (a.is_exp() && a.name() == eps.name()) bind[a] = Expr(1L);
  return e.substitute(bind);
}

Expr group_param_to_sum(const Expr& e, const Atom& eps, const Atom& eps1, const Atom& eps2) {
  std::map<Atom, Expr> bind;
  bind[eps] = Expr::atom(eps1) + Expr::atom(eps2);
  for (const Atom& a : e.atoms())
    if (a.is_exp() && a.name() == eps.name())
      bind[a] = Expr::atom(Atom::exponential(eps1.name(), a.rate())) *
                Expr::atom(Atom::exponential(eps2.name(), a.rate()));
  return e.substitute(bind);
}

std::string TransformedSolution::text(const Context& ctx, const Atom& dep) const {
  (void)ctx;
  std::string call = func + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) call += ", ";
    call += args[i].text();
  }
  call += ")";
  std::string rhs;
  if (scale == Expr(1L))
    rhs = call;
  else if (scale.term_count() == 1)
    rhs = scale.text() + "*" + call;
  else
    rhs = "(" + scale.text() + ")*" + call;
  if (!offset.is_zero()) {
    std::string off = offset.text();
    if (!off.empty() && off[0] == '-')
      rhs += " - " + Expr(-offset).text();
    else
      rhs += " + " + off;
  }
  return dep.name() + "1 = " + rhs;
}

std::map<Atom, TransformedSolution> transform_solution(
    const Context& ctx, const PointMap& g, const std::map<Atom, std::string>& func_names) {
  std::map<Atom, Expr> indep_images;
  std::vector<Expr> args;
  for (const auto& x : ctx.independents()) {
    indep_images[x] = g.image(x);
    args.push_back(g.image(x));
  }
  std::map<Atom, TransformedSolution> out;
  for (const auto& w : ctx.dependents()) {
    Expr e = negate_group_param(g.image(w), g.eps).substitute(indep_images);
    auto parts = e.collect(std::set<Atom>{w});
    TransformedSolution ts;
    auto it = func_names.find(w);
    ts.func = it == func_names.end() ? w.name() : it->second;
    ts.args = args;
    for (const auto& [m, ce] : parts) {
      int d = m.exponent_of(w);
      if (d == 0)
        ts.offset = ce;
      else if (d == 1)
        ts.scale = ce;
      else
        throw NotSupportedError("group image of " + w.name() + " is not affine");
    }
    if (ts.scale.is_zero())
      throw NotSupportedError("group image of " + w.name() + " does not involve " + w.name());
    out[w] = std::move(ts);
  }
  return out;
}

}  // namespace liesym
