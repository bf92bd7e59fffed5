#pragma once

#include <optional>

#include "liesym/jet.hpp"

namespace liesym {

/// Infinitesimal generator on the total space: one coefficient expression per
/// base coordinate (xi over independents, phi/eta over dependents). Missing
/// coordinates have coefficient 0.
struct VectorField {
  std::map<Atom, Expr> coeffs;

  static VectorField zero() { return {}; }
  Expr coeff(const Atom& z) const;
  VectorField& set(const Atom& z, Expr e);
  bool is_zero() const;
  VectorField plus(const VectorField& o) const;
  VectorField scaled(const Rat& c) const;
  bool operator==(const VectorField& o) const;

  /// "d/dx + T * d/dT" (DSL syntax) — deterministic.
  std::string dsl_text(const Context& ctx) const;
  /// "∂_x + T ∂_T" (report syntax).
  std::string pretty_text(const Context& ctx) const;
};

/// Point-field validation: coefficients may mention base coordinates and
/// parameters only (plus ansatz unknowns when `allow_unknowns`).
void validate_point_field(const Context& ctx, const VectorField& v, bool allow_unknowns = false);

/// Prolonged generator: base field plus one coefficient per jet coordinate of
/// order 1..order.
struct ProlongedField {
  VectorField base;
  int order = 0;
  std::map<Atom, Expr> jet_coeffs;
};

/// Characteristic Q^alpha = phi_alpha - sum_i xi_i * u^alpha_i.
std::map<Atom, Expr> characteristic(const Context& ctx, const VectorField& v);

/// Prolongation to order n >= 0 via the characteristic formula
/// phi^J_alpha = D_J Q^alpha + sum_i xi_i u^alpha_{J,i}.
ProlongedField prolong(const Context& ctx, const VectorField& v, int n);

/// First-order action of the field on a function of the base coordinates.
Expr apply_base(const Context& ctx, const VectorField& v, const Expr& e);

/// Directional derivative of e by the prolonged field; e may mention jet
/// atoms up to pv.order only.
Expr apply(const Context& ctx, const ProlongedField& pv, const Expr& e);

/// Lie bracket [v,w], coefficientwise v(w_z) - w(v_z).
VectorField lie_bracket(const Context& ctx, const VectorField& v, const VectorField& w);

/// Closed-form one-parameter group of a decoupled affine field: the image of
/// every base coordinate as an expression in the source coordinates and the
/// group parameter (exponential atoms allowed). Identity at eps = 0.
struct PointMap {
  Atom eps;
  std::map<Atom, Expr> images;

  Expr image(const Atom& z) const;
  /// (this ∘ inner): substitute inner's images into this map's expressions.
  PointMap after(const Context& ctx, const PointMap& inner) const;
  std::string text(const Context& ctx) const;  // "(x + eps, y, U, V, P, T)"
};

/// Exact flow; requires each coordinate's coefficient to be affine in that
/// coordinate alone with a rational linear part (translations and
/// exponential scalings). Anything else raises NotSupportedError.
PointMap flow(const Context& ctx, const VectorField& v, const Atom& eps);

/// Maximal set of polynomial coordinate invariants (fixed coordinates,
/// differences of jointly translated coordinates, products of oppositely
/// scaled shifted coordinates), each annihilated by the field. Same
/// decoupled-affine restriction as flow.
std::vector<Expr> invariants(const Context& ctx, const VectorField& v);

/// Transformed solution u1 = scale * func(args...) + offset.
struct TransformedSolution {
  std::string func;
  std::vector<Expr> args;
  Expr scale, offset;
  std::string text(const Context& ctx, const Atom& dep) const;  // "T1 = exp(-eps)*r(x, y)"
};

/// Push a symbolic solution tuple through the inverse group element: the
/// arguments take the direct coordinate images, the dependent map is applied
/// at the negated group parameter.
std::map<Atom, TransformedSolution> transform_solution(
    const Context& ctx, const PointMap& g, const std::map<Atom, std::string>& func_names);

/// eps -> -eps, mapping exponential atoms by rate negation.
Expr negate_group_param(const Expr& e, const Atom& eps);
/// eps -> 0 (exponential atoms in eps become 1).
Expr group_param_to_zero(const Expr& e, const Atom& eps);
/// eps -> eps1 + eps2 (exp(r*eps) -> exp(r*eps1)*exp(r*eps2)).
Expr group_param_to_sum(const Expr& e, const Atom& eps, const Atom& eps1, const Atom& eps2);

}  // namespace liesym
