#include <doctest.h>

#include "support/gen.hpp"

using namespace liesym;
using testgen::Fixture;
using testgen::Gen;

namespace {

struct Fields {
  Fixture f;
  VectorField v1, v2, v3, v4;
  Fields() {
    v1.set(f.x, Expr(1L));
    v2.set(f.y, Expr(1L));
    v3.set(f.T, Expr(1L));
    v4.set(f.T, f.a(f.T));
  }
};

Atom eps_atom() { return Atom::symbol(SymKind::GroupParam, "eps"); }

}  // namespace

TEST_CASE("characteristics") {
  Fields s;
  auto q1 = characteristic(s.f.ctx, s.v1);
  CHECK(q1.at(s.f.U) == -s.f.j("U", "x"));
  CHECK(q1.at(s.f.V) == -s.f.j("V", "x"));
  CHECK(q1.at(s.f.P) == -s.f.j("P", "x"));
  CHECK(q1.at(s.f.T) == -s.f.j("T", "x"));

  auto q4 = characteristic(s.f.ctx, s.v4);
  CHECK(q4.at(s.f.U).is_zero());
  CHECK(q4.at(s.f.T) == s.f.a(s.f.T));

  VectorField xscale;
  xscale.set(s.f.x, s.f.a(s.f.x));
  CHECK(characteristic(s.f.ctx, xscale).at(s.f.U) == -s.f.a(s.f.x) * s.f.j("U", "x"));
}

TEST_CASE("prolongation by the characteristic formula") {
  Fields s;
  ProlongedField p3 = prolong(s.f.ctx, s.v3, 2);
  for (const auto& [u, c] : p3.jet_coeffs) CHECK(c.is_zero());

  ProlongedField p4 = prolong(s.f.ctx, s.v4, 2);
  CHECK(p4.jet_coeffs.at(s.f.jet("T", "yy")) == s.f.j("T", "yy"));
  CHECK(p4.jet_coeffs.at(s.f.jet("T", "x")) == s.f.j("T", "x"));
  CHECK(p4.jet_coeffs.at(s.f.jet("U", "xy")).is_zero());
}

TEST_CASE("prolongation agrees with the recursive formula") {
  // phi^{J,i} = D_i phi^J - sum_j (D_i xi_j) u^alpha_{J,j}
  Fields s;
  Gen g(31);
  for (int trial = 0; trial < 50; ++trial) {
    VectorField v = g.field(s.f.ctx, 2, 2);
    ProlongedField pv = prolong(s.f.ctx, v, 2);
    for (const auto& dep : s.f.ctx.dependents()) {
      for (const auto& xi : s.f.ctx.independents()) {
        // first order from zeroth
        Expr direct = pv.jet_coeffs.at(Atom::jet(dep.name(), MultiIndex::single(xi.name())));
        Expr rec = total_derivative(v.coeff(dep), xi);
        for (const auto& xj : s.f.ctx.independents())
          rec -= total_derivative(v.coeff(xj), xi) *
                 Expr::atom(Atom::jet(dep.name(), MultiIndex::single(xj.name())));
        CHECK(direct == rec);
        // second order from first
        for (const auto& xi2 : s.f.ctx.independents()) {
          MultiIndex j2 = MultiIndex::single(xi.name()).plus(xi2.name());
          Expr direct2 = pv.jet_coeffs.at(Atom::jet(dep.name(), j2));
          Expr rec2 = total_derivative(direct, xi2);
          for (const auto& xj : s.f.ctx.independents())
            rec2 -= total_derivative(v.coeff(xj), xi2) *
                    Expr::atom(Atom::jet(dep.name(), MultiIndex::single(xi.name()).plus(xj.name())));
          CHECK(direct2 == rec2);
        }
      }
    }
  }
}

TEST_CASE("lie bracket basics and properties") {
  Fields s;
  CHECK(lie_bracket(s.f.ctx, s.v3, s.v4) == s.v3);
  CHECK(lie_bracket(s.f.ctx, s.v1, s.v2).is_zero());

  Gen g(32);
  for (int i = 0; i < 100; ++i) {
    VectorField a = g.field(s.f.ctx, 1, 2), b = g.field(s.f.ctx, 1, 2),
                c = g.field(s.f.ctx, 1, 2);
    CHECK(lie_bracket(s.f.ctx, a, a).is_zero());
    CHECK(lie_bracket(s.f.ctx, a, b) == lie_bracket(s.f.ctx, b, a).scaled(Rat(-1)));
    VectorField jac = lie_bracket(s.f.ctx, a, lie_bracket(s.f.ctx, b, c))
                          .plus(lie_bracket(s.f.ctx, b, lie_bracket(s.f.ctx, c, a)))
                          .plus(lie_bracket(s.f.ctx, c, lie_bracket(s.f.ctx, a, b)));
    CHECK(jac.is_zero());
  }
}

TEST_CASE("prolongation is linear") {
  Fields s;
  Gen g(33);
  for (int i = 0; i < 100; ++i) {
    VectorField v = g.field(s.f.ctx, 1, 2), w = g.field(s.f.ctx, 1, 2);
    Rat a = g.rat(), b = g.rat();
    VectorField combo = v.scaled(a).plus(w.scaled(b));
    ProlongedField pc = prolong(s.f.ctx, combo, 2);
    ProlongedField pv = prolong(s.f.ctx, v, 2);
    ProlongedField pw = prolong(s.f.ctx, w, 2);
    for (const auto& [u, c] : pc.jet_coeffs)
      CHECK(c == pv.jet_coeffs.at(u).scaled(a) + pw.jet_coeffs.at(u).scaled(b));
  }
}

TEST_CASE("prolongation respects brackets at order 2") {
  Fields s;
  Gen g(34);
  for (int i = 0; i < 40; ++i) {
    VectorField v = g.field(s.f.ctx, 1, 1), w = g.field(s.f.ctx, 1, 1);
    ProlongedField pv = prolong(s.f.ctx, v, 3);
    ProlongedField pw = prolong(s.f.ctx, w, 3);
    ProlongedField pb = prolong(s.f.ctx, lie_bracket(s.f.ctx, v, w), 2);
    // compare actions on every coordinate of the order-2 jet space
    std::vector<Expr> coords;
    for (const auto& z : s.f.ctx.base_coordinates()) coords.push_back(Expr::atom(z));
    for (const auto& [u, c] : pb.jet_coeffs) coords.push_back(Expr::atom(u));
    for (const Expr& z : coords) {
      Expr lhs = apply(s.f.ctx, pb, z);
      Expr rhs = apply(s.f.ctx, pv, apply(s.f.ctx, pw, z)) -
                 apply(s.f.ctx, pw, apply(s.f.ctx, pv, z));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("apply") {
  Fields s;
  Expr cont = s.f.j("U", "x") + s.f.j("V", "y");
  CHECK(apply(s.f.ctx, prolong(s.f.ctx, s.v3, 2), cont).is_zero());

  Expr energy = s.f.a(s.f.U) * s.f.j("T", "x") + s.f.a(s.f.V) * s.f.j("T", "y") -
                s.f.a(s.f.alpha) * s.f.j("T", "yy");
  CHECK(apply(s.f.ctx, prolong(s.f.ctx, s.v4, 2), energy) == energy);

  CHECK(apply(s.f.ctx, prolong(s.f.ctx, s.v4, 2), Expr(7L)).is_zero());
  CHECK_THROWS_AS(apply(s.f.ctx, prolong(s.f.ctx, s.v4, 1), energy), ValidationError);
}

TEST_CASE("flows of the basis fields") {
  Fields s;
  Atom eps = eps_atom();
  PointMap g1 = flow(s.f.ctx, s.v1, eps);
  CHECK(g1.image(s.f.x) == s.f.a(s.f.x) + Expr::atom(eps));
  CHECK(g1.image(s.f.y) == s.f.a(s.f.y));
  CHECK(g1.image(s.f.T) == s.f.a(s.f.T));

  PointMap g4 = flow(s.f.ctx, s.v4, eps);
  CHECK(g4.image(s.f.T) == s.f.a(s.f.T) * Expr::atom(Atom::exponential("eps", Rat(1))));
  CHECK(g4.image(s.f.U) == s.f.a(s.f.U));

  PointMap ident = flow(s.f.ctx, VectorField::zero(), eps);
  for (const auto& z : s.f.ctx.base_coordinates()) CHECK(ident.image(z) == Expr::atom(z));

  // affine coefficient: dT/deps = 2T + nu
  VectorField aff;
  aff.set(s.f.T, Expr(2L) * s.f.a(s.f.T) + s.f.a(s.f.nu));
  PointMap ga = flow(s.f.ctx, aff, eps);
  Expr e2 = Expr::atom(Atom::exponential("eps", Rat(2)));
  CHECK(ga.image(s.f.T) ==
        s.f.a(s.f.T) * e2 + s.f.a(s.f.nu).scaled(Rat(1, 2)) * (e2 - Expr(1L)));

  VectorField coupled;
  coupled.set(s.f.x, s.f.a(s.f.U));
  CHECK_THROWS_AS(flow(s.f.ctx, coupled, eps), NotSupportedError);
  VectorField quad;
  quad.set(s.f.T, s.f.a(s.f.T) * s.f.a(s.f.T));
  CHECK_THROWS_AS(flow(s.f.ctx, quad, eps), NotSupportedError);
}

TEST_CASE("flow group law and derivative at zero") {
  Fields s;
  Atom eps = eps_atom();
  Atom e1 = Atom::symbol(SymKind::GroupParam, "eps1");
  Atom e2 = Atom::symbol(SymKind::GroupParam, "eps2");
  VectorField aff;
  aff.set(s.f.x, Expr(3L));
  aff.set(s.f.T, Expr(2L) * s.f.a(s.f.T) + Expr(1L));
  for (const VectorField* v : {&s.v1, &s.v2, &s.v3, &s.v4, &aff}) {
    PointMap f1 = flow(s.f.ctx, *v, e1);
    PointMap f2 = flow(s.f.ctx, *v, e2);
    PointMap comp = f1.after(s.f.ctx, f2);
    PointMap sum = flow(s.f.ctx, *v, eps);
    for (const auto& z : s.f.ctx.base_coordinates()) {
      Expr expected = group_param_to_sum(sum.image(z), eps, e1, e2);
      CHECK(comp.image(z) == expected);
    }
    // d/deps at eps = 0 recovers the coefficients
    PointMap g = flow(s.f.ctx, *v, eps);
    for (const auto& z : s.f.ctx.base_coordinates()) {
      Expr deriv = group_param_to_zero(g.image(z).partial(eps), eps);
      CHECK(deriv == v->coeff(z));
    }
    // identity at eps = 0
    for (const auto& z : s.f.ctx.base_coordinates())
      CHECK(group_param_to_zero(g.image(z), eps) == Expr::atom(z));
  }
}

TEST_CASE("invariants") {
  Fields s;
  auto inv1 = invariants(s.f.ctx, s.v1);
  REQUIRE(inv1.size() == 5);
  CHECK(inv1[0] == s.f.a(s.f.y));
  CHECK(inv1[1] == s.f.a(s.f.U));
  CHECK(inv1[4] == s.f.a(s.f.T));

  auto inv4 = invariants(s.f.ctx, s.v4);
  REQUIRE(inv4.size() == 5);
  CHECK(inv4[0] == s.f.a(s.f.x));
  CHECK(inv4[4] == s.f.a(s.f.P));

  VectorField diag = s.v1.plus(s.v2);
  auto invd = invariants(s.f.ctx, diag);
  REQUIRE(invd.size() == 5);
  CHECK(invd[0] == s.f.a(s.f.x) - s.f.a(s.f.y));
  for (const auto& e : invd) CHECK(apply_base(s.f.ctx, diag, e).is_zero());

  VectorField coupled;
  coupled.set(s.f.x, s.f.a(s.f.U));
  CHECK_THROWS_AS(invariants(s.f.ctx, coupled), NotSupportedError);

  // oppositely scaled coordinates give a product invariant
  VectorField hyper;
  hyper.set(s.f.x, s.f.a(s.f.x));
  hyper.set(s.f.T, s.f.a(s.f.T).scaled(Rat(-1)));
  auto invh = invariants(s.f.ctx, hyper);
  bool found = false;
  for (const auto& e : invh) {
    CHECK(apply_base(s.f.ctx, hyper, e).is_zero());
    if (e == s.f.a(s.f.x) * s.f.a(s.f.T)) found = true;
  }
  CHECK(found);
}

TEST_CASE("transformed solutions") {
  Fields s;
  Atom eps = eps_atom();
  std::map<Atom, std::string> names{{s.f.U, "f"}, {s.f.V, "g"}, {s.f.P, "h"}, {s.f.T, "r"}};

  auto t1 = transform_solution(s.f.ctx, flow(s.f.ctx, s.v1, eps), names);
  CHECK(t1.at(s.f.T).args[0] == s.f.a(s.f.x) + Expr::atom(eps));
  CHECK(t1.at(s.f.T).args[1] == s.f.a(s.f.y));
  CHECK(t1.at(s.f.T).scale == Expr(1L));
  CHECK(t1.at(s.f.T).offset.is_zero());
  CHECK(t1.at(s.f.T).text(s.f.ctx, s.f.T) == "T1 = r(x + eps, y)");

  auto t4 = transform_solution(s.f.ctx, flow(s.f.ctx, s.v4, eps), names);
  CHECK(t4.at(s.f.T).scale == Expr::atom(Atom::exponential("eps", Rat(-1))));
  CHECK(t4.at(s.f.T).offset.is_zero());
  CHECK(t4.at(s.f.T).text(s.f.ctx, s.f.T) == "T1 = exp(-eps)*r(x, y)");
  CHECK(t4.at(s.f.U).scale == Expr(1L));

  auto t3 = transform_solution(s.f.ctx, flow(s.f.ctx, s.v3, eps), names);
  CHECK(t3.at(s.f.T).offset == -Expr::atom(eps));

  auto tid = transform_solution(s.f.ctx, flow(s.f.ctx, VectorField::zero(), eps), names);
  CHECK(tid.at(s.f.U).text(s.f.ctx, s.f.U) == "U1 = f(x, y)");
}

TEST_CASE("point-field validation") {
  Fields s;
  VectorField bad;
  bad.set(s.f.x, s.f.j("U", "x"));
  CHECK_THROWS_AS(validate_point_field(s.f.ctx, bad), ValidationError);
  CHECK_NOTHROW(validate_point_field(s.f.ctx, s.v4));
}
