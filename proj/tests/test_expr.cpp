#include <doctest.h>

#include "support/gen.hpp"

using namespace liesym;
using testgen::Fixture;
using testgen::Gen;

TEST_CASE("normalization gives canonical forms") {
  Fixture f;
  Expr u = f.a(f.U), v = f.a(f.V);
  CHECK((u + v) * (u - v) == u * u - v * v);
  CHECK((u * v - v * u).is_zero());

  Atom eps = Atom::symbol(SymKind::GroupParam, "eps");
  Expr e1 = Expr::atom(Atom::exponential("eps", Rat(1)));
  Expr em1 = Expr::atom(Atom::exponential("eps", Rat(-1)));
  CHECK(e1 * em1 == Expr(1L));
  (void)eps;
}

TEST_CASE("exponent bound raises a capacity error") {
  Fixture f;
  Expr u = f.a(f.U);
  CHECK_THROWS_AS(u.pow(65), CapacityError);
  CHECK_THROWS_AS(u.pow(40) * u.pow(40), CapacityError);
  CHECK_NOTHROW(u.pow(64));
}

TEST_CASE("formal partial derivatives") {
  Fixture f;
  Expr u = f.a(f.U), v = f.a(f.V);
  CHECK((u * u * v).partial(f.U) == Expr(2L) * u * v);

  Expr ty = f.j("T", "y");
  CHECK((f.a(f.x) * ty).partial(f.jet("T", "y")) == f.a(f.x));

  Atom eps = Atom::symbol(SymKind::GroupParam, "eps");
  Expr e2 = Expr::atom(Atom::exponential("eps", Rat(2)));
  CHECK(e2.partial(eps) == Expr(2L) * e2);
}

TEST_CASE("substitution") {
  Fixture f;
  Expr ux = f.j("U", "x"), vy = f.j("V", "y");
  std::map<Atom, Expr> bind{{f.jet("U", "x"), -vy}};
  CHECK((ux + vy).substitute(bind).is_zero());

  Expr u = f.a(f.U);
  std::map<Atom, Expr> ident{{f.U, u}};
  CHECK((u * u).substitute(ident) == u * u);

  Atom eps = Atom::symbol(SymKind::GroupParam, "eps");
  std::map<Atom, Expr> shift{{f.x, f.a(f.x) + Expr::atom(eps)}};
  CHECK((f.a(f.x) * f.a(f.y)).substitute(shift) ==
        f.a(f.x) * f.a(f.y) + Expr::atom(eps) * f.a(f.y));

  // a replacement may mention its own key but not another bound atom
  std::map<Atom, Expr> cyc{{f.U, f.a(f.V)}, {f.V, f.a(f.U)}};
  CHECK_THROWS_AS(u.substitute(cyc), ValidationError);
}

TEST_CASE("collect by focus atoms") {
  Fixture f;
  Expr ux = f.j("U", "x");
  Expr a = f.a(f.nu), b = f.a(f.k), c = f.a(f.alpha);
  Expr e = a * ux * ux + b * ux + c;
  auto parts = e.collect(std::set<Atom>{f.jet("U", "x")});
  REQUIRE(parts.size() == 3);
  CHECK(parts.at(Monomial::atom(f.jet("U", "x"), 2)) == a);
  CHECK(parts.at(Monomial::atom(f.jet("U", "x"))) == b);
  CHECK(parts.at(Monomial()) == c);

  CHECK(Expr().collect(std::set<Atom>{f.U}).empty());
}

TEST_CASE("ring laws on random expressions") {
  Fixture f;
  Gen g(11);
  std::vector<Atom> atoms = {f.x, f.y, f.U, f.V, f.nu, f.jet("U", "x"), f.jet("T", "yy")};
  for (int i = 0; i < 100; ++i) {
    Expr a = g.poly(atoms, 3, 4), b = g.poly(atoms, 3, 4), c = g.poly(atoms, 3, 4);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("partial: Leibniz and commutation") {
  Fixture f;
  Gen g(12);
  std::vector<Atom> atoms = {f.x, f.y, f.U, f.V, f.T, f.jet("U", "x")};
  for (int i = 0; i < 100; ++i) {
    Expr a = g.poly(atoms, 3, 4), b = g.poly(atoms, 3, 4);
    const Atom& z = g.choice(atoms);
    const Atom& w = g.choice(atoms);
    CHECK((a * b).partial(z) == a.partial(z) * b + a * b.partial(z));
    CHECK(a.partial(z).partial(w) == a.partial(w).partial(z));
  }
}

TEST_CASE("evaluation commutes with arithmetic") {
  Fixture f;
  Gen g(13);
  std::vector<Atom> atoms = {f.x, f.y, f.U, f.V, f.nu, f.jet("U", "x")};
  for (int i = 0; i < 100; ++i) {
    Expr a = g.poly(atoms, 3, 4), b = g.poly(atoms, 3, 4);
    std::map<Atom, Rat> vals;
    for (const Atom& at : atoms) vals[at] = g.rat();
    CHECK((a + b).eval(vals) == a.eval(vals) + b.eval(vals));
    CHECK((a * b).eval(vals) == a.eval(vals) * b.eval(vals));
  }
}

TEST_CASE("content normalization") {
  Fixture f;
  Expr e = Expr(2L) * f.a(f.nu) * f.a(f.U) + Expr(4L) * f.a(f.nu) * f.a(f.V);
  Expr prim = e.primitive_part([](const Atom& a) { return a.kind() == SymKind::Parameter; });
  CHECK(prim == f.a(f.U) + Expr(2L) * f.a(f.V));
  CHECK(Expr().primitive_part([](const Atom&) { return true; }).is_zero());
}

TEST_CASE("deterministic rendering") {
  Fixture f;
  Expr u = f.a(f.U), v = f.a(f.V);
  CHECK((u * u - v * v).text() == "U^2 - V^2");
  CHECK(Expr().text() == "0");
  CHECK((f.a(f.x) + Expr::atom(Atom::symbol(SymKind::GroupParam, "eps"))).text() == "x + eps");
  CHECK(f.j("T", "xy").text() == "D(T,x,y)");
  CHECK(Expr::atom(Atom::exponential("eps", Rat(-2))).text() == "exp(-2*eps)");
  CHECK((Expr(Rat(1, 2)) * u).text() == "1/2*U");
}

TEST_CASE("context rejects duplicate names") {
  Context ctx;
  ctx.declare(SymKind::Independent, "x");
  CHECK_THROWS_AS(ctx.declare(SymKind::Dependent, "x"), ValidationError);
  CHECK(ctx.find("x") != nullptr);
  CHECK(ctx.find("q") == nullptr);
}
