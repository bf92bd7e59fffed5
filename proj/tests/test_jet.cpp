#include <doctest.h>

#include "support/gen.hpp"

using namespace liesym;
using testgen::Fixture;
using testgen::Gen;

TEST_CASE("total derivative basics") {
  Fixture f;
  Expr u = f.a(f.U), v = f.a(f.V);
  CHECK(total_derivative(u * v, f.x) == f.j("U", "x") * v + u * f.j("V", "x"));
  CHECK(total_derivative(f.a(f.x) * f.a(f.y), f.y) == f.a(f.x));
  CHECK(total_derivative(f.j("T", "y"), f.x) == f.j("T", "xy"));
  CHECK_THROWS_AS(total_derivative(u, f.U), ValidationError);
}

TEST_CASE("iterated total derivatives") {
  Fixture f;
  MultiIndex xy = MultiIndex().plus("x").plus("y");
  CHECK(total_derivative(f.a(f.U), xy) == f.j("U", "xy"));
  CHECK(total_derivative(f.a(f.x), MultiIndex::single("y", 2)).is_zero());
}

TEST_CASE("total derivatives commute and obey Leibniz") {
  Fixture f;
  Gen g(21);
  std::vector<Atom> atoms = {f.x,  f.y,           f.U,
                             f.V,  f.T,           f.nu,
                             f.jet("U", "x"), f.jet("T", "y"), f.jet("V", "xy")};
  for (int i = 0; i < 100; ++i) {
    Expr a = g.poly(atoms, 3, 4);
    Expr b = g.poly(atoms, 3, 4);
    CHECK(total_derivative(total_derivative(a, f.x), f.y) ==
          total_derivative(total_derivative(a, f.y), f.x));
    CHECK(total_derivative(a * b, f.x) ==
          total_derivative(a, f.x) * b + a * total_derivative(b, f.x));
  }
}

TEST_CASE("total derivative raises jet order by at most one") {
  Fixture f;
  Gen g(22);
  std::vector<Atom> atoms = {f.x, f.U, f.T, f.jet("U", "x"), f.jet("T", "yy")};
  auto max_order = [](const Expr& e) {
    int m = 0;
    for (const Atom& a : e.atoms())
      if (a.kind() == SymKind::Dependent) m = std::max(m, a.jet_order());
    return m;
  };
  for (int i = 0; i < 100; ++i) {
    Expr a = g.nonzero_poly(atoms, 3, 4);
    Expr d = total_derivative(a, f.x);
    if (!d.is_zero()) CHECK(max_order(d) <= max_order(a) + 1);
  }
}

TEST_CASE("multi-index bookkeeping") {
  MultiIndex m = MultiIndex().plus("y").plus("x").plus("y");
  CHECK(m.order() == 3);
  CHECK(m.count("y") == 2);
  CHECK(m.entries().front().first == "x");  // stored in the fixed variable order
  CHECK(m.contains(MultiIndex::single("y", 2)));
  CHECK_FALSE(MultiIndex::single("y", 2).contains(m));
  CHECK(m.minus(MultiIndex::single("x")) == MultiIndex::single("y", 2));
  CHECK(Atom::jet("U", m) == Atom::jet("U", MultiIndex().plus("x").plus("y", 2)));
}
