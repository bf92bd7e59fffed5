#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "liesym/atom.hpp"

namespace liesym {

/// Largest exponent the kernel will form before raising CapacityError.
inline constexpr int kMaxExponent = 64;

/// Power product of atoms with positive integer exponents, kept sorted by the
/// atom order. Exponential atoms are folded per group parameter: at most one
/// exp factor per parameter, always with exponent 1 and all rates summed,
/// so exp(a*eps)*exp(b*eps) = exp((a+b)*eps) and exp(0*eps) = 1 by
/// construction.
class Monomial {
 public:
  using Factor = std::pair<Atom, int>;

  Monomial() = default;  // the empty product, 1
  static Monomial atom(const Atom& a, int exp = 1);
  static Monomial of(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  int exponent_of(const Atom& a) const;
  bool depends_on(const Atom& a) const { return exponent_of(a) > 0; }
  /// Sum of exponents of atoms matching the predicate (exp atoms count 1).
  int degree_if(const std::function<bool(const Atom&)>& pred) const;
  int total_degree() const;

  Monomial times(const Monomial& o) const;
  Monomial pow(int k) const;
  /// Exact division; throws InternalError when not divisible.
  Monomial divide_exact(const Monomial& o) const;
  /// Componentwise min over non-exp atoms (exp atoms never enter gcds).
  static Monomial gcd(const Monomial& a, const Monomial& b);
  static Monomial lcm(const Monomial& a, const Monomial& b);
  /// Factors matching the predicate, and the rest.
  std::pair<Monomial, Monomial> split(const std::function<bool(const Atom&)>& pred) const;

  bool operator==(const Monomial& o) const { return factors_ == o.factors_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }
  /// Graded-lexicographic: total degree, then the factor vector.
  bool operator<(const Monomial& o) const;

  std::string text() const;  // "U^2*D(T,y)" ; "1" when empty

 private:
  static void check_exponent(int e);
  std::vector<Factor> factors_;
};

/// Canonical multivariate polynomial over atoms with exact rational
/// coefficients. Two exprs are equal iff their term maps are identical; the
/// zero polynomial is the empty map. Exprs are immutable values; every
/// operation is a pure function.
class Expr {
 public:
  Expr() = default;  // 0
  Expr(long n);
  Expr(const Rat& c);
  static Expr atom(const Atom& a, int exp = 1);
  static Expr monomial(const Rat& c, const Monomial& m);

  const std::map<Monomial, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True for 0 or a single constant term.
  bool is_constant() const;
  /// Value of a constant expr; throws ValidationError otherwise.
  Rat constant_value() const;
  std::size_t term_count() const { return terms_.size(); }

  bool operator==(const Expr& o) const { return terms_ == o.terms_; }
  bool operator!=(const Expr& o) const { return !(*this == o); }
  bool operator<(const Expr& o) const { return terms_ < o.terms_; }

  Expr operator-() const;
  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  Expr scaled(const Rat& c) const;
  Expr pow(int k) const;

  /// Formal partial derivative with respect to one atom; all other atoms are
  /// constants. Differentiating by a group parameter applies the rate rule to
  /// its exponential atoms: d/deps exp(r*eps) = r*exp(r*eps).
  Expr partial(const Atom& a) const;

  /// Simultaneous substitution followed by normalization. A replacement may
  /// mention its own key atom (x -> x+eps); mentioning a *different* bound
  /// atom is rejected as cyclic.
  Expr substitute(const std::map<Atom, Expr>& bindings) const;

  /// Split e = sum(monomial-over-focus * coefficient); coefficients carry no
  /// focus atoms. The empty monomial keys the focus-free part.
  std::map<Monomial, Expr> collect(const std::function<bool(const Atom&)>& focus) const;
  std::map<Monomial, Expr> collect(const std::set<Atom>& focus) const;

  std::set<Atom> atoms() const;
  bool depends_on(const Atom& a) const;
  bool any_atom(const std::function<bool(const Atom&)>& pred) const;
  int degree_if(const std::function<bool(const Atom&)>& pred) const;

  /// Evaluate at rational values for every atom present. Exponential atoms
  /// are rejected (no rational value exists).
  Rat eval(const std::map<Atom, Rat>& values) const;

  /// Largest monomial over atoms matching the predicate dividing every term.
  Monomial monomial_content(const std::function<bool(const Atom&)>& pred) const;
  Expr divided_by(const Monomial& m) const;
  /// Divide out rational content and monomial content over `pred` atoms and
  /// normalize the leading sign to +. Zero stays zero.
  Expr primitive_part(const std::function<bool(const Atom&)>& pred) const;

  /// Deterministic text: terms in canonical (graded-lex) order.
  std::string text() const;

 private:
  void add_term(const Monomial& m, const Rat& c);
  std::map<Monomial, Rat> terms_;
};

inline Expr operator*(const Rat& c, const Expr& e) { return e.scaled(c); }

}  // namespace liesym
