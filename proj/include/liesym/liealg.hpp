#pragma once

#include <optional>
#include <string>

#include "liesym/detsys.hpp"

namespace liesym {

/// Finite-dimensional Lie algebra over the rationals, given by structure
/// constants C^k_{ij} with [v_i, v_j] = sum_k C^k_{ij} v_k. Antisymmetry and
/// the Jacobi identity are validated on construction.
class LieAlgebra {
 public:
  LieAlgebra(std::vector<std::string> labels, std::vector<std::vector<VectorQ>> c);

  int dim() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Rat& c(int i, int j, int k) const { return c_[i][j][k]; }

  VectorQ bracket(const VectorQ& a, const VectorQ& b) const;
  std::vector<Expr> bracket_sym(const std::vector<Expr>& a, const std::vector<Expr>& b) const;

  /// ad(v_i) acting on column coordinate vectors: (ad_i)[k][j] = C^k_{ij}.
  MatrixQ ad(int i) const;
  MatrixQ ad(const VectorQ& a) const;

  /// "a1*v1 + 3*v4" — deterministic rendering of a coordinate vector.
  std::string vector_text(const std::vector<Expr>& coords) const;
  std::string vector_text(const VectorQ& coords) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<VectorQ>> c_;
};

struct FieldsAlgebra {
  LieAlgebra algebra;
  /// table[i][j] = coordinates of [v_i, v_j] in the basis.
  std::vector<std::vector<VectorQ>> table;
};

/// Structure constants of concrete vector fields; ClosureError (naming the
/// offending bracket) when the basis does not close.
FieldsAlgebra algebra_from_fields(const Context& ctx, const std::vector<VectorField>& basis,
                                  std::vector<std::string> labels = {});

/// Adjoint matrix in row layout: row j holds the coordinates of
/// Ad(exp(eps*v_i)) v_j = v_j - eps [v_i,v_j] + eps^2/2 [v_i,[v_i,v_j]] - ...
/// computed exactly as exp(-eps*ad(v_i)) (nilpotent part by terminating
/// series, semisimple part through exponential atoms; rational eigenvalues
/// required).
struct AdjointMatrix {
  int generator = 0;
  Atom eps = Atom::symbol(SymKind::GroupParam, "eps");
  std::vector<std::vector<Expr>> m;

  std::vector<Expr> apply_row(const std::vector<Expr>& x) const;  // x^T M
  /// Exact evaluation at a rational parameter value; requires polynomial
  /// entries unless the value is 0.
  MatrixQ at(const Rat& value) const;
  bool polynomial_entries() const;
};

AdjointMatrix adjoint_matrix(const LieAlgebra& g, int i, const Atom& eps);

struct SubalgebraVerdict {
  enum class Kind { Yes, No, Conditional };
  Kind kind = Kind::Yes;
  /// Polynomial conditions on the symbols that must vanish (Conditional).
  std::vector<Expr> conditions;
  /// Pivot expressions assumed nonzero during the symbolic elimination.
  std::vector<Expr> genericity;
};

/// Checks that all pairwise brackets of the (possibly symbolic) vectors lie
/// in their symbolic span.
SubalgebraVerdict is_subalgebra(const LieAlgebra& g, const std::vector<std::vector<Expr>>& vectors);

struct AdjointMove {
  int actor = 0;
  Rat eps;
};

struct Normalized1D {
  VectorQ canonical;
  std::vector<AdjointMove> moves;
  std::optional<Rat> scale;
};

/// Canonical representative of span{x} under the adjoint action: greedy
/// coordinate elimination through nilpotent adjoint moves at rational
/// parameters (smallest support, then smallest |eps|), then a unit rescale
/// when a single coordinate survives. Idempotent on canonical forms.
Normalized1D normalize_1d(const LieAlgebra& g, const VectorQ& x);

struct PairCondition {
  std::vector<Atom> unknowns;     // a1..an, the candidate partner coordinates
  std::vector<Expr> constraints;  // vanishing of rank-3 minors of [x1 | a | [x1,a]]
};

/// Eliminates the multipliers from [x1, a] = lambda*a + mu*x1: the remaining
/// constraints on a are exactly the 3x3 minor vanishing conditions.
PairCondition solve_pair_condition(const LieAlgebra& g, const std::vector<Expr>& x1);

struct TripleCondition {
  std::vector<Atom> unknowns;
  std::vector<Expr> constraints;  // per generator: rank([y1 y2 a [y_r,a]]) <= 3
};

/// Constraints for extending the 2-dim subalgebra {y1, y2} by a third
/// generator; candidates must additionally be independent of {y1, y2}.
TripleCondition solve_triple_condition(const LieAlgebra& g, const VectorQ& y1, const VectorQ& y2);
bool triple_candidate_ok(const LieAlgebra& g, const TripleCondition& tc, const VectorQ& y1,
                         const VectorQ& y2, const VectorQ& a);

/// Series are lists of RREF subspace bases, starting with the whole algebra,
/// ending at the first repeated or zero subspace (zero = empty matrix).
std::vector<MatrixQ> derived_series(const LieAlgebra& g);
std::vector<MatrixQ> lower_central_series(const LieAlgebra& g);
bool is_solvable(const LieAlgebra& g);
bool is_nilpotent(const LieAlgebra& g);

/// K(x,y) = trace(ad x . ad y), as a dim x dim matrix over the basis.
MatrixQ killing_form(const LieAlgebra& g);
/// Cartan criterion: the K-orthogonal complement of [g,g].
MatrixQ radical(const LieAlgebra& g);
MatrixQ center(const LieAlgebra& g);

struct Decomposition {
  bool recognized = false;
  int abelian_dim = 0;
  bool affine_factor = false;  // 2-dim nonabelian complement a(1)
  std::string text;            // e.g. "R^2 (+) a(1)"
};

/// Recognizes center (+) complement splittings with an abelian or affine
/// complement; anything else is reported unrecognized.
Decomposition decompose(const LieAlgebra& g);

}  // namespace liesym
