#pragma once

#include <cstdint>
#include <optional>

#include "liesym/linalg.hpp"
#include "liesym/vfield.hpp"

namespace liesym {

/// One leading-derivative substitution, denominators cleared:
///   coeff_rat * coeff_params * lead = rhs,
/// where coeff_params is a parameter monomial (nonzero by declaration) and
/// rhs is free of every leading atom.
struct SolvedForm {
  Atom lead = Atom::symbol(SymKind::Dependent, "?");
  Rat coeff_rat = 1;
  Monomial coeff_params;
  Expr rhs;
};

/// Polynomial PDE system (each expression means expr = 0) together with its
/// triangular leading-derivative substitutions.
struct PDESystem {
  std::vector<Expr> equations;
  std::vector<SolvedForm> solved_forms;
};

/// Chooses a leading derivative per equation (highest total order, then
/// earliest-declared dependent, then largest index; coefficient must be a
/// parameter monomial), solves for it and inter-reduces the right sides.
/// `leading` can pin the choice per equation.
PDESystem make_system(const Context& ctx, std::vector<Expr> equations,
                      const std::vector<std::optional<Atom>>& leading = {});

/// Normal form modulo the system as an exact fraction num / den; den is a
/// parameter monomial accumulated by denominator clearing.
struct Reduced {
  Expr num;
  Monomial den;
};

/// Rewrites expressions modulo the solved forms, including derivative
/// extensions of the leading atoms (built once, up to max_order, so reduce()
/// is safe to call concurrently).
class Reducer {
 public:
  Reducer(const Context& ctx, const PDESystem& sys, int max_order);

  Reduced reduce(const Expr& e) const;
  /// Substitution rule whose left side is exactly `a`, or null.
  const SolvedForm* rule_for(const Atom& a) const;
  const std::map<Atom, SolvedForm>& rules() const { return rules_; }

 private:
  std::map<Atom, SolvedForm> rules_;
};

struct DeterminingEquation {
  Expr expr;  // linear homogeneous in the ansatz unknowns, content-normalized
  int source_eq = 0;
  Monomial jet_monomial;  // generating monomial
};

struct DeterminingSystem {
  std::vector<Atom> unknowns;
  std::vector<DeterminingEquation> equations;  // deduped, deterministic order
};

/// Applies the prolonged ansatz to every equation, reduces modulo the solved
/// forms and collects over jet monomials; every coefficient is one
/// determining equation.
DeterminingSystem invariance_condition(const Context& ctx, const PDESystem& sys,
                                       const VectorField& ansatz, int order = 2);

struct VerifyResult {
  bool ok = false;
  /// (equation index, nonzero residual) pairs; empty when ok.
  std::vector<std::pair<int, Expr>> residuals;
};

/// True iff the prolonged field annihilates every equation modulo the solved
/// forms, exactly.
VerifyResult verify_symmetry(const Context& ctx, const PDESystem& sys, const VectorField& v,
                             int order = 2);

/// Complete polynomial coefficient ansatz of total degree <= degree over the
/// base coordinates: one unknown per (coordinate function, monomial) column.
class AnsatzSpace {
 public:
  AnsatzSpace(const Context& ctx, int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(columns_.size()); }
  const std::vector<Atom>& unknowns() const { return unknowns_; }
  const std::pair<Atom, Monomial>& column(int j) const { return columns_[j]; }
  int column_of(const Atom& unknown) const;

  VectorField symbolic_field() const;
  VectorField unit_field(int j) const;
  VectorField field_from_coords(const VectorQ& coords) const;
  /// Coordinates may be parameter polynomials.
  VectorField field_from_coords(const std::vector<Expr>& coords) const;
  /// Coefficient vector of a field lying in this space; throws otherwise.
  VectorQ coords_of(const VectorField& v) const;

 private:
  int degree_;
  std::vector<std::pair<Atom, Monomial>> columns_;
  std::vector<Atom> unknowns_;
  std::map<Atom, int> unknown_index_;
};

/// Fully scalarized determining system: sparse rational rows over the ansatz
/// unknowns, keyed (equation, jet monomial, coefficient monomial incl.
/// parameters). This is the unknowns-over-the-rationals reading: it misses
/// symmetries whose coefficients involve the parameters, and is kept as an
/// independent cross-check route.
struct LinearRows {
  struct Row {
    int eq = 0;
    Monomial jet;
    Monomial mono;
    SparseRow entries;
  };
  int ncols = 0;
  std::vector<Row> rows;
  std::vector<SparseRow> sparse() const;
};

enum class RowsRoute {
  SymbolicAnsatz,     // one prolongation of the full symbolic ansatz (serial reference)
  PerUnknownColumns,  // independent residual per unknown; OpenMP parallel
};

LinearRows determining_rows(const Context& ctx, const PDESystem& sys, const AnsatzSpace& space,
                            int order, RowsRoute route, bool parallel);

/// Determining rows over the parameter field: keys carry jet and base-variable
/// monomials only, entries are parameter polynomials. Because parameters are
/// independent transcendentals, any nonzero entry is invertible, so the null
/// space over this field is the full symmetry space with parameter-polynomial
/// coefficients (e.g. advection-speed-dependent generators).
struct ParamRows {
  struct Row {
    int eq = 0;
    Monomial jet;
    Monomial mono;  // base-variable part
    std::vector<std::pair<int, Expr>> entries;
  };
  int ncols = 0;
  std::vector<Row> rows;
};

ParamRows determining_rows_field(const Context& ctx, const PDESystem& sys,
                                 const AnsatzSpace& space, int order, RowsRoute route,
                                 bool parallel);

/// Exact null space of ParamRows over the parameter fraction field, returned
/// as parameter-polynomial coordinate vectors (content- and sign-normalized,
/// one per free column, zero at every other free column).
std::vector<std::vector<Expr>> param_nullspace(const ParamRows& rows);

struct SymmetryBasis {
  std::vector<VectorField> fields;  // canonical echelon form, pivot coefficient 1
  int ansatz_degree = 0;
  int unknown_count = 0;
  int row_count = 0;
};

struct SolveOptions {
  RowsRoute route = RowsRoute::PerUnknownColumns;
  bool parallel = true;
  int order = 2;
};

SymmetryBasis solve_determining(const Context& ctx, const PDESystem& sys, int degree,
                                const SolveOptions& opts = {});

/// Samples random rational on-manifold points (leading jets evaluated through
/// the solved forms) and evaluates the raw invariance condition numerically;
/// true iff every trial vanishes exactly. Independent of the symbolic
/// substitute/collect path.
bool numeric_point_oracle(const Context& ctx, const PDESystem& sys, const VectorField& v,
                          int trials, std::uint64_t seed = 0x5eed, int order = 2);

/// Coefficient-coordinate matrix of fields over the union of their
/// (coordinate, monomial) supports; used for exact span comparisons.
MatrixQ field_matrix(const Context& ctx, const std::vector<VectorField>& fields);
bool same_field_span(const Context& ctx, const std::vector<VectorField>& a,
                     const std::vector<VectorField>& b);
bool field_span_contains(const Context& ctx, const std::vector<VectorField>& span,
                         const std::vector<VectorField>& candidates);

}  // namespace liesym
