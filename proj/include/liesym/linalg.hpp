#pragma once

#include <vector>

#include "liesym/rational.hpp"

namespace liesym {

/// Dense rational matrix as a row vector list.
using MatrixQ = std::vector<std::vector<Rat>>;
using VectorQ = std::vector<Rat>;

MatrixQ identity_matrix(std::size_t n);
MatrixQ mat_mul(const MatrixQ& a, const MatrixQ& b);
MatrixQ mat_add(const MatrixQ& a, const MatrixQ& b);
MatrixQ mat_scale(const MatrixQ& a, const Rat& c);
Rat mat_trace(const MatrixQ& a);

/// In-place reduced row echelon form; returns the rank. Deterministic
/// (first nonzero pivot in column order).
int rref(MatrixQ& m);
int rank(MatrixQ m);

/// Row space of `rows` as a canonical RREF basis (zero rows dropped).
MatrixQ row_space(const MatrixQ& rows);
bool same_row_space(const MatrixQ& a, const MatrixQ& b);
/// True when v is a rational combination of `rows`.
bool in_row_space(const MatrixQ& rows, const VectorQ& v);
/// Coordinates of v in terms of `rows` when possible.
bool solve_combination(const MatrixQ& rows, const VectorQ& v, VectorQ* coords);

/// Sparse row: (column, value) entries sorted by column.
using SparseRow = std::vector<std::pair<int, Rat>>;

/// Exact null space of the sparse homogeneous system rows*x = 0 over ncols
/// unknowns. Elimination runs on integer-cleared rows with cross-multiplied
/// updates and per-row content removal, so no fractions appear until
/// back-substitution. Basis vectors come out in free-column order, RREF
/// normalized (pivot coordinate 1).
MatrixQ sparse_nullspace(const std::vector<SparseRow>& rows, int ncols);

}  // namespace liesym
