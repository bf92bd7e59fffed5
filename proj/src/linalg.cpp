#include "liesym/linalg.hpp"

#include <algorithm>
#include <map>

#include "liesym/error.hpp"

namespace liesym {

MatrixQ identity_matrix(std::size_t n) {
  MatrixQ m(n, VectorQ(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

MatrixQ mat_mul(const MatrixQ& a, const MatrixQ& b) {
  if (a.empty() || b.empty()) return {};
  std::size_t n = a.size(), k = b.size(), m = b[0].size();
  MatrixQ out(n, VectorQ(m, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (a[i][j] == 0) continue;
      for (std::size_t c = 0; c < m; ++c) out[i][c] += a[i][j] * b[j][c];
    }
  return out;
}

MatrixQ mat_add(const MatrixQ& a, const MatrixQ& b) {
  MatrixQ out = a;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] += b[i][j];
  return out;
}

MatrixQ mat_scale(const MatrixQ& a, const Rat& c) {
  MatrixQ out = a;
  for (auto& row : out)
    for (auto& x : row) x *= c;
  return out;
}

Rat mat_trace(const MatrixQ& a) {
  Rat t(0);
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

int rref(MatrixQ& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[r], m[pivot]);
    Rat p = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

int rank(MatrixQ m) { return rref(m); }

MatrixQ row_space(const MatrixQ& rows) {
  MatrixQ m = rows;
  int r = rref(m);
  m.resize(static_cast<std::size_t>(r));
  return m;
}

bool same_row_space(const MatrixQ& a, const MatrixQ& b) {
  return row_space(a) == row_space(b);
}

bool in_row_space(const MatrixQ& rows, const VectorQ& v) {
  MatrixQ m = rows;
  int r0 = rref(m);
  MatrixQ m2 = rows;
  m2.push_back(v);
  return rank(std::move(m2)) == r0;
}

bool solve_combination(const MatrixQ& rows, const VectorQ& v, VectorQ* coords) {
  if (rows.empty()) {
    bool zero = std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
    if (zero && coords) coords->clear();
    return zero;
  }
  // Solve rows^T * t = v by eliminating the augmented system.
  const std::size_t n = rows.size(), dim = rows[0].size();
  MatrixQ aug(dim, VectorQ(n + 1, Rat(0)));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = rows[j][i];
    aug[i][n] = v[i];
  }
  rref(aug);
  VectorQ t(n, Rat(0));
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t lead = n + 1;
    for (std::size_t j = 0; j <= n; ++j)
      if (aug[i][j] != 0) {
        lead = j;
        break;
      }
    if (lead == n) return false;  // 0 = nonzero: inconsistent
  }
  // Free coordinates stay 0; pivots read off bottom-up.
  for (std::size_t ii = dim; ii-- > 0;) {
    std::size_t lead = n + 1;
    for (std::size_t j = 0; j <= n; ++j)
      if (aug[ii][j] != 0) {
        lead = j;
        break;
      }
    if (lead >= n) continue;
    Rat val = aug[ii][n];
    for (std::size_t j = lead + 1; j < n; ++j) val -= aug[ii][j] * t[j];
    t[lead] = val;
  }
  // Verify.
  for (std::size_t i = 0; i < dim; ++i) {
    Rat s(0);
    for (std::size_t j = 0; j < n; ++j) s += rows[j][i] * t[j];
    if (s != v[i]) return false;
  }
  if (coords) *coords = std::move(t);
  return true;
}

namespace {

// Clear denominators and divide by integer content; leading entry positive.
void normalize_row(SparseRow& row) {
  if (row.empty()) return;
  mpz_class den(1), num(0);
  for (const auto& [c, v] : row) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  }
  std::vector<std::pair<int, mpz_class>> ints;
  ints.reserve(row.size());
  for (const auto& [c, v] : row) {
    mpz_class z = v.get_num() * (den / v.get_den());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), z.get_mpz_t());
    ints.push_back({c, z});
  }
  if (sgn(ints.front().second) < 0) num = -num;
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i].second = Rat(ints[i].second / num);
  }
}

// a - (a_lead / b_lead) * b in cross-multiplied integer form:
// b_lead * a - a_lead * b, followed by content normalization.
SparseRow eliminate(const SparseRow& a, const SparseRow& b, const Rat& a_lead,
                    const Rat& b_lead) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back({a[i].first, a[i].second * b_lead});
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back({b[j].first, -b[j].second * a_lead});
      ++j;
    } else {
      Rat v = a[i].second * b_lead - b[j].second * a_lead;
      if (v != 0) out.push_back({a[i].first, v});
      ++i;
      ++j;
    }
  }
  normalize_row(out);
  return out;
}

}  // namespace

MatrixQ sparse_nullspace(const std::vector<SparseRow>& rows, int ncols) {
  // pivot column -> reduced row with that leading column
  std::map<int, SparseRow> pivots;
  for (const SparseRow& raw : rows) {
    SparseRow row = raw;
    normalize_row(row);
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) break;
      row = eliminate(row, it->second, row.front().second, it->second.front().second);
    }
    if (!row.empty()) pivots.emplace(row.front().first, std::move(row));
  }

  // Back-substitution: express pivot columns in terms of free columns.
  std::vector<bool> is_pivot(ncols, false);
  for (const auto& [c, r] : pivots) is_pivot[c] = true;

  // solved[c] = value of column c as a function of the free columns
  // (dense over free-column index).
  std::vector<int> free_cols;
  for (int c = 0; c < ncols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  std::map<int, int> free_index;
  for (std::size_t i = 0; i < free_cols.size(); ++i) free_index[free_cols[i]] = (int)i;

  const std::size_t nf = free_cols.size();
  std::map<int, VectorQ> solved;  // pivot col -> coefficients over free columns
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto& [pc, row] = *it;
    VectorQ expr(nf, Rat(0));
    Rat lead = row.front().second;
    for (std::size_t k = 1; k < row.size(); ++k) {
      const auto& [c, v] = row[k];
      Rat f = -v / lead;
      if (!is_pivot[c]) {
        expr[free_index[c]] += f;
      } else {
        const VectorQ& sub = solved.at(c);
        for (std::size_t t = 0; t < nf; ++t)
          if (sub[t] != 0) expr[t] += f * sub[t];
      }
    }
    solved[pc] = std::move(expr);
  }

  MatrixQ basis;
  for (std::size_t t = 0; t < nf; ++t) {
    VectorQ v(ncols, Rat(0));
    v[free_cols[t]] = 1;
    for (const auto& [pc, expr] : solved) v[pc] = expr[t];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace liesym
