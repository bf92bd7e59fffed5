#include "liesym/liealg.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace liesym {

namespace {

// ---------------------------------------------------------------------------
// Dense univariate polynomials over the rationals (coefficients low to high),
// just enough for exact matrix exponentials: characteristic polynomials,
// rational roots, and CRT idempotents.
// ---------------------------------------------------------------------------

using Poly = std::vector<Rat>;

void p_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int p_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Rat p_eval(const Poly& p, const Rat& x) {
  Rat v(0);
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

Poly p_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  p_trim(out);
  return out;
}

// Exact division by (x - r); the remainder must vanish.
Poly p_deflate(const Poly& p, const Rat& r) {
  Poly out(p.size() - 1, Rat(0));
  Rat carry(0);
  for (std::size_t i = p.size(); i-- > 1;) {
    carry = p[i] + carry * r;
    out[i - 1] = carry;
  }
  if (p[0] + carry * r != 0) throw InternalError("deflation with nonzero remainder");
  p_trim(out);
  return out;
}

// Taylor shift p(x + s).
Poly p_shift(const Poly& p, const Rat& s) {
  Poly out;
  for (std::size_t i = p.size(); i-- > 0;) {
    out = p_mul(out, Poly{s, Rat(1)});
    if (out.empty()) out = {Rat(0)};
    out[0] += p[i];
    p_trim(out);
  }
  return out;
}

// Power-series inverse of h modulo y^m (h[0] != 0).
Poly p_series_inverse(const Poly& h, int m) {
  if (h.empty() || h[0] == 0) throw InternalError("series inverse at a zero constant term");
  Poly v(m, Rat(0));
  v[0] = Rat(1) / h[0];
  for (int i = 1; i < m; ++i) {
    Rat s(0);
    for (int j = 1; j <= i; ++j) {
      Rat hj = j < static_cast<int>(h.size()) ? h[j] : Rat(0);
      s += hj * v[i - j];
    }
    v[i] = -s / h[0];
  }
  p_trim(v);
  return v;
}

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> out;
  if (n == 0) return out;
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All rational roots with multiplicities; remainder_degree reports what is
// left after deflation.
std::vector<std::pair<Rat, int>> rational_roots(Poly p, int* remainder_degree = nullptr) {
  p_trim(p);
  std::vector<std::pair<Rat, int>> out;
  if (p.empty() || p_degree(p) == 0) {
    if (remainder_degree) *remainder_degree = 0;
    return out;
  }
  int zero_mult = 0;
  while (!p.empty() && p[0] == 0) {
    p.erase(p.begin());
    ++zero_mult;
  }
  if (zero_mult) out.push_back({Rat(0), zero_mult});
  while (p_degree(p) >= 1) {
    mpz_class den(1);
    for (const Rat& c : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<mpz_class> zp;
    for (const Rat& c : p) zp.push_back(c.get_num() * (den / c.get_den()));
    std::vector<Rat> candidates;
    for (const auto& dn : divisors(zp.front()))
      for (const auto& dd : divisors(zp.back())) {
        Rat r(dn, dd);
        r.canonicalize();
        candidates.push_back(r);
        candidates.push_back(-r);
      }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    bool found = false;
    for (const Rat& r : candidates) {
      if (p_eval(p, r) != 0) continue;
      int mult = 0;
      while (p_degree(p) >= 1 && p_eval(p, r) == 0) {
        p = p_deflate(p, r);
        ++mult;
      }
      out.push_back({r, mult});
      found = true;
      break;
    }
    if (!found) break;
  }
  if (remainder_degree) *remainder_degree = std::max(0, p_degree(p));
  std::sort(out.begin(), out.end());
  return out;
}

// Monic characteristic polynomial by Faddeev-LeVerrier.
Poly char_poly(const MatrixQ& a) {
  const std::size_t n = a.size();
  Poly coeff(n + 1, Rat(0));
  coeff[n] = 1;
  MatrixQ m = identity_matrix(n);
  for (std::size_t k = 1; k <= n; ++k) {
    MatrixQ mk = mat_mul(a, m);
    Rat c = -mat_trace(mk) / Rat(static_cast<long>(k));
    coeff[n - k] = c;
    m = mat_add(mk, mat_scale(identity_matrix(n), c));
  }
  return coeff;
}

MatrixQ poly_of_matrix(const Poly& p, const MatrixQ& a) {
  const std::size_t n = a.size();
  MatrixQ out(n, VectorQ(n, Rat(0)));
  for (std::size_t i = p.size(); i-- > 0;) {
    out = mat_mul(out, a);
    for (std::size_t d = 0; d < n; ++d) out[d][d] += p[i];
  }
  return out;
}

bool mat_is_zero(const MatrixQ& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

Rat factorial(int r) {
  Rat f(1);
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

Expr det_expr(const std::vector<std::vector<Expr>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Expr out;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i][0].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == i) continue;
      std::vector<Expr> row(m[r].begin() + 1, m[r].end());
      minor.push_back(std::move(row));
    }
    Expr cof = m[i][0] * det_expr(minor);
    if (i % 2)
      out -= cof;
    else
      out += cof;
  }
  return out;
}

Expr normalize_constraint(const Expr& e) {
  return e.primitive_part([](const Atom&) { return false; });
}

MatrixQ nullspace_dense(const MatrixQ& rows, int ncols) {
  std::vector<SparseRow> sparse;
  for (const auto& r : rows) {
    SparseRow row;
    for (int j = 0; j < ncols; ++j)
      if (r[j] != 0) row.push_back({j, r[j]});
    if (!row.empty()) sparse.push_back(std::move(row));
  }
  MatrixQ basis = sparse_nullspace(sparse, ncols);
  rref(basis);
  return basis;
}

}  // namespace

// ---------------------------------------------------------------------------
// LieAlgebra
// ---------------------------------------------------------------------------

LieAlgebra::LieAlgebra(std::vector<std::string> labels, std::vector<std::vector<VectorQ>> c)
    : labels_(std::move(labels)), c_(std::move(c)) {
  const int n = dim();
  if (static_cast<int>(c_.size()) != n)
    throw ValidationError("structure constant table has wrong dimension");
  for (const auto& row : c_) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("structure constant table has wrong dimension");
    for (const auto& v : row)
      if (static_cast<int>(v.size()) != n)
        throw ValidationError("structure constant table has wrong dimension");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (c_[i][j][k] != -c_[j][i][k])
          throw ValidationError("structure constants are not antisymmetric at (" +
                                std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Rat s(0);
          for (int m = 0; m < n; ++m)
            s += c_[i][j][m] * c_[m][k][l] + c_[j][k][m] * c_[m][i][l] +
                 c_[k][i][m] * c_[m][j][l];
          if (s != 0)
            throw ValidationError("Jacobi identity fails at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
        }
}

VectorQ LieAlgebra::bracket(const VectorQ& a, const VectorQ& b) const {
  const int n = dim();
  VectorQ out(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      for (int k = 0; k < n; ++k) out[k] += a[i] * b[j] * c_[i][j][k];
    }
  }
  return out;
}

std::vector<Expr> LieAlgebra::bracket_sym(const std::vector<Expr>& a,
                                          const std::vector<Expr>& b) const {
  const int n = dim();
  std::vector<Expr> out(n);
  for (int i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j].is_zero()) continue;
      Expr prod = a[i] * b[j];
      for (int k = 0; k < n; ++k)
        if (c_[i][j][k] != 0) out[k] += prod.scaled(c_[i][j][k]);
    }
  }
  return out;
}

MatrixQ LieAlgebra::ad(int i) const {
  const int n = dim();
  MatrixQ out(n, VectorQ(n, Rat(0)));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out[k][j] = c_[i][j][k];
  return out;
}

MatrixQ LieAlgebra::ad(const VectorQ& a) const {
  const int n = dim();
  MatrixQ out(n, VectorQ(n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) out[k][j] += a[i] * c_[i][j][k];
  }
  return out;
}

std::string LieAlgebra::vector_text(const std::vector<Expr>& coords) const {
  std::string out;
  for (int i = 0; i < dim(); ++i) {
    const Expr& c = coords[i];
    if (c.is_zero()) continue;
    std::string piece;
    bool negative = false;
    if (c == Expr(1L)) {
      piece = labels_[i];
    } else if (c == Expr(-1L)) {
      piece = labels_[i];
      negative = true;
    } else if (c.term_count() == 1) {
      std::string t = c.text();
      if (!t.empty() && t[0] == '-') {
        negative = true;
        t = t.substr(1);
      }
      piece = t + "*" + labels_[i];
    } else {
      piece = "(" + c.text() + ")*" + labels_[i];
    }
    if (out.empty())
      out = (negative ? "-" : "") + piece;
    else
      out += (negative ? " - " : " + ") + piece;
  }
  return out.empty() ? "0" : out;
}

std::string LieAlgebra::vector_text(const VectorQ& coords) const {
  std::vector<Expr> e;
  for (const Rat& c : coords) e.push_back(Expr(c));
  return vector_text(e);
}

FieldsAlgebra algebra_from_fields(const Context& ctx, const std::vector<VectorField>& basis,
                                  std::vector<std::string> labels) {
  const int n = static_cast<int>(basis.size());
  if (n == 0) throw ValidationError("empty basis");
  if (labels.empty())
    for (int i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i + 1));
  MatrixQ basis_rows = field_matrix(ctx, basis);
  if (rank(basis_rows) != n) throw ValidationError("basis fields are linearly dependent");

  std::vector<std::vector<VectorQ>> table(n, std::vector<VectorQ>(n, VectorQ(n, Rat(0))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      VectorField br = lie_bracket(ctx, basis[i], basis[j]);
      std::vector<VectorField> all = basis;
      all.push_back(br);
      MatrixQ m = field_matrix(ctx, all);
      MatrixQ mb(m.begin(), m.begin() + n);
      VectorQ coords;
      if (!solve_combination(mb, m[n], &coords))
        throw ClosureError("[" + labels[i] + ", " + labels[j] + "] = " + br.dsl_text(ctx) +
                           " is outside the rational span of the basis (structure constants "
                           "are rational; rescale basis fields by parameters if the bracket "
                           "needs parameter coefficients)");
      table[i][j] = coords;
    }
  LieAlgebra g(labels, table);
  return {std::move(g), std::move(table)};
}

// ---------------------------------------------------------------------------
// Adjoint matrices
// ---------------------------------------------------------------------------

std::vector<Expr> AdjointMatrix::apply_row(const std::vector<Expr>& x) const {
  const std::size_t n = m.size();
  std::vector<Expr> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j].is_zero()) continue;
    for (std::size_t k = 0; k < n; ++k)
      if (!m[j][k].is_zero()) out[k] += x[j] * m[j][k];
  }
  return out;
}

bool AdjointMatrix::polynomial_entries() const {
  for (const auto& row : m)
    for (const auto& e : row)
      if (e.any_atom([](const Atom& a) { return a.is_exp(); })) return false;
  return true;
}

MatrixQ AdjointMatrix::at(const Rat& value) const {
  MatrixQ out;
  for (const auto& row : m) {
    VectorQ r;
    for (const auto& e : row) {
      Expr v = value == 0 ? group_param_to_zero(e, eps) : e;
      if (v.any_atom([](const Atom& a) { return a.is_exp(); }))
        throw NotSupportedError("adjoint entry is exponential; no rational value at eps = " +
                                rat_text(value));
      std::map<Atom, Expr> bind{{eps, Expr(value)}};
      r.push_back(v.substitute(bind).constant_value());
    }
    out.push_back(std::move(r));
  }
  return out;
}

AdjointMatrix adjoint_matrix(const LieAlgebra& g, int i, const Atom& eps) {
  if (eps.kind() != SymKind::GroupParam || eps.is_exp())
    throw ValidationError("adjoint parameter must be a group parameter");
  const int n = g.dim();
  MatrixQ a = g.ad(i);
  Poly p = char_poly(a);
  int leftover = 0;
  auto roots = rational_roots(p, &leftover);
  int total = 0;
  for (const auto& [r, mult] : roots) total += mult;
  if (leftover > 0 || total != n)
    throw NotSupportedError("ad(" + g.labels()[i] + ") has irrational eigenvalues");

  // exp(-eps A) = sum_t E_t exp(-lambda_t eps) sum_{r<m_t} (-eps)^r/r! (A - lambda_t I)^r
  std::vector<std::vector<Expr>> b(n, std::vector<Expr>(n));
  for (const auto& [lambda, mult] : roots) {
    Poly ft = p;
    for (int r = 0; r < mult; ++r) ft = p_deflate(ft, lambda);
    Poly h = p_shift(ft, lambda);
    Poly ut = p_shift(p_series_inverse(h, mult), -lambda);
    MatrixQ et = poly_of_matrix(p_mul(ut, ft), a);
    MatrixQ nt = mat_add(a, mat_scale(identity_matrix(n), -lambda));
    MatrixQ power = identity_matrix(n);
    for (int r = 0; r < mult; ++r) {
      MatrixQ term = mat_scale(mat_mul(et, power), Rat(1) / factorial(r));
      Rat sign = (r % 2) ? Rat(-1) : Rat(1);
      Monomial mono = Monomial::atom(eps).pow(r);
      if (lambda != 0) mono = mono.times(Monomial::atom(Atom::exponential(eps.name(), -lambda)));
      for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col)
          if (term[row][col] != 0) b[row][col] += Expr::monomial(sign * term[row][col], mono);
      power = mat_mul(power, nt);
    }
  }

  AdjointMatrix out;
  out.generator = i;
  out.eps = eps;
  out.m.assign(n, std::vector<Expr>(n));
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col) out.m[row][col] = b[col][row];  // row layout
  return out;
}

// ---------------------------------------------------------------------------
// Subalgebra verification
// ---------------------------------------------------------------------------

SubalgebraVerdict is_subalgebra(const LieAlgebra& g,
                                const std::vector<std::vector<Expr>>& vectors) {
  const int n = g.dim();
  const int m = static_cast<int>(vectors.size());
  SubalgebraVerdict out;
  std::set<Expr> seen_cond, seen_gen;

  auto note_condition = [&](const Expr& e) {
    Expr norm = normalize_constraint(e);
    if (norm.is_zero()) return;
    if (norm.is_constant()) {
      out.kind = SubalgebraVerdict::Kind::No;
      return;
    }
    if (seen_cond.insert(norm).second) out.conditions.push_back(norm);
    if (out.kind == SubalgebraVerdict::Kind::Yes)
      out.kind = SubalgebraVerdict::Kind::Conditional;
  };

  for (int p = 0; p < m && out.kind != SubalgebraVerdict::Kind::No; ++p)
    for (int q = p + 1; q < m && out.kind != SubalgebraVerdict::Kind::No; ++q) {
      std::vector<Expr> z = g.bracket_sym(vectors[p], vectors[q]);
      // Eliminate [vectors | z]; leftover z entries are the conditions.
      std::vector<std::vector<Expr>> aug(n, std::vector<Expr>(m + 1));
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < m; ++c) aug[r][c] = vectors[c][r];
        aug[r][m] = z[r];
      }
      int used = 0;
      for (int col = 0; col < m && used < n; ++col) {
        int pivot = -1;
        for (int r = used; r < n; ++r)
          if (!aug[r][col].is_zero() && aug[r][col].is_constant()) {
            pivot = r;
            break;
          }
        if (pivot < 0)
          for (int r = used; r < n; ++r)
            if (!aug[r][col].is_zero()) {
              pivot = r;
              break;
            }
        if (pivot < 0) continue;
        std::swap(aug[used], aug[pivot]);
        if (!aug[used][col].is_constant()) {
          Expr gen = normalize_constraint(aug[used][col]);
          if (seen_gen.insert(gen).second) out.genericity.push_back(gen);
        }
        for (int r = 0; r < n; ++r) {
          if (r == used || aug[r][col].is_zero()) continue;
          Expr f = aug[r][col];
          for (int c2 = 0; c2 <= m; ++c2)
            aug[r][c2] = aug[used][col] * aug[r][c2] - f * aug[used][c2];
        }
        ++used;
      }
      for (int r = 0; r < n; ++r) {
        bool lead_zero = true;
        for (int c = 0; c < m; ++c)
          if (!aug[r][c].is_zero()) {
            lead_zero = false;
            break;
          }
        if (lead_zero) note_condition(aug[r][m]);
      }
    }
  if (out.kind == SubalgebraVerdict::Kind::No) {
    out.conditions.clear();
    out.genericity.clear();
  }
  return out;
}

// ---------------------------------------------------------------------------
// One-dimensional normalization
// ---------------------------------------------------------------------------

Normalized1D normalize_1d(const LieAlgebra& g, const VectorQ& x) {
  const int n = g.dim();
  bool all_zero = std::all_of(x.begin(), x.end(), [](const Rat& c) { return c == 0; });
  if (all_zero) throw ValidationError("normalize_1d of the zero vector");

  Atom eps = Atom::symbol(SymKind::GroupParam, "eps");
  std::vector<std::pair<int, AdjointMatrix>> nilpotent_actors;
  for (int i = 0; i < n; ++i) {
    MatrixQ a = g.ad(i);
    MatrixQ power = a;
    for (int k = 1; k < n; ++k) power = mat_mul(power, a);
    if (mat_is_zero(power)) nilpotent_actors.push_back({i, adjoint_matrix(g, i, eps)});
  }

  Normalized1D out;
  out.canonical = x;
  auto support = [](const VectorQ& v) {
    int s = 0;
    for (const Rat& c : v)
      if (c != 0) ++s;
    return s;
  };

  while (true) {
    int cur_support = support(out.canonical);
    struct Best {
      int support;
      Rat abs_eps;
      int actor;
      Rat eps_value;
      VectorQ vec;
    };
    std::optional<Best> best;
    for (const auto& [actor, adj] : nilpotent_actors) {
      std::vector<Expr> xe;
      for (const Rat& c : out.canonical) xe.push_back(Expr(c));
      std::vector<Expr> y = adj.apply_row(xe);
      for (int t = 0; t < n; ++t) {
        Poly pt;  // y_t as a polynomial in eps
        for (const auto& [mono, coeff] : y[t].terms()) {
          int d = mono.exponent_of(eps);
          if (static_cast<int>(pt.size()) <= d) pt.resize(d + 1, Rat(0));
          pt[d] += coeff;
        }
        p_trim(pt);
        if (p_degree(pt) < 1) continue;
        for (const auto& [root, mult] : rational_roots(pt)) {
          (void)mult;
          if (root == 0) continue;
          MatrixQ mat = adj.at(root);
          VectorQ cand(n, Rat(0));
          for (int j = 0; j < n; ++j) {
            if (out.canonical[j] == 0) continue;
            for (int k = 0; k < n; ++k) cand[k] += out.canonical[j] * mat[j][k];
          }
          int s = support(cand);
          if (s >= cur_support) continue;
          Best b{s, rat_abs(root), actor, root, cand};
          if (!best || b.support < best->support ||
              (b.support == best->support && b.abs_eps < best->abs_eps) ||
              (b.support == best->support && b.abs_eps == best->abs_eps &&
               b.actor < best->actor))
            best = std::move(b);
        }
      }
    }
    if (!best) break;
    out.moves.push_back({best->actor, best->eps_value});
    out.canonical = best->vec;
  }

  if (support(out.canonical) == 1) {
    for (int i = 0; i < n; ++i)
      if (out.canonical[i] != 0 && out.canonical[i] != 1) {
        out.scale = Rat(1) / out.canonical[i];
        out.canonical[i] = 1;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pair and triple closure conditions
// ---------------------------------------------------------------------------

namespace {

std::vector<Atom> partner_unknowns(int n) {
  std::vector<Atom> out;
  for (int i = 0; i < n; ++i)
    out.push_back(Atom::symbol(SymKind::Unknown, "a" + std::to_string(i + 1)));
  return out;
}

void minors_vanish(const std::vector<std::vector<Expr>>& columns, int size,
                   std::vector<Expr>& constraints, std::set<Expr>& seen) {
  const int n = static_cast<int>(columns[0].size());
  std::vector<int> rows(size);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == size) {
      std::vector<std::vector<Expr>> minor(size, std::vector<Expr>(size));
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) minor[r][c] = columns[c][rows[r]];
      Expr d = normalize_constraint(det_expr(minor));
      if (!d.is_zero() && seen.insert(d).second) constraints.push_back(d);
      return;
    }
    for (int r = start; r <= n - (size - depth); ++r) {
      rows[depth] = r;
      rec(r + 1, depth + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

PairCondition solve_pair_condition(const LieAlgebra& g, const std::vector<Expr>& x1) {
  const int n = g.dim();
  PairCondition out;
  out.unknowns = partner_unknowns(n);
  std::vector<Expr> a;
  for (const Atom& u : out.unknowns) a.push_back(Expr::atom(u));
  std::vector<Expr> z = g.bracket_sym(x1, a);
  if (n < 3) return out;  // rank <= 2 automatically
  std::set<Expr> seen;
  minors_vanish({x1, a, z}, 3, out.constraints, seen);
  return out;
}

TripleCondition solve_triple_condition(const LieAlgebra& g, const VectorQ& y1,
                                       const VectorQ& y2) {
  const int n = g.dim();
  MatrixQ pair_rows = {y1, y2};
  if (rank(pair_rows) != 2)
    throw ValidationError("y1, y2 do not span a 2-dimensional subspace");
  if (!in_row_space({y1, y2}, g.bracket(y1, y2)))
    throw ValidationError("{y1, y2} is not a subalgebra");

  TripleCondition out;
  out.unknowns = partner_unknowns(n);
  std::vector<Expr> a, e1, e2;
  for (const Atom& u : out.unknowns) a.push_back(Expr::atom(u));
  for (const Rat& c : y1) e1.push_back(Expr(c));
  for (const Rat& c : y2) e2.push_back(Expr(c));
  if (n < 4) return out;
  std::set<Expr> seen;
  minors_vanish({e1, e2, a, g.bracket_sym(e1, a)}, 4, out.constraints, seen);
  minors_vanish({e1, e2, a, g.bracket_sym(e2, a)}, 4, out.constraints, seen);
  return out;
}

bool triple_candidate_ok(const LieAlgebra& g, const TripleCondition& tc, const VectorQ& y1,
                         const VectorQ& y2, const VectorQ& a) {
  MatrixQ rows = {y1, y2, a};
  if (rank(rows) != 3) return false;
  (void)g;
  std::map<Atom, Rat> values;
  for (std::size_t i = 0; i < tc.unknowns.size(); ++i) values[tc.unknowns[i]] = a[i];
  for (const Expr& c : tc.constraints)
    if (c.eval(values) != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Series, Killing form, structure
// ---------------------------------------------------------------------------

namespace {

MatrixQ bracket_span(const LieAlgebra& g, const MatrixQ& a, const MatrixQ& b) {
  MatrixQ rows;
  for (const auto& x : a)
    for (const auto& y : b) rows.push_back(g.bracket(x, y));
  return row_space(rows);
}

}  // namespace

std::vector<MatrixQ> derived_series(const LieAlgebra& g) {
  std::vector<MatrixQ> out = {identity_matrix(g.dim())};
  while (true) {
    const MatrixQ& cur = out.back();
    if (cur.empty()) break;
    MatrixQ next = bracket_span(g, cur, cur);
    if (next == cur) break;
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<MatrixQ> lower_central_series(const LieAlgebra& g) {
  MatrixQ full = identity_matrix(g.dim());
  std::vector<MatrixQ> out = {full};
  while (true) {
    const MatrixQ& cur = out.back();
    if (cur.empty()) break;
    MatrixQ next = bracket_span(g, full, cur);
    if (next == cur) break;
    out.push_back(std::move(next));
  }
  return out;
}

bool is_solvable(const LieAlgebra& g) { return derived_series(g).back().empty(); }

bool is_nilpotent(const LieAlgebra& g) { return lower_central_series(g).back().empty(); }

MatrixQ killing_form(const LieAlgebra& g) {
  const int n = g.dim();
  std::vector<MatrixQ> ads;
  for (int i = 0; i < n; ++i) ads.push_back(g.ad(i));
  MatrixQ k(n, VectorQ(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k[i][j] = mat_trace(mat_mul(ads[i], ads[j]));
  return k;
}

MatrixQ radical(const LieAlgebra& g) {
  const int n = g.dim();
  MatrixQ k = killing_form(g);
  MatrixQ full = identity_matrix(n);
  MatrixQ derived = bracket_span(g, full, full);
  MatrixQ rows;
  for (const auto& d : derived) {
    VectorQ row(n, Rat(0));
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < n; ++t) row[j] += k[j][t] * d[t];
    rows.push_back(std::move(row));
  }
  return nullspace_dense(rows, n);
}

MatrixQ center(const LieAlgebra& g) {
  const int n = g.dim();
  MatrixQ rows;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      VectorQ row(n, Rat(0));
      for (int i = 0; i < n; ++i) row[i] = g.c(i, j, k);
      rows.push_back(std::move(row));
    }
  return nullspace_dense(rows, n);
}

Decomposition decompose(const LieAlgebra& g) {
  const int n = g.dim();
  Decomposition out;
  MatrixQ z = center(g);
  out.abelian_dim = static_cast<int>(z.size());
  if (out.abelian_dim == n) {
    out.recognized = true;
    out.text = "R^" + std::to_string(n);
    return out;
  }
  // Greedy complement from standard basis vectors, then closure check.
  MatrixQ span = z;
  MatrixQ complement;
  for (int i = 0; i < n; ++i) {
    VectorQ e(n, Rat(0));
    e[i] = 1;
    if (in_row_space(span, e)) continue;
    span.push_back(e);
    complement.push_back(e);
  }
  MatrixQ comp_space = row_space(complement);
  MatrixQ closure = bracket_span(g, comp_space, comp_space);
  for (const auto& v : closure)
    if (!in_row_space(comp_space, v)) return out;

  if (complement.size() == 2 && !closure.empty()) {
    out.recognized = true;
    out.affine_factor = true;
    out.text = (out.abelian_dim > 0 ? "R^" + std::to_string(out.abelian_dim) + " (+) " : "") +
               std::string("a(1)");
  }
  return out;
}

}  // namespace liesym
