#include "liesym/detsys.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace liesym {

namespace {

bool is_jet_atom(const Atom& a) { return a.is_jet(); }
bool is_param_atom(const Atom& a) { return a.kind() == SymKind::Parameter; }
bool is_unknown_atom(const Atom& a) { return a.kind() == SymKind::Unknown; }

struct LeadCandidate {
  Atom lead = Atom::symbol(SymKind::Dependent, "?");
  Rat coeff_rat;
  Monomial coeff_params;
};

// A jet atom qualifies as leading when the equation is linear in it and its
// coefficient is a single parameter-monomial term.
std::optional<LeadCandidate> as_candidate(const Expr& eq, const Atom& u) {
  auto parts = eq.collect(std::set<Atom>{u});
  LeadCandidate cand;
  cand.lead = u;
  bool found = false;
  for (const auto& [m, coeff] : parts) {
    int d = m.exponent_of(u);
    if (d == 0) continue;
    if (d > 1) return std::nullopt;
    if (coeff.term_count() != 1) return std::nullopt;
    const auto& [cm, cr] = *coeff.terms().begin();
    for (const auto& [a, e] : cm.factors())
      if (!is_param_atom(a)) return std::nullopt;
    cand.coeff_rat = cr;
    cand.coeff_params = cm;
    found = true;
  }
  if (!found) return std::nullopt;
  return cand;
}

}  // namespace

PDESystem make_system(const Context& ctx, std::vector<Expr> equations,
                      const std::vector<std::optional<Atom>>& leading) {
  PDESystem sys;
  sys.equations = std::move(equations);
  std::set<Atom> taken;
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    const Expr& eq = sys.equations[i];
    std::optional<LeadCandidate> chosen;
    if (i < leading.size() && leading[i]) {
      chosen = as_candidate(eq, *leading[i]);
      if (!chosen)
        throw ValidationError("equation " + std::to_string(i + 1) +
                              ": requested leading derivative " + leading[i]->text() +
                              " is not admissible");
    } else {
      for (const Atom& a : eq.atoms()) {
        if (!a.is_jet() || taken.count(a)) continue;
        auto cand = as_candidate(eq, a);
        if (!cand) continue;
        if (!chosen) {
          chosen = cand;
          continue;
        }
        const Atom& best = chosen->lead;
        int oa = a.jet_order(), ob = best.jet_order();
        bool better = false;
        if (oa != ob) {
          better = oa > ob;
        } else {
          int da = ctx.declaration_index(Atom::symbol(SymKind::Dependent, a.name()));
          int db = ctx.declaration_index(Atom::symbol(SymKind::Dependent, best.name()));
          if (da != db)
            better = da < db;  // earliest-declared dependent wins
          else
            better = best.index() < a.index();  // then the largest index
        }
        if (better) chosen = cand;
      }
      if (!chosen)
        throw ValidationError("equation " + std::to_string(i + 1) +
                              " has no admissible leading derivative (linear occurrence with a "
                              "parameter-monomial coefficient required)");
    }
    if (taken.count(chosen->lead))
      throw ValidationError("equation " + std::to_string(i + 1) + ": leading derivative " +
                            chosen->lead.text() + " already solves another equation");
    taken.insert(chosen->lead);
    SolvedForm form;
    form.lead = chosen->lead;
    form.coeff_rat = chosen->coeff_rat;
    form.coeff_params = chosen->coeff_params;
    // eq = coeff*lead + rest  =>  coeff*lead = -rest
    Expr rest = eq - Expr::monomial(chosen->coeff_rat,
                                    chosen->coeff_params.times(Monomial::atom(chosen->lead)));
    if (rest.depends_on(chosen->lead))
      throw ValidationError("equation " + std::to_string(i + 1) +
                            " is not linear in its leading derivative");
    form.rhs = -rest;
    sys.solved_forms.push_back(std::move(form));
  }

  // Inter-reduce the right sides so no solved form mentions a leading atom.
  for (int pass = 0;; ++pass) {
    if (pass > 100) throw ValidationError("solved forms do not triangularize");
    bool changed = false;
    for (auto& form : sys.solved_forms) {
      for (const auto& other : sys.solved_forms) {
        if (other.lead == form.lead) continue;
        if (!form.rhs.depends_on(other.lead)) continue;
        auto parts = form.rhs.collect(std::set<Atom>{other.lead});
        int top = 0;
        for (const auto& [m, c] : parts) top = std::max(top, m.exponent_of(other.lead));
        Expr crep = Expr::monomial(other.coeff_rat, other.coeff_params);
        Expr next;
        for (const auto& [m, c] : parts) {
          int p = m.exponent_of(other.lead);
          next += c * crep.pow(top - p) * other.rhs.pow(p);
        }
        form.rhs = next;
        form.coeff_rat *= rat_pow(other.coeff_rat, static_cast<unsigned long>(top));
        form.coeff_params = form.coeff_params.times(other.coeff_params.pow(top));
        changed = true;
      }
      if (form.rhs.depends_on(form.lead))
        throw ValidationError("solved form for " + form.lead.text() +
                              " depends on itself; system not triangular");
    }
    if (!changed) break;
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Reducer
// ---------------------------------------------------------------------------

Reducer::Reducer(const Context& ctx, const PDESystem& sys, int max_order) {
  for (const auto& base : sys.solved_forms) rules_[base.lead] = base;
  // Derivative extensions: D_K applied to both sides of coeff*lead = rhs.
  for (const auto& base : sys.solved_forms) {
    int room = max_order - base.lead.jet_order();
    if (room <= 0) continue;
    for (const auto& K : multi_indices_up_to(ctx.independents(), room)) {
      Atom lead = Atom::jet(base.lead.name(), [&] {
        MultiIndex idx = base.lead.index();
        for (const auto& v : K.flatten()) idx = idx.plus(v);
        return idx;
      }());
      if (rules_.count(lead)) continue;
      SolvedForm ext;
      ext.lead = lead;
      ext.coeff_rat = base.coeff_rat;
      ext.coeff_params = base.coeff_params;
      ext.rhs = total_derivative(base.rhs, K);
      rules_[lead] = std::move(ext);
    }
  }
}

const SolvedForm* Reducer::rule_for(const Atom& a) const {
  auto it = rules_.find(a);
  return it == rules_.end() ? nullptr : &it->second;
}

Reduced Reducer::reduce(const Expr& e) const {
  Expr cur = e;
  Monomial den;
  Rat den_rat(1);
  for (int step = 0;; ++step) {
    if (step > 10000) throw InternalError("reduction did not terminate");
    const Atom* pick = nullptr;
    std::set<Atom> seen = cur.atoms();
    for (auto it = seen.rbegin(); it != seen.rend(); ++it) {
      if (rules_.count(*it)) {
        pick = &*it;
        break;
      }
      // Guard: reducible atom beyond the precomputed closure is a bug.
      if (it->is_jet())
        for (const auto& [lead, rule] : rules_)
          if (rule.lead.name() == it->name() && it->index().contains(rule.lead.index()) &&
              !(rule.lead.index() == it->index()))
            throw InternalError("reduction closure too small for " + it->text());
    }
    if (!pick) break;
    const SolvedForm& rule = rules_.at(*pick);
    auto parts = cur.collect(std::set<Atom>{*pick});
    int top = 0;
    for (const auto& [m, c] : parts) top = std::max(top, m.exponent_of(*pick));
    Expr crep = Expr::monomial(rule.coeff_rat, rule.coeff_params);
    Expr next;
    for (const auto& [m, c] : parts) {
      int p = m.exponent_of(*pick);
      next += c * crep.pow(top - p) * rule.rhs.pow(p);
    }
    cur = next;
    den = den.times(rule.coeff_params.pow(top));
    den_rat *= rat_pow(rule.coeff_rat, static_cast<unsigned long>(top));
  }
  if (den_rat != 1) cur = cur.scaled(Rat(1) / den_rat);
  if (cur.is_zero()) return {Expr(), Monomial()};
  Monomial g = Monomial::gcd(cur.monomial_content(is_param_atom), den);
  if (!g.is_one()) {
    cur = cur.divided_by(g);
    den = den.divide_exact(g);
  }
  return {cur, den};
}

// ---------------------------------------------------------------------------
// Determining system
// ---------------------------------------------------------------------------

DeterminingSystem invariance_condition(const Context& ctx, const PDESystem& sys,
                                       const VectorField& ansatz, int order) {
  validate_point_field(ctx, ansatz, /*allow_unknowns=*/true);
  Reducer red(ctx, sys, order + 2);
  ProlongedField pv = prolong(ctx, ansatz, order);

  DeterminingSystem out;
  std::set<Atom> unknown_set;
  for (const auto& [z, c] : ansatz.coeffs)
    for (const Atom& a : c.atoms())
      if (is_unknown_atom(a)) unknown_set.insert(a);
  out.unknowns.assign(unknown_set.begin(), unknown_set.end());

  std::set<Expr> seen;
  for (std::size_t ei = 0; ei < sys.equations.size(); ++ei) {
    Expr residual = red.reduce(apply(ctx, pv, sys.equations[ei])).num;
    for (const auto& [jet_mono, coeff] : residual.collect(is_jet_atom)) {
      if (coeff.is_zero()) continue;
      if (coeff.degree_if(is_unknown_atom) > 1)
        throw InternalError("determining equation not linear in unknowns");
      Expr norm = coeff.primitive_part([](const Atom& a) { return !is_unknown_atom(a); });
      if (!unknown_set.empty()) {
        auto by_unknown = norm.collect(is_unknown_atom);
        auto it = by_unknown.find(Monomial());
        if (it != by_unknown.end() && !it->second.is_zero())
          throw InternalError("determining equation not homogeneous in unknowns");
      }
      if (seen.insert(norm).second)
        out.equations.push_back({norm, static_cast<int>(ei), jet_mono});
    }
  }
  return out;
}

VerifyResult verify_symmetry(const Context& ctx, const PDESystem& sys, const VectorField& v,
                             int order) {
  validate_point_field(ctx, v);
  Reducer red(ctx, sys, order + 2);
  ProlongedField pv = prolong(ctx, v, order);
  VerifyResult out;
  out.ok = true;
  for (std::size_t ei = 0; ei < sys.equations.size(); ++ei) {
    Expr residual = red.reduce(apply(ctx, pv, sys.equations[ei])).num;
    if (!residual.is_zero()) {
      out.ok = false;
      out.residuals.push_back({static_cast<int>(ei), residual});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ansatz space
// ---------------------------------------------------------------------------

AnsatzSpace::AnsatzSpace(const Context& ctx, int degree) : degree_(degree) {
  if (degree < 0) throw ValidationError("ansatz degree must be >= 0");
  const auto coords = ctx.base_coordinates();
  if (coords.empty()) throw ValidationError("no base coordinates declared");
  // All monomials of total degree <= degree over the base coordinates.
  std::vector<Monomial> monos = {Monomial()};
  std::vector<Monomial> frontier = monos;
  for (int d = 1; d <= degree; ++d) {
    std::vector<Monomial> next;
    for (const auto& m : frontier)
      for (const auto& z : coords) next.push_back(m.times(Monomial::atom(z)));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    monos.insert(monos.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  long total = static_cast<long>(coords.size()) * static_cast<long>(monos.size());
  if (total > 20000)
    throw CapacityError("ansatz would need " + std::to_string(total) + " unknowns");
  int width = 1;
  for (long t = total; t >= 10; t /= 10) ++width;
  int j = 0;
  for (const auto& z : coords)
    for (const auto& m : monos) {
      columns_.push_back({z, m});
      std::ostringstream name;
      name << "c";
      std::string digits = std::to_string(j);
      name << std::string(width - static_cast<int>(digits.size()), '0') << digits;
      unknowns_.push_back(Atom::symbol(SymKind::Unknown, name.str()));
      unknown_index_[unknowns_.back()] = j;
      ++j;
    }
}

int AnsatzSpace::column_of(const Atom& unknown) const {
  auto it = unknown_index_.find(unknown);
  if (it == unknown_index_.end()) throw ValidationError("not an ansatz unknown: " + unknown.text());
  return it->second;
}

VectorField AnsatzSpace::symbolic_field() const {
  VectorField v;
  for (int j = 0; j < size(); ++j) {
    const auto& [z, m] = columns_[j];
    v.set(z, v.coeff(z) + Expr::monomial(Rat(1), m.times(Monomial::atom(unknowns_[j]))));
  }
  return v;
}

VectorField AnsatzSpace::unit_field(int j) const {
  VectorField v;
  const auto& [z, m] = columns_[j];
  v.set(z, Expr::monomial(Rat(1), m));
  return v;
}

VectorField AnsatzSpace::field_from_coords(const VectorQ& coords) const {
  if (static_cast<int>(coords.size()) != size())
    throw ValidationError("coordinate vector has wrong length");
  VectorField v;
  for (int j = 0; j < size(); ++j) {
    if (coords[j] == 0) continue;
    const auto& [z, m] = columns_[j];
    v.set(z, v.coeff(z) + Expr::monomial(coords[j], m));
  }
  return v;
}

VectorField AnsatzSpace::field_from_coords(const std::vector<Expr>& coords) const {
  if (static_cast<int>(coords.size()) != size())
    throw ValidationError("coordinate vector has wrong length");
  VectorField v;
  for (int j = 0; j < size(); ++j) {
    if (coords[j].is_zero()) continue;
    if (coords[j].any_atom([](const Atom& a) { return !is_param_atom(a); }))
      throw ValidationError("ansatz coordinate must be a parameter polynomial");
    const auto& [z, m] = columns_[j];
    v.set(z, v.coeff(z) + coords[j] * Expr::monomial(Rat(1), m));
  }
  return v;
}

VectorQ AnsatzSpace::coords_of(const VectorField& v) const {
  VectorQ out(size(), Rat(0));
  std::map<std::pair<Atom, Monomial>, int> index;
  for (int j = 0; j < size(); ++j) index[columns_[j]] = j;
  for (const auto& [z, c] : v.coeffs)
    for (const auto& [m, r] : c.terms()) {
      auto it = index.find({z, m});
      if (it == index.end())
        throw ValidationError("field term " + m.text() + " d/d" + z.name() +
                              " outside the ansatz space");
      out[it->second] = r;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Row assembly
// ---------------------------------------------------------------------------

std::vector<SparseRow> LinearRows::sparse() const {
  std::vector<SparseRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.entries);
  return out;
}

namespace {

using RowKey = std::pair<Monomial, Monomial>;  // (jet monomial, coefficient monomial)

void push_rows(LinearRows& out, int eq, std::map<RowKey, SparseRow>&& rows) {
  for (auto& [key, entries] : rows) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.rows.push_back({eq, key.first, key.second, std::move(entries)});
  }
}

LinearRows rows_symbolic(const Context& ctx, const PDESystem& sys, const AnsatzSpace& space,
                         int order) {
  DeterminingSystem ds = invariance_condition(ctx, sys, space.symbolic_field(), order);
  LinearRows out;
  out.ncols = space.size();
  std::map<std::tuple<int, Monomial, Monomial>, SparseRow> acc;
  for (const auto& de : ds.equations) {
    for (const auto& [umono, coeff] : de.expr.collect(is_unknown_atom)) {
      if (umono.is_one()) continue;  // homogeneous: validated upstream
      if (umono.factors().size() != 1 || umono.factors()[0].second != 1)
        throw InternalError("nonlinear unknown monomial " + umono.text());
      int j = space.column_of(umono.factors()[0].first);
      for (const auto& [m, c] : coeff.terms())
        acc[{de.source_eq, de.jet_monomial, m}].push_back({j, c});
    }
  }
  for (auto& [key, entries] : acc) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                        std::move(entries)});
  }
  return out;
}

LinearRows rows_columns(const Context& ctx, const PDESystem& sys, const AnsatzSpace& space,
                        int order, bool parallel) {
  Reducer red(ctx, sys, order + 2);
  LinearRows out;
  out.ncols = space.size();
  const int m = space.size();
  for (std::size_t ei = 0; ei < sys.equations.size(); ++ei) {
    const Expr& eq = sys.equations[ei];
    std::vector<Reduced> cols(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int j = 0; j < m; ++j) {
      ProlongedField pv = prolong(ctx, space.unit_field(j), order);
      cols[j] = red.reduce(apply(ctx, pv, eq));
    }
    (void)parallel;
    Monomial lcm;
    for (const auto& r : cols)
      if (!r.num.is_zero()) lcm = Monomial::lcm(lcm, r.den);
    std::map<RowKey, SparseRow> acc;
    for (int j = 0; j < m; ++j) {
      if (cols[j].num.is_zero()) continue;
      Expr g = cols[j].num * Expr::monomial(Rat(1), lcm.divide_exact(cols[j].den));
      for (const auto& [mono, c] : g.terms()) {
        auto [jet, rest] = mono.split(is_jet_atom);
        acc[{jet, rest}].push_back({j, c});
      }
    }
    push_rows(out, static_cast<int>(ei), std::move(acc));
  }
  return out;
}

// Rows over the parameter field: split each scalar monomial into its
// jet/base-variable key and a parameter part folded into the entry.

using ParamRowMap = std::map<std::tuple<int, Monomial, Monomial>, std::map<int, Expr>>;

bool is_key_atom(const Atom& a) { return !is_param_atom(a) && !is_unknown_atom(a); }

// Common rational and parameter-monomial content out, leading sign positive.
void normalize_param_row(std::vector<std::pair<int, Expr>>& entries) {
  if (entries.empty()) return;
  Monomial mono_content;
  Rat content(0);
  bool first = true;
  for (const auto& [j, e] : entries) {
    Monomial c = e.monomial_content(is_param_atom);
    mono_content = first ? c : Monomial::gcd(mono_content, c);
    for (const auto& [m, r] : e.terms()) content = rat_gcd(content, r);
    first = false;
  }
  if (sgn(entries.front().second.terms().begin()->second) < 0) content = -content;
  for (auto& [j, e] : entries) {
    if (!mono_content.is_one()) e = e.divided_by(mono_content);
    e = e.scaled(Rat(1) / content);
  }
}

ParamRows finish_param_rows(ParamRowMap&& acc, int ncols) {
  ParamRows out;
  out.ncols = ncols;
  for (auto& [key, entries] : acc) {
    ParamRows::Row row;
    row.eq = std::get<0>(key);
    row.jet = std::get<1>(key);
    row.mono = std::get<2>(key);
    for (auto& [j, e] : entries)
      if (!e.is_zero()) row.entries.push_back({j, std::move(e)});
    if (row.entries.empty()) continue;
    normalize_param_row(row.entries);
    out.rows.push_back(std::move(row));
  }
  return out;
}

ParamRows field_rows_columns(const Context& ctx, const PDESystem& sys, const AnsatzSpace& space,
                             int order, bool parallel) {
  Reducer red(ctx, sys, order + 2);
  const int m = space.size();
  ParamRowMap acc;
  for (std::size_t ei = 0; ei < sys.equations.size(); ++ei) {
    const Expr& eq = sys.equations[ei];
    std::vector<Reduced> cols(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int j = 0; j < m; ++j) {
      ProlongedField pv = prolong(ctx, space.unit_field(j), order);
      cols[j] = red.reduce(apply(ctx, pv, eq));
    }
    (void)parallel;
    Monomial lcm;
    for (const auto& r : cols)
      if (!r.num.is_zero()) lcm = Monomial::lcm(lcm, r.den);
    for (int j = 0; j < m; ++j) {
      if (cols[j].num.is_zero()) continue;
      Expr g = cols[j].num * Expr::monomial(Rat(1), lcm.divide_exact(cols[j].den));
      for (const auto& [mono, c] : g.terms()) {
        auto [key, params] = mono.split(is_key_atom);
        auto [jet, base] = key.split(is_jet_atom);
        acc[{static_cast<int>(ei), jet, base}][j] += Expr::monomial(c, params);
      }
    }
  }
  return finish_param_rows(std::move(acc), m);
}

ParamRows field_rows_symbolic(const Context& ctx, const PDESystem& sys, const AnsatzSpace& space,
                              int order) {
  DeterminingSystem ds = invariance_condition(ctx, sys, space.symbolic_field(), order);
  ParamRowMap acc;
  for (const auto& de : ds.equations) {
    for (const auto& [umono, coeff] : de.expr.collect(is_unknown_atom)) {
      if (umono.is_one()) continue;
      if (umono.factors().size() != 1 || umono.factors()[0].second != 1)
        throw InternalError("nonlinear unknown monomial " + umono.text());
      int j = space.column_of(umono.factors()[0].first);
      for (const auto& [mono, c] : coeff.terms()) {
        auto [base, params] = mono.split([](const Atom& a) { return !is_param_atom(a); });
        acc[{de.source_eq, de.jet_monomial, base}][j] += Expr::monomial(c, params);
      }
    }
  }
  return finish_param_rows(std::move(acc), space.size());
}

}  // namespace

LinearRows determining_rows(const Context& ctx, const PDESystem& sys, const AnsatzSpace& space,
                            int order, RowsRoute route, bool parallel) {
  return route == RowsRoute::SymbolicAnsatz ? rows_symbolic(ctx, sys, space, order)
                                            : rows_columns(ctx, sys, space, order, parallel);
}

ParamRows determining_rows_field(const Context& ctx, const PDESystem& sys,
                                 const AnsatzSpace& space, int order, RowsRoute route,
                                 bool parallel) {
  return route == RowsRoute::SymbolicAnsatz
             ? field_rows_symbolic(ctx, sys, space, order)
             : field_rows_columns(ctx, sys, space, order, parallel);
}

std::vector<std::vector<Expr>> param_nullspace(const ParamRows& rows) {
  using Row = std::vector<std::pair<int, Expr>>;
  const int ncols = rows.ncols;

  // Forward elimination over the fraction field of the parameter ring:
  // cross-multiplied updates keep entries polynomial; any nonzero pivot is
  // invertible because the parameters are independent transcendentals.
  auto eliminate = [](const Row& a, const Row& b, const Expr& a_lead, const Expr& b_lead) {
    Row out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back({a[i].first, a[i].second * b_lead});
        ++i;
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.push_back({b[j].first, -(b[j].second * a_lead)});
        ++j;
      } else {
        Expr v = a[i].second * b_lead - b[j].second * a_lead;
        if (!v.is_zero()) out.push_back({a[i].first, std::move(v)});
        ++i;
        ++j;
      }
    }
    normalize_param_row(out);
    return out;
  };

  std::map<int, Row> pivots;
  for (const auto& r : rows.rows) {
    Row row = r.entries;
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) break;
      row = eliminate(row, it->second, row.front().second, it->second.front().second);
    }
    if (!row.empty()) pivots.emplace(row.front().first, std::move(row));
  }

  // Gauss-Jordan pass: clear pivot columns from the other pivot rows.
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const int col = it->first;
    for (auto& [pc, row] : pivots) {
      if (pc == col) continue;
      auto entry = std::find_if(row.begin(), row.end(),
                                [&](const auto& e) { return e.first == col; });
      if (entry == row.end()) continue;
      row = eliminate(row, it->second, entry->second, it->second.front().second);
    }
  }

  std::vector<int> free_cols;
  {
    std::vector<bool> is_pivot(ncols, false);
    for (const auto& [c, r] : pivots) is_pivot[c] = true;
    for (int c = 0; c < ncols; ++c)
      if (!is_pivot[c]) free_cols.push_back(c);
  }

  // Basis vector per free column f: x_f is the product of the pivots of the
  // rows that mention f, so every coordinate stays polynomial.
  std::vector<std::vector<Expr>> basis;
  for (int f : free_cols) {
    std::vector<std::pair<int, const Row*>> involved;  // (pivot col, row)
    for (const auto& [pc, row] : pivots)
      for (const auto& [c, e] : row)
        if (c == f) {
          involved.push_back({pc, &row});
          break;
        }
    std::vector<Expr> v(ncols);
    Expr xf(1L);
    for (const auto& [pc, row] : involved) xf *= row->front().second;
    v[f] = xf;
    for (std::size_t k = 0; k < involved.size(); ++k) {
      Expr others(1L);
      for (std::size_t s = 0; s < involved.size(); ++s)
        if (s != k) others *= involved[s].second->front().second;
      const Row& row = *involved[k].second;
      Expr ef;
      for (const auto& [c, e] : row)
        if (c == f) ef = e;
      v[involved[k].first] = -(ef * others);
    }
    // content and sign normalization
    Monomial mc;
    Rat rc(0);
    bool first = true;
    int lead = -1;
    for (int c = 0; c < ncols; ++c) {
      if (v[c].is_zero()) continue;
      if (lead < 0) lead = c;
      Monomial pm = v[c].monomial_content([](const Atom& a) { return true; });
      mc = first ? pm : Monomial::gcd(mc, pm);
      for (const auto& [m, r] : v[c].terms()) rc = rat_gcd(rc, r);
      first = false;
    }
    if (lead >= 0 && sgn(v[lead].terms().begin()->second) < 0) rc = -rc;
    for (auto& e : v) {
      if (e.is_zero()) continue;
      if (!mc.is_one()) e = e.divided_by(mc);
      e = e.scaled(Rat(1) / rc);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

SymmetryBasis solve_determining(const Context& ctx, const PDESystem& sys, int degree,
                                const SolveOptions& opts) {
  AnsatzSpace space(ctx, degree);
  ParamRows rows = determining_rows_field(ctx, sys, space, opts.order, opts.route,
                                          opts.parallel);
  SymmetryBasis out;
  out.ansatz_degree = degree;
  out.unknown_count = space.size();
  out.row_count = static_cast<int>(rows.rows.size());
  for (const auto& v : param_nullspace(rows)) out.fields.push_back(space.field_from_coords(v));
  return out;
}

// ---------------------------------------------------------------------------
// Numeric point oracle
// ---------------------------------------------------------------------------

bool numeric_point_oracle(const Context& ctx, const PDESystem& sys, const VectorField& v,
                          int trials, std::uint64_t seed, int order) {
  if (trials < 1) throw ValidationError("oracle needs at least one trial");
  validate_point_field(ctx, v);
  Reducer red(ctx, sys, order + 2);
  ProlongedField pv = prolong(ctx, v, order);
  std::vector<Expr> raw;
  for (const Expr& eq : sys.equations) raw.push_back(apply(ctx, pv, eq));

  // Closure of atoms needed, following derived-rule right sides.
  std::set<Atom> needed;
  std::vector<Atom> work;
  auto note = [&](const Atom& a) {
    if (needed.insert(a).second) work.push_back(a);
  };
  for (const Expr& r : raw)
    for (const Atom& a : r.atoms()) note(a);
  while (!work.empty()) {
    Atom a = work.back();
    work.pop_back();
    if (const SolvedForm* rule = red.rule_for(a)) {
      for (const Atom& b : rule->rhs.atoms()) note(b);
      for (const auto& [p, e] : rule->coeff_params.factors()) note(p);
    }
  }

  std::vector<Atom> free_atoms, bound_atoms;
  for (const Atom& a : needed)
    (red.rule_for(a) ? bound_atoms : free_atoms).push_back(a);
  std::sort(bound_atoms.begin(), bound_atoms.end());

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num_dist(-9, 9);
  std::uniform_int_distribution<int> den_dist(1, 9);

  for (int t = 0; t < trials; ++t) {
    std::map<Atom, Rat> values;
    for (const Atom& a : free_atoms) {
      int n = num_dist(rng);
      if (a.kind() == SymKind::Parameter)
        while (n == 0) n = num_dist(rng);
      Rat r(n, den_dist(rng));
      r.canonicalize();
      values[a] = r;
    }
    // Leading jets through the solved forms, lowest order first; a fixpoint
    // pass handles rule right sides that mention other bound atoms.
    std::set<Atom> pending(bound_atoms.begin(), bound_atoms.end());
    while (!pending.empty()) {
      bool progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        const SolvedForm* rule = red.rule_for(*it);
        bool ready = true;
        for (const Atom& b : rule->rhs.atoms())
          if (!values.count(b)) {
            ready = false;
            break;
          }
        if (!ready) {
          ++it;
          continue;
        }
        Rat coeff = rule->coeff_rat;
        if (!rule->coeff_params.is_one())
          coeff *= Expr::monomial(Rat(1), rule->coeff_params).eval(values);
        values[*it] = rule->rhs.eval(values) / coeff;
        it = pending.erase(it);
        progress = true;
      }
      if (!progress) throw InternalError("oracle could not order the solved forms");
    }
    for (const Expr& r : raw)
      if (r.eval(values) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Span helpers
// ---------------------------------------------------------------------------

MatrixQ field_matrix(const Context& ctx, const std::vector<VectorField>& fields) {
  (void)ctx;
  std::map<std::pair<Atom, Monomial>, int> coords;
  for (const auto& f : fields)
    for (const auto& [z, c] : f.coeffs)
      for (const auto& [m, r] : c.terms()) coords.emplace(std::make_pair(z, m), 0);
  int i = 0;
  for (auto& [k, idx] : coords) idx = i++;
  MatrixQ out;
  for (const auto& f : fields) {
    VectorQ row(coords.size(), Rat(0));
    for (const auto& [z, c] : f.coeffs)
      for (const auto& [m, r] : c.terms()) row[coords.at({z, m})] = r;
    out.push_back(std::move(row));
  }
  return out;
}

bool same_field_span(const Context& ctx, const std::vector<VectorField>& a,
                     const std::vector<VectorField>& b) {
  std::vector<VectorField> all = a;
  all.insert(all.end(), b.begin(), b.end());
  MatrixQ m = field_matrix(ctx, all);
  MatrixQ ma(m.begin(), m.begin() + a.size());
  MatrixQ mb(m.begin() + a.size(), m.end());
  return same_row_space(ma, mb);
}

bool field_span_contains(const Context& ctx, const std::vector<VectorField>& span,
                         const std::vector<VectorField>& candidates) {
  std::vector<VectorField> all = span;
  all.insert(all.end(), candidates.begin(), candidates.end());
  MatrixQ m = field_matrix(ctx, all);
  MatrixQ ms(m.begin(), m.begin() + span.size());
  for (std::size_t i = span.size(); i < m.size(); ++i)
    if (!in_row_space(ms, m[i])) return false;
  return true;
}

}  // namespace liesym
