#include "liesym/expr.hpp"

#include <algorithm>
#include <sstream>

namespace liesym {

// ---------------------------------------------------------------------------
// SymKind / MultiIndex / Atom
// ---------------------------------------------------------------------------

std::string kind_name(SymKind k) {
  switch (k) {
    case SymKind::Independent: return "independent";
    case SymKind::Dependent: return "dependent";
    case SymKind::Parameter: return "parameter";
    case SymKind::GroupParam: return "group-parameter";
    case SymKind::Unknown: return "ansatz-unknown";
  }
  return "?";
}

MultiIndex MultiIndex::single(const std::string& var, int count) {
  return MultiIndex().plus(var, count);
}

MultiIndex MultiIndex::plus(const std::string& var, int count) const {
  if (count < 0) throw InternalError("negative multi-index increment");
  MultiIndex out = *this;
  if (count == 0) return out;
  auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), var,
                             [](const auto& p, const std::string& v) { return p.first < v; });
  if (it != out.entries_.end() && it->first == var)
    it->second += count;
  else
    out.entries_.insert(it, {var, count});
  return out;
}

int MultiIndex::order() const {
  int n = 0;
  for (const auto& [v, c] : entries_) n += c;
  return n;
}

int MultiIndex::count(const std::string& var) const {
  for (const auto& [v, c] : entries_)
    if (v == var) return c;
  return 0;
}

bool MultiIndex::contains(const MultiIndex& other) const {
  for (const auto& [v, c] : other.entries_)
    if (count(v) < c) return false;
  return true;
}

MultiIndex MultiIndex::minus(const MultiIndex& other) const {
  if (!contains(other)) throw InternalError("multi-index subtraction underflow");
  MultiIndex out;
  for (const auto& [v, c] : entries_) {
    int r = c - other.count(v);
    if (r > 0) out.entries_.push_back({v, r});
  }
  return out;
}

std::vector<std::string> MultiIndex::flatten() const {
  std::vector<std::string> out;
  for (const auto& [v, c] : entries_)
    for (int i = 0; i < c; ++i) out.push_back(v);
  return out;
}

bool MultiIndex::operator<(const MultiIndex& o) const {
  int a = order(), b = o.order();
  if (a != b) return a < b;
  return entries_ < o.entries_;
}

Atom Atom::symbol(SymKind kind, const std::string& name) {
  Atom a;
  a.kind_ = kind;
  a.name_ = name;
  return a;
}

Atom Atom::jet(const std::string& dependent, const MultiIndex& index) {
  Atom a;
  a.kind_ = SymKind::Dependent;
  a.name_ = dependent;
  a.index_ = index;
  return a;
}

Atom Atom::exponential(const std::string& group_param, const Rat& rate) {
  if (rate == 0) throw InternalError("exponential atom with zero rate");
  Atom a;
  a.kind_ = SymKind::GroupParam;
  a.name_ = group_param;
  a.is_exp_ = true;
  a.rate_ = rate;
  return a;
}

const Rat& Atom::rate() const {
  if (!is_exp_) throw InternalError("rate() on a non-exponential atom");
  return rate_;
}

bool Atom::operator==(const Atom& o) const {
  return kind_ == o.kind_ && name_ == o.name_ && index_ == o.index_ && is_exp_ == o.is_exp_ &&
         (!is_exp_ || rate_ == o.rate_);
}

bool Atom::operator<(const Atom& o) const {
  if (kind_ != o.kind_) return kind_ < o.kind_;
  if (name_ != o.name_) return name_ < o.name_;
  if (index_ != o.index_) return index_ < o.index_;
  if (is_exp_ != o.is_exp_) return is_exp_ < o.is_exp_;
  if (is_exp_) return rate_ < o.rate_;
  return false;
}

std::string Atom::text() const {
  if (is_exp_) {
    std::string coef;
    if (rate_ == 1)
      coef = "";
    else if (rate_ == -1)
      coef = "-";
    else
      coef = rat_text(rate_) + "*";
    return "exp(" + coef + name_ + ")";
  }
  if (is_jet()) {
    std::string out = "D(" + name_;
    for (const auto& v : index_.flatten()) out += "," + v;
    return out + ")";
  }
  return name_;
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

std::vector<Atom>& Context::list_for(SymKind kind) {
  switch (kind) {
    case SymKind::Independent: return independents_;
    case SymKind::Dependent: return dependents_;
    case SymKind::Parameter: return parameters_;
    case SymKind::GroupParam: return group_params_;
    case SymKind::Unknown: return unknowns_;
  }
  throw InternalError("bad kind");
}

const std::vector<Atom>& Context::list_for(SymKind kind) const {
  return const_cast<Context*>(this)->list_for(kind);
}

const Atom& Context::declare(SymKind kind, const std::string& name, bool nonzero) {
  if (name.empty()) throw ValidationError("empty identifier");
  if (names_.count(name))
    throw ValidationError("identifier '" + name + "' declared twice");
  names_[name] = kind;
  nonzero_[name] = nonzero;
  auto& lst = list_for(kind);
  lst.push_back(Atom::symbol(kind, name));
  return lst.back();
}

std::vector<Atom> Context::base_coordinates() const {
  std::vector<Atom> out = independents_;
  out.insert(out.end(), dependents_.begin(), dependents_.end());
  return out;
}

bool Context::is_declared(const std::string& name) const { return names_.count(name) > 0; }

const Atom* Context::find(const std::string& name) const {
  auto it = names_.find(name);
  if (it == names_.end()) return nullptr;
  const auto& lst = list_for(it->second);
  for (const auto& a : lst)
    if (a.name() == name) return &a;
  return nullptr;
}

bool Context::nonzero(const Atom& param) const {
  auto it = nonzero_.find(param.name());
  return it != nonzero_.end() && it->second;
}

int Context::declaration_index(const Atom& a) const {
  const auto& lst = list_for(a.kind());
  for (std::size_t i = 0; i < lst.size(); ++i)
    if (lst[i].name() == a.name()) return static_cast<int>(i);
  throw ValidationError("undeclared symbol: " + a.name());
}

// ---------------------------------------------------------------------------
// Monomial
// ---------------------------------------------------------------------------

void Monomial::check_exponent(int e) {
  if (e > kMaxExponent)
    throw CapacityError("exponent " + std::to_string(e) + " exceeds bound " +
                        std::to_string(kMaxExponent));
}

Monomial Monomial::atom(const Atom& a, int exp) { return of({{a, exp}}); }

Monomial Monomial::of(std::vector<Factor> factors) {
  // Fold exponential atoms per group parameter; exponents fold into rates.
  std::map<std::string, Rat> exp_rates;
  std::map<Atom, int> plain;
  for (auto& [a, e] : factors) {
    if (e < 0) throw InternalError("negative exponent");
    if (e == 0) continue;
    if (a.is_exp())
      exp_rates[a.name()] += a.rate() * e;
    else
      plain[a] += e;
  }
  Monomial out;
  for (auto& [a, e] : plain) {
    check_exponent(e);
    out.factors_.push_back({a, e});
  }
  for (auto& [name, rate] : exp_rates) {
    if (rate == 0) continue;
    Atom a = Atom::exponential(name, rate);
    auto it = std::lower_bound(out.factors_.begin(), out.factors_.end(), a,
                               [](const Factor& f, const Atom& x) { return f.first < x; });
    out.factors_.insert(it, {a, 1});
  }
  return out;
}

int Monomial::exponent_of(const Atom& a) const {
  for (const auto& [x, e] : factors_)
    if (x == a) return e;
  return 0;
}

int Monomial::degree_if(const std::function<bool(const Atom&)>& pred) const {
  int d = 0;
  for (const auto& [a, e] : factors_)
    if (pred(a)) d += e;
  return d;
}

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& [a, e] : factors_) d += e;
  return d;
}

Monomial Monomial::times(const Monomial& o) const {
  std::vector<Factor> all = factors_;
  all.insert(all.end(), o.factors_.begin(), o.factors_.end());
  return of(std::move(all));
}

Monomial Monomial::pow(int k) const {
  if (k < 0) throw InternalError("negative power");
  std::vector<Factor> fs;
  for (const auto& [a, e] : factors_) fs.push_back({a, a.is_exp() ? k : e * k});
  // exp exponent k folds into the rate inside of().
  if (k == 0) return Monomial();
  for (auto& [a, e] : fs)
    if (a.is_exp()) {
      a = Atom::exponential(a.name(), a.rate() * k);
      e = 1;
    }
  return of(std::move(fs));
}

Monomial Monomial::divide_exact(const Monomial& o) const {
  std::vector<Factor> fs = factors_;
  for (const auto& [a, e] : o.factors_) {
    bool found = false;
    for (auto& [x, xe] : fs) {
      if (x == a) {
        if (xe < e) throw InternalError("monomial division underflow");
        xe -= e;
        found = true;
        break;
      }
    }
    if (!found) throw InternalError("monomial division: missing factor " + a.text());
  }
  return of(std::move(fs));
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  std::vector<Factor> fs;
  for (const auto& [x, e] : a.factors_) {
    if (x.is_exp()) continue;
    int eb = b.exponent_of(x);
    if (eb > 0) fs.push_back({x, std::min(e, eb)});
  }
  return of(std::move(fs));
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  std::vector<Factor> fs = a.factors_;
  for (const auto& [x, e] : b.factors_) {
    if (x.is_exp()) throw InternalError("lcm over exponential atoms");
    bool found = false;
    for (auto& [y, ye] : fs)
      if (y == x) {
        ye = std::max(ye, e);
        found = true;
        break;
      }
    if (!found) fs.push_back({x, e});
  }
  return of(std::move(fs));
}

std::pair<Monomial, Monomial> Monomial::split(
    const std::function<bool(const Atom&)>& pred) const {
  std::vector<Factor> yes, no;
  for (const auto& f : factors_) (pred(f.first) ? yes : no).push_back(f);
  return {of(std::move(yes)), of(std::move(no))};
}

bool Monomial::operator<(const Monomial& o) const {
  int a = total_degree(), b = o.total_degree();
  if (a != b) return a < b;
  return factors_ < o.factors_;
}

std::string Monomial::text() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [a, e] : factors_) {
    if (!out.empty()) out += "*";
    out += a.text();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

Expr::Expr(long n) {
  if (n != 0) terms_[Monomial()] = Rat(n);
}

Expr::Expr(const Rat& c) {
  if (c != 0) terms_[Monomial()] = c;
}

Expr Expr::atom(const Atom& a, int exp) { return monomial(Rat(1), Monomial::atom(a, exp)); }

Expr Expr::monomial(const Rat& c, const Monomial& m) {
  Expr e;
  if (c != 0) e.terms_[m] = c;
  return e;
}

bool Expr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rat Expr::constant_value() const {
  if (terms_.empty()) return Rat(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  throw ValidationError("expression is not constant: " + text());
}

void Expr::add_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Expr Expr::operator-() const {
  Expr out;
  for (const auto& [m, c] : terms_) out.terms_[m] = -c;
  return out;
}

Expr Expr::operator+(const Expr& o) const {
  Expr out = *this;
  out += o;
  return out;
}

Expr Expr::operator-(const Expr& o) const {
  Expr out = *this;
  out -= o;
  return out;
}

Expr& Expr::operator+=(const Expr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Expr& Expr::operator-=(const Expr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Expr Expr::operator*(const Expr& o) const {
  Expr out;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) out.add_term(m1.times(m2), c1 * c2);
  return out;
}

Expr& Expr::operator*=(const Expr& o) {
  *this = *this * o;
  return *this;
}

Expr Expr::scaled(const Rat& c) const {
  Expr out;
  if (c == 0) return out;
  for (const auto& [m, k] : terms_) out.terms_[m] = k * c;
  return out;
}

Expr Expr::pow(int k) const {
  if (k < 0) throw ValidationError("negative power");
  if (k > kMaxExponent)
    throw CapacityError("power " + std::to_string(k) + " exceeds bound " +
                        std::to_string(kMaxExponent));
  Expr out(1L);
  Expr base = *this;
  int e = k;
  while (e > 0) {
    if (e & 1) out *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return out;
}

Expr Expr::partial(const Atom& a) const {
  const bool group_sym = a.kind() == SymKind::GroupParam && !a.is_exp();
  Expr out;
  for (const auto& [m, c] : terms_) {
    const auto& fs = m.factors();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto& [f, e] = fs[i];
      if (f == a) {
        // power rule: drop one exponent
        std::vector<Monomial::Factor> rest = fs;
        rest[i].second -= 1;
        out.add_term(Monomial::of(std::move(rest)), c * e);
      } else if (group_sym && f.is_exp() && f.name() == a.name()) {
        // rate rule: d/deps exp(r*eps) = r exp(r*eps)
        out.add_term(m, c * f.rate());
      }
    }
  }
  return out;
}

Expr Expr::substitute(const std::map<Atom, Expr>& bindings) const {
  // Drop identity bindings, then reject replacements that mention a
  // *different* bound atom (ambiguous under one-pass simultaneous semantics).
  std::map<Atom, Expr> live;
  for (const auto& [a, r] : bindings) {
    if (r == Expr::atom(a)) continue;
    live.emplace(a, r);
  }
  for (const auto& [a, r] : live)
    for (const auto& [b, rb] : live) {
      (void)rb;
      if (!(a == b) && r.depends_on(b))
        throw ValidationError("cyclic bindings: replacement for " + a.text() +
                              " mentions bound atom " + b.text());
    }
  if (live.empty()) return *this;

  Expr out;
  for (const auto& [m, c] : terms_) {
    Expr term = Expr(c);
    std::vector<Monomial::Factor> untouched;
    for (const auto& [a, e] : m.factors()) {
      auto it = live.find(a);
      if (it == live.end())
        untouched.push_back({a, e});
      else
        term *= it->second.pow(e);
    }
    term *= Expr::monomial(Rat(1), Monomial::of(std::move(untouched)));
    out += term;
  }
  return out;
}

std::map<Monomial, Expr> Expr::collect(const std::function<bool(const Atom&)>& focus) const {
  std::map<Monomial, Expr> out;
  for (const auto& [m, c] : terms_) {
    auto [key, rest] = m.split(focus);
    out[key] += Expr::monomial(c, rest);
  }
  return out;
}

std::map<Monomial, Expr> Expr::collect(const std::set<Atom>& focus) const {
  return collect([&focus](const Atom& a) { return focus.count(a) > 0; });
}

std::set<Atom> Expr::atoms() const {
  std::set<Atom> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [a, e] : m.factors()) out.insert(a);
  return out;
}

bool Expr::depends_on(const Atom& a) const {
  for (const auto& [m, c] : terms_)
    if (m.depends_on(a)) return true;
  return false;
}

bool Expr::any_atom(const std::function<bool(const Atom&)>& pred) const {
  for (const auto& [m, c] : terms_)
    for (const auto& [a, e] : m.factors())
      if (pred(a)) return true;
  return false;
}

int Expr::degree_if(const std::function<bool(const Atom&)>& pred) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_if(pred));
  return d;
}

Rat Expr::eval(const std::map<Atom, Rat>& values) const {
  Rat out(0);
  for (const auto& [m, c] : terms_) {
    Rat t = c;
    for (const auto& [a, e] : m.factors()) {
      if (a.is_exp())
        throw ValidationError("cannot evaluate exponential atom " + a.text());
      auto it = values.find(a);
      if (it == values.end()) throw ValidationError("no value for atom " + a.text());
      t *= rat_pow(it->second, static_cast<unsigned long>(e));
    }
    out += t;
  }
  return out;
}

Monomial Expr::monomial_content(const std::function<bool(const Atom&)>& pred) const {
  bool first = true;
  Monomial g;
  for (const auto& [m, c] : terms_) {
    Monomial part = m.split(pred).first;
    std::vector<Monomial::Factor> keep;
    for (const auto& f : part.factors())
      if (!f.first.is_exp()) keep.push_back(f);
    part = Monomial::of(std::move(keep));
    if (first) {
      g = part;
      first = false;
    } else {
      g = Monomial::gcd(g, part);
    }
    if (g.is_one()) break;
  }
  return first ? Monomial() : g;
}

Expr Expr::divided_by(const Monomial& m) const {
  Expr out;
  for (const auto& [mm, c] : terms_) out.terms_[mm.divide_exact(m)] = c;
  return out;
}

Expr Expr::primitive_part(const std::function<bool(const Atom&)>& pred) const {
  if (is_zero()) return *this;
  Expr out = divided_by(monomial_content(pred));
  Rat content(0);
  for (const auto& [m, c] : out.terms_) content = rat_gcd(content, c);
  if (out.terms_.begin()->second < 0) content = -content;
  Expr norm;
  for (const auto& [m, c] : out.terms_) norm.terms_[m] = c / content;
  return norm;
}

std::string Expr::text() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rat a = rat_abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (m.is_one())
      os << rat_text(a);
    else if (a == 1)
      os << m.text();
    else
      os << rat_text(a) << "*" << m.text();
  }
  return os.str();
}

}  // namespace liesym
