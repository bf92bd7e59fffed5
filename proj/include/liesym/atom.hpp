#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "liesym/error.hpp"
#include "liesym/rational.hpp"

namespace liesym {

/// Role of a name. The enum order is part of the fixed atom ordering that
/// makes expression canonical forms reproducible bit-for-bit.
enum class SymKind : std::uint8_t {
  Independent = 0,
  Dependent = 1,
  Parameter = 2,
  GroupParam = 3,
  Unknown = 4,  // ansatz unknown
};

std::string kind_name(SymKind k);

/// Derivative multi-index over independent variables, keyed by variable name.
/// Zero counts are never stored; order 0 is the empty index.
class MultiIndex {
 public:
  MultiIndex() = default;
  static MultiIndex single(const std::string& var, int count = 1);

  MultiIndex plus(const std::string& var, int count = 1) const;
  int order() const;
  int count(const std::string& var) const;
  bool empty() const { return entries_.empty(); }
  /// Componentwise >=.
  bool contains(const MultiIndex& other) const;
  /// Componentwise difference; requires contains(other).
  MultiIndex minus(const MultiIndex& other) const;

  /// Sorted by variable name (the fixed independent-variable order).
  const std::vector<std::pair<std::string, int>>& entries() const { return entries_; }
  /// Variable list with multiplicity, e.g. {x,x,y} for x^2 y.
  std::vector<std::string> flatten() const;

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }
  bool operator!=(const MultiIndex& o) const { return !(*this == o); }
  /// Graded order: total order first, then lexicographic on entries.
  bool operator<(const MultiIndex& o) const;

 private:
  std::vector<std::pair<std::string, int>> entries_;
};

/// A single indeterminate of the polynomial kernel: a plain symbol, a jet
/// coordinate (dependent variable with a nonempty derivative index), or an
/// exponential atom exp(rate * eps) in a group parameter.
///
/// Atoms are totally ordered by (kind, name, index, exp?, rate); the order is
/// fixed and documented so canonical forms are stable across runs.
class Atom {
 public:
  static Atom symbol(SymKind kind, const std::string& name);
  /// Jet coordinate; an empty index yields the plain dependent symbol.
  static Atom jet(const std::string& dependent, const MultiIndex& index);
  /// exp(rate * eps); rate must be nonzero (exp(0) normalizes away upstream).
  static Atom exponential(const std::string& group_param, const Rat& rate);

  SymKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const MultiIndex& index() const { return index_; }
  bool is_jet() const { return !index_.empty(); }
  bool is_exp() const { return is_exp_; }
  int jet_order() const { return index_.order(); }
  const Rat& rate() const;

  bool operator==(const Atom& o) const;
  bool operator!=(const Atom& o) const { return !(*this == o); }
  bool operator<(const Atom& o) const;

  /// "x", "D(U,x,y)", "exp(2*eps)".
  std::string text() const;

 private:
  SymKind kind_ = SymKind::Independent;
  std::string name_;
  MultiIndex index_;
  bool is_exp_ = false;
  Rat rate_;
};

/// Declared symbols of one analysis: enforces name uniqueness and records
/// declaration order (used for leading-derivative tie-breaks and reports).
class Context {
 public:
  const Atom& declare(SymKind kind, const std::string& name, bool nonzero = false);

  const std::vector<Atom>& independents() const { return independents_; }
  const std::vector<Atom>& dependents() const { return dependents_; }
  const std::vector<Atom>& parameters() const { return parameters_; }
  const std::vector<Atom>& group_params() const { return group_params_; }
  /// Independents then dependents, in declaration order.
  std::vector<Atom> base_coordinates() const;

  bool is_declared(const std::string& name) const;
  /// Null when not declared.
  const Atom* find(const std::string& name) const;
  bool nonzero(const Atom& param) const;
  /// Position within the declaration list of the atom's kind.
  int declaration_index(const Atom& a) const;

 private:
  std::vector<Atom>& list_for(SymKind kind);
  const std::vector<Atom>& list_for(SymKind kind) const;

  std::vector<Atom> independents_, dependents_, parameters_, group_params_, unknowns_;
  std::map<std::string, SymKind> names_;
  std::map<std::string, bool> nonzero_;
};

}  // namespace liesym
