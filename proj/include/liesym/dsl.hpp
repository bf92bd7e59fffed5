#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liesym/rational.hpp"

namespace liesym {

/// Raw expression tree as parsed; normalization happens at lowering.
struct ExprTree {
  enum class Op { Num, Ident, Jet, Add, Sub, Mul, Div, Pow, Neg };
  Op op = Op::Num;
  Rat value;                          // Num
  std::string ident;                  // Ident; Jet dependent name
  std::vector<std::string> jet_vars;  // Jet derivative variables (with multiplicity)
  int exponent = 0;                   // Pow
  std::vector<ExprTree> kids;

  static ExprTree number(Rat v);
  static ExprTree ident_ref(std::string name);
  static ExprTree jet_ref(std::string dep, std::vector<std::string> vars);
  static ExprTree node(Op op, std::vector<ExprTree> kids);
  static ExprTree power(ExprTree base, int e);

  bool operator==(const ExprTree& o) const;
};

/// Structured form of a .pde file.
struct SourceSpec {
  struct Param {
    std::string name;
    bool nonzero = false;
    bool operator==(const Param& o) const { return name == o.name && nonzero == o.nonzero; }
  };
  struct Equation {
    ExprTree lhs, rhs;
    // leading D(dep, vars...) annotation
    std::optional<std::pair<std::string, std::vector<std::string>>> leading;
    bool operator==(const Equation& o) const {
      return lhs == o.lhs && rhs == o.rhs && leading == o.leading;
    }
  };
  struct VFieldTerm {
    int sign = 1;
    std::optional<ExprTree> coeff;  // absent for a bare d/dx
    std::string coord;
    bool operator==(const VFieldTerm& o) const {
      return sign == o.sign && coeff == o.coeff && coord == o.coord;
    }
  };
  struct VFieldDecl {
    std::string name;
    std::vector<VFieldTerm> terms;
    bool operator==(const VFieldDecl& o) const { return name == o.name && terms == o.terms; }
  };

  std::vector<std::string> independents;
  std::vector<std::string> dependents;
  std::vector<Param> parameters;
  std::vector<Equation> equations;
  std::vector<VFieldDecl> vfields;
  std::vector<std::pair<std::string, long>> options;

  bool operator==(const SourceSpec& o) const;
};

/// Parses DSL text; every rejection carries line:column and a one-line hint.
SourceSpec parse_spec(const std::string& text);

/// Canonical text; parse_spec(render_spec(s)) == s, and rendering is a fixed
/// point after one pass.
std::string render_spec(const SourceSpec& spec);

}  // namespace liesym
