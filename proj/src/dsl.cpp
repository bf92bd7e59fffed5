#include "liesym/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "liesym/error.hpp"

namespace liesym {

// ---------------------------------------------------------------------------
// ExprTree
// ---------------------------------------------------------------------------

ExprTree ExprTree::number(Rat v) {
  ExprTree t;
  t.op = Op::Num;
  t.value = std::move(v);
  return t;
}

ExprTree ExprTree::ident_ref(std::string name) {
  ExprTree t;
  t.op = Op::Ident;
  t.ident = std::move(name);
  return t;
}

ExprTree ExprTree::jet_ref(std::string dep, std::vector<std::string> vars) {
  ExprTree t;
  t.op = Op::Jet;
  t.ident = std::move(dep);
  t.jet_vars = std::move(vars);
  return t;
}

ExprTree ExprTree::node(Op op, std::vector<ExprTree> kids) {
  ExprTree t;
  t.op = op;
  t.kids = std::move(kids);
  return t;
}

ExprTree ExprTree::power(ExprTree base, int e) {
  ExprTree t;
  t.op = Op::Pow;
  t.exponent = e;
  t.kids.push_back(std::move(base));
  return t;
}

bool ExprTree::operator==(const ExprTree& o) const {
  return op == o.op && value == o.value && ident == o.ident && jet_vars == o.jet_vars &&
         exponent == o.exponent && kids == o.kids;
}

bool SourceSpec::operator==(const SourceSpec& o) const {
  return independents == o.independents && dependents == o.dependents &&
         parameters == o.parameters && equations == o.equations && vfields == o.vfields &&
         options == o.options;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Ident, Number, DDeriv, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // ident name, digits, coordinate for DDeriv, punct char
  int line = 1, col = 1;
};

const std::set<std::string> kKeywords = {"independent", "dependent", "param",  "nonzero",
                                         "eq",          "leading",   "vfield", "option"};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const std::string& hint) const {
    throw ParseError(msg, line_, col_, hint);
  }

  char cur() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char ahead(std::size_t k) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }

  void bump() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance() {
    while (pos_ < s_.size()) {
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '#') {  // line comment
        while (pos_ < s_.size() && cur() != '\n') bump();
      } else {
        break;
      }
    }
    int at_line = line_, at_col = col_;
    if (pos_ >= s_.size()) {
      tok_ = {Tok::End, "", at_line, at_col};
      return;
    }
    char c = cur();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        name += cur();
        bump();
      }
      // d/dX lexes as one token
      if (name == "d" && cur() == '/' && ahead(1) == 'd') {
        bump();  // '/'
        bump();  // 'd'
        std::string coord;
        while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
          coord += cur();
          bump();
        }
        if (coord.empty())
          fail("expected a coordinate name after 'd/d'", "write d/dx, d/dT, ...");
        tok_ = {Tok::DDeriv, coord, at_line, at_col};
        return;
      }
      tok_ = {Tok::Ident, name, at_line, at_col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(cur()))) {
        digits += cur();
        bump();
      }
      tok_ = {Tok::Number, digits, at_line, at_col};
      return;
    }
    if (std::string("+-*/^()=;,").find(c) != std::string::npos) {
      bump();
      tok_ = {Tok::Punct, std::string(1, c), at_line, at_col};
      return;
    }
    fail(std::string("unexpected character '") + c + "'",
         "allowed: identifiers, integers, + - * / ^ ( ) = ; , and # comments");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  SourceSpec run() {
    while (lex_.peek().kind != Tok::End) statement();
    if (spec_.independents.empty())
      throw ParseError("no independent variables declared", 1, 1,
                       "start with e.g. 'independent x y;'");
    return spec_;
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& msg, const std::string& hint) {
    throw ParseError(msg, at.line, at.col, hint);
  }

  bool is_punct(const Token& t, char c) { return t.kind == Tok::Punct && t.text[0] == c; }

  Token expect_punct(char c, const std::string& hint) {
    Token t = lex_.take();
    if (!is_punct(t, c))
      fail(t, std::string("expected '") + c + "' before '" + t.text + "'", hint);
    return t;
  }

  Token expect_ident(const std::string& what, const std::string& hint) {
    Token t = lex_.take();
    if (t.kind != Tok::Ident) fail(t, "expected " + what, hint);
    if (kKeywords.count(t.text)) fail(t, "'" + t.text + "' is a reserved word", hint);
    if (t.text == "D" || t.text == "d")
      fail(t, "'" + t.text + "' is reserved for derivatives", "pick another name");
    return t;
  }

  void declare(const Token& t, char kind) {
    if (declared_.count(t.text))
      fail(t, "identifier '" + t.text + "' declared twice", "names must be unique");
    declared_[t.text] = kind;
  }

  char lookup(const Token& t) {
    auto it = declared_.find(t.text);
    if (it == declared_.end())
      fail(t, "undeclared identifier '" + t.text + "'", "declare it before use");
    return it->second;
  }

  void statement() {
    Token t = lex_.take();
    if (t.kind != Tok::Ident)
      fail(t, "expected a statement keyword",
           "one of: independent dependent param eq vfield option");
    const std::string& kw = t.text;
    if (kw == "independent" || kw == "dependent") {
      char kind = kw == "independent" ? 'i' : 'd';
      int count = 0;
      while (lex_.peek().kind == Tok::Ident && !kKeywords.count(lex_.peek().text)) {
        Token name = expect_ident("a variable name", "e.g. 'independent x y;'");
        declare(name, kind);
        (kind == 'i' ? spec_.independents : spec_.dependents).push_back(name.text);
        ++count;
      }
      if (count == 0) fail(lex_.peek(), "expected at least one variable name", kw + " x y;");
      expect_punct(';', "terminate the declaration with ';'");
    } else if (kw == "param") {
      std::vector<std::string> names;
      while (lex_.peek().kind == Tok::Ident && lex_.peek().text != "nonzero" &&
             !kKeywords.count(lex_.peek().text)) {
        Token name = expect_ident("a parameter name", "e.g. 'param nu k nonzero;'");
        declare(name, 'p');
        names.push_back(name.text);
      }
      if (names.empty())
        fail(lex_.peek(), "expected at least one parameter name", "param nu nonzero;");
      bool nonzero = false;
      if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "nonzero") {
        lex_.take();
        nonzero = true;
      }
      expect_punct(';', "terminate the declaration with ';'");
      for (auto& n : names) spec_.parameters.push_back({n, nonzero});
    } else if (kw == "eq") {
      SourceSpec::Equation eq;
      eq.lhs = expression();
      expect_punct('=', "equations have the form 'eq lhs = rhs;'");
      eq.rhs = expression();
      if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "leading") {
        lex_.take();
        eq.leading = jet_suffix();
      }
      expect_punct(';', "terminate the equation with ';'");
      spec_.equations.push_back(std::move(eq));
    } else if (kw == "vfield") {
      Token name = expect_ident("a field name", "vfield v1 = d/dx;");
      declare(name, 'v');
      expect_punct('=', "vfield declarations have the form 'vfield v = ... ;'");
      SourceSpec::VFieldDecl decl;
      decl.name = name.text;
      int sign = 1;
      if (is_punct(lex_.peek(), '-')) {
        lex_.take();
        sign = -1;
      } else if (is_punct(lex_.peek(), '+')) {
        lex_.take();
      }
      decl.terms.push_back(vfield_term(sign));
      while (is_punct(lex_.peek(), '+') || is_punct(lex_.peek(), '-')) {
        Token op = lex_.take();
        decl.terms.push_back(vfield_term(op.text[0] == '-' ? -1 : 1));
      }
      expect_punct(';', "terminate the declaration with ';'");
      spec_.vfields.push_back(std::move(decl));
    } else if (kw == "option") {
      Token name = lex_.take();
      if (name.kind != Tok::Ident ||
          (name.text != "ansatz_degree" && name.text != "prolong_order"))
        fail(name, "unknown option '" + name.text + "'",
             "options: ansatz_degree, prolong_order");
      Token value = lex_.take();
      if (value.kind != Tok::Number)
        fail(value, "expected an integer option value", "e.g. 'option ansatz_degree 2;'");
      expect_punct(';', "terminate the option with ';'");
      spec_.options.push_back({name.text, std::stol(value.text)});
    } else {
      fail(t, "unknown statement '" + kw + "'",
           "one of: independent dependent param eq vfield option");
    }
  }

  std::pair<std::string, std::vector<std::string>> jet_suffix() {
    Token d = lex_.take();
    if (d.kind != Tok::Ident || d.text != "D")
      fail(d, "expected a derivative D(dep, var, ...)", "e.g. D(U,y,y)");
    expect_punct('(', "derivatives look like D(U,x,y)");
    Token dep = lex_.take();
    if (dep.kind != Tok::Ident) fail(dep, "expected a dependent variable", "e.g. D(U,x)");
    if (lookup(dep) != 'd')
      fail(dep, "'" + dep.text + "' is not a dependent variable", "derivatives act on dependents");
    std::vector<std::string> vars;
    while (is_punct(lex_.peek(), ',')) {
      lex_.take();
      Token v = lex_.take();
      if (v.kind != Tok::Ident) fail(v, "expected an independent variable", "e.g. D(U,x,y)");
      if (lookup(v) != 'i')
        fail(v, "'" + v.text + "' is not an independent variable",
             "derivative indices use independents");
      vars.push_back(v.text);
    }
    if (vars.empty())
      fail(lex_.peek(), "derivative needs at least one variable", "write D(U,x), not D(U)");
    expect_punct(')', "close the derivative with ')'");
    return {dep.text, vars};
  }

  SourceSpec::VFieldTerm vfield_term(int sign) {
    SourceSpec::VFieldTerm term;
    term.sign = sign;
    std::vector<ExprTree> coeff_factors;
    while (true) {
      if (lex_.peek().kind == Tok::DDeriv) {
        Token dt = lex_.take();
        auto it = declared_.find(dt.text);
        if (it == declared_.end() || (it->second != 'i' && it->second != 'd'))
          fail(dt, "'" + dt.text + "' is not a base coordinate",
               "d/d acts on declared independents and dependents");
        if (!term.coord.empty())
          fail(dt, "more than one d/d factor in a vector-field term", "split into a sum");
        term.coord = dt.text;
      } else {
        coeff_factors.push_back(factor());
      }
      if (is_punct(lex_.peek(), '*')) {
        lex_.take();
        continue;
      }
      break;
    }
    if (term.coord.empty())
      fail(lex_.peek(), "vector-field term is missing its d/d factor", "e.g. 'T * d/dT'");
    if (!coeff_factors.empty()) {
      ExprTree c = coeff_factors[0];
      for (std::size_t i = 1; i < coeff_factors.size(); ++i)
        c = ExprTree::node(ExprTree::Op::Mul, {c, coeff_factors[i]});
      term.coeff = std::move(c);
    }
    return term;
  }

  ExprTree expression() {
    ExprTree e = mul_term();
    while (is_punct(lex_.peek(), '+') || is_punct(lex_.peek(), '-')) {
      Token op = lex_.take();
      ExprTree r = mul_term();
      e = ExprTree::node(op.text[0] == '+' ? ExprTree::Op::Add : ExprTree::Op::Sub,
                         {std::move(e), std::move(r)});
    }
    return e;
  }

  ExprTree mul_term() {
    ExprTree e = factor();
    while (is_punct(lex_.peek(), '*') || is_punct(lex_.peek(), '/')) {
      Token op = lex_.take();
      ExprTree r = factor();
      if (op.text[0] == '/' && !(r.op == ExprTree::Op::Ident || r.op == ExprTree::Op::Num))
        fail(op, "division is only allowed by a parameter or an integer",
             "write (nu/k)*(P - U), never 1/D(U,x)");
      e = ExprTree::node(op.text[0] == '*' ? ExprTree::Op::Mul : ExprTree::Op::Div,
                         {std::move(e), std::move(r)});
    }
    return e;
  }

  ExprTree factor() {
    ExprTree b = base();
    if (is_punct(lex_.peek(), '^')) {
      lex_.take();
      Token e = lex_.take();
      if (e.kind != Tok::Number) fail(e, "expected an integer exponent", "e.g. U^2");
      long v = std::stol(e.text);
      if (v < 0 || v > 64) fail(e, "exponent out of range [0, 64]", "exponents are small integers");
      return ExprTree::power(std::move(b), static_cast<int>(v));
    }
    return b;
  }

  ExprTree base() {
    Token t = lex_.take();
    if (t.kind == Tok::Number) return ExprTree::number(rat_parse(t.text));
    if (is_punct(t, '-')) return ExprTree::node(ExprTree::Op::Neg, {base()});
    if (is_punct(t, '(')) {
      ExprTree e = expression();
      expect_punct(')', "unbalanced parenthesis");
      return e;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "D" && is_punct(lex_.peek(), '(')) {
        lex_.take();
        Token dep = lex_.take();
        if (dep.kind != Tok::Ident || lookup(dep) != 'd')
          fail(dep, "derivatives act on dependent variables", "e.g. D(U,x)");
        std::vector<std::string> vars;
        while (is_punct(lex_.peek(), ',')) {
          lex_.take();
          Token v = lex_.take();
          if (v.kind != Tok::Ident || lookup(v) != 'i')
            fail(v, "derivative indices use independent variables", "e.g. D(U,x,y)");
          vars.push_back(v.text);
        }
        if (vars.empty())
          fail(lex_.peek(), "derivative needs at least one variable", "write D(U,x), not D(U)");
        expect_punct(')', "close the derivative with ')'");
        return ExprTree::jet_ref(dep.text, std::move(vars));
      }
      if (kKeywords.count(t.text)) fail(t, "'" + t.text + "' is a reserved word", "rename it");
      char kind = lookup(t);
      if (kind == 'v')
        fail(t, "vector field '" + t.text + "' cannot appear in an expression",
             "fields are used by name in CLI commands only");
      return ExprTree::ident_ref(t.text);
    }
    fail(t, "unexpected token '" + t.text + "'", "expected a value, variable, or '('");
  }

  Lexer lex_;
  SourceSpec spec_;
  std::map<std::string, char> declared_;  // i|d|p|v
};

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

int prec_of(const ExprTree& t) {
  switch (t.op) {
    case ExprTree::Op::Add:
    case ExprTree::Op::Sub: return 1;
    case ExprTree::Op::Mul:
    case ExprTree::Op::Div: return 2;
    case ExprTree::Op::Neg: return 3;
    case ExprTree::Op::Pow: return 4;
    default: return 5;
  }
}

void render_tree(const ExprTree& t, int min_prec, std::string& out) {
  int p = prec_of(t);
  bool parens = p < min_prec;
  if (parens) out += "(";
  switch (t.op) {
    case ExprTree::Op::Num: out += rat_text(t.value); break;
    case ExprTree::Op::Ident: out += t.ident; break;
    case ExprTree::Op::Jet:
      out += "D(" + t.ident;
      for (const auto& v : t.jet_vars) out += "," + v;
      out += ")";
      break;
    case ExprTree::Op::Add:
      render_tree(t.kids[0], 1, out);
      out += " + ";
      render_tree(t.kids[1], 2, out);
      break;
    case ExprTree::Op::Sub:
      render_tree(t.kids[0], 1, out);
      out += " - ";
      render_tree(t.kids[1], 2, out);
      break;
    case ExprTree::Op::Mul:
      render_tree(t.kids[0], 2, out);
      out += " * ";
      render_tree(t.kids[1], 3, out);
      break;
    case ExprTree::Op::Div:
      render_tree(t.kids[0], 2, out);
      out += " / ";
      render_tree(t.kids[1], 3, out);
      break;
    case ExprTree::Op::Neg:
      // unary minus binds below '^' here, so a Pow child keeps its parens
      out += "-";
      render_tree(t.kids[0], 5, out);
      break;
    case ExprTree::Op::Pow:
      render_tree(t.kids[0], 5, out);
      out += "^" + std::to_string(t.exponent);
      break;
  }
  if (parens) out += ")";
}

std::string render_tree(const ExprTree& t) {
  std::string out;
  render_tree(t, 0, out);
  return out;
}

}  // namespace

SourceSpec parse_spec(const std::string& text) { return Parser(text).run(); }

std::string render_spec(const SourceSpec& spec) {
  std::ostringstream os;
  auto word_list = [&](const char* kw, const std::vector<std::string>& names) {
    if (names.empty()) return;
    os << kw;
    for (const auto& n : names) os << " " << n;
    os << ";\n";
  };
  word_list("independent", spec.independents);
  word_list("dependent", spec.dependents);
  for (std::size_t i = 0; i < spec.parameters.size();) {
    std::size_t j = i;
    while (j < spec.parameters.size() && spec.parameters[j].nonzero == spec.parameters[i].nonzero)
      ++j;
    os << "param";
    for (std::size_t k = i; k < j; ++k) os << " " << spec.parameters[k].name;
    if (spec.parameters[i].nonzero) os << " nonzero";
    os << ";\n";
    i = j;
  }
  for (const auto& eq : spec.equations) {
    os << "eq " << render_tree(eq.lhs) << " = " << render_tree(eq.rhs);
    if (eq.leading) {
      os << " leading D(" << eq.leading->first;
      for (const auto& v : eq.leading->second) os << "," << v;
      os << ")";
    }
    os << ";\n";
  }
  for (const auto& vf : spec.vfields) {
    os << "vfield " << vf.name << " = ";
    for (std::size_t i = 0; i < vf.terms.size(); ++i) {
      const auto& term = vf.terms[i];
      if (i == 0) {
        if (term.sign < 0) os << "-";
      } else {
        os << (term.sign < 0 ? " - " : " + ");
      }
      if (term.coeff) {
        // parens keep a Neg/Mul coefficient distinct from the term sign
        std::string c;
        render_tree(*term.coeff, 4, c);
        os << c << " * ";
      }
      os << "d/d" << term.coord;
    }
    os << ";\n";
  }
  for (const auto& [name, value] : spec.options) os << "option " << name << " " << value << ";\n";
  return os.str();
}

}  // namespace liesym
