#ifndef CHOW_DSL_HPP
#define CHOW_DSL_HPP

// A small script language over bundles, Grassmann towers and ideals.
//
//   script := stmt*
//   stmt   := "let" NAME "=" expr ";" | "check" expr "==" expr ";"
//   expr   := term (("+" | "-") term)*
//   term   := factor ("*" factor)*
//   factor := "-" factor | atom ("^" INT)?
//   atom   := NAME | INT | NAME "(" args ")" | "(" expr ")"
//
// '#' starts a comment running to the end of the line.

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "chow/chern.hpp"
#include "chow/grasstower.hpp"
#include "chow/polyring.hpp"
#include "chow/zgraded.hpp"

namespace chow::dsl {

struct SourcePos {
  int line = 1;
  int column = 1;
  bool operator==(const SourcePos&) const = default;
};

class ScriptError : public std::runtime_error {
 public:
  ScriptError(const std::string& what, SourcePos pos)
      : std::runtime_error(what), pos_(pos) {}
  SourcePos pos() const { return pos_; }
  std::string located(const std::string& file = "") const {
    return (file.empty() ? "" : file + ":") + std::to_string(pos_.line) + ":" + std::to_string(pos_.column) + ": " + what();
  }

 private:
  SourcePos pos_;
};

class SyntaxError : public ScriptError {
  using ScriptError::ScriptError;
};

// ---------------------------------------------------------------------------
// Lexer.

enum class Tok { Name, Int, Plus, Minus, Star, Caret, LParen, RParen, Comma, Semi, Assign, EqEq, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Name: return "identifier '" + t.text + "'";
    case Tok::Int: return "integer " + t.text;
    default: return "'" + t.text + "'";
  }
}

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  while (i < src.size()) {
    const char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const SourcePos start = pos;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Name, src.substr(i, j - i), start});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, src.substr(i, j - i), start});
      advance(j - i);
      continue;
    }
    if (ch == '=' && i + 1 < src.size() && src[i + 1] == '=') {
      out.push_back({Tok::EqEq, "==", start});
      advance(2);
      continue;
    }
    Tok k;
    switch (ch) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      case '=': k = Tok::Assign; break;
      default: throw SyntaxError(std::string("unexpected character '") + ch + "'", start);
    }
    out.push_back({k, std::string(1, ch), start});
    advance(1);
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

// ---------------------------------------------------------------------------
// AST.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Ref, Int, Add, Sub, Mul, Neg, Pow, Call };
  Kind kind;
  std::string name;  ///< Ref and Call
  Int value;         ///< Int literal, or the exponent of Pow
  std::vector<ExprPtr> args;
  SourcePos pos;

  bool operator==(const Expr& o) const {
    if (kind != o.kind || name != o.name || value != o.value || args.size() != o.args.size()) return false;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (!(*args[i] == *o.args[i])) return false;
    return true;
  }
};

struct Stmt {
  enum class Kind { Let, Check };
  Kind kind;
  std::string name;  ///< Let
  ExprPtr lhs;       ///< Let value, or left side of Check
  ExprPtr rhs;       ///< Check only
  SourcePos pos;

  bool operator==(const Stmt& o) const {
    return kind == o.kind && name == o.name && *lhs == *o.lhs && (rhs ? o.rhs && *rhs == *o.rhs : !o.rhs);
  }
};

using Script = std::vector<Stmt>;

struct Arity {
  std::size_t min, max;
};

inline constexpr std::size_t kVariadic = static_cast<std::size_t>(-1);

/// Built-in functions and their argument counts.
inline const std::map<std::string, Arity>& builtins() {
  static const std::map<std::string, Arity> b{
      {"bundle", {2, 2}}, {"grass", {3, 3}}, {"product", {2, 2}}, {"sub", {1, 1}}, {"quot", {1, 1}},
      {"dual", {1, 1}}, {"det", {1, 1}}, {"wedge2", {1, 1}}, {"tensor_line", {2, 2}}, {"quotient", {2, 3}},
      {"porteous", {2, 3}}, {"schur", {1, kVariadic}}, {"gysin", {2, 2}}, {"nf", {2, 2}},
      {"subst", {3, kVariadic}}, {"chern", {2, 2}}, {"rank", {1, 1}}, {"relation", {2, 2}},
      {"ideal", {1, kVariadic}}, {"member", {2, 2}}, {"contains", {2, 2}}, {"equal", {2, 3}},
      {"structure", {2, 2}},
  };
  return b;
}

/// Argument positions holding a bare symbol (a variable prefix or name) rather than a value.
inline bool is_symbol_argument(const std::string& fn, std::size_t i) {
  if (fn == "bundle") return i == 1;
  if (fn == "grass") return i == 2;
  if (fn == "subst") return i % 2 == 1;
  return false;
}

inline const std::set<std::string>& reserved_words() {
  static const std::set<std::string> r = [] {
    std::set<std::string> s{"let", "check", "true", "false"};
    for (const auto& [k, v] : builtins()) s.insert(k);
    return s;
  }();
  return r;
}

// ---------------------------------------------------------------------------
// Parser.

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

  Script script() {
    Script s;
    while (peek().kind != Tok::End) s.push_back(statement());
    return s;
  }

  ExprPtr expression_only() {
    ExprPtr e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    take();
    return true;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) throw SyntaxError("expected " + what + ", found " + describe(peek()), peek().pos);
    return take();
  }

  Stmt statement() {
    const Token& t = peek();
    if (t.kind == Tok::Name && t.text == "let") {
      take();
      Stmt s{Stmt::Kind::Let, "", nullptr, nullptr, t.pos};
      const Token& n = expect(Tok::Name, "a name");
      if (reserved_words().count(n.text)) throw SyntaxError("'" + n.text + "' is a reserved word", n.pos);
      s.name = n.text;
      expect(Tok::Assign, "'='");
      s.lhs = expr();
      expect(Tok::Semi, "';'");
      return s;
    }
    if (t.kind == Tok::Name && t.text == "check") {
      take();
      Stmt s{Stmt::Kind::Check, "", nullptr, nullptr, t.pos};
      s.lhs = expr();
      expect(Tok::EqEq, "'=='");
      s.rhs = expr();
      expect(Tok::Semi, "';'");
      return s;
    }
    throw SyntaxError("expected 'let' or 'check', found " + describe(t), t.pos);
  }

  ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b, SourcePos pos) {
    return std::make_shared<const Expr>(Expr{k, "", 0, {std::move(a), std::move(b)}, pos});
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      const Token& t = peek();
      if (t.kind == Tok::Plus || t.kind == Tok::Minus) {
        take();
        e = binary(t.kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub, e, term(), t.pos);
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (peek().kind == Tok::Star) {
      const SourcePos p = take().pos;
      e = binary(Expr::Kind::Mul, e, factor(), p);
    }
    return e;
  }

  ExprPtr factor() {
    if (peek().kind == Tok::Minus) {
      const SourcePos p = take().pos;
      return std::make_shared<const Expr>(Expr{Expr::Kind::Neg, "", 0, {factor()}, p});
    }
    ExprPtr a = atom();
    if (peek().kind == Tok::Caret) {
      const SourcePos p = take().pos;
      const Token& n = expect(Tok::Int, "an integer exponent");
      return std::make_shared<const Expr>(Expr{Expr::Kind::Pow, "", Int(n.text), {a}, p});
    }
    return a;
  }

  ExprPtr atom() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      take();
      return std::make_shared<const Expr>(Expr{Expr::Kind::Int, "", Int(t.text), {}, t.pos});
    }
    if (t.kind == Tok::LParen) {
      take();
      ExprPtr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (t.kind != Tok::Name) throw SyntaxError("expected an expression, found " + describe(t), t.pos);
    take();
    if (peek().kind != Tok::LParen) {
      if (t.text == "let" || t.text == "check") throw SyntaxError("'" + t.text + "' is a reserved word", t.pos);
      return std::make_shared<const Expr>(Expr{Expr::Kind::Ref, t.text, 0, {}, t.pos});
    }
    auto b = builtins().find(t.text);
    if (b == builtins().end()) throw SyntaxError("unknown function '" + t.text + "'", t.pos);
    take();
    std::vector<ExprPtr> args;
    if (peek().kind != Tok::RParen) {
      args.push_back(expr());
      while (accept(Tok::Comma)) args.push_back(expr());
    }
    expect(Tok::RParen, "')'");
    const Arity a = b->second;
    if (args.size() < a.min || args.size() > a.max) {
      std::string want = a.min == a.max ? std::to_string(a.min)
                         : a.max == kVariadic ? "at least " + std::to_string(a.min)
                                              : std::to_string(a.min) + " to " + std::to_string(a.max);
      throw SyntaxError(t.text + " takes " + want + " argument" + (a.min == 1 && a.max == 1 ? "" : "s") + ", got " + std::to_string(args.size()), t.pos);
    }
    for (std::size_t i = 0; i < args.size(); ++i)
      if (is_symbol_argument(t.text, i) && args[i]->kind != Expr::Kind::Ref)
        throw SyntaxError(t.text + ": argument " + std::to_string(i + 1) + " must be a name", args[i]->pos);
    return std::make_shared<const Expr>(Expr{Expr::Kind::Call, t.text, 0, std::move(args), t.pos});
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

inline Script parse(const std::string& src) { return Parser(src).script(); }
inline ExprPtr parse_expression(const std::string& src) { return Parser(src).expression_only(); }

// ---------------------------------------------------------------------------
// Pretty printer; parse(print(x)) == x.

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

inline void print(std::ostream& os, const Expr& e);

inline void print_wrapped(std::ostream& os, const Expr& e, bool wrap) {
  if (wrap) os << '(';
  print(os, e);
  if (wrap) os << ')';
}

inline void print(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Ref: os << e.name; return;
    case Expr::Kind::Int: os << e.value.get_str(); return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      print_wrapped(os, *e.args[0], precedence(*e.args[0]) < 1);
      os << (e.kind == Expr::Kind::Add ? " + " : " - ");
      print_wrapped(os, *e.args[1], precedence(*e.args[1]) <= 1);
      return;
    case Expr::Kind::Mul:
      print_wrapped(os, *e.args[0], precedence(*e.args[0]) < 2);
      os << " * ";
      print_wrapped(os, *e.args[1], precedence(*e.args[1]) <= 2);
      return;
    case Expr::Kind::Neg:
      os << '-';
      print_wrapped(os, *e.args[0], precedence(*e.args[0]) < 3);
      return;
    case Expr::Kind::Pow:
      print_wrapped(os, *e.args[0], precedence(*e.args[0]) < 5);
      os << '^' << e.value.get_str();
      return;
    case Expr::Kind::Call:
      os << e.name << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print(os, *e.args[i]);
      }
      os << ')';
      return;
  }
}

}  // namespace detail

inline std::string to_source(const Expr& e) {
  std::ostringstream os;
  detail::print(os, e);
  return os.str();
}

inline std::string to_source(const Stmt& s) {
  if (s.kind == Stmt::Kind::Let) return "let " + s.name + " = " + to_source(*s.lhs) + ";";
  return "check " + to_source(*s.lhs) + " == " + to_source(*s.rhs) + ";";
}

inline std::string to_source(const Script& script) {
  std::string out;
  for (const auto& s : script) out += to_source(s) + "\n";
  return out;
}

/// Canonical spelling of a script: print(parse(text)).
inline std::string normalize(const std::string& src) { return to_source(parse(src)); }

// ---------------------------------------------------------------------------
// Static name resolution: every reference must be let-bound earlier, a
// literal, or a ring variable prefixN whose prefix an earlier bundle/grass
// introduced.

inline void bind_check(const Script& script) {
  std::set<std::string> bound{"true", "false"};
  std::set<std::string> prefixes;
  auto is_ring_variable = [&](const std::string& n) {
    std::size_t j = n.size();
    while (j > 0 && std::isdigit(static_cast<unsigned char>(n[j - 1]))) --j;
    return j > 0 && j < n.size() && prefixes.count(n.substr(0, j));
  };
  auto visit = [&](auto&& self, const Expr& e) -> void {
    if (e.kind == Expr::Kind::Ref) {
      if (!bound.count(e.name) && !is_ring_variable(e.name)) throw ScriptError("unknown identifier '" + e.name + "'", e.pos);
      return;
    }
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      if (e.kind == Expr::Kind::Call && is_symbol_argument(e.name, i)) continue;
      self(self, *e.args[i]);
    }
  };
  auto collect_prefixes = [&](auto&& self, const Expr& e) -> void {
    if (e.kind == Expr::Kind::Call && (e.name == "bundle" || e.name == "grass")) prefixes.insert(e.args.back()->name);
    for (const auto& a : e.args) self(self, *a);
  };
  for (const auto& s : script) {
    visit(visit, *s.lhs);
    if (s.rhs) visit(visit, *s.rhs);
    collect_prefixes(collect_prefixes, *s.lhs);
    if (s.kind == Stmt::Kind::Let) {
      if (bound.count(s.name)) throw ScriptError("'" + s.name + "' is already bound", s.pos);
      if (is_ring_variable(s.name)) throw ScriptError("'" + s.name + "' names a ring variable", s.pos);
      bound.insert(s.name);
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation.

struct Structure {
  GroupStructure group;
};

struct IdealValue {
  std::shared_ptr<const GradedIdeal> ideal;
};

struct TowerValue {
  std::shared_ptr<const TowerLevel> level;       ///< set for grass(...)
  std::shared_ptr<const FiberProduct> product;   ///< set for product(...)
  const Ring& ring() const { return level ? level->ring() : product->ring(); }
  const TablePtr& table() const { return ring().table(); }
};

using Value = std::variant<Int, Poly, Bundle, TowerValue, IdealValue, bool, Structure>;

inline std::string type_name(const Value& v) {
  static const char* names[] = {"integer", "class", "bundle", "tower", "ideal", "boolean", "structure"};
  return names[v.index()];
}

inline std::string render(const Value& v) {
  struct {
    std::string operator()(const Int& i) const { return i.get_str(); }
    std::string operator()(const Poly& p) const { return p.to_string(); }
    std::string operator()(const Bundle& b) const { return "bundle " + b.to_string(); }
    std::string operator()(const TowerValue& t) const {
      if (t.level) return "G(" + std::to_string(t.level->k()) + ", " + std::to_string(t.level->n()) + ") bundle, " + std::to_string(t.level->new_relations().size()) + " new relations";
      return "fiber product over " + std::to_string(t.product->first().base().table()->size()) + " base variables";
    }
    std::string operator()(const IdealValue& i) const {
      std::string s = "ideal(";
      for (std::size_t k = 0; k < i.ideal->generators().size(); ++k) s += (k ? ", " : "") + i.ideal->generators()[k].to_string();
      return s + ")";
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const Structure& s) const { return s.group.to_string(); }
  } r;
  return std::visit(r, v);
}

struct CheckOutcome {
  SourcePos pos;
  std::string source;
  std::string lhs, rhs;
  bool passed = false;
};

class Session {
 public:
  explicit Session(int degree_bound = kDefaultDegreeBound) : bound_(degree_bound) {}

  int degree_bound() const { return bound_; }
  const std::vector<CheckOutcome>& checks() const { return checks_; }
  /// (name, rendered value) for every let, in order.
  const std::vector<std::pair<std::string, std::string>>& bindings() const { return bindings_; }
  bool all_checks_passed() const {
    for (const auto& c : checks_)
      if (!c.passed) return false;
    return true;
  }
  const Value& lookup(const std::string& name) const {
    auto it = env_.find(name);
    if (it == env_.end()) throw std::out_of_range("no binding '" + name + "'");
    return it->second;
  }

  /// Runs a whole script; `log` receives one line per statement.
  void run(const std::string& src, std::ostream* log = nullptr) {
    const Script script = parse(src);
    bind_check(script);
    for (const auto& s : script) execute(s, log);
  }

  void execute(const Stmt& s, std::ostream* log = nullptr) {
    if (s.kind == Stmt::Kind::Let) {
      if (env_.count(s.name)) throw ScriptError("'" + s.name + "' is already bound", s.pos);
      Value v = eval(*s.lhs);
      bindings_.emplace_back(s.name, render(v));
      if (log) *log << s.name << " = " << bindings_.back().second << "\n";
      env_.emplace(s.name, std::move(v));
      return;
    }
    Value a = eval(*s.lhs), b = eval(*s.rhs);
    CheckOutcome c{s.pos, to_source(*s.lhs) + " == " + to_source(*s.rhs), render(a), render(b), equal_values(a, b, s.pos)};
    if (log) {
      *log << "check " << c.source << ": " << (c.passed ? "pass" : "FAIL");
      if (!c.passed) *log << " (" << c.lhs << " vs " << c.rhs << ")";
      *log << "\n";
    }
    checks_.push_back(std::move(c));
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Int: return e.value;
      case Expr::Kind::Ref: return resolve(e);
      case Expr::Kind::Neg: {
        Value v = eval(*e.args[0]);
        if (auto* i = std::get_if<Int>(&v)) return Int(-*i);
        return -as_poly(v, e.args[0]->pos);
      }
      case Expr::Kind::Add:
      case Expr::Kind::Sub:
      case Expr::Kind::Mul: return arithmetic(e);
      case Expr::Kind::Pow: {
        Value v = eval(*e.args[0]);
        if (!e.value.fits_sint_p() || e.value > 64) throw ScriptError("exponent too large", e.pos);
        const int n = static_cast<int>(e.value.get_si());
        if (auto* i = std::get_if<Int>(&v)) {
          Int r;
          mpz_pow_ui(r.get_mpz_t(), i->get_mpz_t(), static_cast<unsigned long>(n));
          return r;
        }
        Poly p = as_poly(v, e.args[0]->pos);
        if (!p.is_zero() && n > 0 && p.degree() * n > p.table()->degree_bound())
          throw ScriptError("degree overflow: degree " + std::to_string(p.degree() * n) + " exceeds the bound " + std::to_string(p.table()->degree_bound()), e.pos);
        return p.pow(n);
      }
      case Expr::Kind::Call: return call(e);
    }
    throw ScriptError("unreachable", e.pos);
  }

 private:
  struct Registered {
    TablePtr table;
    std::shared_ptr<const Ring> ring;
  };

  // ---- variables and rings ------------------------------------------------

  void register_ring(const Ring& r) {
    for (const auto& reg : rings_)
      if (reg.table == r.table()) return;
    rings_.push_back({r.table(), std::make_shared<const Ring>(r)});
  }

  static std::set<std::string> names_of(const TablePtr& t) {
    std::set<std::string> s;
    for (const auto& v : t->vars()) s.insert(v.name);
    return s;
  }

  /// Variables actually occurring in p.
  static std::set<std::string> support(const Poly& p) {
    std::set<std::string> s;
    for (const auto& [m, c] : p.terms())
      for (std::size_t i = 0; i < m.exps.size(); ++i)
        if (m.exps[i]) s.insert(p.table()->var(i).name);
    return s;
  }

  /// Smallest registered table (earliest among equals) containing `names`.
  std::optional<TablePtr> table_containing(const std::set<std::string>& names) const {
    std::optional<TablePtr> best;
    for (const auto& reg : rings_) {
      const auto have = names_of(reg.table);
      bool ok = true;
      for (const auto& n : names) ok = ok && have.count(n);
      if (ok && (!best || reg.table->size() < (*best)->size())) best = reg.table;
    }
    return best;
  }

  std::optional<Registered> ring_of(const TablePtr& t) const {
    for (const auto& reg : rings_)
      if (same_table(reg.table, t)) return reg;
    return std::nullopt;
  }

  Value resolve(const Expr& e) const {
    if (e.name == "true") return true;
    if (e.name == "false") return false;
    if (auto it = env_.find(e.name); it != env_.end()) return it->second;
    auto t = table_containing({e.name});
    if (!t) throw ScriptError("unknown identifier '" + e.name + "'", e.pos);
    return Poly::variable(*t, e.name);
  }

  /// Brings two classes into one ring: embeds into whichever contains the other,
  /// else into the smallest registered ring containing both.
  std::pair<Poly, Poly> unify(Poly a, Poly b, SourcePos pos) const {
    if (same_table(a.table(), b.table())) return {std::move(a), std::move(b)};
    const auto na = names_of(a.table()), nb = names_of(b.table());
    std::set<std::string> all = na;
    all.insert(nb.begin(), nb.end());
    TablePtr target;
    if (auto t = table_containing(all)) target = *t;
    else if (all == na) target = a.table();
    else if (all == nb) target = b.table();
    else {
      // Fall back to the occurring variables only.
      auto sa = support(a), sb = support(b);
      sa.insert(sb.begin(), sb.end());
      auto t = table_containing(sa);
      if (!t) throw ScriptError("classes live in unrelated rings; build their fiber product first", pos);
      target = *t;
      return {embed_support(a, target), embed_support(b, target)};
    }
    return {embed(a, target), embed(b, target)};
  }

  static Poly embed_support(const Poly& p, const TablePtr& target) {
    std::vector<Poly> images;
    for (const auto& v : p.table()->vars()) {
      if (target->index_of(v.name)) images.push_back(Poly::variable(target, v.name));
      else images.emplace_back(target);
    }
    return ring_map(p, target, images);
  }

  /// Moves p into table t (p's occurring variables must exist there).
  Poly move_to(const Poly& p, const TablePtr& t, SourcePos pos) const {
    if (same_table(p.table(), t)) return p;
    for (const auto& n : support(p))
      if (!t->index_of(n)) throw ScriptError("variable " + n + " is not defined in the target ring", pos);
    return embed_support(p, t);
  }

  Bundle move_to(const Bundle& b, const TablePtr& t, SourcePos pos) const {
    std::vector<Poly> c;
    for (const auto& p : b.classes()) c.push_back(move_to(p, t, pos));
    return Bundle(b.rank(), std::move(c));
  }

  std::pair<Bundle, Bundle> unify(const Bundle& a, const Bundle& b, SourcePos pos) const {
    if (same_table(a.table(), b.table())) return {a, b};
    auto [x, y] = unify(Poly(a.table()), Poly(b.table()), pos);
    return {move_to(a, x.table(), pos), move_to(b, y.table(), pos)};
  }

  // ---- coercions ----------------------------------------------------------

  Poly as_poly(const Value& v, SourcePos pos) const {
    if (auto* p = std::get_if<Poly>(&v)) return *p;
    throw ScriptError("expected a class, got " + type_name(v), pos);
  }
  Bundle as_bundle(const Value& v, SourcePos pos) const {
    if (auto* b = std::get_if<Bundle>(&v)) return *b;
    throw ScriptError("expected a bundle, got " + type_name(v), pos);
  }
  TowerValue as_tower(const Value& v, SourcePos pos) const {
    if (auto* t = std::get_if<TowerValue>(&v)) return *t;
    throw ScriptError("expected a tower, got " + type_name(v), pos);
  }
  const TowerLevel& as_level(const Value& v, SourcePos pos) const {
    auto* t = std::get_if<TowerValue>(&v);
    if (!t || !t->level) throw ScriptError("expected a Grassmann bundle, got " + type_name(v), pos);
    return *t->level;
  }
  GradedIdeal as_ideal(const Value& v, SourcePos pos) const {
    if (auto* i = std::get_if<IdealValue>(&v)) return *i->ideal;
    throw ScriptError("expected an ideal, got " + type_name(v), pos);
  }
  int as_small_int(const Value& v, SourcePos pos) const {
    if (auto* i = std::get_if<Int>(&v)) {
      if (!i->fits_sint_p()) throw ScriptError("integer out of range", pos);
      return static_cast<int>(i->get_si());
    }
    throw ScriptError("expected an integer, got " + type_name(v), pos);
  }

  Value arg(const Expr& e, std::size_t i) { return eval(*e.args.at(i)); }
  SourcePos argpos(const Expr& e, std::size_t i) const { return e.args.at(i)->pos; }

  // ---- arithmetic ---------------------------------------------------------

  Value arithmetic(const Expr& e) {
    Value a = eval(*e.args[0]), b = eval(*e.args[1]);
    auto* ia = std::get_if<Int>(&a);
    auto* ib = std::get_if<Int>(&b);
    if (ia && ib) {
      if (e.kind == Expr::Kind::Add) return Int(*ia + *ib);
      if (e.kind == Expr::Kind::Sub) return Int(*ia - *ib);
      return Int(*ia * *ib);
    }
    if (ia) a = Poly::constant(as_poly(b, argpos(e, 1)).table(), *ia);
    if (ib) b = Poly::constant(as_poly(a, argpos(e, 0)).table(), *ib);
    auto [p, q] = unify(as_poly(a, argpos(e, 0)), as_poly(b, argpos(e, 1)), e.pos);
    if (e.kind == Expr::Kind::Add) return p + q;
    if (e.kind == Expr::Kind::Sub) return p - q;
    if (!p.is_zero() && !q.is_zero() && p.degree() + q.degree() > p.table()->degree_bound())
      throw ScriptError("degree overflow: degree " + std::to_string(p.degree() + q.degree()) + " exceeds the bound " + std::to_string(p.table()->degree_bound()), e.pos);
    return p * q;
  }

  bool equal_values(const Value& a, const Value& b, SourcePos pos) const {
    if (auto* ia = std::get_if<Int>(&a)) {
      if (auto* ib = std::get_if<Int>(&b)) return *ia == *ib;
      if (auto* pb = std::get_if<Poly>(&b)) return *pb == Poly::constant(pb->table(), *ia);
    }
    if (std::holds_alternative<Int>(b)) return equal_values(b, a, pos);
    if (a.index() != b.index()) throw ScriptError("cannot compare " + type_name(a) + " with " + type_name(b), pos);
    if (auto* pa = std::get_if<Poly>(&a)) {
      auto [p, q] = unify(*pa, std::get<Poly>(b), pos);
      return p == q;
    }
    if (auto* ba = std::get_if<Bundle>(&a)) {
      auto [x, y] = unify(*ba, std::get<Bundle>(b), pos);
      return x == y;
    }
    if (auto* sa = std::get_if<Structure>(&a)) return sa->group == std::get<Structure>(b).group;
    if (auto* ba = std::get_if<bool>(&a)) return *ba == std::get<bool>(b);
    if (auto* ia = std::get_if<IdealValue>(&a)) {
      const auto& x = *ia->ideal;
      const auto& y = *std::get<IdealValue>(b).ideal;
      if (!same_table(x.table(), y.table())) throw ScriptError("ideals live in different rings", pos);
      return ideal_equal(x, y, bound_).equal;
    }
    throw ScriptError("cannot compare values of type " + type_name(a), pos);
  }

  // ---- built-ins ----------------------------------------------------------

  Value call(const Expr& e) {
    const std::string& f = e.name;
    try {
      return dispatch(e, f);
    } catch (const ScriptError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ScriptError(f + ": " + ex.what(), e.pos);
    }
  }

  Value dispatch(const Expr& e, const std::string& f) {
    if (f == "bundle") {
      const int n = as_small_int(arg(e, 0), argpos(e, 0));
      if (n < 1) throw ScriptError("bundle rank must be positive", argpos(e, 0));
      const std::string& prefix = e.args[1]->name;
      if (!table_containing({prefix + "1"}).has_value()) {
        TablePtr t = make_table(chern_variables(prefix, n), bound_);
        register_ring(Ring(t));
      }
      auto t = table_containing({prefix + "1"});
      if (names_of(*t).size() != static_cast<std::size_t>(n)) throw ScriptError("prefix '" + prefix + "' already used by another ring", argpos(e, 1));
      return Bundle::from_variables(*t, prefix, n);
    }
    if (f == "grass") {
      const Bundle b = as_bundle(arg(e, 0), argpos(e, 0));
      const int k = as_small_int(arg(e, 1), argpos(e, 1));
      auto reg = ring_of(b.table());
      if (!reg) throw ScriptError("grass: the bundle does not live on a known ring", argpos(e, 0));
      auto level = std::make_shared<const TowerLevel>(TowerLevel::extend(*reg->ring, b, k, e.args[2]->name));
      register_ring(level->ring());
      return TowerValue{level, nullptr};
    }
    if (f == "product") {
      const TowerLevel& a = as_level(arg(e, 0), argpos(e, 0));
      const TowerLevel& b = as_level(arg(e, 1), argpos(e, 1));
      auto fp = std::make_shared<const FiberProduct>(a, b);
      register_ring(fp->ring());
      return TowerValue{nullptr, fp};
    }
    if (f == "sub") return as_level(arg(e, 0), argpos(e, 0)).sub();
    if (f == "quot") return as_level(arg(e, 0), argpos(e, 0)).quot();
    if (f == "dual") return dual(as_bundle(arg(e, 0), argpos(e, 0)));
    if (f == "det") return determinant(as_bundle(arg(e, 0), argpos(e, 0)));
    if (f == "wedge2") return exterior_square(as_bundle(arg(e, 0), argpos(e, 0)));
    if (f == "rank") return Int(as_bundle(arg(e, 0), argpos(e, 0)).rank());
    if (f == "relation") {
      const TowerLevel& t = as_level(arg(e, 0), argpos(e, 0));
      const int d = as_small_int(arg(e, 1), argpos(e, 1));
      const int first = t.n() - t.k() + 1;
      if (d < first || d - first >= static_cast<int>(t.new_relations().size()))
        throw ScriptError("relation: no relation of degree " + std::to_string(d), argpos(e, 1));
      return t.new_relations()[d - first];
    }
    if (f == "chern") {
      const Bundle b = as_bundle(arg(e, 0), argpos(e, 0));
      return b.c(as_small_int(arg(e, 1), argpos(e, 1)));
    }
    if (f == "tensor_line") {
      const Bundle b = as_bundle(arg(e, 0), argpos(e, 0));
      Value lv = arg(e, 1);
      Poly ell = std::holds_alternative<Int>(lv) ? Poly::constant(b.table(), std::get<Int>(lv)) : as_poly(lv, argpos(e, 1));
      auto [x, y] = unify(Poly(b.table()), ell, e.pos);
      return tensor_line(move_to(b, x.table(), e.pos), y);
    }
    if (f == "quotient") {
      Bundle total = as_bundle(arg(e, 0), argpos(e, 0));
      Bundle sub = as_bundle(arg(e, 1), argpos(e, 1));
      if (e.args.size() == 3) {
        const TowerValue t = as_tower(arg(e, 2), argpos(e, 2));
        const TablePtr& tt = t.table();
        const Ring& ring = t.ring();
        return whitney_quotient(move_to(total, tt, e.pos), move_to(sub, tt, e.pos), [&ring](const Poly& p) { return ring.normal_form(p); });
      }
      auto [x, y] = unify(total, sub, e.pos);
      auto reg = ring_of(x.table());
      if (reg && !reg->ring->is_free()) {
        const Ring& ring = *reg->ring;
        return whitney_quotient(x, y, [&ring](const Poly& p) { return ring.normal_form(p); });
      }
      return whitney_quotient(x, y);
    }
    if (f == "porteous") {
      const Bundle a = as_bundle(arg(e, 0), argpos(e, 0));
      const Bundle b = as_bundle(arg(e, 1), argpos(e, 1));
      const int r = e.args.size() == 3 ? as_small_int(arg(e, 2), argpos(e, 2)) : 0;
      auto [x, y] = unify(a, b, e.pos);
      return porteous(x, y, r);
    }
    if (f == "schur") {
      const TowerLevel& t = as_level(arg(e, 0), argpos(e, 0));
      Partition l;
      for (std::size_t i = 1; i < e.args.size(); ++i) l.push_back(as_small_int(arg(e, i), argpos(e, i)));
      return t.schur(l);
    }
    if (f == "gysin") {
      const TowerLevel& t = as_level(arg(e, 0), argpos(e, 0));
      Poly p = as_poly(arg(e, 1), argpos(e, 1));
      const auto have = names_of(p.table());
      bool within = true;
      for (const auto& n : have) within = within && t.table()->index_of(n).has_value();
      if (within) p = move_to(p, t.table(), argpos(e, 1));
      return t.gysin(p);
    }
    if (f == "nf") {
      const TowerValue t = as_tower(arg(e, 0), argpos(e, 0));
      return t.ring().normal_form(move_to(as_poly(arg(e, 1), argpos(e, 1)), t.table(), argpos(e, 1)));
    }
    if (f == "subst") {
      if (e.args.size() % 2 == 0) throw ScriptError("subst takes a class followed by name, value pairs", e.pos);
      Poly p = as_poly(arg(e, 0), argpos(e, 0));
      std::map<std::string, Poly> images;
      for (std::size_t i = 1; i < e.args.size(); i += 2) {
        const std::string& n = e.args[i]->name;
        if (!p.table()->index_of(n)) throw ScriptError("subst: " + n + " is not a variable of the class's ring", argpos(e, i));
        Value v = arg(e, i + 1);
        Poly img = std::holds_alternative<Int>(v) ? Poly::constant(p.table(), std::get<Int>(v)) : move_to(as_poly(v, argpos(e, i + 1)), p.table(), argpos(e, i + 1));
        images.emplace(n, std::move(img));
      }
      return substitute(p, images);
    }
    if (f == "ideal") {
      std::vector<Poly> gens;
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        Value v = arg(e, i);
        if (auto* iv = std::get_if<IdealValue>(&v)) {
          for (const auto& g : iv->ideal->generators()) gens.push_back(g);
          continue;
        }
        gens.push_back(as_poly(v, argpos(e, i)));
      }
      // Integer generators need a ring; take the first class's.
      TablePtr t;
      for (auto& g : gens) {
        if (!t) t = g.table();
        else t = unify(Poly(t), g, e.pos).first.table();
      }
      for (auto& g : gens) g = move_to(g, t, e.pos);
      return IdealValue{std::make_shared<const GradedIdeal>(t, std::move(gens))};
    }
    if (f == "member") {
      Value v = arg(e, 0);
      GradedIdeal I = as_ideal(arg(e, 1), argpos(e, 1));
      Poly p = std::holds_alternative<Int>(v) ? Poly::constant(I.table(), std::get<Int>(v)) : move_to(as_poly(v, argpos(e, 0)), I.table(), argpos(e, 0));
      Membership m = I.member(p);
      if (m.member && I.evaluate(m.certificate) != p) throw ScriptError("member: certificate does not re-multiply", e.pos);
      return m.member;
    }
    if (f == "contains") {
      GradedIdeal a = as_ideal(arg(e, 0), argpos(e, 0));
      GradedIdeal b = as_ideal(arg(e, 1), argpos(e, 1));
      return a.contains(rebased(b, a.table(), e.pos), bound_).holds;
    }
    if (f == "equal") {
      GradedIdeal a = as_ideal(arg(e, 0), argpos(e, 0));
      GradedIdeal b = as_ideal(arg(e, 1), argpos(e, 1));
      const int up_to = e.args.size() == 3 ? as_small_int(arg(e, 2), argpos(e, 2)) : bound_;
      return ideal_equal(a, rebased(b, a.table(), e.pos), up_to).equal;
    }
    if (f == "structure") {
      GradedIdeal I = as_ideal(arg(e, 0), argpos(e, 0));
      return Structure{I.quotient_structure(as_small_int(arg(e, 1), argpos(e, 1)))};
    }
    throw ScriptError("unknown function '" + f + "'", e.pos);
  }

  GradedIdeal rebased(const GradedIdeal& i, const TablePtr& t, SourcePos pos) const {
    std::vector<Poly> g;
    for (const auto& p : i.generators()) g.push_back(move_to(p, t, pos));
    return GradedIdeal(t, std::move(g));
  }

  int bound_;
  std::map<std::string, Value> env_;
  std::vector<Registered> rings_;
  std::vector<CheckOutcome> checks_;
  std::vector<std::pair<std::string, std::string>> bindings_;
};

}  // namespace chow::dsl

#endif  // CHOW_DSL_HPP
