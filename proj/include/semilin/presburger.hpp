#pragma once

// Presburger formulas of the prefix class
//   {x1 : Q2 x2 ... Qk xk  Phi(x1, ..., xk)}
// with a Boolean body of linear atoms, and their elimination to explicit
// semilinear sets.
//
// Text grammar:
//   formula  := '{' [vars] ':' expr '}' | expr
//   expr     := ('E' | 'A') vars ':' expr | or
//   or       := and ('|' and)*
//   and      := unary ('&' unary)*
//   unary    := '!' unary | '(' expr ')' | 'true' | 'false' | atom
//   atom     := term cmp term (cmp term)*        cmp in <= < >= > = !=
//   term     := ['-'] product (('+' | '-') product)*
//   product  := factor ('*' factor)*             at most one non-constant factor
//   factor   := INT | IDENT | '(' term ')' | '-' factor
// '#' starts a comment that runs to the end of the line. Without braces the
// free variables are listed in order of first appearance, alphabetically
// within one atom.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/genfunc.hpp"
#include "semilin/integer.hpp"
#include "semilin/polyhedra.hpp"
#include "semilin/semilinear.hpp"

namespace semilin {

/// sum coeffs[v] * v + constant; zero coefficients are never stored.
struct Term {
  std::map<std::string, Int> coeffs;
  Int constant{0};

  static Term var(const std::string& v) {
    Term t;
    t.coeffs[v] = 1;
    return t;
  }
  static Term num(const Int& c) {
    Term t;
    t.constant = c;
    return t;
  }
  bool is_constant() const { return coeffs.empty(); }

  Term& operator+=(const Term& o) {
    for (const auto& [v, c] : o.coeffs) {
      Int& x = coeffs[v];
      x += c;
      if (x == 0) coeffs.erase(v);
    }
    constant += o.constant;
    return *this;
  }
  Term scaled(const Int& k) const {
    if (k == 0) return Term{};
    Term t = *this;
    for (auto& [v, c] : t.coeffs) c *= k;
    t.constant *= k;
    return t;
  }
  Term operator-(const Term& o) const {
    Term t = *this;
    t += o.scaled(-1);
    return t;
  }
  bool operator==(const Term&) const = default;
};

enum class Cmp { Le, Lt, Ge, Gt, Eq, Ne };

inline Cmp negate(Cmp c) {
  switch (c) {
    case Cmp::Le: return Cmp::Gt;
    case Cmp::Lt: return Cmp::Ge;
    case Cmp::Ge: return Cmp::Lt;
    case Cmp::Gt: return Cmp::Le;
    case Cmp::Eq: return Cmp::Ne;
    case Cmp::Ne: return Cmp::Eq;
  }
  return c;
}

inline const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::Le: return "<=";
    case Cmp::Lt: return "<";
    case Cmp::Ge: return ">=";
    case Cmp::Gt: return ">";
    case Cmp::Eq: return "=";
    case Cmp::Ne: return "!=";
  }
  return "?";
}

struct SourceSpan {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { True, False, Atom, Not, And, Or, Exists, Forall };
  Kind kind = Kind::True;
  Term lhs, rhs;
  Cmp cmp = Cmp::Le;
  std::vector<std::string> vars;
  std::vector<NodePtr> kids;
  SourceSpan span;

  bool is_quantifier() const { return kind == Kind::Exists || kind == Kind::Forall; }
};

namespace build {

inline NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }
inline NodePtr truth(bool v) { return make({.kind = v ? Node::Kind::True : Node::Kind::False}); }
inline NodePtr atom(Term lhs, Cmp c, Term rhs, SourceSpan at = {}) {
  return make({.kind = Node::Kind::Atom, .lhs = std::move(lhs), .rhs = std::move(rhs), .cmp = c, .span = at});
}
inline NodePtr negation(NodePtr a, SourceSpan at = {}) {
  return make({.kind = Node::Kind::Not, .kids = {std::move(a)}, .span = at});
}
inline NodePtr conj(std::vector<NodePtr> kids) {
  if (kids.size() == 1) return kids[0];
  if (kids.empty()) return truth(true);
  return make({.kind = Node::Kind::And, .kids = std::move(kids)});
}
inline NodePtr disj(std::vector<NodePtr> kids) {
  if (kids.size() == 1) return kids[0];
  if (kids.empty()) return truth(false);
  return make({.kind = Node::Kind::Or, .kids = std::move(kids)});
}
inline NodePtr exists(std::vector<std::string> vars, NodePtr body, SourceSpan at = {}) {
  return make({.kind = Node::Kind::Exists, .vars = std::move(vars), .kids = {std::move(body)}, .span = at});
}
inline NodePtr forall(std::vector<std::string> vars, NodePtr body, SourceSpan at = {}) {
  return make({.kind = Node::Kind::Forall, .vars = std::move(vars), .kids = {std::move(body)}, .span = at});
}

}  // namespace build

/// Prefix class Pr_{k,n}: k variable blocks (the free block first) and their sizes.
struct PrefixClass {
  std::size_t k = 1;
  std::vector<std::size_t> sizes;
};

struct QuantBlock {
  bool forall = false;
  std::vector<std::string> vars;
};

/// Formula with its free-variable vector; the set it defines lives in Z^free.size().
class Formula {
public:
  Formula() : body_(build::truth(true)) {}
  Formula(std::vector<std::string> free, NodePtr body) : free_(std::move(free)), body_(std::move(body)) { validate(); }

  const std::vector<std::string>& free() const noexcept { return free_; }
  const NodePtr& body() const noexcept { return body_; }
  std::size_t dim() const noexcept { return free_.size(); }
  bool is_sentence() const noexcept { return free_.empty(); }

private:
  void validate() const {
    std::set<std::string> seen;
    for (const auto& v : free_)
      if (!seen.insert(v).second) throw ParseError("free variable " + v + " listed twice");
    std::set<std::string> bound;
    walk(*body_, seen, bound);
  }

  static void walk(const Node& n, const std::set<std::string>& free, std::set<std::string>& bound) {
    if (n.kind == Node::Kind::Atom) {
      for (const Term* t : {&n.lhs, &n.rhs})
        for (const auto& [v, c] : t->coeffs)
          if (!free.count(v) && !bound.count(v))
            throw ParseError("unbound variable " + v, n.span.line, n.span.column);
      return;
    }
    if (n.is_quantifier()) {
      for (const auto& v : n.vars) {
        if (free.count(v)) throw ParseError("variable " + v + " is both free and bound", n.span.line, n.span.column);
        if (!bound.insert(v).second) throw ParseError("variable " + v + " is bound twice", n.span.line, n.span.column);
      }
      // Scope ends with the quantifier; a sibling may not reuse the name either.
      walk(*n.kids[0], free, bound);
      return;
    }
    for (const auto& k : n.kids) walk(*k, free, bound);
  }

  std::vector<std::string> free_;
  NodePtr body_;
};

namespace detail {

class Parser {
public:
  explicit Parser(const std::string& text) : src_(text) { lex(); }

  Formula parse() {
    std::vector<std::string> free;
    bool braces = false;
    if (peek().text == "{") {
      next();
      braces = true;
      if (!accept(":")) {
        free = var_list();
        expect(":");
      }
    }
    NodePtr body = expr();
    if (braces) expect("}");
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'", peek());
    if (!braces) free = first_appearance(*body);
    return Formula(std::move(free), std::move(body));
  }

private:
  enum class Tok { Ident, Int, Sym, End };
  struct Token {
    Tok kind;
    std::string text;
    std::size_t line, col;
  };

  [[noreturn]] static void fail(const std::string& what, const Token& t) { throw ParseError(what, t.line, t.col); }

  void lex() {
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
      for (std::size_t j = 0; j < k; ++j, ++i) {
        if (src_[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < src_.size()) {
      const char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '#') {
        while (i < src_.size() && src_[i] != '\n') advance(1);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_' || src_[j] == '\''))
          ++j;
        toks_.push_back({Tok::Ident, src_.substr(i, j - i), line, col});
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        toks_.push_back({Tok::Int, src_.substr(i, j - i), line, col});
        advance(j - i);
      } else {
        static const char* two[] = {"<=", ">=", "!="};
        std::string sym(1, c);
        for (const char* t : two)
          if (src_.compare(i, 2, t) == 0) sym = t;
        if (sym.size() == 1 && std::string("<>=!&|()+-*:,{}").find(c) == std::string::npos)
          fail(std::string("unexpected character '") + c + "'", {Tok::Sym, sym, line, col});
        toks_.push_back({Tok::Sym, sym, line, col});
        advance(sym.size());
      }
    }
    toks_.push_back({Tok::End, "end of input", line, col});
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(const char* s) {
    if (peek().kind == Tok::Sym && peek().text == s) {
      next();
      return true;
    }
    return false;
  }
  void expect(const char* s) {
    if (!accept(s)) fail(std::string("expected '") + s + "' but found '" + peek().text + "'", peek());
  }
  static bool is_keyword(const std::string& s) { return s == "E" || s == "A" || s == "true" || s == "false"; }

  std::vector<std::string> var_list() {
    std::vector<std::string> out;
    do {
      const Token& t = next();
      if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected a variable name but found '" + t.text + "'", t);
      out.push_back(t.text);
    } while (accept(","));
    return out;
  }

  bool at_quantifier() const {
    return peek().kind == Tok::Ident && (peek().text == "E" || peek().text == "A") && peek(1).kind == Tok::Ident;
  }

  NodePtr expr() {
    if (at_quantifier()) {
      const Token q = next();
      auto vars = var_list();
      expect(":");
      NodePtr body = expr();
      SourceSpan at{q.line, q.col};
      return q.text == "E" ? build::exists(std::move(vars), std::move(body), at)
                           : build::forall(std::move(vars), std::move(body), at);
    }
    std::vector<NodePtr> kids{conjunction()};
    while (accept("|")) kids.push_back(conjunction());
    return build::disj(std::move(kids));
  }

  NodePtr conjunction() {
    std::vector<NodePtr> kids{unary()};
    while (accept("&")) kids.push_back(unary());
    return build::conj(std::move(kids));
  }

  NodePtr unary() {
    const Token& t = peek();
    if (accept("!")) return build::negation(unary(), {t.line, t.col});
    if (at_quantifier()) return expr();
    if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false")) {
      next();
      return build::truth(t.text == "true");
    }
    if (t.kind == Tok::Sym && t.text == "(") {
      // Either a parenthesized formula or an atom starting with a parenthesized term.
      const std::size_t save = pos_;
      std::optional<ParseError> first;
      try {
        next();
        NodePtr inner = expr();
        expect(")");
        if (!is_cmp(peek())) return inner;
      } catch (const ParseError& e) {
        first = e;
      }
      pos_ = save;
      try {
        return atom();
      } catch (const ParseError& e) {
        if (first && std::pair(first->line(), first->column()) > std::pair(e.line(), e.column())) throw *first;
        throw;
      }
    }
    return atom();
  }

  static bool is_cmp(const Token& t) {
    return t.kind == Tok::Sym && (t.text == "<=" || t.text == "<" || t.text == ">=" || t.text == ">" ||
                                  t.text == "=" || t.text == "!=");
  }

  NodePtr atom() {
    const Token start = peek();
    Term lhs = term();
    if (!is_cmp(peek())) fail("expected a comparison but found '" + peek().text + "'", peek());
    std::vector<NodePtr> chain;
    while (is_cmp(peek())) {
      const Token op = next();
      Term rhs = term();
      Cmp c = op.text == "<=" ? Cmp::Le
              : op.text == "<" ? Cmp::Lt
              : op.text == ">=" ? Cmp::Ge
              : op.text == ">" ? Cmp::Gt
              : op.text == "=" ? Cmp::Eq
                               : Cmp::Ne;
      chain.push_back(build::atom(lhs, c, rhs, {start.line, start.col}));
      lhs = std::move(rhs);
    }
    return build::conj(std::move(chain));
  }

  Term term() {
    Term t;
    bool neg = accept("-");
    t += neg ? product().scaled(-1) : product();
    for (;;) {
      if (accept("+")) t += product();
      else if (accept("-")) t += product().scaled(-1);
      else return t;
    }
  }

  Term product() {
    const Token start = peek();
    Term t = factor();
    while (accept("*")) {
      Term f = factor();
      if (!t.is_constant() && !f.is_constant()) fail("non-linear term: product of two variables", start);
      t = t.is_constant() ? f.scaled(t.constant) : t.scaled(f.constant);
    }
    return t;
  }

  Term factor() {
    const Token& t = next();
    if (t.kind == Tok::Int) return Term::num(Int(t.text));
    if (t.kind == Tok::Ident && !is_keyword(t.text)) return Term::var(t.text);
    if (t.kind == Tok::Sym && t.text == "-") return factor().scaled(-1);
    if (t.kind == Tok::Sym && t.text == "(") {
      Term inner = term();
      expect(")");
      return inner;
    }
    fail("expected a term but found '" + t.text + "'", t);
  }

  static std::vector<std::string> first_appearance(const Node& root) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    std::vector<std::string> bound;
    auto visit = [&](auto&& self, const Node& n) -> void {
      if (n.kind == Node::Kind::Atom) {
        for (const Term* t : {&n.lhs, &n.rhs})
          for (const auto& [v, c] : t->coeffs)
            if (std::find(bound.begin(), bound.end(), v) == bound.end() && seen.insert(v).second) order.push_back(v);
        return;
      }
      if (n.is_quantifier()) {
        const std::size_t mark = bound.size();
        bound.insert(bound.end(), n.vars.begin(), n.vars.end());
        self(self, *n.kids[0]);
        bound.resize(mark);
        return;
      }
      for (const auto& k : n.kids) self(self, *k);
    };
    visit(visit, root);
    return order;
  }

  std::string src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse(const std::string& text) { return detail::Parser(text).parse(); }

/// Text form that parse() reads back to the same formula.
inline std::string to_string(const Term& t) {
  std::string out;
  for (const auto& [v, c] : t.coeffs) {
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    Int a = abs(c);
    if (a != 1) out += a.get_str() + "*";
    out += v;
  }
  if (out.empty()) return t.constant.get_str();
  if (t.constant != 0) out += (t.constant < 0 ? " - " : " + ") + Int(abs(t.constant)).get_str();
  return out;
}

inline std::string to_string(const Node& n) {
  auto joined = [&](const char* op) {
    std::string s;
    for (std::size_t i = 0; i < n.kids.size(); ++i) s += (i ? op : "") + std::string("(") + to_string(*n.kids[i]) + ")";
    return s;
  };
  auto vars = [&] {
    std::string s;
    for (std::size_t i = 0; i < n.vars.size(); ++i) s += (i ? "," : "") + n.vars[i];
    return s;
  };
  switch (n.kind) {
    case Node::Kind::True: return "true";
    case Node::Kind::False: return "false";
    case Node::Kind::Atom: return to_string(n.lhs) + " " + to_string(n.cmp) + " " + to_string(n.rhs);
    case Node::Kind::Not: return "!(" + to_string(*n.kids[0]) + ")";
    case Node::Kind::And: return joined(" & ");
    case Node::Kind::Or: return joined(" | ");
    case Node::Kind::Exists: return "E " + vars() + " : " + to_string(*n.kids[0]);
    case Node::Kind::Forall: return "A " + vars() + " : " + to_string(*n.kids[0]);
  }
  return "";
}

inline std::string to_string(const Formula& F) {
  std::string s = "{";
  for (std::size_t i = 0; i < F.free().size(); ++i) s += (i ? "," : "") + F.free()[i];
  return s + " : " + to_string(*F.body()) + "}";
}

namespace detail {

/// Negation normal form: Not nodes are pushed into atoms and quantifiers.
inline NodePtr nnf(const NodePtr& n, bool neg) {
  using K = Node::Kind;
  switch (n->kind) {
    case K::True:
    case K::False: return build::truth((n->kind == K::True) != neg);
    case K::Atom: return neg ? build::atom(n->lhs, negate(n->cmp), n->rhs, n->span) : n;
    case K::Not: return nnf(n->kids[0], !neg);
    case K::And:
    case K::Or: {
      std::vector<NodePtr> kids;
      for (const auto& k : n->kids) kids.push_back(nnf(k, neg));
      return (n->kind == K::And) != neg ? build::conj(std::move(kids)) : build::disj(std::move(kids));
    }
    case K::Exists:
    case K::Forall: {
      NodePtr body = nnf(n->kids[0], neg);
      return (n->kind == K::Exists) != neg ? build::exists(n->vars, std::move(body), n->span)
                                           : build::forall(n->vars, std::move(body), n->span);
    }
  }
  return n;
}

/// Pulls quantifiers of an NNF formula to the front. Bound names are unique,
/// so no renaming is needed.
inline NodePtr prenex_matrix(const NodePtr& n, std::vector<QuantBlock>& prefix) {
  using K = Node::Kind;
  if (n->is_quantifier()) {
    const bool fa = n->kind == K::Forall;
    if (prefix.empty() || prefix.back().forall != fa) prefix.push_back({fa, {}});
    auto& vs = prefix.back().vars;
    vs.insert(vs.end(), n->vars.begin(), n->vars.end());
    return prenex_matrix(n->kids[0], prefix);
  }
  if (n->kind == K::And || n->kind == K::Or) {
    std::vector<NodePtr> kids;
    for (const auto& k : n->kids) kids.push_back(prenex_matrix(k, prefix));
    return n->kind == K::And ? build::conj(std::move(kids)) : build::disj(std::move(kids));
  }
  return n;
}

}  // namespace detail

/// Prenex form: quantifier blocks (outermost first) and a quantifier-free matrix.
struct Prenex {
  std::vector<QuantBlock> blocks;
  NodePtr matrix;
};

inline Prenex prenex(const Formula& F) {
  Prenex p;
  p.matrix = detail::prenex_matrix(detail::nnf(F.body(), false), p.blocks);
  return p;
}

inline PrefixClass prefix_class(const Formula& F) {
  PrefixClass c;
  c.sizes.push_back(F.dim());
  for (const auto& b : prenex(F).blocks) c.sizes.push_back(b.vars.size());
  c.k = c.sizes.size();
  return c;
}

/// Pairwise disjoint copolyhedra over `vars` whose union has the same integer
/// points as the quantifier-free body.
struct DisjointDNF {
  std::vector<std::string> vars;
  std::vector<CoPolyhedron> cells;
};

namespace detail {

/// Boolean combination of canonical rows a.x <= b (first nonzero a_i > 0).
struct BoolExpr {
  enum class Kind { True, False, Lit, And, Or };
  Kind kind = Kind::True;
  std::size_t atom = 0;
  bool positive = true;
  std::vector<BoolExpr> kids;
};

class AtomTable {
public:
  explicit AtomTable(const std::vector<std::string>& vars) : vars_(vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) index_[vars[i]] = i;
  }

  std::size_t size() const noexcept { return rows_.size(); }
  const LinIneq& row(std::size_t i) const { return rows_[i]; }

  /// a.x <= b as a literal over the table.
  BoolExpr le(IntVec a, Int b) {
    if (is_zero(a)) return {b >= 0 ? BoolExpr::Kind::True : BoolExpr::Kind::False};
    const Int g = content(a);
    for (auto& x : a) x /= g;
    b = floor_div(b, g);
    bool positive = true;
    auto lead = std::find_if(a.begin(), a.end(), [](const Int& x) { return x != 0; });
    if (*lead < 0) {
      for (auto& x : a) x = -x;
      b = -b - 1;
      positive = false;
    }
    LinIneq r(std::move(a), std::move(b));
    auto [it, fresh] = ids_.try_emplace(r, rows_.size());
    if (fresh) rows_.push_back(r);
    return {BoolExpr::Kind::Lit, it->second, positive, {}};
  }

  BoolExpr atom(const Node& n) {
    Term d = n.lhs - n.rhs;
    IntVec a(vars_.size(), Int(0));
    for (const auto& [v, c] : d.coeffs) {
      auto it = index_.find(v);
      if (it == index_.end()) throw ParseError("unbound variable " + v, n.span.line, n.span.column);
      a[it->second] = c;
    }
    IntVec na = a;
    for (auto& x : na) x = -x;
    const Int& c = d.constant;
    switch (n.cmp) {
      case Cmp::Le: return le(a, -c);
      case Cmp::Lt: return le(a, -c - 1);
      case Cmp::Ge: return le(na, c);
      case Cmp::Gt: return le(na, c - 1);
      case Cmp::Eq: return {BoolExpr::Kind::And, 0, true, {le(a, -c), le(na, c)}};
      case Cmp::Ne: return {BoolExpr::Kind::Or, 0, true, {le(a, -c - 1), le(na, c - 1)}};
    }
    return {};
  }

  BoolExpr convert(const Node& n) {
    using K = Node::Kind;
    switch (n.kind) {
      case K::True: return {BoolExpr::Kind::True};
      case K::False: return {BoolExpr::Kind::False};
      case K::Atom: return atom(n);
      case K::Not: {
        BoolExpr e = convert(*n.kids[0]);
        return negated(std::move(e));
      }
      case K::And:
      case K::Or: {
        BoolExpr e{n.kind == K::And ? BoolExpr::Kind::And : BoolExpr::Kind::Or};
        for (const auto& k : n.kids) e.kids.push_back(convert(*k));
        return e;
      }
      case K::Exists:
      case K::Forall: throw Error("to_disjoint_dnf: body must be quantifier-free");
    }
    return {};
  }

private:
  static BoolExpr negated(BoolExpr e) {
    using K = BoolExpr::Kind;
    switch (e.kind) {
      case K::True: e.kind = K::False; break;
      case K::False: e.kind = K::True; break;
      case K::Lit: e.positive = !e.positive; break;
      case K::And:
      case K::Or:
        e.kind = e.kind == K::And ? K::Or : K::And;
        for (auto& k : e.kids) k = negated(std::move(k));
        break;
    }
    return e;
  }

  std::vector<std::string> vars_;
  std::map<std::string, std::size_t> index_;
  std::vector<LinIneq> rows_;
  std::map<LinIneq, std::size_t> ids_;
};

/// 1 true, 0 false, -1 undecided; `branch` receives the first undecided atom.
inline int evaluate(const BoolExpr& e, const std::vector<signed char>& assign, std::optional<std::size_t>& branch) {
  using K = BoolExpr::Kind;
  switch (e.kind) {
    case K::True: return 1;
    case K::False: return 0;
    case K::Lit: {
      const signed char v = assign[e.atom];
      if (v < 0) {
        if (!branch) branch = e.atom;
        return -1;
      }
      return (v == 1) == e.positive ? 1 : 0;
    }
    case K::And:
    case K::Or: {
      const int absorbing = e.kind == K::And ? 0 : 1;
      int result = 1 - absorbing;
      std::optional<std::size_t> first;
      for (const auto& k : e.kids) {
        std::optional<std::size_t> b;
        const int v = evaluate(k, assign, b);
        if (v == absorbing) return absorbing;
        if (v < 0) {
          result = -1;
          if (!first) first = b;
        }
      }
      if (result < 0 && !branch) branch = first;
      return result;
    }
  }
  return -1;
}

}  // namespace detail

/// Decision tree over the distinct atoms with feasibility pruning; siblings
/// differ in one atom (a.x <= b versus a.x >= b + 1), so cells are disjoint.
inline DisjointDNF to_disjoint_dnf(const NodePtr& body, const std::vector<std::string>& vars,
                                   const Options& opts = default_options()) {
  detail::AtomTable table(vars);
  const detail::BoolExpr e = table.convert(*body);
  DisjointDNF out{vars, {}};
  std::vector<signed char> assign;
  auto split = [&](auto&& self, const CoPolyhedron& cell) -> void {
    opts.check_deadline();
    std::optional<std::size_t> branch;
    const int v = detail::evaluate(e, assign, branch);
    if (v == 0) return;
    if (v == 1) {
      if (ilp_feasible(cell, opts)) out.cells.push_back(cell);
      return;
    }
    const std::size_t i = *branch;
    for (const bool pos : {true, false}) {
      LinIneq r = pos ? table.row(i) : table.row(i).negated_integral();
      CoPolyhedron next = cell.with(r);
      if (next.is_empty()) continue;
      assign[i] = pos ? 1 : 0;
      self(self, next);
      assign[i] = -1;
    }
  };
  assign.assign(table.size(), -1);
  split(split, CoPolyhedron::whole(vars.size()));
  return out;
}

inline DisjointDNF to_disjoint_dnf(const Formula& F, const Options& opts = default_options()) {
  return to_disjoint_dnf(F.body(), F.free(), opts);
}

/// Explicit semilinear set of the free-variable assignments satisfying F.
/// Blocks are removed innermost first: E by projection, A as the complement
/// of the projection of the complement.
inline SemilinearSet eliminate(const Formula& F, const Options& opts = default_options()) {
  const Prenex p = prenex(F);
  std::vector<std::string> vars = F.free();
  for (const auto& b : p.blocks) vars.insert(vars.end(), b.vars.begin(), b.vars.end());
  DisjointDNF dnf = to_disjoint_dnf(p.matrix, vars, opts);
  std::vector<PatternedPolyhedron> pieces;
  for (auto& c : dnf.cells) pieces.push_back({std::move(c), Pattern::all(vars.size())});
  SemilinearSet X(vars.size(), std::move(pieces), SemilinearSet::trusted);

  for (auto b = p.blocks.rbegin(); b != p.blocks.rend(); ++b) {
    const std::size_t keep = X.dim() - b->vars.size();
    IntMat T(keep, X.dim());
    for (std::size_t i = 0; i < keep; ++i) T(i, i) = 1;
    if (b->forall) X = complement(project(complement(X, opts), T, opts), opts);
    else X = project(X, T, opts);
  }
  return X;
}

/// Truth value of a sentence: the eliminated set is either {()} or empty.
inline bool truth(const Formula& F, const Options& opts = default_options()) {
  if (!F.is_sentence()) throw DimensionError("truth: formula has free variables");
  return member(eliminate(F, opts), IntVec{});
}

namespace detail {

inline Int max_norm(const CoPolyhedron& R) {
  Int N = 0;
  const std::size_t n = R.dim();
  for (std::size_t i = 0; i < n; ++i) {
    RatVec e(n, Rat(0));
    e[i] = 1;
    auto hi = R.maximize(e);
    auto lo = R.minimize(e);
    if (hi.status != LpStatus::optimal || lo.status != LpStatus::optimal) continue;
    N = std::max({N, ceil_rat(hi.value), Int(-floor_rat(lo.value))});
  }
  return N;
}

inline Int bound_N(const SemilinearSet& X, const Options& opts) {
  Int N = 0;
  for (const auto& piece : X.pieces())
    for (const auto& c : gf_cells(piece, opts)) N = std::max(N, max_norm(c.region));
  return N;
}

}  // namespace detail

/// Every bounded cell R_i + P_i of the GF pipeline for F lies in [-N, N]^n.
inline Int bound_N(const Formula& F, const Options& opts = default_options()) {
  return detail::bound_N(eliminate(F, opts), opts);
}

/// Short GF of F. Each cell's content is the Hadamard product of its lattice
/// points with the partial GF of F on the part of [-N, N]^n around the cell.
inline ShortGF gf_formula(const Formula& F, const Options& opts = default_options()) {
  const SemilinearSet X = eliminate(F, opts);
  for (const auto& p : X.pieces())
    if (!lineality_space(p.poly).empty()) throw NotPointedError("non-pointed formula set: it contains a line");
  const Int N = detail::bound_N(X, opts);
  const std::size_t n = X.dim();
  auto content = [&](const PatternedPolyhedron&, const CoPolyhedron& region) {
    std::vector<IntVec> cell_pts = integer_points(region, opts);
    if (cell_pts.empty()) return ShortGF(n);
    IntVec lo = cell_pts[0], hi = cell_pts[0];
    for (const auto& y : cell_pts)
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = std::max(std::min(lo[i], y[i]), Int(-N));
        hi[i] = std::min(std::max(hi[i], y[i]), N);
      }
    Box box(lo, hi);
    std::vector<IntVec> partial;
    for_each_integer_point(box.poly(), [&](const IntVec& y) {
      if (member(X, y)) partial.push_back(y);
      return true;
    }, opts);
    return hadamard_expanded(gf_finite(n, std::move(cell_pts)), gf_finite(n, std::move(partial)), box, opts);
  };
  return detail::gf_pipeline(X, content, opts);
}

}  // namespace semilin
