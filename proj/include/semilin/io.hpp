#pragma once

// JSON forms of the library types. Integers are decimal strings, rationals
// ["p", "q"], matrices row-major arrays of strings, lattice bases column lists.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/genfunc.hpp"
#include "semilin/lattice.hpp"
#include "semilin/polyhedra.hpp"
#include "semilin/presburger.hpp"
#include "semilin/semilinear.hpp"

namespace semilin {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad_json(const std::string& what) { throw ParseError("invalid JSON document: " + what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_json(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::size_t read_dim(const json& j) {
  const json& d = field(j, "dim");
  if (!d.is_number_unsigned()) bad_json("\"dim\" must be a non-negative integer");
  return d.get<std::size_t>();
}

}  // namespace detail

inline json to_json(const Int& x) { return x.get_str(); }

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (!j.is_string()) detail::bad_json("expected an integer string");
  const std::string s = j.get<std::string>();
  Int x;
  if (s.empty() || x.set_str(s, 10) != 0) detail::bad_json("\"" + s + "\" is not a decimal integer");
  return x;
}

inline json to_json(const Rat& q) { return json::array({q.get_num().get_str(), q.get_den().get_str()}); }

inline Rat rat_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) detail::bad_json("expected a rational [\"p\", \"q\"]");
  const Int den = int_from_json(j[1]);
  if (den == 0) detail::bad_json("zero denominator");
  return make_rat(int_from_json(j[0]), den);
}

inline json to_json(const IntVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline IntVec intvec_from_json(const json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) detail::bad_json("expected an integer vector of length " + std::to_string(dim));
  IntVec v;
  for (const auto& x : j) v.push_back(int_from_json(x));
  return v;
}

inline json to_json(const IntMat& M) {
  json a = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) a.push_back(to_json(IntVec(M.row(i).begin(), M.row(i).end())));
  return a;
}

/// Row-major matrix; `cols` is needed when there are no rows.
inline IntMat intmat_from_json(const json& j, std::size_t cols) {
  if (!j.is_array()) detail::bad_json("expected a matrix as an array of rows");
  std::vector<IntVec> rows;
  for (const auto& r : j) rows.push_back(intvec_from_json(r, cols));
  return IntMat::from_rows(rows, cols);
}

inline json to_json(const Lattice& L) {
  json cols = json::array();
  for (const auto& c : L.generators()) cols.push_back(to_json(c));
  return {{"dim", L.dim()}, {"basis", cols}};
}

inline Lattice lattice_from_json(const json& j) {
  const std::size_t n = detail::read_dim(j);
  const json& b = detail::field(j, "basis");
  if (!b.is_array()) detail::bad_json("\"basis\" must be an array of columns");
  std::vector<IntVec> cols;
  for (const auto& c : b) cols.push_back(intvec_from_json(c, n));
  return Lattice::from_columns(cols, n);
}

inline json to_json(const CoPolyhedron& P) {
  json rows = json::array();
  for (const auto& r : P.ineqs()) rows.push_back({{"a", to_json(r.a)}, {"b", to_json(r.b)}, {"strict", r.strict}});
  return {{"dim", P.dim()}, {"ineqs", rows}};
}

inline CoPolyhedron polyhedron_from_json(const json& j) {
  const std::size_t n = detail::read_dim(j);
  const json& rows = detail::field(j, "ineqs");
  if (!rows.is_array()) detail::bad_json("\"ineqs\" must be an array");
  std::vector<LinIneq> out;
  for (const auto& r : rows) {
    bool strict = false;
    if (r.is_object() && r.contains("strict")) {
      if (!r.at("strict").is_boolean()) detail::bad_json("\"strict\" must be a boolean");
      strict = r.at("strict").get<bool>();
    }
    out.emplace_back(intvec_from_json(detail::field(r, "a"), n), int_from_json(detail::field(r, "b")), strict);
  }
  return CoPolyhedron(n, std::move(out));
}

inline json to_json(const Pattern& p) {
  json cosets = json::array();
  for (const auto& c : p.cosets()) cosets.push_back(to_json(c));
  return {{"period", to_json(p.period())}, {"cosets", cosets}};
}

inline Pattern pattern_from_json(const json& j) {
  Lattice L = lattice_from_json(detail::field(j, "period"));
  const json& cs = detail::field(j, "cosets");
  if (!cs.is_array()) detail::bad_json("\"cosets\" must be an array");
  std::vector<IntVec> reps;
  for (const auto& c : cs) reps.push_back(intvec_from_json(c, L.dim()));
  return Pattern(L, std::move(reps));
}

inline json to_json(const SemilinearSet& X) {
  json pieces = json::array();
  for (const auto& p : X.pieces()) pieces.push_back({{"poly", to_json(p.poly)}, {"pattern", to_json(p.pattern)}});
  return {{"dim", X.dim()}, {"pieces", pieces}};
}

inline SemilinearSet semilinear_from_json(const json& j) {
  const std::size_t n = detail::read_dim(j);
  const json& ps = detail::field(j, "pieces");
  if (!ps.is_array()) detail::bad_json("\"pieces\" must be an array");
  std::vector<PatternedPolyhedron> pieces;
  for (const auto& p : ps)
    pieces.push_back({polyhedron_from_json(detail::field(p, "poly")), pattern_from_json(detail::field(p, "pattern"))});
  return SemilinearSet(n, std::move(pieces));
}

inline json to_json(const ShortGF& g) {
  json terms = json::array();
  for (const auto& t : g.terms()) {
    json den = json::array();
    for (const auto& b : t.den) den.push_back(to_json(b));
    terms.push_back({{"coeff", to_json(t.coeff)}, {"num", to_json(t.num)}, {"den", den}});
  }
  return {{"dim", g.dim()}, {"terms", terms}, {"length", to_json(g.length())}};
}

/// Reads a GF; a "length" field, if present, must match the recomputed one.
inline ShortGF gf_from_json(const json& j) {
  const std::size_t n = detail::read_dim(j);
  const json& ts = detail::field(j, "terms");
  if (!ts.is_array()) detail::bad_json("\"terms\" must be an array");
  ShortGF g(n);
  for (const auto& t : ts) {
    GFTerm term{rat_from_json(detail::field(t, "coeff")), intvec_from_json(detail::field(t, "num"), n), {}};
    const json& den = detail::field(t, "den");
    if (!den.is_array()) detail::bad_json("\"den\" must be an array");
    for (const auto& b : den) term.den.push_back(intvec_from_json(b, n));
    g.add(std::move(term));
  }
  if (j.contains("length") && int_from_json(j.at("length")) != g.length())
    detail::bad_json("\"length\" does not match the terms");
  return g;
}

inline json to_json(const Term& t) {
  json coeffs = json::object();
  for (const auto& [v, c] : t.coeffs) coeffs[v] = to_json(c);
  return {{"coeffs", coeffs}, {"constant", to_json(t.constant)}};
}

inline Term term_from_json(const json& j) {
  Term t;
  const json& cs = detail::field(j, "coeffs");
  if (!cs.is_object()) detail::bad_json("\"coeffs\" must be an object");
  for (const auto& [v, c] : cs.items()) t += Term::var(v).scaled(int_from_json(c));
  t.constant = int_from_json(detail::field(j, "constant"));
  return t;
}

inline json to_json(const Node& n) {
  using K = Node::Kind;
  auto kids = [&] {
    json a = json::array();
    for (const auto& k : n.kids) a.push_back(to_json(*k));
    return a;
  };
  switch (n.kind) {
    case K::True: return {{"op", "true"}};
    case K::False: return {{"op", "false"}};
    case K::Atom: return {{"op", "atom"}, {"lhs", to_json(n.lhs)}, {"cmp", to_string(n.cmp)}, {"rhs", to_json(n.rhs)}};
    case K::Not: return {{"op", "not"}, {"arg", to_json(*n.kids[0])}};
    case K::And: return {{"op", "and"}, {"args", kids()}};
    case K::Or: return {{"op", "or"}, {"args", kids()}};
    case K::Exists: return {{"op", "exists"}, {"vars", n.vars}, {"body", to_json(*n.kids[0])}};
    case K::Forall: return {{"op", "forall"}, {"vars", n.vars}, {"body", to_json(*n.kids[0])}};
  }
  return {};
}

inline NodePtr node_from_json(const json& j) {
  const json& op = detail::field(j, "op");
  if (!op.is_string()) detail::bad_json("\"op\" must be a string");
  const std::string o = op.get<std::string>();
  auto args = [&] {
    const json& a = detail::field(j, "args");
    if (!a.is_array()) detail::bad_json("\"args\" must be an array");
    std::vector<NodePtr> out;
    for (const auto& k : a) out.push_back(node_from_json(k));
    return out;
  };
  auto vars = [&] {
    const json& v = detail::field(j, "vars");
    if (!v.is_array()) detail::bad_json("\"vars\" must be an array");
    std::vector<std::string> out;
    for (const auto& s : v) {
      if (!s.is_string()) detail::bad_json("variable names must be strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  if (o == "true" || o == "false") return build::truth(o == "true");
  if (o == "atom") {
    static const std::pair<const char*, Cmp> cmps[] = {{"<=", Cmp::Le}, {"<", Cmp::Lt}, {">=", Cmp::Ge},
                                                        {">", Cmp::Gt},  {"=", Cmp::Eq}, {"!=", Cmp::Ne}};
    const json& c = detail::field(j, "cmp");
    for (const auto& [s, cmp] : cmps)
      if (c.is_string() && c.get<std::string>() == s)
        return build::atom(term_from_json(detail::field(j, "lhs")), cmp, term_from_json(detail::field(j, "rhs")));
    detail::bad_json("unknown comparison");
  }
  if (o == "not") return build::negation(node_from_json(detail::field(j, "arg")));
  if (o == "and") return build::make({.kind = Node::Kind::And, .kids = args()});
  if (o == "or") return build::make({.kind = Node::Kind::Or, .kids = args()});
  if (o == "exists") return build::exists(vars(), node_from_json(detail::field(j, "body")));
  if (o == "forall") return build::forall(vars(), node_from_json(detail::field(j, "body")));
  detail::bad_json("unknown operator \"" + o + "\"");
}

inline json to_json(const Formula& F) { return {{"free", F.free()}, {"body", to_json(*F.body())}}; }

inline Formula formula_from_json(const json& j) {
  const json& fr = detail::field(j, "free");
  if (!fr.is_array()) detail::bad_json("\"free\" must be an array");
  std::vector<std::string> free;
  for (const auto& s : fr) {
    if (!s.is_string()) detail::bad_json("variable names must be strings");
    free.push_back(s.get<std::string>());
  }
  return Formula(std::move(free), node_from_json(detail::field(j, "body")));
}

/// Parses JSON text; syntax errors become ParseError with line and column.
inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON", line, col);
  }
}

}  // namespace semilin
