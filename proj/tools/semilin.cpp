// Command-line front end: projections, formula elimination, generating
// functions, box expansion, sentence evaluation and Frobenius numbers.
//
// Exit codes: 0 ok, 1 usage, 2 parse error, 3 empty or infeasible input
// (output is still written), 4 resource cap exceeded, 5 non-pointed input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semilin/semilin.hpp"

using namespace semilin;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kEmpty = 3, kResource = 4, kNotPointed = 5 };

struct UsageError : Error {
  using Error::Error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Rows separated by ';', entries by spaces or commas.
IntMat parse_matrix(const std::string& text, std::size_t cols) {
  std::vector<IntVec> rows;
  std::stringstream all(text);
  for (std::string row; std::getline(all, row, ';');) {
    for (char& c : row)
      if (c == ',') c = ' ';
    std::stringstream in(row);
    IntVec r;
    for (std::string tok; in >> tok;) {
      Int x;
      if (x.set_str(tok, 10) != 0) throw UsageError("bad matrix entry '" + tok + "'");
      r.push_back(x);
    }
    if (r.empty()) continue;
    if (cols != 0 && r.size() != cols)
      throw UsageError("matrix row has " + std::to_string(r.size()) + " entries, expected " + std::to_string(cols));
    cols = r.size();
    rows.push_back(std::move(r));
  }
  return IntMat::from_rows(rows, cols);
}

std::vector<Int> parse_list(const std::string& text) {
  std::vector<Int> out;
  std::stringstream in(text);
  for (std::string tok; std::getline(in, tok, ',');) {
    Int x;
    if (x.set_str(tok, 10) != 0) throw UsageError("bad list entry '" + tok + "'");
    out.push_back(x);
  }
  return out;
}

/// "lo:hi" for every coordinate, or one "lo:hi" per coordinate separated by ','.
Box parse_box(const std::string& text, std::size_t dim) {
  std::vector<std::pair<Int, Int>> ranges;
  std::stringstream in(text);
  for (std::string r; std::getline(in, r, ',');) {
    auto colon = r.find(':');
    Int lo, hi;
    if (colon == std::string::npos || lo.set_str(r.substr(0, colon), 10) != 0 ||
        hi.set_str(r.substr(colon + 1), 10) != 0 || lo > hi)
      throw UsageError("bad box range '" + r + "'; expected lo:hi");
    ranges.emplace_back(lo, hi);
  }
  if (ranges.size() == 1) ranges.resize(dim, ranges[0]);
  if (ranges.size() != dim)
    throw UsageError("box has " + std::to_string(ranges.size()) + " ranges for dimension " + std::to_string(dim));
  IntVec lo, hi;
  for (auto& [a, b] : ranges) {
    lo.push_back(a);
    hi.push_back(b);
  }
  return Box(lo, hi);
}

ShortGF sorted(const ShortGF& g) {
  std::vector<GFTerm> terms = g.terms();
  std::sort(terms.begin(), terms.end(), [](const GFTerm& a, const GFTerm& b) {
    if (a.den != b.den) return a.den < b.den;
    if (a.num != b.num) return a.num < b.num;
    return a.coeff < b.coeff;
  });
  return ShortGF(g.dim(), std::move(terms));
}

std::string point_text(const IntVec& y) {
  std::string s;
  for (std::size_t i = 0; i < y.size(); ++i) s += (i ? " " : "") + y[i].get_str();
  return s;
}

struct Inputs {
  std::string poly, set, map, formula, formula_file, gf, box, format = "text";
};

Formula load_formula(const Inputs& in) {
  if (!in.formula.empty() && !in.formula_file.empty()) throw UsageError("give either --formula or --formula-file");
  if (!in.formula.empty()) return parse(in.formula);
  if (!in.formula_file.empty()) return parse(read_input(in.formula_file));
  throw UsageError("a formula is required (--formula or --formula-file)");
}

int warn_if_empty(bool empty, const char* what) {
  if (!empty) return kOk;
  std::cerr << "warning: " << what << "\n";
  return kEmpty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semilinear sets, Presburger elimination and short generating functions"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  std::size_t max_cosets = opts.max_cosets;
  double budget = 0;
  unsigned jobs = 1;
  if (const char* env = std::getenv("SEMILIN_JOBS")) jobs = static_cast<unsigned>(std::max(1L, std::atol(env)));
  app.add_option("--max-cosets", max_cosets, "Cap on the coset count of any pattern")->capture_default_str();
  app.add_option("--budget-seconds", budget, "Wall-clock budget; 0 means none");
  app.add_option("--jobs", jobs, "Worker threads (default from SEMILIN_JOBS)")->check(CLI::PositiveNumber);

  Inputs in;
  std::string sentence, gens, kmat;
  std::size_t k = 1;

  auto* project_cmd = app.add_subcommand("project", "Image T(P) of a polyhedron or semilinear set, as JSON");
  project_cmd->add_option("--poly", in.poly, "Polyhedron JSON file ('-' for stdin)");
  project_cmd->add_option("--set", in.set, "Semilinear set JSON file ('-' for stdin)");
  project_cmd->add_option("--map", in.map, "Matrix T, rows separated by ';'")->required();

  auto* decompose_cmd = app.add_subcommand("decompose", "Eliminate a formula to a semilinear set, as JSON");
  decompose_cmd->add_option("-f,--formula", in.formula, "Formula text");
  decompose_cmd->add_option("--formula-file", in.formula_file, "Formula file");

  auto* gf_cmd = app.add_subcommand("gf", "Short generating function of T(P) or of a formula");
  gf_cmd->add_option("--poly", in.poly, "Polyhedron JSON file");
  gf_cmd->add_option("--map", in.map, "Matrix T for --poly, rows separated by ';'");
  gf_cmd->add_option("-f,--formula", in.formula, "Formula text");
  gf_cmd->add_option("--formula-file", in.formula_file, "Formula file");
  gf_cmd->add_option("--format", in.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* expand_cmd = app.add_subcommand("expand", "Coefficients of a GF inside a box, one point per line");
  expand_cmd->add_option("--gf", in.gf, "GF JSON file ('-' for stdin)")->required();
  expand_cmd->add_option("--box", in.box, "lo:hi or lo1:hi1,lo2:hi2,...")->required();

  auto* count_cmd = app.add_subcommand("count", "Number of points of a GF or formula inside a box");
  count_cmd->add_option("--gf", in.gf, "GF JSON file");
  count_cmd->add_option("-f,--formula", in.formula, "Formula text");
  count_cmd->add_option("--formula-file", in.formula_file, "Formula file");
  count_cmd->add_option("--box", in.box, "lo:hi or lo1:hi1,lo2:hi2,...")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Truth value of a sentence");
  eval_cmd->add_option("sentence", sentence, "Sentence text")->required();

  auto* frob_cmd = app.add_subcommand("frobenius", "Frobenius number of a list of positive integers");
  frob_cmd->add_option("generators", gens, "Comma-separated list, e.g. 3,5")->required();

  auto* kfeas_cmd = app.add_subcommand("kfeasible", "Points with at least k representations y = A x, x >= 0");
  kfeas_cmd->add_option("--A", kmat, "Matrix A, rows separated by ';'")->required();
  kfeas_cmd->add_option("--k", k, "Number of distinct representations")->check(CLI::PositiveNumber);
  kfeas_cmd->add_option("--box", in.box, "lo:hi or lo1:hi1,...")->required();
  kfeas_cmd->add_option("--format", in.format, "text (points) or json (GF)")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  opts.max_cosets = max_cosets;
  opts.jobs = jobs;
  if (budget > 0) opts.set_budget(budget);

  try {
    std::ostream& out = std::cout;
    if (*project_cmd) {
      if (in.poly.empty() == in.set.empty()) throw UsageError("project needs exactly one of --poly and --set");
      SemilinearSet X = in.poly.empty() ? semilinear_from_json(parse_json(read_input(in.set)))
                                        : from_polyhedron(polyhedron_from_json(parse_json(read_input(in.poly))));
      IntMat T = parse_matrix(in.map, X.dim());
      SemilinearSet Y = project(X, T, opts);
      out << to_json(Y).dump(2) << "\n";
      return warn_if_empty(X.empty(), "input set is empty");
    }
    if (*decompose_cmd) {
      SemilinearSet X = eliminate(load_formula(in), opts);
      out << to_json(X).dump(2) << "\n";
      return warn_if_empty(X.empty(), "formula is unsatisfiable");
    }
    if (*gf_cmd) {
      ShortGF g;
      bool empty = false;
      if (!in.poly.empty()) {
        if (!in.formula.empty() || !in.formula_file.empty()) throw UsageError("give either --poly or a formula");
        if (in.map.empty()) throw UsageError("--poly needs --map");
        CoPolyhedron Q = polyhedron_from_json(parse_json(read_input(in.poly)));
        empty = Q.is_empty();
        g = project_gf(Q, parse_matrix(in.map, Q.dim()), opts);
      } else {
        g = gf_formula(load_formula(in), opts);
        empty = g.is_zero();
      }
      g = sorted(g);
      if (in.format == "json") out << to_json(g).dump(2) << "\n";
      else out << to_string(g) << "\n";
      return warn_if_empty(empty, in.poly.empty() ? "formula is unsatisfiable" : "input polyhedron is empty");
    }
    if (*expand_cmd) {
      ShortGF g = gf_from_json(parse_json(read_input(in.gf)));
      for (const auto& [y, c] : expand_box(g, parse_box(in.box, g.dim()), opts)) {
        out << point_text(y);
        if (c != 1) out << " *" << c.get_str();
        out << "\n";
      }
      return kOk;
    }
    if (*count_cmd) {
      if (!in.gf.empty()) {
        if (!in.formula.empty() || !in.formula_file.empty()) throw UsageError("give either --gf or a formula");
        ShortGF g = gf_from_json(parse_json(read_input(in.gf)));
        out << count_box(g, parse_box(in.box, g.dim()), opts).get_str() << "\n";
        return kOk;
      }
      Formula F = load_formula(in);
      SemilinearSet X = eliminate(F, opts);
      Box box = parse_box(in.box, X.dim());
      Int n = 0;
      for_each_integer_point(box.poly(), [&](const IntVec& y) {
        if (member(X, y)) ++n;
        return true;
      }, opts);
      out << n.get_str() << "\n";
      return kOk;
    }
    if (*eval_cmd) {
      out << (truth(parse(sentence), opts) ? "true" : "false") << "\n";
      return kOk;
    }
    if (*frob_cmd) {
      out << frobenius_number(parse_list(gens), opts).get_str() << "\n";
      return kOk;
    }
    if (*kfeas_cmd) {
      IntMat A = parse_matrix(kmat, 0);
      ShortGF g = sorted(sigma_gf(KFeasInstance(A, k), opts));
      if (in.format == "json") {
        out << to_json(g).dump(2) << "\n";
        return kOk;
      }
      for (const auto& [y, c] : expand_box(g, parse_box(in.box, g.dim()), opts)) out << point_text(y) << "\n";
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const NotPointedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotPointed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
