#pragma once

// Command-line frontend: request parsing, dispatch and output formatting.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "supercalc/djops.hpp"
#include "supercalc/error.hpp"
#include "supercalc/expression.hpp"
#include "supercalc/grassmann.hpp"
#include "supercalc/oracle.hpp"
#include "supercalc/pullback.hpp"
#include "supercalc/scalar.hpp"

namespace supercalc::cli {

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"pullback", "exp-expand", "reconstruct", "berezin",   "dop",
                                              "ideal-check", "chain-check", "tq-check", "iso", "oracle-compare"};
  return names;
}

enum class Format { text, json };

struct Request {
  std::string command;
  int q = 0;
  int L = 0;

  std::vector<std::string> odd;
  std::vector<std::string> even;

  std::vector<std::string> fields;   ///< superfield components
  std::string function = "f";        ///< formal target function name
  std::optional<int> arity;          ///< function arity when it cannot be inferred
  std::string target;                ///< polynomial target F in y1..yn, replaces the formal function
  std::optional<int> max_order;

  std::vector<std::string> xi;       ///< "{i,j,..}=c1;c2;.."
  std::vector<std::string> base;     ///< body point for exp-expand

  std::string expr;                  ///< berezin input
  std::vector<int> vars;             ///< berezin variables

  std::string poly;                  ///< s-polynomial
  std::vector<int> index;            ///< D-operator multi-index
  std::vector<std::string> ymap;     ///< components Y^alpha for chain-check
  std::vector<std::string> self_map; ///< "{i,j,..}=poly" for tq-check

  std::string fn = "exp";            ///< oracle function: exp, sin, cos or poly:<expr>
  std::vector<std::string> bind;     ///< even bindings name=value
  std::vector<std::string> bind_odd; ///< odd bindings name=expr in the generators

  Format format = Format::text;
};

/// One normalized term of a super-scalar result.
struct Term {
  MultiIndex generators;
  std::vector<std::string> odd;
  std::map<std::string, int> even;
  std::vector<std::pair<FuncDeriv, int>> functions;
  Rational coefficient;
};

struct Response {
  std::string kind;                           ///< superscalar, rational, boolean, xi, comparison
  std::string value;                          ///< text form of the main result
  std::vector<Term> terms;                    ///< set for super-scalar results
  std::vector<std::pair<std::string, std::string>> details;
  std::vector<std::string> diagnostics;
};

inline std::vector<Term> terms_of(const SuperScalar& s) {
  std::vector<Term> out;
  for (const auto& [m, c] : s.terms())
    out.push_back({m.gens, m.odd, m.even, std::vector<std::pair<FuncDeriv, int>>(m.funcs.begin(), m.funcs.end()), c});
  return out;
}

namespace detail {

inline Response superscalar_response(const SuperScalar& s, const GeneratorSet& ctx) {
  Response r;
  r.kind = "superscalar";
  r.value = to_string(s, ctx);
  r.terms = terms_of(s);
  return r;
}

inline Response boolean_response(bool v) {
  Response r;
  r.kind = "boolean";
  r.value = v ? "true" : "false";
  return r;
}

inline SymbolTable symbols(const Request& req) {
  SymbolTable table(GeneratorSet{req.q, req.L});
  for (const auto& n : req.odd) table.declare(n, Parity::odd);
  for (const auto& n : req.even) table.declare(n, Parity::even);
  return table;
}

/// Splits "{i,j,..}=rest" into the multi-index and the right-hand side.
inline std::pair<MultiIndex, std::string> labelled(const std::string& entry, const GeneratorSet& ctx) {
  static const std::regex pattern(R"(^\s*\{([0-9,\s]*)\}\s*=(.*)$)");
  std::smatch m;
  if (!std::regex_match(entry, m, pattern)) throw ParseError(0, "expected {i,j,...}=value, got '" + entry + "'");
  std::vector<int> indices;
  std::stringstream list(m[1].str());
  for (std::string item; std::getline(list, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    if (item.empty()) throw ParseError(0, "empty index in '" + entry + "'");
    indices.push_back(std::stoi(item));
  }
  for (int i : indices)
    if (!ctx.contains(i)) throw ContextError("index " + std::to_string(i) + " outside 1.." + std::to_string(ctx.g()));
  try {
    return {MultiIndex(indices), m[2].str()};
  } catch (const std::invalid_argument&) {
    throw ParseError(0, "indices must be strictly increasing in '" + entry + "'");
  }
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, sep);) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

inline MultiIndex multi_index(const std::vector<int>& indices, const GeneratorSet& ctx, const std::string& what) {
  for (int i : indices)
    if (!ctx.contains(i)) throw ContextError(what + " index " + std::to_string(i) + " outside 1.." + std::to_string(ctx.g()));
  try {
    return MultiIndex(indices);
  } catch (const std::invalid_argument&) {
    throw ParseError(0, what + " indices must be strictly increasing");
  }
}

inline Superfield superfield(const Request& req, SymbolTable& table) {
  if (req.fields.empty()) throw ContextError("at least one --field is required");
  std::vector<SuperScalar> components;
  for (const auto& f : req.fields) components.push_back(parse_superscalar(f, table));
  return Superfield(std::move(components));
}

inline TargetFunction target(const Request& req, int dim) {
  if (!req.target.empty()) return TargetFunction::polynomial(parse_ypolynomial(req.target), dim, "F");
  return TargetFunction::formal(req.function, dim);
}

inline std::string xi_line(const MultiIndex& I, const std::vector<SuperScalar>& coeffs, const GeneratorSet& ctx) {
  std::string line = "{";
  bool first = true;
  for (int i : I.indices()) {
    line += (first ? "" : ",") + std::to_string(i);
    first = false;
  }
  line += "}=";
  for (std::size_t a = 0; a < coeffs.size(); ++a) line += (a ? ";" : "") + to_string(coeffs[a], ctx);
  return line;
}

inline SmoothFn smooth_function(const std::string& kind, int n) {
  if (kind.rfind("poly:", 0) == 0) return smooth::polynomial(parse_ypolynomial(kind.substr(5)), n);
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  if (kind == "exp") return smooth::exp_linear(ones);
  if (kind == "sin") return smooth::sin_linear(ones);
  if (kind == "cos") return smooth::cos_linear(ones);
  throw ParseError(0, "unknown function '" + kind + "' (expected exp, sin, cos or poly:<expr>)");
}

inline NumericGrassmann numeric_value(const SuperScalar& s, const std::string& name) {
  NumericGrassmann out;
  for (const auto& [m, c] : s.terms()) {
    if (!m.odd.empty() || !m.even.empty() || !m.funcs.empty())
      throw ParseError(0, "binding of " + name + " may only use generators and numbers");
    out += NumericGrassmann::generators(m.gens, to_double(c));
  }
  return out;
}

inline std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------

inline Response run_pullback(const Request& req) {
  SymbolTable table = symbols(req);
  const Superfield sf = superfield(req, table);
  return superscalar_response(pullback_taylor(target(req, sf.dim()), sf, req.max_order), table.context());
}

inline Response run_exp_expand(const Request& req) {
  SymbolTable table = symbols(req);
  const GeneratorSet& ctx = table.context();
  std::optional<int> dim = req.arity;
  std::vector<std::pair<MultiIndex, std::vector<SuperScalar>>> entries;
  for (const auto& e : req.xi) {
    auto [I, rhs] = labelled(e, ctx);
    std::vector<SuperScalar> coeffs;
    for (const auto& part : split(rhs, ';')) coeffs.push_back(parse_superscalar(part, table));
    if (dim && *dim != static_cast<int>(coeffs.size()))
      throw DimensionMismatch("Xi entry " + to_string(I) + " has " + std::to_string(coeffs.size()) +
                              " coefficients, expected " + std::to_string(*dim));
    dim = static_cast<int>(coeffs.size());
    entries.emplace_back(I, std::move(coeffs));
  }
  if (!req.base.empty()) {
    if (dim && *dim != static_cast<int>(req.base.size()))
      throw DimensionMismatch("--base has " + std::to_string(req.base.size()) + " entries, expected " +
                              std::to_string(*dim));
    dim = static_cast<int>(req.base.size());
  }
  const int n = dim.value_or(1);
  XiField xi(n);
  for (auto& [I, coeffs] : entries) {
    if (xi.find(I)) throw ContextError("Xi entry " + to_string(I) + " given twice");
    xi.set(I, std::move(coeffs));
  }
  std::vector<SuperScalar> base;
  for (const auto& b : req.base) base.push_back(parse_superscalar(b, table));
  std::vector<std::string> notes;
  if (base.empty() && !req.target.empty()) {
    base.assign(static_cast<std::size_t>(n), SuperScalar());
    notes.emplace_back("no --base given, derivatives of F are taken at the origin");
  }
  Response r = superscalar_response(exp_xi_apply(xi, target(req, n), base), ctx);
  r.diagnostics = std::move(notes);
  return r;
}

inline Response run_reconstruct(const Request& req) {
  SymbolTable table = symbols(req);
  const Superfield sf = superfield(req, table);
  const XiField xi = reconstruct_xi(sf);
  Response r;
  r.kind = "xi";
  for (const auto& [I, coeffs] : xi.entries()) {
    const std::string line = xi_line(I, coeffs, table.context());
    r.value += (r.value.empty() ? "" : "\n") + line;
    r.details.emplace_back(to_string(I), line.substr(line.find('=') + 1));
  }
  return r;
}

inline Response run_berezin(const Request& req) {
  SymbolTable table = symbols(req);
  if (!req.function.empty() && !table.symbol(req.function)) table.declare_function(req.function, req.arity.value_or(1));
  if (req.expr.empty()) throw ContextError("--expr is required");
  const SuperScalar a = parse_superscalar(req.expr, table);
  return superscalar_response(berezin(a, multi_index(req.vars, table.context(), "berezin")), table.context());
}

inline SPolynomial required_poly(const Request& req, const GeneratorSet& ctx) {
  if (req.poly.empty()) throw ContextError("--poly is required");
  return parse_spolynomial(req.poly, ctx);
}

inline Response run_dop(const Request& req) {
  const DOperatorContext ctx(GeneratorSet{req.q, req.L});
  const SPolynomial F = required_poly(req, ctx.generators());
  const MultiIndex I = multi_index(req.index, ctx.generators(), "D-operator");
  if (!I.is_even()) throw ParityMismatch("D-operators are indexed by even multi-indices, got " + to_string(I));
  Response r;
  r.kind = "rational";
  r.value = to_string(d_op(ctx, I, F));
  return r;
}

inline Response run_ideal_check(const Request& req) {
  const DOperatorContext ctx(GeneratorSet{req.q, req.L});
  const SPolynomial F = required_poly(req, ctx.generators());
  Response r = boolean_response(ideal_member(ctx, F));
  for (const auto& I : ctx.even_indices())
    if (const Rational v = d_op(ctx, I, F); v != 0) r.details.emplace_back("D" + to_string(I), to_string(v));
  return r;
}

inline Response run_chain_check(const Request& req) {
  const DOperatorContext ctx(GeneratorSet{req.q, req.L});
  if (req.target.empty()) throw ContextError("--F is required");
  if (req.ymap.empty()) throw ContextError("at least one --Y is required");
  SMap Y;
  for (const auto& y : req.ymap) Y.push_back(parse_spolynomial(y, ctx.generators()));
  const MultiIndex I = multi_index(req.index, ctx.generators(), "D-operator");
  if (!I.is_even()) throw ParityMismatch("D-operators are indexed by even multi-indices, got " + to_string(I));
  const auto check = chain_rule_check(ctx, parse_ypolynomial(req.target), Y, I);
  Response r = boolean_response(check.holds());
  r.details.emplace_back("lhs", to_string(check.lhs));
  r.details.emplace_back("rhs", to_string(check.rhs));
  return r;
}

inline Response run_tq_check(const Request& req) {
  const DOperatorContext ctx(GeneratorSet{req.q, req.L});
  SelfMap S;
  for (const auto& e : req.self_map) {
    auto [J, rhs] = labelled(e, ctx.generators());
    if (S.count(J)) throw ContextError("component " + to_string(J) + " given twice");
    S[J] = parse_spolynomial(rhs, ctx.generators());
  }
  return boolean_response(tq_member(ctx, S));
}

inline Response run_iso(const Request& req) {
  const DOperatorContext ctx(GeneratorSet{req.q, req.L});
  return superscalar_response(iso_to_grassmann(ctx, required_poly(req, ctx.generators())), ctx.generators());
}

inline Response run_oracle_compare(const Request& req) {
  SymbolTable table = symbols(req);
  const Superfield sf = superfield(req, table);
  Bindings bindings;
  for (const auto& b : req.bind) {
    const auto eq = b.find('=');
    if (eq == std::string::npos) throw ParseError(0, "expected name=value in --bind '" + b + "'");
    const std::string name = b.substr(0, eq);
    if (table.symbol(name) != Parity::even) throw ContextError("--bind " + name + ": not a declared even symbol");
    try {
      std::size_t used = 0;
      bindings.even[name] = std::stod(b.substr(eq + 1), &used);
      if (used != b.size() - eq - 1) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      throw ParseError(eq + 1, "malformed number in --bind '" + b + "'");
    }
  }
  const SymbolTable generators_only(table.context());
  for (const auto& b : req.bind_odd) {
    const auto eq = b.find('=');
    if (eq == std::string::npos) throw ParseError(0, "expected name=expr in --bind-odd '" + b + "'");
    const std::string name = b.substr(0, eq);
    if (table.symbol(name) != Parity::odd) throw ContextError("--bind-odd " + name + ": not a declared odd symbol");
    const SuperScalar v = parse_superscalar(b.substr(eq + 1), generators_only);
    if (!v.is_odd()) throw ParityMismatch("--bind-odd " + name + ": value must be odd");
    bindings.odd[name] = numeric_value(v, name);
  }
  const CrossCheck cc = cross_check(sf, smooth_function(req.fn, sf.dim()), bindings);
  Response r = boolean_response(cc.agrees());
  r.kind = "comparison";
  std::map<MultiIndex, std::pair<double, double>> rows;
  for (const auto& [I, v] : cc.symbolic.terms()) rows[I].first = v;
  for (const auto& [I, v] : cc.numeric.terms()) rows[I].second = v;
  for (const auto& [I, v] : rows)
    r.details.emplace_back(to_string(I), format_double(v.first) + " " + format_double(v.second));
  return r;
}

}  // namespace detail

/// Dispatches one request. Library errors propagate unchanged.
inline Response run(const Request& req) {
  const std::string& c = req.command;
  if (c == "pullback") return detail::run_pullback(req);
  if (c == "exp-expand") return detail::run_exp_expand(req);
  if (c == "reconstruct") return detail::run_reconstruct(req);
  if (c == "berezin") return detail::run_berezin(req);
  if (c == "dop") return detail::run_dop(req);
  if (c == "ideal-check") return detail::run_ideal_check(req);
  if (c == "chain-check") return detail::run_chain_check(req);
  if (c == "tq-check") return detail::run_tq_check(req);
  if (c == "iso") return detail::run_iso(req);
  if (c == "oracle-compare") return detail::run_oracle_compare(req);
  throw ContextError("unknown command '" + c + "'");
}

inline nlohmann::ordered_json to_json(const Term& t) {
  nlohmann::ordered_json j;
  j["generators"] = t.generators.indices();
  j["odd"] = t.odd;
  j["even"] = nlohmann::ordered_json::object();
  for (const auto& [name, e] : t.even) j["even"][name] = e;
  j["functions"] = nlohmann::ordered_json::array();
  for (const auto& [f, e] : t.functions) j["functions"].push_back({{"name", f.name}, {"order", f.order}, {"power", e}});
  j["coefficient"] = to_string(t.coefficient);
  return j;
}

inline nlohmann::ordered_json to_json(const Request& req, const Response& r) {
  nlohmann::ordered_json j;
  j["command"] = req.command;
  j["q"] = req.q;
  j["L"] = req.L;
  j["kind"] = r.kind;
  j["value"] = r.value;
  if (r.kind == "superscalar") {
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : r.terms) j["terms"].push_back(to_json(t));
  }
  if (!r.details.empty()) {
    j["details"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.details) j["details"][k] = v;
  }
  j["diagnostics"] = r.diagnostics;
  return j;
}

inline void write(std::ostream& out, const Request& req, const Response& r) {
  if (req.format == Format::json) {
    out << to_json(req, r).dump(2) << '\n';
    return;
  }
  out << r.value << '\n';
  if (r.kind != "xi")
    for (const auto& [k, v] : r.details) out << k << ": " << v << '\n';
}

/// Registers every option on app; the returned request is filled by app.parse.
inline void configure(CLI::App& app, Request& req) {
  app.description("Symbolic pullbacks of smooth functions along superspace maps");
  app.add_option("command", req.command, "Computation to run")->required()->check(CLI::IsMember(commands()));
  app.add_option("--q", req.q, "Number of theta generators")->check(CLI::Range(0, 63));
  app.add_option("--L", req.L, "Number of eta generators")->check(CLI::Range(0, 63));
  app.add_option("--odd", req.odd, "Odd symbol names")->delimiter(',');
  app.add_option("--even", req.even, "Even symbol names")->delimiter(',');
  app.add_option("--field", req.fields, "Superfield component (repeatable, '-' reads stdin)");
  app.add_option("--f", req.function, "Name of the formal target function");
  app.add_option("--arity", req.arity, "Arity of the target function")->check(CLI::PositiveNumber);
  app.add_option("--F", req.target, "Polynomial target function in y1, y2, ...");
  app.add_option("--max-order", req.max_order, "Truncate the Taylor expansion")->check(CLI::NonNegativeNumber);
  app.add_option("--xi", req.xi, "Xi entry {i,j,..}=c1;c2;.. (repeatable)");
  app.add_option("--base", req.base, "Body point coordinate for exp-expand (repeatable)");
  app.add_option("--expr", req.expr, "Super-scalar expression ('-' reads stdin)");
  app.add_option("--vars", req.vars, "Berezin variables")->delimiter(',');
  app.add_option("--poly", req.poly, "Polynomial in s{i,j,..} ('-' reads stdin)");
  app.add_option("--index", req.index, "Multi-index of the D-operator")->delimiter(',');
  app.add_option("--Y", req.ymap, "Component of Y in the s-variables (repeatable)");
  app.add_option("--S", req.self_map, "Self-map component {i,j,..}=poly (repeatable)");
  app.add_option("--fn", req.fn, "Oracle function: exp, sin, cos or poly:<expr>");
  app.add_option("--bind", req.bind, "Even symbol value name=number (repeatable)");
  app.add_option("--bind-odd", req.bind_odd, "Odd symbol value name=expr in the generators (repeatable)");
  app.add_option("--format", req.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"text", Format::text}, {"json", Format::json}}));
}

/// Replaces every "-" expression argument by the text read from in.
inline void read_stdin(Request& req, std::istream& in) {
  std::optional<std::string> text;
  auto fill = [&](std::string& s) {
    if (s != "-") return;
    if (!text) {
      text = std::string(std::istreambuf_iterator<char>(in), {});
      while (!text->empty() && std::isspace(static_cast<unsigned char>(text->back()))) text->pop_back();
    }
    s = *text;
  };
  for (auto& f : req.fields) fill(f);
  fill(req.expr);
  fill(req.poly);
}

/// Full command-line entry point. Returns 0 on success, 2 on parse errors, 3 on semantic errors.
inline int main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"supercalc"};
  Request req;
  configure(app, req);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    read_stdin(req, in);
    const Response r = run(req);
    write(out, req, r);
    if (req.format == Format::text)
      for (const auto& d : r.diagnostics) err << "note: " << d << '\n';
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace supercalc::cli
