#pragma once

// Expression grammar shared by the command-line tool.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' integer)?
//   atom   := number | '(' expr ')' | identifier primes | 'D[' ints ']' identifier | 's{' ints '}'
//
// Reserved identifiers: theta<k>, eta<k> (generators), y<k> (target
// coordinates in polynomial F), s{i,j,...} (coordinates of the s-space).
// f', f'', D[r1,...,rn]f denote function-derivative atoms. Division is only
// allowed by a nonzero constant.

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "supercalc/error.hpp"
#include "supercalc/grassmann.hpp"
#include "supercalc/polynomial.hpp"
#include "supercalc/rational.hpp"
#include "supercalc/scalar.hpp"

namespace supercalc {

/// A leaf of an expression as seen by a resolver.
struct Atom {
  enum class Kind { identifier, derivative, svar };
  Kind kind = Kind::identifier;
  std::string name;
  int primes = 0;         ///< trailing ' count on identifiers
  std::vector<int> ints;  ///< D[...] orders or s{...} indices
  std::size_t position = 0;
};

template <class T>
class ExpressionParser {
 public:
  using Resolve = std::function<T(const Atom&)>;
  using Constant = std::function<T(const Rational&)>;
  using AsConstant = std::function<std::optional<Rational>(const T&)>;

  ExpressionParser(std::string_view text, Resolve resolve, Constant constant, AsConstant as_constant)
      : text_(text), resolve_(std::move(resolve)), constant_(std::move(constant)), as_constant_(std::move(as_constant)) {}

  T parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError(pos_, "empty expression");
    T value = expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return value;
  }

 private:
  T expr() {
    T value = term();
    while (true) {
      skip_space();
      if (accept('+'))
        value = value + term();
      else if (accept('-'))
        value = value - term();
      else
        return value;
    }
  }

  T term() {
    T value = unary();
    while (true) {
      skip_space();
      if (accept('*')) {
        value = value * unary();
      } else if (peek() == '/') {
        const std::size_t at = pos_++;
        const T divisor = unary();
        const auto c = as_constant_(divisor);
        if (!c) throw ParseError(at, "division is only allowed by a constant");
        if (*c == 0) throw ParseError(at, "division by zero");
        value = value * constant_(Rational(1) / *c);
      } else {
        return value;
      }
    }
  }

  T unary() {
    skip_space();
    if (accept('-')) return constant_(Rational(-1)) * unary();
    if (accept('+')) return unary();
    return power();
  }

  T power() {
    T base = atom();
    skip_space();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    const std::string digits = read_digits();
    if (digits.empty()) throw ParseError(at, "expected a non-negative integer exponent");
    const int e = std::stoi(digits);
    T out = constant_(Rational(1));
    for (int i = 0; i < e; ++i) out = out * base;
    return out;
  }

  T atom() {
    skip_space();
    const std::size_t at = pos_;
    if (pos_ == text_.size()) throw ParseError(at, "unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      T inner = expr();
      skip_space();
      if (!accept(')')) throw ParseError(pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant_(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = identifier();
      Atom a;
      a.position = at;
      if (name == "D" && peek() == '[') {
        ++pos_;
        a.kind = Atom::Kind::derivative;
        a.ints = int_list(']');
        skip_space();
        if (pos_ == text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          throw ParseError(pos_, "expected a function name after D[...]");
        a.name = identifier();
        return resolve_(a);
      }
      if (name == "s" && peek() == '{') {
        ++pos_;
        a.kind = Atom::Kind::svar;
        a.name = name;
        a.ints = int_list('}');
        return resolve_(a);
      }
      a.name = std::move(name);
      while (accept('\'')) ++a.primes;
      return resolve_(a);
    }
    throw ParseError(at, std::string("unexpected '") + c + "'");
  }

  Rational number() {
    const std::size_t at = pos_;
    std::string whole = read_digits();
    std::string frac;
    if (accept('.')) frac = read_digits();
    if (whole.empty() && frac.empty()) throw ParseError(at, "malformed number");
    Integer num(whole.empty() ? "0" : whole);
    Integer den = 1;
    for (char d : frac) {
      num = num * 10 + (d - '0');
      den *= 10;
    }
    return Rational(num, den);
  }

  std::vector<int> int_list(char close) {
    std::vector<int> out;
    skip_space();
    if (accept(close)) return out;
    while (true) {
      skip_space();
      const std::size_t at = pos_;
      const std::string digits = read_digits();
      if (digits.empty()) throw ParseError(at, "expected an integer");
      out.push_back(std::stoi(digits));
      skip_space();
      if (accept(close)) return out;
      if (!accept(',')) throw ParseError(pos_, std::string("expected ',' or '") + close + "'");
    }
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string read_digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ - start > 9) throw ParseError(start, "integer literal too long");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Resolve resolve_;
  Constant constant_;
  AsConstant as_constant_;
};

/// Declared parities and function arities for one request.
class SymbolTable {
 public:
  explicit SymbolTable(GeneratorSet ctx = {}) : ctx_(ctx) {}

  const GeneratorSet& context() const noexcept { return ctx_; }

  static bool is_reserved(const std::string& name) {
    static const std::regex reserved(R"((theta|eta|y)[0-9]+|s|D)");
    return std::regex_match(name, reserved);
  }

  void declare(const std::string& name, Parity parity) {
    check_name(name);
    if (functions_.count(name)) throw ContextError("'" + name + "' is already declared as a function");
    auto [it, inserted] = symbols_.emplace(name, parity);
    if (!inserted && it->second != parity) throw ContextError("'" + name + "' is declared both even and odd");
  }

  void declare_function(const std::string& name, int arity) {
    check_name(name);
    if (arity < 1) throw ContextError("function arity must be at least 1");
    if (symbols_.count(name)) throw ContextError("'" + name + "' is already declared as a symbol");
    auto [it, inserted] = functions_.emplace(name, arity);
    if (!inserted && it->second != arity) throw ContextError("function '" + name + "' declared with two arities");
  }

  std::optional<Parity> symbol(const std::string& name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> function(const std::string& name) const {
    auto it = functions_.find(name);
    if (it == functions_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static void check_name(const std::string& name) {
    static const std::regex ident(R"([A-Za-z_][A-Za-z0-9_]*)");
    if (!std::regex_match(name, ident)) throw ContextError("'" + name + "' is not a valid identifier");
    if (is_reserved(name)) throw ContextError("'" + name + "' is a reserved name");
  }

  GeneratorSet ctx_;
  std::map<std::string, Parity> symbols_;
  std::map<std::string, int> functions_;
};

namespace detail {

/// Matches "<prefix><k>" and returns k.
inline std::optional<int> indexed_name(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  int k = 0;
  for (std::size_t i = prefix.size(); i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    if (k > 1000000) return std::nullopt;
    k = k * 10 + (name[i] - '0');
  }
  return k;
}

inline MultiIndex s_label(const Atom& a, const GeneratorSet& ctx) {
  if (a.ints.empty()) throw ParseError(a.position, "s{} needs at least one index");
  for (std::size_t i = 1; i < a.ints.size(); ++i)
    if (a.ints[i] <= a.ints[i - 1]) throw ParseError(a.position, "s{...} indices must be strictly increasing");
  if (a.ints.size() % 2 != 0) throw ParseError(a.position, "s{...} needs an even number of indices");
  for (int i : a.ints)
    if (!ctx.contains(i))
      throw ContextError("s-variable index " + std::to_string(i) + " outside 1.." + std::to_string(ctx.g()));
  return MultiIndex(a.ints);
}

}  // namespace detail

inline SuperScalar parse_superscalar(std::string_view text, const SymbolTable& table) {
  const GeneratorSet& ctx = table.context();
  auto resolve = [&](const Atom& a) -> SuperScalar {
    switch (a.kind) {
      case Atom::Kind::svar:
        throw ParseError(a.position, "s-variables are not allowed here");
      case Atom::Kind::derivative: {
        if (auto arity = table.function(a.name); arity && *arity != static_cast<int>(a.ints.size()))
          throw ParseError(a.position, "function " + a.name + " has arity " + std::to_string(*arity));
        if (table.symbol(a.name)) throw ParseError(a.position, "'" + a.name + "' is a symbol, not a function");
        if (a.ints.empty()) throw ParseError(a.position, "D[...] needs at least one order");
        return SuperScalar::func(FuncDeriv(a.name, a.ints));
      }
      case Atom::Kind::identifier:
        break;
    }
    if (auto k = detail::indexed_name(a.name, "theta")) {
      if (a.primes) throw ParseError(a.position, "generators cannot be differentiated");
      if (*k < 1 || *k > ctx.q) throw ContextError(a.name + " is outside the context q=" + std::to_string(ctx.q));
      return SuperScalar::generator(*k);
    }
    if (auto k = detail::indexed_name(a.name, "eta")) {
      if (a.primes) throw ParseError(a.position, "generators cannot be differentiated");
      if (*k < 1 || *k > ctx.L) throw ContextError(a.name + " is outside the context L=" + std::to_string(ctx.L));
      return SuperScalar::generator(ctx.q + *k);
    }
    if (auto p = table.symbol(a.name)) {
      if (a.primes) throw ParseError(a.position, "'" + a.name + "' is a symbol, not a function");
      return SuperScalar::symbol({a.name, *p});
    }
    if (auto arity = table.function(a.name)) {
      if (a.primes && *arity != 1) throw ParseError(a.position, "primes are only allowed on unary functions");
      std::vector<int> order(static_cast<std::size_t>(*arity), 0);
      order[0] = a.primes;
      return SuperScalar::func(FuncDeriv(a.name, order));
    }
    if (a.primes) {
      if (SymbolTable::is_reserved(a.name)) throw ParseError(a.position, "'" + a.name + "' is reserved");
      return SuperScalar::func(FuncDeriv(a.name, {a.primes}));
    }
    throw ParseError(a.position, "undeclared symbol '" + a.name + "' (declare it with --even, --odd or --f)");
  };
  return ExpressionParser<SuperScalar>(
             text, resolve, [](const Rational& c) { return SuperScalar(c); },
             [](const SuperScalar& s) -> std::optional<Rational> {
               if (!s.is_constant()) return std::nullopt;
               return s.constant_value();
             })
      .parse();
}

/// Polynomial in s{...} variables with rational coefficients.
inline SPolynomial parse_spolynomial(std::string_view text, const GeneratorSet& ctx) {
  auto resolve = [&](const Atom& a) -> SPolynomial {
    if (a.kind != Atom::Kind::svar) throw ParseError(a.position, "only s{...} variables are allowed here");
    return s_var(detail::s_label(a, ctx));
  };
  return ExpressionParser<SPolynomial>(
             text, resolve, [](const Rational& c) { return SPolynomial(c); },
             [](const SPolynomial& p) -> std::optional<Rational> {
               if (!p.is_constant()) return std::nullopt;
               return p.constant_term();
             })
      .parse();
}

/// Polynomial in target coordinates y1..yn (stored zero-based).
inline YPolynomial parse_ypolynomial(std::string_view text) {
  auto resolve = [&](const Atom& a) -> YPolynomial {
    if (a.kind == Atom::Kind::identifier && a.primes == 0)
      if (auto k = detail::indexed_name(a.name, "y"); k && *k >= 1) return YPolynomial::variable(*k - 1);
    throw ParseError(a.position, "only y1, y2, ... variables are allowed here");
  };
  return ExpressionParser<YPolynomial>(
             text, resolve, [](const Rational& c) { return YPolynomial(c); },
             [](const YPolynomial& p) -> std::optional<Rational> {
               if (!p.is_constant()) return std::nullopt;
               return p.constant_term();
             })
      .parse();
}

/// Text form of an s-polynomial, valid input for parse_spolynomial.
inline std::string to_string(const SPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    first = false;
    std::string factors;
    for (const auto& [v, e] : m) {
      if (!factors.empty()) factors += "*";
      std::string label = "s{";
      bool inner = true;
      for (int i : v.indices()) {
        label += (inner ? "" : ",") + std::to_string(i);
        inner = false;
      }
      factors += label + "}" + (e == 1 ? "" : "^" + std::to_string(e));
    }
    if (factors.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += factors;
    else
      out += to_string(mag) + "*" + factors;
  }
  return out;
}

}  // namespace supercalc
