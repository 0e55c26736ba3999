#pragma once

// Free supercommutative algebra over declared even/odd symbols, anticommuting
// generators, rational constants and formal function-derivative atoms.
//
// Normal form of a term: coefficient * theta^I * (odd symbols, ascending by
// name) * (even symbols) * (derivative atoms). Generators come first and
// carry the sign bookkeeping; even factors commute with everything.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "supercalc/grassmann.hpp"
#include "supercalc/rational.hpp"

namespace supercalc {

enum class Parity { even, odd };

struct Symbol {
  std::string name;
  Parity parity = Parity::even;

  auto operator<=>(const Symbol&) const = default;
};

/// d^r F / dy^r evaluated at the body point of the superfield it is pulled back through.
struct FuncDeriv {
  std::string name;
  std::vector<int> order;  ///< multi-degree r, one entry per argument

  FuncDeriv() = default;
  FuncDeriv(std::string n, std::vector<int> r) : name(std::move(n)), order(std::move(r)) {}

  /// Zero-order atom, i.e. F composed with the body map.
  static FuncDeriv root(std::string n, int arity) {
    return {std::move(n), std::vector<int>(static_cast<std::size_t>(arity), 0)};
  }

  int arity() const noexcept { return static_cast<int>(order.size()); }
  int total_order() const noexcept {
    int k = 0;
    for (int r : order) k += r;
    return k;
  }

  auto operator<=>(const FuncDeriv&) const = default;
};

struct SuperMonomial {
  MultiIndex gens;
  std::vector<std::string> odd;  ///< strictly ascending
  std::map<std::string, int> even;
  std::map<FuncDeriv, int> funcs;

  int parity() const noexcept { return (gens.size() + static_cast<int>(odd.size())) & 1; }
  /// True when the term contains a generator or an odd symbol.
  bool nilpotent() const noexcept { return !gens.empty() || !odd.empty(); }

  auto operator<=>(const SuperMonomial&) const = default;
};

/// Unnormalized term: odd factors in arbitrary order (ints are generators).
struct RawTerm {
  Rational coefficient = 1;
  std::vector<std::variant<int, std::string>> odd_factors;
  std::vector<std::string> even;
  std::vector<FuncDeriv> funcs;
};

namespace detail {

/// Sign of merging two ascending string lists, 0 on a repeated entry.
inline int merge_sign(const std::vector<std::string>& a, const std::vector<std::string>& b,
                      std::vector<std::string>& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  int crossings = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      crossings += static_cast<int>(a.size() - i);
      out.push_back(b[j++]);
    } else {
      return 0;
    }
  }
  return (crossings & 1) ? -1 : 1;
}

}  // namespace detail

class SuperScalar {
 public:
  using Terms = std::map<SuperMonomial, Rational>;

  SuperScalar() = default;
  SuperScalar(const Rational& c) {  // NOLINT: constants embed implicitly
    if (c != 0) terms_[SuperMonomial{}] = c;
  }
  SuperScalar(int c) : SuperScalar(Rational(c)) {}  // NOLINT

  static SuperScalar generator(int index) { return generators(MultiIndex{index}); }
  static SuperScalar generators(const MultiIndex& I, const Rational& c = 1) {
    SuperMonomial m;
    m.gens = I;
    return monomial(m, c);
  }
  static SuperScalar even_symbol(const std::string& name) {
    SuperMonomial m;
    m.even[name] = 1;
    return monomial(m);
  }
  static SuperScalar odd_symbol(const std::string& name) {
    SuperMonomial m;
    m.odd.push_back(name);
    return monomial(m);
  }
  static SuperScalar symbol(const Symbol& s) {
    return s.parity == Parity::odd ? odd_symbol(s.name) : even_symbol(s.name);
  }
  static SuperScalar func(const FuncDeriv& f) {
    SuperMonomial m;
    m.funcs[f] = 1;
    return monomial(m);
  }
  static SuperScalar monomial(const SuperMonomial& m, const Rational& c = 1) {
    SuperScalar s;
    if (c != 0) s.terms_[m] = c;
    return s;
  }

  /// Brings arbitrary raw terms into normal form.
  static SuperScalar normalize(const std::vector<RawTerm>& raw) {
    SuperScalar out;
    for (const auto& t : raw) {
      SuperScalar term(t.coefficient);
      for (const auto& f : t.odd_factors) {
        term = term * (std::holds_alternative<int>(f) ? generator(std::get<int>(f))
                                                      : odd_symbol(std::get<std::string>(f)));
      }
      for (const auto& e : t.even) term = term * even_symbol(e);
      for (const auto& f : t.funcs) term = term * func(f);
      out += term;
    }
    return out;
  }

  /// Raw view of the normal form (generators, then odd symbols).
  std::vector<RawTerm> to_raw() const {
    std::vector<RawTerm> out;
    for (const auto& [m, c] : terms_) {
      RawTerm t;
      t.coefficient = c;
      for (int i : m.gens.indices()) t.odd_factors.emplace_back(i);
      for (const auto& s : m.odd) t.odd_factors.emplace_back(s);
      for (const auto& [s, e] : m.even)
        for (int k = 0; k < e; ++k) t.even.push_back(s);
      for (const auto& [f, e] : m.funcs)
        for (int k = 0; k < e; ++k) t.funcs.push_back(f);
      out.push_back(std::move(t));
    }
    return out;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == SuperMonomial{});
  }
  Rational constant_value() const {
    auto it = terms_.find(SuperMonomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Parity of a homogeneous element; nullopt when mixed. Zero reports even.
  std::optional<Parity> parity() const {
    bool has_even = false, has_odd = false;
    for (const auto& [m, c] : terms_) (m.parity() ? has_odd : has_even) = true;
    if (has_even && has_odd) return std::nullopt;
    return has_odd ? Parity::odd : Parity::even;
  }
  bool is_even() const { return parity() == Parity::even; }
  bool is_odd() const { return is_zero() || parity() == Parity::odd; }

  bool has_generators() const noexcept {
    for (const auto& [m, c] : terms_)
      if (!m.gens.empty()) return true;
    return false;
  }
  bool has_odd_symbols() const noexcept {
    for (const auto& [m, c] : terms_)
      if (!m.odd.empty()) return true;
    return false;
  }
  bool has_funcs() const noexcept {
    for (const auto& [m, c] : terms_)
      if (!m.funcs.empty()) return true;
    return false;
  }

  /// Terms free of generators and odd symbols.
  SuperScalar body() const {
    SuperScalar out;
    for (const auto& [m, c] : terms_)
      if (!m.nilpotent()) out.terms_.emplace(m, c);
    return out;
  }
  SuperScalar nilpotent_part() const {
    SuperScalar out;
    for (const auto& [m, c] : terms_)
      if (m.nilpotent()) out.terms_.emplace(m, c);
    return out;
  }

  /// The element c such that the theta^I part of *this equals theta^I * c.
  SuperScalar generator_coefficient(const MultiIndex& I) const {
    SuperScalar out;
    for (const auto& [m, c] : terms_) {
      if (m.gens != I) continue;
      SuperMonomial stripped = m;
      stripped.gens = MultiIndex{};
      out.terms_.emplace(stripped, c);
    }
    return out;
  }

  /// Largest generator index in use (0 if none).
  int max_generator() const noexcept {
    int g = 0;
    for (const auto& [m, c] : terms_) g = std::max(g, m.gens.max_index());
    return g;
  }

  SuperScalar& operator+=(const SuperScalar& o) {
    for (const auto& [m, c] : o.terms_) accumulate(m, c);
    return *this;
  }
  SuperScalar& operator-=(const SuperScalar& o) {
    for (const auto& [m, c] : o.terms_) accumulate(m, -c);
    return *this;
  }
  SuperScalar& operator*=(const SuperScalar& o) { return *this = *this * o; }

  friend SuperScalar operator+(SuperScalar a, const SuperScalar& b) { return a += b; }
  friend SuperScalar operator-(SuperScalar a, const SuperScalar& b) { return a -= b; }
  friend SuperScalar operator-(const SuperScalar& a) {
    SuperScalar out = a;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
  }

  friend SuperScalar operator*(const SuperScalar& a, const SuperScalar& b) {
    SuperScalar out;
    std::vector<std::string> odd;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        // (t^Ga w^Oa)(t^Gb w^Ob) = (-1)^{|Oa||Gb|} t^Ga t^Gb w^Oa w^Ob
        const SignedIndex g = concat_sign(ma.gens, mb.gens);
        if (g.is_zero()) continue;
        const int so = detail::merge_sign(ma.odd, mb.odd, odd);
        if (so == 0) continue;
        int sign = g.sign * so;
        if ((static_cast<int>(ma.odd.size()) * mb.gens.size()) & 1) sign = -sign;
        SuperMonomial m;
        m.gens = g.index;
        m.odd = odd;
        m.even = ma.even;
        for (const auto& [s, e] : mb.even) m.even[s] += e;
        m.funcs = ma.funcs;
        for (const auto& [f, e] : mb.funcs) m.funcs[f] += e;
        out.accumulate(m, sign > 0 ? ca * cb : -(ca * cb));
      }
    }
    return out;
  }

  friend bool operator==(const SuperScalar& a, const SuperScalar& b) { return a.terms_ == b.terms_; }

  SuperScalar pow(int n) const {
    SuperScalar out(1);
    for (int i = 0; i < n && !out.is_zero(); ++i) out *= *this;
    return out;
  }

 private:
  void accumulate(const SuperMonomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
};

// ---------------------------------------------------------------------------
// Text form. The printed expression is valid input for the expression parser.

inline std::string generator_name(int index, const GeneratorSet& ctx) {
  if (ctx.is_theta(index)) return "theta" + std::to_string(index);
  return "eta" + std::to_string(index - ctx.q);
}

inline std::string to_string(const FuncDeriv& f) {
  bool zero = true;
  for (int r : f.order) zero = zero && r == 0;
  if (f.arity() == 1) {
    const int r = f.order[0];
    if (r <= 3) return f.name + std::string(static_cast<std::size_t>(r), '\'');
  } else if (zero && f.arity() == 0) {
    return f.name;
  }
  std::string s = "D[";
  for (std::size_t i = 0; i < f.order.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(f.order[i]);
  }
  return s + "]" + f.name;
}

/// Factors of a monomial joined by '*', or empty for the unit monomial.
inline std::string to_string(const SuperMonomial& m, const GeneratorSet& ctx) {
  std::string s;
  auto add = [&](const std::string& f) {
    if (!s.empty()) s += "*";
    s += f;
  };
  for (int i : m.gens.indices()) add(generator_name(i, ctx));
  for (const auto& o : m.odd) add(o);
  for (const auto& [name, e] : m.even) add(e == 1 ? name : name + "^" + std::to_string(e));
  for (const auto& [f, e] : m.funcs) add(e == 1 ? to_string(f) : to_string(f) + "^" + std::to_string(e));
  return s;
}

inline std::string to_string(const SuperScalar& a, const GeneratorSet& ctx) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    const std::string factors = to_string(m, ctx);
    if (factors.empty()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += factors;
    } else {
      out += to_string(mag) + "*" + factors;
    }
  }
  return out;
}

}  // namespace supercalc
