#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "supercalc/grassmann.hpp"
#include "supercalc/rational.hpp"

namespace supercalc {

/// Sparse polynomial with exact rational coefficients in commuting variables of type Var.
///
/// Polynomial<MultiIndex> is the algebra of the s^I coordinates; Polynomial<int>
/// is used for ordinary functions of the target coordinates y^0..y^{n-1}.
template <class Var>
class Polynomial {
 public:
  using Monomial = std::map<Var, int>;  // variable -> positive exponent
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c) {  // NOLINT: implicit constant embedding
    if (c != 0) terms_[Monomial{}] = c;
  }
  Polynomial(int c) : Polynomial(Rational(c)) {}  // NOLINT

  static Polynomial variable(const Var& v) { return monomial(Monomial{{v, 1}}); }

  static Polynomial monomial(const Monomial& m, const Rational& c = 1) {
    Polynomial p;
    if (c != 0) p.terms_[m] = c;
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  /// Value at the origin.
  Rational constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
      int k = 0;
      for (const auto& [v, e] : m) k += e;
      d = std::max(d, k);
    }
    return d;
  }

  std::vector<Var> variables() const {
    std::vector<Var> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) accumulate(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) accumulate(m, -c);
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) { return Polynomial{} - a; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        for (const auto& [v, e] : mb) m[v] += e;
        out.accumulate(m, ca * cb);
      }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial pow(int n) const {
    Polynomial out(1);
    for (int i = 0; i < n; ++i) out *= *this;
    return out;
  }

  /// Formal partial derivative in v.
  Polynomial partial(const Var& v) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
      auto it = m.find(v);
      if (it == m.end()) continue;
      Monomial reduced = m;
      const int e = it->second;
      if (e == 1)
        reduced.erase(v);
      else
        reduced[v] = e - 1;
      out.accumulate(reduced, c * e);
    }
    return out;
  }

  /// d^k / dv_1 ... dv_k evaluated at the origin (variables may repeat).
  Rational derivative_at_zero(std::span<const Var> vars) const {
    Monomial m;
    for (const auto& v : vars) m[v] += 1;
    Rational c = coefficient(m);
    if (c == 0) return c;
    for (const auto& [v, e] : m) c *= factorial(e);
    return c;
  }

  /// Evaluates in any commutative ring T given images of variables and of constants.
  template <class T>
  T evaluate(const std::function<T(const Var&)>& image,
             const std::function<T(const Rational&)>& embed) const {
    T total = embed(Rational(0));
    std::map<Var, std::vector<T>> powers;  // powers[v][e-1] = image(v)^e
    for (const auto& [m, c] : terms_) {
      T term = embed(c);
      for (const auto& [v, e] : m) {
        auto& table = powers[v];
        if (table.empty()) table.push_back(image(v));
        while (static_cast<int>(table.size()) < e) table.push_back(table.back() * table.front());
        term = term * table[static_cast<std::size_t>(e - 1)];
      }
      total = total + term;
    }
    return total;
  }

  /// Substitutes a polynomial for every variable.
  template <class Var2>
  Polynomial<Var2> compose(const std::function<Polynomial<Var2>(const Var&)>& image) const {
    return evaluate<Polynomial<Var2>>(image, [](const Rational& c) { return Polynomial<Var2>(c); });
  }

 private:
  void accumulate(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
};

/// Polynomial in the s^I coordinates (I even and nonempty).
using SPolynomial = Polynomial<MultiIndex>;

/// Polynomial in target coordinates y^0..y^{n-1}.
using YPolynomial = Polynomial<int>;

inline SPolynomial s_var(const MultiIndex& I) { return SPolynomial::variable(I); }

/// Formal partial derivative with respect to s^I.
inline SPolynomial spoly_partial(const SPolynomial& F, const MultiIndex& I) {
  if (I.empty() || !I.is_even())
    throw std::invalid_argument("s-variables are indexed by even nonempty multi-indices");
  return F.partial(I);
}

}  // namespace supercalc
