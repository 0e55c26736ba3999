#pragma once

// Floating-point verification path: Grassmann numbers with double
// coefficients and Taylor evaluation of closed-form smooth functions on
// nilpotent arguments. Shares only the generator sign rule with the
// symbolic engine.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "supercalc/error.hpp"
#include "supercalc/grassmann.hpp"
#include "supercalc/polynomial.hpp"
#include "supercalc/pullback.hpp"
#include "supercalc/scalar.hpp"

namespace supercalc {

class NumericGrassmann {
 public:
  using Terms = std::map<MultiIndex, double>;

  NumericGrassmann() = default;
  NumericGrassmann(double c) {  // NOLINT: scalars embed implicitly
    if (c != 0.0) terms_[MultiIndex{}] = c;
  }

  static NumericGrassmann generators(const MultiIndex& I, double c = 1.0) {
    NumericGrassmann out;
    if (c != 0.0) out.terms_[I] = c;
    return out;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  double coefficient(const MultiIndex& I) const {
    auto it = terms_.find(I);
    return it == terms_.end() ? 0.0 : it->second;
  }
  double body() const { return coefficient(MultiIndex{}); }
  NumericGrassmann nilpotent_part() const {
    NumericGrassmann out = *this;
    out.terms_.erase(MultiIndex{});
    return out;
  }

  NumericGrassmann& operator+=(const NumericGrassmann& o) {
    for (const auto& [I, c] : o.terms_) terms_[I] += c;
    prune();
    return *this;
  }
  NumericGrassmann& operator-=(const NumericGrassmann& o) {
    for (const auto& [I, c] : o.terms_) terms_[I] -= c;
    prune();
    return *this;
  }
  friend NumericGrassmann operator+(NumericGrassmann a, const NumericGrassmann& b) { return a += b; }
  friend NumericGrassmann operator-(NumericGrassmann a, const NumericGrassmann& b) { return a -= b; }

  friend NumericGrassmann operator*(const NumericGrassmann& a, const NumericGrassmann& b) {
    NumericGrassmann out;
    for (const auto& [I, x] : a.terms_)
      for (const auto& [J, y] : b.terms_) {
        const SignedIndex k = concat_sign(I, J);
        if (!k.is_zero()) out.terms_[k.index] += k.sign * x * y;
      }
    out.prune();
    return out;
  }

 private:
  // Drops exact zeros only.
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
  }

  Terms terms_;
};

/// A smooth function of n real variables with closed-form partial derivatives.
struct SmoothFn {
  using Evaluator = std::function<double(std::span<const double> point, std::span<const int> order)>;

  std::string name;
  int arity = 1;
  Evaluator eval;

  double operator()(std::span<const double> point, std::span<const int> order) const { return eval(point, order); }
};

namespace smooth {

inline SmoothFn polynomial(const YPolynomial& p, int arity, std::string name = "poly") {
  return {std::move(name), arity, [p](std::span<const double> x, std::span<const int> order) {
            YPolynomial d = p;
            for (int a = 0; a < static_cast<int>(order.size()); ++a)
              for (int k = 0; k < order[static_cast<std::size_t>(a)]; ++k) d = d.partial(a);
            double total = 0.0;
            for (const auto& [m, c] : d.terms()) {
              double term = to_double(c);
              for (const auto& [v, e] : m) term *= std::pow(x[static_cast<std::size_t>(v)], e);
              total += term;
            }
            return total;
          }};
}

namespace detail {
inline double linear(std::span<const double> a, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}
inline double chain_factor(std::span<const double> a, std::span<const int> order) {
  double f = 1.0;
  for (std::size_t i = 0; i < order.size(); ++i) f *= std::pow(a[i], order[i]);
  return f;
}
inline int total(std::span<const int> order) {
  int k = 0;
  for (int r : order) k += r;
  return k;
}
}  // namespace detail

/// exp(a . y)
inline SmoothFn exp_linear(std::vector<double> a, std::string name = "exp") {
  const int n = static_cast<int>(a.size());
  return {std::move(name), n, [a](std::span<const double> x, std::span<const int> order) {
            return detail::chain_factor(a, order) * std::exp(detail::linear(a, x));
          }};
}

/// sin(a . y)
inline SmoothFn sin_linear(std::vector<double> a, std::string name = "sin") {
  const int n = static_cast<int>(a.size());
  return {std::move(name), n, [a](std::span<const double> x, std::span<const int> order) {
            const double phase = detail::total(order) * std::numbers::pi / 2.0;
            return detail::chain_factor(a, order) * std::sin(detail::linear(a, x) + phase);
          }};
}

/// cos(a . y)
inline SmoothFn cos_linear(std::vector<double> a, std::string name = "cos") {
  const int n = static_cast<int>(a.size());
  return {std::move(name), n, [a](std::span<const double> x, std::span<const int> order) {
            const double phase = detail::total(order) * std::numbers::pi / 2.0;
            return detail::chain_factor(a, order) * std::cos(detail::linear(a, x) + phase);
          }};
}

/// f * g by the multivariate Leibniz rule.
inline SmoothFn product(SmoothFn f, SmoothFn g, std::string name = "") {
  if (f.arity != g.arity) throw DimensionMismatch("product of smooth functions with different arity");
  if (name.empty()) name = f.name + "*" + g.name;
  const int n = f.arity;
  return {std::move(name), n, [f, g, n](std::span<const double> x, std::span<const int> order) {
            std::vector<int> s(static_cast<std::size_t>(n), 0), rest(order.begin(), order.end());
            double total = 0.0;
            while (true) {
              double binom = 1.0;
              for (int i = 0; i < n; ++i) {
                const auto u = static_cast<std::size_t>(i);
                for (int j = 0; j < s[u]; ++j) binom = binom * (order[u] - j) / (j + 1);
                rest[u] = order[u] - s[u];
              }
              total += binom * f(x, s) * g(x, rest);
              int pos = 0;
              while (pos < n && ++s[static_cast<std::size_t>(pos)] > order[static_cast<std::size_t>(pos)])
                s[static_cast<std::size_t>(pos++)] = 0;
              if (pos == n) break;
            }
            return total;
          }};
}

}  // namespace smooth

/// sum_r f^{(r)}(body) / r! * prod (arg - body)^r, until the nilpotent products vanish.
inline NumericGrassmann eval_taylor(const SmoothFn& f, const std::vector<NumericGrassmann>& args) {
  const int n = static_cast<int>(args.size());
  if (n != f.arity) throw DimensionMismatch("smooth function " + f.name + " expects " + std::to_string(f.arity) + " arguments");
  std::vector<double> body;
  std::vector<NumericGrassmann> nil;
  for (const auto& a : args) {
    body.push_back(a.body());
    nil.push_back(a.nilpotent_part());
  }
  std::vector<int> zero(static_cast<std::size_t>(n), 0);
  NumericGrassmann result(f(body, zero));

  struct Entry {
    std::vector<int> r;
    int last;
    NumericGrassmann product;
    double factorial;
  };
  std::vector<Entry> level{{zero, 0, NumericGrassmann(1.0), 1.0}};
  while (!level.empty()) {
    std::vector<Entry> next;
    for (const auto& e : level)
      for (int a = e.last; a < n; ++a) {
        NumericGrassmann p = e.product * nil[static_cast<std::size_t>(a)];
        if (p.is_zero()) continue;
        Entry grown{e.r, a, std::move(p), e.factorial};
        grown.factorial *= ++grown.r[static_cast<std::size_t>(a)];
        next.push_back(std::move(grown));
      }
    for (const auto& e : next) result += e.product * NumericGrassmann(f(body, e.r) / e.factorial);
    level = std::move(next);
  }
  return result;
}

/// Values for the symbols of an expression. Odd symbols are realized as odd
/// elements of the auxiliary generators, since floats cannot anticommute.
struct Bindings {
  std::map<std::string, double> even;
  std::map<std::string, NumericGrassmann> odd;
};

/// A smooth function together with the body point its derivative atoms refer to.
struct BoundFunction {
  SmoothFn fn;
  std::vector<double> at;
};

using FunctionTable = std::map<std::string, BoundFunction>;

/// Replaces symbols by their values and derivative atoms by numeric derivatives.
inline NumericGrassmann substitute_numeric(const SuperScalar& a, const Bindings& bindings, const FunctionTable& ftable) {
  NumericGrassmann out;
  for (const auto& [m, c] : a.terms()) {
    double scalar = to_double(c);
    for (const auto& [name, e] : m.even) {
      auto it = bindings.even.find(name);
      if (it == bindings.even.end()) throw MissingBinding("no value bound to even symbol " + name);
      scalar *= std::pow(it->second, e);
    }
    for (const auto& [fd, e] : m.funcs) {
      auto it = ftable.find(fd.name);
      if (it == ftable.end()) throw MissingBinding("no numeric function bound to " + fd.name);
      if (fd.arity() != it->second.fn.arity || static_cast<int>(it->second.at.size()) != fd.arity())
        throw DimensionMismatch("numeric function " + fd.name + " has the wrong arity");
      scalar *= std::pow(it->second.fn(it->second.at, fd.order), e);
    }
    NumericGrassmann term = NumericGrassmann::generators(m.gens, scalar);
    for (const auto& name : m.odd) {
      auto it = bindings.odd.find(name);
      if (it == bindings.odd.end()) throw MissingBinding("no value bound to odd symbol " + name);
      term = term * it->second;
    }
    out += term;
  }
  return out;
}

/// Coefficient-wise |a - b| <= max(abs_tol, rel_tol * max(|a|, |b|)).
inline bool agree(const NumericGrassmann& a, const NumericGrassmann& b, double rel_tol = 1e-9, double abs_tol = 1e-12) {
  auto close = [&](double x, double y) {
    return std::abs(x - y) <= std::max(abs_tol, rel_tol * std::max(std::abs(x), std::abs(y)));
  };
  for (const auto& [I, x] : a.terms())
    if (!close(x, b.coefficient(I))) return false;
  for (const auto& [I, y] : b.terms())
    if (!close(a.coefficient(I), y)) return false;
  return true;
}

struct CrossCheck {
  NumericGrassmann symbolic;  ///< substituted symbolic pullback
  NumericGrassmann numeric;   ///< Taylor evaluation on the substituted components
  bool agrees(double rel_tol = 1e-9, double abs_tol = 1e-12) const { return agree(symbolic, numeric, rel_tol, abs_tol); }
};

/// Runs the symbolic pullback and the numeric Taylor evaluation on the same data.
inline CrossCheck cross_check(const Superfield& sf, const SmoothFn& f, const Bindings& bindings) {
  std::vector<NumericGrassmann> components;
  for (const auto& c : sf.components()) components.push_back(substitute_numeric(c, bindings, {}));
  std::vector<double> at;
  for (const auto& b : sf.bodies()) at.push_back(substitute_numeric(b, bindings, {}).body());

  const SuperScalar symbolic = pullback_taylor(TargetFunction::formal(f.name, f.arity), sf);
  FunctionTable table{{f.name, BoundFunction{f, at}}};
  return {substitute_numeric(symbolic, bindings, table), eval_taylor(f, components)};
}

}  // namespace supercalc
