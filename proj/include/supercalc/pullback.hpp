#pragma once

// Pullback of functions on a target chart through an even superfield.
//
// Three independent routes compute the same element:
//   * pullback_taylor      nilpotent Taylor expansion around the body point
//   * exp_xi_apply         e^Xi with the epsilon-weighted block expansion
//   * product_form_apply   prod_A (1 + theta^A Xi_A) with first-order operators
// plus odd-target pullbacks and Berezin coefficient extraction.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "supercalc/error.hpp"
#include "supercalc/grassmann.hpp"
#include "supercalc/polynomial.hpp"
#include "supercalc/scalar.hpp"

namespace supercalc {

/// A function F on the target chart, known through its derivatives at the body point.
struct TargetFunction {
  using Derivative = std::function<SuperScalar(std::span<const int> order, std::span<const SuperScalar> body)>;

  std::string name;
  int arity = 1;
  Derivative derivative;

  /// Arbitrary smooth F: derivatives stay formal FuncDeriv atoms.
  static TargetFunction formal(std::string name, int arity = 1) {
    TargetFunction f;
    f.name = name;
    f.arity = arity;
    f.derivative = [name](std::span<const int> order, std::span<const SuperScalar>) {
      return SuperScalar::func(FuncDeriv(name, std::vector<int>(order.begin(), order.end())));
    };
    return f;
  }

  /// Polynomial F in y^0..y^{arity-1}; derivatives are evaluated at the body.
  static TargetFunction polynomial(const YPolynomial& p, int arity, std::string name = "P") {
    for (int v : p.variables())
      if (v < 0 || v >= arity) throw DimensionMismatch("polynomial variable outside the target dimension");
    TargetFunction f;
    f.name = std::move(name);
    f.arity = arity;
    f.derivative = [p, arity](std::span<const int> order, std::span<const SuperScalar> body) {
      if (static_cast<int>(body.size()) != arity)
        throw DimensionMismatch("polynomial target function needs a body point of dimension " +
                                std::to_string(arity));
      YPolynomial d = p;
      for (int a = 0; a < static_cast<int>(order.size()); ++a)
        for (int k = 0; k < order[static_cast<std::size_t>(a)]; ++k) d = d.partial(a);
      return d.evaluate<SuperScalar>([&](const int& v) { return body[static_cast<std::size_t>(v)]; },
                                     [](const Rational& c) { return SuperScalar(c); });
    };
    return f;
  }
};

/// The images phi^*y^alpha of the target coordinates; every component is even.
class Superfield {
 public:
  Superfield() = default;

  explicit Superfield(std::vector<SuperScalar> components) : components_(std::move(components)) {
    for (std::size_t a = 0; a < components_.size(); ++a) {
      if (!components_[a].is_even())
        throw OddComponentError("superfield component " + std::to_string(a + 1) + " is not even");
      bodies_.push_back(components_[a].body());
    }
  }

  int dim() const noexcept { return static_cast<int>(components_.size()); }
  const std::vector<SuperScalar>& components() const noexcept { return components_; }
  const SuperScalar& component(int a) const { return components_.at(static_cast<std::size_t>(a)); }

  /// y_0: the generator-free, odd-free part of each component.
  const std::vector<SuperScalar>& bodies() const noexcept { return bodies_; }

  std::vector<SuperScalar> nilpotent_parts() const {
    std::vector<SuperScalar> out;
    for (const auto& c : components_) out.push_back(c.nilpotent_part());
    return out;
  }

 private:
  std::vector<SuperScalar> components_;
  std::vector<SuperScalar> bodies_;
};

namespace detail {

inline Rational multi_factorial(const std::vector<int>& r) {
  Rational out = 1;
  for (int k : r) out *= factorial(k);
  return out;
}

inline void check_arity(const TargetFunction& f, int dim) {
  if (f.arity != dim)
    throw DimensionMismatch("function " + f.name + " has arity " + std::to_string(f.arity) +
                            " but the map has dimension " + std::to_string(dim));
}

/// Calls visit(alphas) for every sequence in [0, n)^k.
inline void for_each_sequence(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> seq(static_cast<std::size_t>(k), 0);
  if (n <= 0 && k > 0) return;
  while (true) {
    visit(seq);
    int pos = k - 1;
    while (pos >= 0 && ++seq[static_cast<std::size_t>(pos)] == n) seq[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) return;
  }
}

inline std::vector<int> degree_of(const std::vector<int>& alphas, int n) {
  std::vector<int> r(static_cast<std::size_t>(n), 0);
  for (int a : alphas) ++r[static_cast<std::size_t>(a)];
  return r;
}

}  // namespace detail

/// phi^*f = sum_r d^rF(y0) (phi^*y - y0)^r / r!.
///
/// Without max_order the sum stops at the first total degree whose nilpotent
/// products all vanish. With max_order every term up to that degree is added.
inline SuperScalar pullback_taylor(const TargetFunction& f, const Superfield& sf,
                                   std::optional<int> max_order = std::nullopt) {
  detail::check_arity(f, sf.dim());
  const int n = sf.dim();
  const auto& body = sf.bodies();
  const auto nil = sf.nilpotent_parts();

  std::vector<int> zero(static_cast<std::size_t>(n), 0);
  SuperScalar result = f.derivative(zero, body);

  // Products (phi^*y - y0)^r for every multi-degree r of the current total degree.
  // Each degree is reached once by only appending alpha >= the last used index.
  struct Entry {
    std::vector<int> r;
    int last = 0;
    SuperScalar product;
  };
  std::vector<Entry> level{{zero, 0, SuperScalar(1)}};
  for (int k = 1; !max_order || k <= *max_order; ++k) {
    std::vector<Entry> next;
    for (const auto& e : level) {
      for (int a = e.last; a < n; ++a) {
        SuperScalar p = e.product * nil[static_cast<std::size_t>(a)];
        if (p.is_zero() && !max_order) continue;
        Entry grown{e.r, a, std::move(p)};
        ++grown.r[static_cast<std::size_t>(a)];
        next.push_back(std::move(grown));
      }
    }
    if (next.empty()) break;
    for (const auto& e : next) {
      const SuperScalar d = f.derivative(e.r, body);
      result += d * e.product * SuperScalar(Rational(1) / detail::multi_factorial(e.r));
    }
    level = std::move(next);
  }
  return result;
}

/// Chart components of Xi = sum_I xi_I eta^I for even nonempty I.
///
/// Coefficients are constant in the chart: even, generator-free and free of
/// odd symbols.
class XiField {
 public:
  using Entries = std::map<MultiIndex, std::vector<SuperScalar>>;

  explicit XiField(int dim = 1) : dim_(dim) {}

  int dim() const noexcept { return dim_; }
  const Entries& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  void set(const MultiIndex& I, std::vector<SuperScalar> coefficients) {
    if (I.empty() || !I.is_even())
      throw ParityMismatch("Xi components are indexed by even nonempty multi-indices, got " + to_string(I));
    if (static_cast<int>(coefficients.size()) != dim_)
      throw DimensionMismatch("Xi component " + to_string(I) + " has wrong dimension");
    for (const auto& c : coefficients) {
      if (c.has_generators() || c.has_odd_symbols())
        throw ParityMismatch("Xi coefficients must be free of generators and odd symbols");
    }
    bool all_zero = true;
    for (const auto& c : coefficients) all_zero = all_zero && c.is_zero();
    if (all_zero)
      entries_.erase(I);
    else
      entries_[I] = std::move(coefficients);
  }

  const std::vector<SuperScalar>* find(const MultiIndex& I) const {
    auto it = entries_.find(I);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool operator==(const XiField&) const = default;

 private:
  int dim_;
  Entries entries_;
};

/// (1 x phi)^*(e^Xi f): the coefficient of eta^I sums, over ordered block
/// decompositions of I with sign epsilon, (1/k!) xi_{I_1}...xi_{I_k} applied to f.
inline SuperScalar exp_xi_apply(const XiField& xi, const TargetFunction& f,
                                std::span<const SuperScalar> base = {}) {
  detail::check_arity(f, xi.dim());
  const int n = xi.dim();
  std::uint64_t support = 0;
  for (const auto& [I, c] : xi.entries()) support |= I.mask();

  SuperScalar result = f.derivative(std::vector<int>(static_cast<std::size_t>(n), 0), base);
  // Every reachable I is an even subset of the union of the keys.
  for (std::uint64_t sub = support; sub; sub = (sub - 1) & support) {
    const MultiIndex I = MultiIndex::from_mask(sub);
    if (!I.is_even()) continue;
    SuperScalar coefficient;
    for (const auto& split : even_splittings(I)) {
      if (split.sign == 0) continue;
      std::vector<const std::vector<SuperScalar>*> fields;
      for (const auto& b : split.blocks) fields.push_back(xi.find(b));
      if (std::find(fields.begin(), fields.end(), nullptr) != fields.end()) continue;
      const int k = static_cast<int>(split.blocks.size());
      SuperScalar inner;
      detail::for_each_sequence(n, k, [&](const std::vector<int>& alphas) {
        SuperScalar prod(1);
        for (int l = 0; l < k && !prod.is_zero(); ++l)
          prod *= (*fields[static_cast<std::size_t>(l)])[static_cast<std::size_t>(alphas[static_cast<std::size_t>(l)])];
        if (prod.is_zero()) return;
        inner += prod * f.derivative(detail::degree_of(alphas, n), base);
      });
      coefficient += inner * SuperScalar(Rational(split.sign) / factorial(k));
    }
    if (!coefficient.is_zero()) result += SuperScalar::generators(I) * coefficient;
  }
  return result;
}

/// Reads the chart-adapted Xi off a superfield: xi_I^alpha is the eta^I
/// coefficient of component alpha. The representative is canonical, not unique.
inline XiField reconstruct_xi(const Superfield& sf) {
  const int n = sf.dim();
  std::map<MultiIndex, std::vector<SuperScalar>> collected;
  for (int a = 0; a < n; ++a) {
    for (const auto& [m, c] : sf.component(a).terms()) {
      if (!m.odd.empty())
        throw OddComponentError("component " + std::to_string(a + 1) +
                                " contains odd symbols; realize them through auxiliary generators");
      if (m.gens.empty()) continue;
      if (!m.gens.is_even())
        throw OddComponentError("component " + std::to_string(a + 1) + " has an odd generator monomial " +
                                to_string(m.gens));
      auto& slot = collected[m.gens];
      slot.resize(static_cast<std::size_t>(n));
      SuperMonomial stripped = m;
      stripped.gens = MultiIndex{};
      slot[static_cast<std::size_t>(a)] += SuperScalar::monomial(stripped, c);
    }
  }
  XiField xi(n);
  for (auto& [I, coeffs] : collected) xi.set(I, std::move(coeffs));
  return xi;
}

// ---------------------------------------------------------------------------
// Product form prod_A (1 + theta^A Xi_A).

/// theta^A Xi_A with Xi_A = sum_alpha coefficients[alpha] d/dy^alpha acting to the right.
struct ProductFactor {
  MultiIndex theta;
  std::vector<SuperScalar> coefficients;
};

/// A term theta^I Xi_{a_1} ... Xi_{a_k} of the expanded operator product.
struct OperatorWord {
  MultiIndex theta;
  std::vector<std::size_t> operators;  ///< factor positions, in product order

  auto operator<=>(const OperatorWord&) const = default;
};

/// Expands prod_j (1 + theta^{A_j} Xi_j), where Xi_j has the parity of A_j,
/// into normal-ordered words with integer coefficients.
inline std::map<OperatorWord, int> expand_product_operator(const std::vector<MultiIndex>& thetas) {
  std::map<OperatorWord, int> out;
  const std::size_t m = thetas.size();
  if (m > 30) throw std::invalid_argument("too many factors in the product form");
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << m); ++subset) {
    OperatorWord word;
    int sign = 1;
    int operator_parity = 0;  // parity of the operators already passed
    bool vanished = false;
    for (std::size_t j = 0; j < m && !vanished; ++j) {
      if (!(subset & (std::uint64_t{1} << j))) continue;
      // theta^{A_j} moves left across the operators collected so far.
      if (operator_parity & thetas[j].parity()) sign = -sign;
      const SignedIndex joined = concat_sign(word.theta, thetas[j]);
      if (joined.is_zero()) {
        vanished = true;
        break;
      }
      sign *= joined.sign;
      word.theta = joined.index;
      word.operators.push_back(j);
      operator_parity ^= thetas[j].parity();
    }
    if (vanished) continue;
    int& slot = out[word];
    slot += sign;
    if (slot == 0) out.erase(word);
  }
  return out;
}

/// varphi^* prod_A (1 + theta^A Xi_A) f, each Xi_A acting as a constant-coefficient derivation.
inline SuperScalar product_form_apply(const std::vector<SuperScalar>& bodies,
                                      const std::vector<ProductFactor>& factors, const TargetFunction& f) {
  const int n = static_cast<int>(bodies.size());
  detail::check_arity(f, n);
  std::vector<MultiIndex> thetas;
  for (const auto& factor : factors) {
    if (factor.theta.empty()) throw ParityMismatch("product-form factors need a nonempty theta monomial");
    if (static_cast<int>(factor.coefficients.size()) != n)
      throw DimensionMismatch("factor " + to_string(factor.theta) + " has wrong dimension");
    for (const auto& c : factor.coefficients) {
      if (c.is_zero()) continue;
      const auto p = c.parity();
      const Parity want = factor.theta.parity() ? Parity::odd : Parity::even;
      if (!p || *p != want)
        throw ParityMismatch("operator attached to theta" + to_string(factor.theta) +
                             " must have the parity of its theta monomial");
    }
    thetas.push_back(factor.theta);
  }

  SuperScalar result;
  for (const auto& [word, sign] : expand_product_operator(thetas)) {
    const int k = static_cast<int>(word.operators.size());
    SuperScalar applied;
    detail::for_each_sequence(n, k, [&](const std::vector<int>& alphas) {
      SuperScalar prod(1);
      for (int l = 0; l < k && !prod.is_zero(); ++l) {
        const auto& factor = factors[word.operators[static_cast<std::size_t>(l)]];
        prod *= factor.coefficients[static_cast<std::size_t>(alphas[static_cast<std::size_t>(l)])];
      }
      if (prod.is_zero()) return;
      applied += prod * f.derivative(detail::degree_of(alphas, n), bodies);
    });
    result += SuperScalar::generators(word.theta, sign) * applied;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Targets with odd coordinates.

/// A map into a chart with even coordinates y^alpha and odd coordinates psi^j.
class OddTargetMap {
 public:
  OddTargetMap(Superfield even, std::vector<SuperScalar> odd) : even_(std::move(even)), odd_(std::move(odd)) {
    for (std::size_t j = 0; j < odd_.size(); ++j)
      if (!odd_[j].is_odd()) throw ParityMismatch("odd image chi^" + std::to_string(j + 1) + " is not odd");
  }

  const Superfield& even_part() const noexcept { return even_; }
  const std::vector<SuperScalar>& odd_images() const noexcept { return odd_; }

 private:
  Superfield even_;
  std::vector<SuperScalar> odd_;
};

/// phi^*f = sum_J phi^*(F_J(y)) chi^J for f = sum_J F_J(y) psi^J.
inline SuperScalar pullback_odd_target(const OddTargetMap& tm, const std::map<MultiIndex, TargetFunction>& family) {
  const int m = static_cast<int>(tm.odd_images().size());
  SuperScalar result;
  for (const auto& [J, F] : family) {
    if (J.max_index() > m)
      throw DimensionMismatch("odd multi-index " + to_string(J) + " exceeds the " + std::to_string(m) +
                              " odd target coordinates");
    SuperScalar chi(1);
    for (int j : J.indices()) chi *= tm.odd_images()[static_cast<std::size_t>(j - 1)];
    if (chi.is_zero()) {
      detail::check_arity(F, tm.even_part().dim());
      continue;
    }
    result += pullback_taylor(F, tm.even_part()) * chi;
  }
  return result;
}

/// Berezin integral over theta^{vars}: the coefficient X in a = theta^{vars} X + (terms missing some var).
inline SuperScalar berezin(const SuperScalar& a, const MultiIndex& vars) {
  SuperScalar out;
  for (const auto& [m, c] : a.terms()) {
    if (!vars.subset_of(m.gens)) continue;
    const MultiIndex rest = m.gens.minus(vars);
    const int sign = concat_sign(vars, rest).sign;
    SuperMonomial reduced = m;
    reduced.gens = rest;
    out += SuperScalar::monomial(reduced, sign > 0 ? c : Rational(-c));
  }
  return out;
}

}  // namespace supercalc
