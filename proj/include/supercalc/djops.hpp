#pragma once

// D_I operator calculus on polynomials in the coordinates s^I of the even,
// positive-degree part of the exterior algebra.
//
//   D_() F = F(0)
//   D_I  F = sum_k 1/k! sum_{I_1..I_k} eps^{I_1..I_k}_I  d^k F / ds^{I_1}..ds^{I_k} (0)
//
// The block sums run over ordered tuples and divide by k!, literally.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "supercalc/error.hpp"
#include "supercalc/grassmann.hpp"
#include "supercalc/polynomial.hpp"
#include "supercalc/pullback.hpp"
#include "supercalc/scalar.hpp"

namespace supercalc {

/// Generator context with the even index sets and the epsilon splitting tables.
///
/// Tables are built eagerly in the constructor and read-only afterwards.
class DOperatorContext {
 public:
  static constexpr int kMaxGenerators = 10;

  explicit DOperatorContext(GeneratorSet gs) : gs_(gs) {
    if (gs_.g() > kMaxGenerators)
      throw ContextError("D-operator tables are limited to " + std::to_string(kMaxGenerators) + " generators");
    even_ = enumerate(gs_.g(), ParityClass::even);
    even_positive_ = enumerate(gs_.g(), ParityClass::even_positive);
    for (const auto& I : even_) {
      auto& table = splittings_[I];
      for (auto& s : even_splittings(I))
        if (s.sign != 0) table.push_back(std::move(s));
    }
  }

  const GeneratorSet& generators() const noexcept { return gs_; }
  int g() const noexcept { return gs_.g(); }

  /// Even multi-indices, including the empty one.
  const std::vector<MultiIndex>& even_indices() const noexcept { return even_; }
  /// Even nonempty multi-indices: the labels of the s-coordinates.
  const std::vector<MultiIndex>& even_positive() const noexcept { return even_positive_; }

  const std::vector<Splitting>& splittings(const MultiIndex& I) const {
    auto it = splittings_.find(I);
    if (it == splittings_.end())
      throw ContextError("multi-index " + to_string(I) + " is not an even multi-index over " +
                         std::to_string(g()) + " generators");
    return it->second;
  }

  bool is_coordinate(const MultiIndex& I) const noexcept {
    return !I.empty() && I.is_even() && I.max_index() <= g();
  }

  void check(const SPolynomial& F) const {
    for (const auto& v : F.variables())
      if (!is_coordinate(v))
        throw ContextError("s-variable " + to_string(v) + " is not a coordinate over " + std::to_string(g()) +
                           " generators");
  }

 private:
  GeneratorSet gs_;
  std::vector<MultiIndex> even_;
  std::vector<MultiIndex> even_positive_;
  std::map<MultiIndex, std::vector<Splitting>> splittings_;
};

/// (D_I F)(0).
inline Rational d_op(const DOperatorContext& ctx, const MultiIndex& I, const SPolynomial& F) {
  ctx.check(F);
  Rational total = 0;
  for (const auto& split : ctx.splittings(I)) {
    const Rational partial = F.derivative_at_zero(split.blocks);
    if (partial == 0) continue;
    total += partial * split.sign / factorial(static_cast<int>(split.blocks.size()));
  }
  return total;
}

/// Both sides of an identity that is expected to hold exactly.
template <class T>
struct IdentityCheck {
  T lhs;
  T rhs;
  bool holds() const { return lhs == rhs; }
};

/// D_I(ab) against sum over (I_1, I_2) of eps^{I_1 I_2}_I (D_{I_1}a)(D_{I_2}b),
/// where the pairs (), I and I, () are included.
inline IdentityCheck<Rational> leibniz_check(const DOperatorContext& ctx, const SPolynomial& a,
                                             const SPolynomial& b, const MultiIndex& I) {
  IdentityCheck<Rational> out{d_op(ctx, I, a * b), 0};
  // I_1 runs over the even subsets of I, I_2 is the complement.
  for (std::uint64_t sub = I.mask();; sub = (sub - 1) & I.mask()) {
    const MultiIndex first = MultiIndex::from_mask(sub);
    if (first.is_even()) {
      const MultiIndex second = I.minus(first);
      const int sign = concat_sign(first, second).sign;
      out.rhs += sign * d_op(ctx, first, a) * d_op(ctx, second, b);
    }
    if (sub == 0) break;
  }
  return out;
}

/// Components Y^alpha of a map from the s-space into R^n.
using SMap = std::vector<SPolynomial>;

/// Self-map of the s-space; coordinates absent from the map are left unchanged.
using SelfMap = std::map<MultiIndex, SPolynomial>;

namespace detail {

/// jets[alpha][J] = D_J Y^alpha (0) for every nonempty even J.
inline std::vector<std::map<MultiIndex, Rational>> d_jets(const DOperatorContext& ctx, const SMap& Y) {
  std::vector<std::map<MultiIndex, Rational>> jets(Y.size());
  for (std::size_t a = 0; a < Y.size(); ++a)
    for (const auto& J : ctx.even_positive()) {
      Rational v = d_op(ctx, J, Y[a]);
      if (v != 0) jets[a][J] = v;
    }
  return jets;
}

/// sum_k 1/k! sum eps^{I_1..I_k}_I sum_alpha d^kF(y0) prod_l D_{I_l} Y^{alpha_l}(0).
template <class Value>
Value chain_sum(const DOperatorContext& ctx, const MultiIndex& I, int n,
                const std::vector<std::map<MultiIndex, Rational>>& jets,
                const std::function<Value(const std::vector<int>&)>& derivative) {
  if (I.empty()) return derivative(std::vector<int>(static_cast<std::size_t>(n), 0));
  Value total(0);
  for (const auto& split : ctx.splittings(I)) {
    const int k = static_cast<int>(split.blocks.size());
    for_each_sequence(n, k, [&](const std::vector<int>& alphas) {
      Rational weight = Rational(split.sign) / factorial(k);
      for (int l = 0; l < k && weight != 0; ++l) {
        const auto& jet = jets[static_cast<std::size_t>(alphas[static_cast<std::size_t>(l)])];
        auto it = jet.find(split.blocks[static_cast<std::size_t>(l)]);
        weight = it == jet.end() ? Rational(0) : weight * it->second;
      }
      if (weight == 0) return;
      total = total + derivative(degree_of(alphas, n)) * Value(weight);
    });
  }
  return total;
}

inline YPolynomial y_derivative(const YPolynomial& F, const std::vector<int>& order) {
  YPolynomial d = F;
  for (int a = 0; a < static_cast<int>(order.size()); ++a)
    for (int k = 0; k < order[static_cast<std::size_t>(a)]; ++k) d = d.partial(a);
  return d;
}

}  // namespace detail

/// D_I(F o Y)(0) against the chain-rule expansion in the D-jets of Y.
inline IdentityCheck<Rational> chain_rule_check(const DOperatorContext& ctx, const YPolynomial& F,
                                                const SMap& Y, const MultiIndex& I) {
  const int n = static_cast<int>(Y.size());
  for (int v : F.variables())
    if (v < 0 || v >= n) throw DimensionMismatch("F uses a coordinate outside the image of Y");
  for (const auto& c : Y) ctx.check(c);

  const SPolynomial composed = F.compose<MultiIndex>([&](const int& v) { return Y[static_cast<std::size_t>(v)]; });
  std::vector<Rational> y0;
  for (const auto& c : Y) y0.push_back(c.constant_term());

  const auto jets = detail::d_jets(ctx, Y);
  const Rational rhs = detail::chain_sum<Rational>(ctx, I, n, jets, [&](const std::vector<int>& order) {
    return detail::y_derivative(F, order).evaluate<Rational>(
        [&](const int& v) { return y0[static_cast<std::size_t>(v)]; }, [](const Rational& c) { return c; });
  });
  return {d_op(ctx, I, composed), rhs};
}

/// True iff every D_I F(0) vanishes, i.e. F lies in the ideal of the quotient algebra.
inline bool ideal_member(const DOperatorContext& ctx, const SPolynomial& F) {
  for (const auto& I : ctx.even_indices())
    if (d_op(ctx, I, F) != 0) return false;
  return true;
}

/// s^{I_1} ... s^{I_n} - sum_I eps^{I_1..I_n}_I s^I.
inline SPolynomial ideal_generator(const DOperatorContext& ctx, const std::vector<MultiIndex>& blocks) {
  SPolynomial product(1);
  for (const auto& b : blocks) {
    if (!ctx.is_coordinate(b)) throw ContextError("ideal generator block " + to_string(b) + " is not a coordinate");
    product *= s_var(b);
  }
  for (const auto& I : ctx.even_positive()) {
    const int e = epsilon(blocks, I);
    if (e != 0) product -= SPolynomial(Rational(e)) * s_var(I);
  }
  return product;
}

/// The algebra isomorphism F -> sum_I theta^I D_I F(0) onto the even Grassmann algebra.
inline SuperScalar iso_to_grassmann(const DOperatorContext& ctx, const SPolynomial& F) {
  SuperScalar out;
  for (const auto& I : ctx.even_indices()) {
    const Rational v = d_op(ctx, I, F);
    if (v != 0) out += SuperScalar::generators(I, v);
  }
  return out;
}

inline SPolynomial component(const SelfMap& S, const MultiIndex& J) {
  auto it = S.find(J);
  return it == S.end() ? s_var(J) : it->second;
}

inline void check_self_map(const DOperatorContext& ctx, const SelfMap& S) {
  for (const auto& [J, c] : S) {
    if (!ctx.is_coordinate(J)) throw ContextError("self-map component " + to_string(J) + " is not a coordinate");
    ctx.check(c);
  }
}

/// Y o S.
inline SMap compose(const DOperatorContext& ctx, const SMap& Y, const SelfMap& S) {
  check_self_map(ctx, S);
  SMap out;
  for (const auto& c : Y) {
    ctx.check(c);
    out.push_back(c.compose<MultiIndex>([&](const MultiIndex& J) { return component(S, J); }));
  }
  return out;
}

/// S o T.
inline SelfMap compose(const DOperatorContext& ctx, const SelfMap& S, const SelfMap& T) {
  check_self_map(ctx, S);
  check_self_map(ctx, T);
  SelfMap out;
  for (const auto& J : ctx.even_positive())
    out[J] = component(S, J).compose<MultiIndex>([&](const MultiIndex& K) { return component(T, K); });
  return out;
}

/// S(0) = 0 and D_I S^J(0) = delta_I^J for all nonempty even I, J.
///
/// Only the jet condition is tested; global invertibility is not.
inline bool tq_member(const DOperatorContext& ctx, const SelfMap& S) {
  check_self_map(ctx, S);
  for (const auto& J : ctx.even_positive()) {
    const SPolynomial c = component(S, J);
    if (c.constant_term() != 0) return false;
    for (const auto& I : ctx.even_positive())
      if (d_op(ctx, I, c) != (I == J ? 1 : 0)) return false;
  }
  return true;
}

/// phi^*f = sum_I theta^I D_I(f o Phi)(0) with D_I(f o Phi) expanded by the chain rule.
inline SuperScalar phi_route_pullback(const DOperatorContext& ctx, const SMap& Y, const TargetFunction& f) {
  const int n = static_cast<int>(Y.size());
  detail::check_arity(f, n);
  for (const auto& c : Y) ctx.check(c);
  std::vector<SuperScalar> body;
  for (const auto& c : Y) body.emplace_back(c.constant_term());

  const auto jets = detail::d_jets(ctx, Y);
  const std::function<SuperScalar(const std::vector<int>&)> derivative = [&](const std::vector<int>& order) {
    return f.derivative(order, body);
  };
  SuperScalar out;
  for (const auto& I : ctx.even_indices()) {
    const SuperScalar coefficient = detail::chain_sum<SuperScalar>(ctx, I, n, jets, derivative);
    if (!coefficient.is_zero()) out += SuperScalar::generators(I) * coefficient;
  }
  return out;
}

/// The superfield whose components are sum_I theta^I D_I Y^alpha(0).
inline Superfield superfield_of(const DOperatorContext& ctx, const SMap& Y) {
  std::vector<SuperScalar> components;
  for (const auto& c : Y) components.push_back(iso_to_grassmann(ctx, c));
  return Superfield(std::move(components));
}

}  // namespace supercalc
