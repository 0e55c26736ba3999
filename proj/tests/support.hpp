#pragma once

// Random instances and brute-force reference implementations shared by the tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "supercalc/supercalc.hpp"

namespace supercalc {

// Readable failure messages in gtest.
inline void PrintTo(const SuperScalar& s, std::ostream* os) {
  *os << to_string(s, GeneratorSet{0, s.max_generator()});
}
inline void PrintTo(const MultiIndex& m, std::ostream* os) { *os << to_string(m); }
inline void PrintTo(const SPolynomial& p, std::ostream* os) { *os << to_string(p); }

}  // namespace supercalc

namespace testing_support {

using namespace supercalc;

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }

  Rational small_rational() {
    int num = 0;
    while (num == 0) num = integer(-4, 4);
    return Rational(num, integer(1, 3));
  }

  MultiIndex subset(int g) {
    std::uint64_t mask = 0;
    for (int i = 1; i <= g; ++i)
      if (coin()) mask |= std::uint64_t{1} << i;
    return MultiIndex::from_mask(mask);
  }

  MultiIndex subset_with_parity(int g, int parity) {
    while (true) {
      MultiIndex m = subset(g);
      if (m.parity() == parity) return m;
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }

  /// Even superfield component. Odd generator monomials are paired with one odd
  /// symbol when odd names are given.
  SuperScalar even_component(int g, const std::vector<std::string>& even_names,
                             const std::vector<std::string>& odd_names, int terms) {
    SuperScalar out(small_rational());
    if (!even_names.empty() && coin()) out += SuperScalar::even_symbol(pick(even_names));
    for (int t = 0; t < terms; ++t) {
      const bool odd_term = !odd_names.empty() && coin();
      SuperScalar term = SuperScalar::generators(subset_with_parity(g, odd_term ? 1 : 0), small_rational());
      if (term.max_generator() == 0 && !odd_term) continue;
      if (odd_term) term *= SuperScalar::odd_symbol(pick(odd_names));
      if (!even_names.empty() && coin(0.3)) term *= SuperScalar::even_symbol(pick(even_names));
      out += term;
    }
    return out;
  }

  Superfield superfield(int g, int n, const std::vector<std::string>& even_names,
                        const std::vector<std::string>& odd_names, int terms = 3) {
    std::vector<SuperScalar> c;
    for (int a = 0; a < n; ++a) c.push_back(even_component(g, even_names, odd_names, terms));
    return Superfield(std::move(c));
  }

  /// Polynomial of total degree at most max_degree in y_0..y_{n-1}.
  YPolynomial y_polynomial(int n, int max_degree, int terms = 4) {
    YPolynomial out;
    for (int t = 0; t < terms; ++t) {
      YPolynomial::Monomial m;
      const int degree = integer(0, max_degree);
      for (int d = 0; d < degree; ++d) ++m[integer(0, n - 1)];
      out += YPolynomial::monomial(m, small_rational());
    }
    return out;
  }

  /// Polynomial in the s-coordinates with at most max_degree factors per term.
  SPolynomial s_polynomial(const std::vector<MultiIndex>& coordinates, int max_degree, int terms = 4,
                           bool constant = true) {
    SPolynomial out;
    if (constant && coin()) out += SPolynomial(small_rational());
    for (int t = 0; t < terms; ++t) {
      SPolynomial::Monomial m;
      const int degree = integer(1, max_degree);
      for (int d = 0; d < degree; ++d) ++m[pick(coordinates)];
      out += SPolynomial::monomial(m, small_rational());
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

/// Sign of moving the ordered generator list into ascending order by adjacent
/// swaps; zero on a repeated generator.
inline int bubble_sign(std::vector<int> seq) {
  int sign = 1;
  for (std::size_t pass = 0; pass < seq.size(); ++pass)
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (seq[i] == seq[i + 1]) return 0;
      if (seq[i] > seq[i + 1]) {
        std::swap(seq[i], seq[i + 1]);
        sign = -sign;
      }
    }
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (seq[i] == seq[i + 1]) return 0;
  return sign;
}

/// Signature via cycle decomposition: (-1)^(n - cycles).
inline int cycle_sign(const std::vector<int>& seq) {
  std::vector<int> sorted = seq;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 0;
  const std::size_t n = seq.size();
  std::vector<std::size_t> target(n);
  for (std::size_t i = 0; i < n; ++i)
    target[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), seq[i]) - sorted.begin());
  std::vector<bool> seen(n, false);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = target[j]) seen[j] = true;
  }
  return ((n - cycles) % 2 == 0) ? 1 : -1;
}

/// Brute-force epsilon: the concatenated blocks must be a rearrangement of I.
inline int brute_epsilon(const std::vector<MultiIndex>& blocks, const MultiIndex& I) {
  std::vector<int> seq;
  for (const auto& b : blocks) {
    if (b.empty()) return 0;
    for (int i : b.indices()) seq.push_back(i);
  }
  std::vector<int> sorted = seq;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != I.indices()) return 0;
  return cycle_sign(seq);
}

/// Substitutes s^J -> theta^J; the theta^I coefficient is the reference value of D_I F(0).
inline SuperScalar grassmann_image(const SPolynomial& F) {
  return F.evaluate<SuperScalar>([](const MultiIndex& J) { return SuperScalar::generators(J); },
                                 [](const Rational& c) { return SuperScalar(c); });
}

/// Direct ring evaluation of a polynomial on superfield components.
inline SuperScalar evaluate_on(const YPolynomial& F, const Superfield& sf) {
  return F.evaluate<SuperScalar>([&](const int& v) { return sf.component(v); },
                                 [](const Rational& c) { return SuperScalar(c); });
}

/// S^J = s^J + Q^J - sum_I D_I Q^J(0) s^I: a random element of the origin-fixing group.
inline SelfMap random_tq_element(Random& rng, const DOperatorContext& ctx, int terms = 3) {
  SelfMap S;
  for (const auto& J : ctx.even_positive()) {
    SPolynomial Q = rng.s_polynomial(ctx.even_positive(), 3, terms, false);
    SPolynomial c = s_var(J) + Q;
    for (const auto& I : ctx.even_positive()) {
      const Rational v = d_op(ctx, I, Q);
      if (v != 0) c -= SPolynomial(v) * s_var(I);
    }
    S[J] = c;
  }
  return S;
}

}  // namespace testing_support
