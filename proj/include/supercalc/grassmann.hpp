#pragma once

// Sign-exact combinatorics of anticommuting generators.
//
// Generators are numbered 1..g. In a context with q source odd coordinates
// and L auxiliary odd parameters, indices 1..q are the theta generators and
// q+1..q+L are the eta generators. Every sign in the library is reported
// relative to the ascending generator order.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "supercalc/error.hpp"

namespace supercalc {

inline constexpr int kMaxGenerators = 63;

struct GeneratorSet {
  int q = 0;  ///< theta generators, indices 1..q
  int L = 0;  ///< auxiliary eta generators, indices q+1..q+L

  GeneratorSet() = default;
  GeneratorSet(int q_, int L_) : q(q_), L(L_) {
    if (q < 0 || L < 0) throw ContextError("generator counts must be non-negative");
    if (q + L > kMaxGenerators)
      throw ContextError("at most " + std::to_string(kMaxGenerators) + " generators are supported");
  }

  int g() const noexcept { return q + L; }
  bool is_theta(int index) const noexcept { return index >= 1 && index <= q; }
  bool contains(int index) const noexcept { return index >= 1 && index <= g(); }

  bool operator==(const GeneratorSet&) const = default;
};

/// Strictly increasing list of generator indices, stored as a bit set.
///
/// Ordering is lexicographic on the index lists, so () < (1) < (1,2) < (2).
class MultiIndex {
 public:
  MultiIndex() = default;

  MultiIndex(std::initializer_list<int> indices) : MultiIndex(std::vector<int>(indices)) {}

  /// Throws std::invalid_argument unless the list is strictly increasing in [1, 63].
  explicit MultiIndex(const std::vector<int>& indices) {
    int last = 0;
    for (int i : indices) {
      if (i <= last || i > kMaxGenerators)
        throw std::invalid_argument("multi-index must be strictly increasing within [1, 63]");
      mask_ |= bit(i);
      last = i;
    }
  }

  static MultiIndex from_mask(std::uint64_t mask) {
    MultiIndex m;
    m.mask_ = mask & ~std::uint64_t{1};
    return m;
  }

  /// All indices in [first, last].
  static MultiIndex range(int first, int last) {
    MultiIndex m;
    for (int i = first; i <= last; ++i) m.mask_ |= bit(i);
    return m;
  }

  std::uint64_t mask() const noexcept { return mask_; }
  int size() const noexcept { return std::popcount(mask_); }
  bool empty() const noexcept { return mask_ == 0; }
  int parity() const noexcept { return size() & 1; }
  bool is_even() const noexcept { return parity() == 0; }
  bool contains(int i) const noexcept { return i >= 1 && i <= kMaxGenerators && (mask_ & bit(i)); }
  int max_index() const noexcept { return empty() ? 0 : 63 - std::countl_zero(mask_); }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t m = mask_; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  bool disjoint(const MultiIndex& o) const noexcept { return (mask_ & o.mask_) == 0; }
  bool subset_of(const MultiIndex& o) const noexcept { return (mask_ & ~o.mask_) == 0; }
  MultiIndex unite(const MultiIndex& o) const noexcept { return from_mask(mask_ | o.mask_); }
  MultiIndex minus(const MultiIndex& o) const noexcept { return from_mask(mask_ & ~o.mask_); }

  bool operator==(const MultiIndex&) const = default;

  std::strong_ordering operator<=>(const MultiIndex& o) const noexcept {
    if (mask_ == o.mask_) return std::strong_ordering::equal;
    // Both lists agree below the lowest differing index p. The list holding p
    // is smaller exactly when the other list continues past p.
    const std::uint64_t diff = mask_ ^ o.mask_;
    const std::uint64_t low = diff & (~diff + 1);
    const std::uint64_t above = ~((low << 1) - 1);
    if (mask_ & low) {
      return (o.mask_ & above) ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return (mask_ & above) ? std::strong_ordering::greater : std::strong_ordering::less;
  }

 private:
  static constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << i; }
  std::uint64_t mask_ = 0;
};

inline std::string to_string(const MultiIndex& m) {
  std::string s = "(";
  bool first = true;
  for (int i : m.indices()) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + ")";
}

/// Result of a wedge concatenation: a normal-ordered index with sign, or zero.
struct SignedIndex {
  MultiIndex index;
  int sign = 0;  ///< -1 or +1, 0 for the zero element

  bool is_zero() const noexcept { return sign == 0; }
  static SignedIndex zero() { return {}; }
  bool operator==(const SignedIndex&) const = default;
};

/// theta^I theta^J = sign * theta^K with K the sorted union, or zero on a repeat.
inline SignedIndex concat_sign(const MultiIndex& I, const MultiIndex& J) {
  if (!I.disjoint(J)) return SignedIndex::zero();
  // Each j in J crosses every element of I that is larger than j.
  int crossings = 0;
  for (std::uint64_t m = J.mask(); m; m &= m - 1) {
    const std::uint64_t jbit = m & (~m + 1);
    crossings += std::popcount(I.mask() & ~((jbit << 1) - 1));
  }
  return {I.unite(J), (crossings & 1) ? -1 : 1};
}

/// Signature of a sequence of distinct integers relative to ascending order.
inline int permutation_sign(const std::vector<int>& sequence) {
  int inversions = 0;
  for (std::size_t a = 0; a < sequence.size(); ++a)
    for (std::size_t b = a + 1; b < sequence.size(); ++b)
      if (sequence[a] > sequence[b]) ++inversions;
  return (inversions & 1) ? -1 : 1;
}

/// Sign attached to splitting I into the ordered blocks I_1..I_n.
///
/// Zero unless the blocks are nonempty, pairwise disjoint and cover I exactly;
/// otherwise the signature of the concatenated block indices. The empty block
/// list gives +1 for I = () and 0 otherwise.
inline int epsilon(const std::vector<MultiIndex>& blocks, const MultiIndex& I) {
  if (blocks.empty()) return I.empty() ? 1 : 0;
  std::uint64_t seen = 0;
  std::vector<int> sequence;
  for (const auto& b : blocks) {
    if (b.empty() || (seen & b.mask())) return 0;
    seen |= b.mask();
    for (int i : b.indices()) sequence.push_back(i);
  }
  if (seen != I.mask()) return 0;
  return permutation_sign(sequence);
}

enum class ParityClass { all, even, odd, even_positive };

/// Multi-indices of degree k over g generators, lexicographic.
inline std::vector<MultiIndex> enumerate(int g, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > g) return out;
  std::vector<int> current;
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(current.size()) == k) {
      out.emplace_back(current);
      return;
    }
    const int remaining = k - static_cast<int>(current.size());
    for (int i = next; i <= g - remaining + 1; ++i) {
      current.push_back(i);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(1);
  return out;
}

/// Union over the degrees admitted by the class, ordered by degree then lexicographically.
inline std::vector<MultiIndex> enumerate(int g, ParityClass cls) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= g; ++k) {
    const bool keep = cls == ParityClass::all || (cls == ParityClass::even && k % 2 == 0) ||
                      (cls == ParityClass::odd && k % 2 == 1) ||
                      (cls == ParityClass::even_positive && k > 0 && k % 2 == 0);
    if (!keep) continue;
    auto level = enumerate(g, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// One ordered decomposition of a multi-index into nonempty even blocks.
struct Splitting {
  std::vector<MultiIndex> blocks;
  int sign = 1;
};

/// Every ordered tuple of nonempty even blocks whose disjoint union is I,
/// together with its epsilon sign. The empty index has the single empty splitting.
inline std::vector<Splitting> even_splittings(const MultiIndex& I) {
  std::vector<Splitting> out;
  std::vector<MultiIndex> current;
  std::function<void(std::uint64_t)> rec = [&](std::uint64_t remaining) {
    if (remaining == 0) {
      out.push_back({current, epsilon(current, I)});
      return;
    }
    // Nonempty submasks of the remaining indices with even popcount.
    for (std::uint64_t sub = remaining; sub; sub = (sub - 1) & remaining) {
      if (std::popcount(sub) % 2 != 0) continue;
      current.push_back(MultiIndex::from_mask(sub));
      rec(remaining & ~sub);
      current.pop_back();
    }
  };
  if (I.parity() != 0) return out;
  rec(I.mask());
  return out;
}

}  // namespace supercalc

template <>
struct std::hash<supercalc::MultiIndex> {
  std::size_t operator()(const supercalc::MultiIndex& m) const noexcept {
    return std::hash<std::uint64_t>{}(m.mask());
  }
};
