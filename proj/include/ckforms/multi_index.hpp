#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ckforms/error.hpp"
#include "ckforms/jet.hpp"

namespace ckforms {

/// Strictly increasing tuple of coordinate indices addressing one component
/// of an r-form. Indices are stored 0-based; text I/O is 1-based.
class MultiIndex {
 public:
  MultiIndex() = default;

  /// From 0-based indices; throws unless strictly increasing.
  explicit MultiIndex(const std::vector<int>& zero_based) {
    if (zero_based.size() > static_cast<std::size_t>(kMaxDim))
      throw DimensionError("multi-index longer than supported dimension");
    for (std::size_t a = 0; a < zero_based.size(); ++a) {
      if (zero_based[a] < 0) throw DimensionError("negative index in multi-index");
      if (a > 0 && zero_based[a] <= zero_based[a - 1])
        throw DimensionError("multi-index must be strictly increasing");
      idx_[a] = zero_based[a];
    }
    size_ = static_cast<int>(zero_based.size());
  }

  int degree() const noexcept { return size_; }
  int operator[](int a) const noexcept { return idx_[a]; }
  const int* begin() const noexcept { return idx_.data(); }
  const int* end() const noexcept { return idx_.data() + size_; }
  bool contains(int i) const noexcept { return std::find(begin(), end(), i) != end(); }

  std::vector<int> to_vector() const { return {begin(), end()}; }

  /// "1,2" style, 1-based.
  std::string to_string() const {
    std::string s;
    for (int a = 0; a < size_; ++a) {
      if (a) s += ',';
      s += std::to_string(idx_[a] + 1);
    }
    return s;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::array<int, kMaxDim> idx_{};
  int size_ = 0;
};

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline long long factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// All strictly increasing r-tuples over {0..n-1}, lexicographic.
inline std::vector<MultiIndex> enumerate_multiindices(int n, int r) {
  if (n < 0 || n > kMaxDim) throw DimensionError("dimension out of range: " + std::to_string(n));
  if (r < 0 || r > n) throw DimensionError("degree " + std::to_string(r) + " out of range for n=" + std::to_string(n));
  std::vector<MultiIndex> out;
  std::vector<int> cur(r);
  for (int a = 0; a < r; ++a) cur[a] = a;
  for (;;) {
    out.emplace_back(cur);
    int a = r - 1;
    while (a >= 0 && cur[a] == n - r + a) --a;
    if (a < 0) break;
    ++cur[a];
    for (int b = a + 1; b < r; ++b) cur[b] = cur[b - 1] + 1;
  }
  return out;
}

/// Position of `I` in enumerate_multiindices(n, I.degree()).
inline int position(const MultiIndex& I, int n) {
  // Combinatorial number system, lexicographic variant.
  const int r = I.degree();
  int pos = 0, prev = -1;
  for (int a = 0; a < r; ++a) {
    for (int v = prev + 1; v < I[a]; ++v) pos += static_cast<int>(binomial(n - v - 1, r - a - 1));
    prev = I[a];
  }
  return pos;
}

/// Sorts `t` in place; returns the permutation sign, or 0 on a repeated index.
inline int sort_with_sign(std::vector<int>& t) {
  int sign = 1;
  for (std::size_t i = 1; i < t.size(); ++i)
    for (std::size_t j = i; j > 0 && t[j - 1] >= t[j]; --j) {
      if (t[j - 1] == t[j]) return 0;
      std::swap(t[j - 1], t[j]);
      sign = -sign;
    }
  return sign;
}

/// Complement of I in {0..n-1}, increasing.
inline MultiIndex complement(const MultiIndex& I, int n) {
  std::vector<int> c;
  for (int i = 0; i < n; ++i)
    if (!I.contains(i)) c.push_back(i);
  return MultiIndex(c);
}

/// Sign of the permutation (I, J) of {0..n-1}, or 0 if they overlap.
inline int concat_sign(const MultiIndex& I, const MultiIndex& J) {
  std::vector<int> t = I.to_vector();
  t.insert(t.end(), J.begin(), J.end());
  return sort_with_sign(t);
}

/// Flat addressing of full (not necessarily antisymmetric) rank-k arrays
/// over {0..n-1}^k, row-major.
struct Shape {
  int n = 0;
  int rank = 0;

  int size() const {
    int s = 1;
    for (int a = 0; a < rank; ++a) s *= n;
    return s;
  }
  int flat(const int* idx) const {
    int f = 0;
    for (int a = 0; a < rank; ++a) f = f * n + idx[a];
    return f;
  }
  int flat(const std::vector<int>& idx) const { return flat(idx.data()); }
  std::vector<int> unflat(int f) const {
    std::vector<int> idx(rank);
    for (int a = rank - 1; a >= 0; --a) {
      idx[a] = f % n;
      f /= n;
    }
    return idx;
  }
};

}  // namespace ckforms
