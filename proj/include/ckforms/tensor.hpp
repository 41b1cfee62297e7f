#pragma once
//
// Full-component covariant tensors of jets at a point. Forms are stored here
// with all n^r components (antisymmetric), which keeps every contraction a
// plain sum; conversion to and from increasing multi-index storage happens at
// the boundary.

#include <cmath>
#include <vector>

#include "ckforms/jet.hpp"
#include "ckforms/multi_index.hpp"

namespace ckforms {

struct JetTensor {
  Shape shape;
  std::vector<Jet> c;

  JetTensor() = default;
  JetTensor(int n, int rank) : shape{n, rank}, c(static_cast<std::size_t>(Shape{n, rank}.size())) {}

  int dim() const noexcept { return shape.n; }
  int rank() const noexcept { return shape.rank; }
  Jet& at(const int* idx) { return c[shape.flat(idx)]; }
  const Jet& at(const int* idx) const { return c[shape.flat(idx)]; }
  Jet& at(const std::vector<int>& idx) { return c[shape.flat(idx)]; }
  const Jet& at(const std::vector<int>& idx) const { return c[shape.flat(idx)]; }

  JetTensor& operator+=(const JetTensor& o) {
    for (std::size_t a = 0; a < c.size(); ++a) c[a] += o.c[a];
    return *this;
  }
  JetTensor& operator-=(const JetTensor& o) {
    for (std::size_t a = 0; a < c.size(); ++a) c[a] -= o.c[a];
    return *this;
  }
  JetTensor& operator*=(double s) {
    for (Jet& x : c) x *= s;
    return *this;
  }
  friend JetTensor operator+(JetTensor a, const JetTensor& b) { return a += b; }
  friend JetTensor operator-(JetTensor a, const JetTensor& b) { return a -= b; }
  friend JetTensor operator*(double s, JetTensor a) { return a *= s; }

  /// Lowest derivative order still valid across all components.
  int order() const {
    int o = 2;
    for (const Jet& x : c) o = std::min(o, x.order);
    return o;
  }
};

/// Antisymmetric full tensor from increasing-index components.
inline JetTensor form_from_increasing(int n, int r, const std::vector<Jet>& inc) {
  JetTensor t(n, r);
  const Shape& s = t.shape;
  for (int f = 0; f < s.size(); ++f) {
    std::vector<int> idx = s.unflat(f);
    const int sign = sort_with_sign(idx);
    if (sign == 0) continue;
    const int pos = position(MultiIndex(idx), n);
    t.c[f] = inc[pos];
    if (sign < 0) t.c[f] *= -1.0;
  }
  return t;
}

/// Increasing-index components (values only) of an antisymmetric tensor.
inline std::vector<double> increasing_values(const JetTensor& t) {
  std::vector<double> out;
  for (const MultiIndex& I : enumerate_multiindices(t.dim(), t.rank())) out.push_back(t.at(I.begin()).v);
  return out;
}

inline std::vector<Jet> increasing_jets(const JetTensor& t) {
  std::vector<Jet> out;
  for (const MultiIndex& I : enumerate_multiindices(t.dim(), t.rank())) out.push_back(t.at(I.begin()));
  return out;
}

/// max |component| over all full components (values).
inline double sup_norm(const JetTensor& t) {
  double m = 0.0;
  for (const Jet& x : t.c) m = std::max(m, std::abs(x.v));
  return m;
}

}  // namespace ckforms
