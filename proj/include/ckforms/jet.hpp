#pragma once
//
// Second-order jets: value, gradient and Hessian of a scalar field at a point.
//
// Jets are seeded from exact symbolic derivatives and then combined with the
// chain rule, so every quantity assembled from metric and form components
// (inverse metric, Christoffel symbols, codifferentials, ...) carries exact
// derivatives up to round-off. `order` tracks how many derivatives are still
// valid: taking a partial derivative consumes one.

#include <algorithm>
#include <array>
#include <cmath>

namespace ckforms {

inline constexpr int kMaxDim = 5;

struct Jet {
  int order = 2;
  double v = 0.0;
  std::array<double, kMaxDim> g{};
  std::array<double, kMaxDim * kMaxDim> h{};

  Jet() = default;
  explicit Jet(double value) : v(value) {}

  static Jet constant(double value) {
    Jet j;
    j.v = value;
    return j;
  }

  double hess(int i, int k) const { return h[i * kMaxDim + k]; }

  /// ∂_i of this jet; one order is lost.
  Jet partial(int i) const {
    Jet r;
    r.order = std::max(order - 1, -1);
    if (order >= 1) r.v = g[i];
    if (order >= 2)
      for (int k = 0; k < kMaxDim; ++k) r.g[k] = h[i * kMaxDim + k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    order = std::min(order, o.order);
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) g[i] += o.g[i];
    for (int i = 0; i < kMaxDim * kMaxDim; ++i) h[i] += o.h[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    order = std::min(order, o.order);
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) g[i] -= o.g[i];
    for (int i = 0; i < kMaxDim * kMaxDim; ++i) h[i] -= o.h[i];
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    for (double& x : g) x *= s;
    for (double& x : h) x *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.order = std::min(a.order, b.order);
    r.v = a.v * b.v;
    if (r.order >= 1)
      for (int i = 0; i < kMaxDim; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
    if (r.order >= 2)
      for (int i = 0; i < kMaxDim; ++i)
        for (int k = 0; k < kMaxDim; ++k) {
          const int ik = i * kMaxDim + k;
          r.h[ik] = a.v * b.h[ik] + b.v * a.h[ik] + a.g[i] * b.g[k] + a.g[k] * b.g[i];
        }
    return r;
  }

  /// Composition with a scalar function given its value and first two
  /// derivatives at a.v.
  Jet compose(double f0, double f1, double f2) const {
    Jet r;
    r.order = order;
    r.v = f0;
    if (order >= 1)
      for (int i = 0; i < kMaxDim; ++i) r.g[i] = f1 * g[i];
    if (order >= 2)
      for (int i = 0; i < kMaxDim; ++i)
        for (int k = 0; k < kMaxDim; ++k) {
          const int ik = i * kMaxDim + k;
          r.h[ik] = f1 * h[ik] + f2 * g[i] * g[k];
        }
    return r;
  }

  friend Jet inverse(const Jet& a) {
    const double inv = 1.0 / a.v;
    return a.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
  friend Jet sqrt(const Jet& a) {
    const double s = std::sqrt(a.v);
    return a.compose(s, 0.5 / s, -0.25 / (s * a.v));
  }
};

}  // namespace ckforms
