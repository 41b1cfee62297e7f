#pragma once
//
// Differential operators on forms.
//
// Pointwise operators act on full-component jet tensors at a PointGeometry;
// LocalOperators bundles them for one form at one point and caches the
// intermediate tensors. Fourier operators act mode by mode on FourierForm.
//
// Index conventions (all components with respect to coordinate coframes):
//   (dω)_{i0…ir}   = Σ_α (−1)^α ∂_{iα} ω_{i0…îα…ir}
//   (∇T)_{j K}     = ∂_j T_K − Σ_α Γ^m_{j kα} T_{K[kα→m]}
//   (d*ω)_{I}      = −g^{jk} (∇ω)_{j k I}
//   Δ̄ω            = −g^{jk} (∇∇ω)_{j k ·}
//   F(ω)_K         = Σ_α Ric_{kα}^l ω_{K[kα→l]} − Σ_{α≠β} g^{ij} R^l_{i kα kβ} ω_{K[kα→j, kβ→l]}
//   □              = 1/(r(r+1)) (Δ̄ − 1/(r+1) d*d − 1/(n−r+1) dd*)
//
// ∇ω is split into D1ω = dω/(r+1) (placed in the (j;K) slots of the full
// antisymmetric tensor), D2ω = −1/(n−r+1) e_j♭∧d*ω and D3ω = ∇ω − D1ω − D2ω;
// the three parts are pointwise orthogonal and D3ω = 0 exactly on conformal
// Killing forms.

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ckforms/error.hpp"
#include "ckforms/forms.hpp"
#include "ckforms/geometry.hpp"
#include "ckforms/linalg.hpp"
#include "ckforms/multi_index.hpp"
#include "ckforms/tensor.hpp"

namespace ckforms {

enum class TachibanaRoute {
  Rough,        // from Δ̄, d*d and dd*
  Weitzenbock,  // from Δ − F, d*d and dd*
};

inline const char* route_name(TachibanaRoute r) { return r == TachibanaRoute::Rough ? "rough" : "weitzenbock"; }

// ---------------------------------------------------------------------------
// Pointwise building blocks

/// Exterior derivative of an antisymmetric jet tensor.
inline JetTensor exterior_d(const JetTensor& w) {
  const int n = w.dim(), r = w.rank();
  if (r >= n) throw DimensionError("exterior derivative of a top-degree form");
  if (w.order() < 1) throw InternalError("exterior derivative needs first derivatives");
  std::vector<Jet> inc;
  std::vector<int> rest(r);
  for (const MultiIndex& I : enumerate_multiindices(n, r + 1)) {
    Jet acc;
    for (int a = 0; a <= r; ++a) {
      int t = 0;
      for (int b = 0; b <= r; ++b)
        if (b != a) rest[t++] = I[b];
      const Jet term = w.at(rest.data()).partial(I[a]);
      if (a % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    acc.order = w.order() - 1;
    inc.push_back(acc);
  }
  return form_from_increasing(n, r + 1, inc);
}

/// Levi-Civita covariant derivative of a covariant tensor; the new index is
/// first.
inline JetTensor covariant_derivative(const PointGeometry& geo, const JetTensor& t) {
  const int n = t.dim(), q = t.rank();
  if (t.order() < 1) throw InternalError("covariant derivative needs first derivatives");
  JetTensor out(n, q + 1);
  std::vector<int> idx(q + 1), src(q);
  for (int f = 0; f < out.shape.size(); ++f) {
    idx = out.shape.unflat(f);
    const int j = idx[0];
    std::copy(idx.begin() + 1, idx.end(), src.begin());
    Jet acc = t.at(src).partial(j);
    for (int a = 0; a < q; ++a) {
      const int ka = src[a];
      for (int m = 0; m < n; ++m) {
        const Jet& G = geo.gamma(m, j, ka);
        if (G.v == 0.0 && G.order >= 1) {
          bool zero = true;
          for (int b = 0; b < n && zero; ++b) zero = G.g[b] == 0.0;
          if (zero) continue;
        }
        src[a] = m;
        acc -= G * t.at(src);
      }
      src[a] = ka;
    }
    out.c[f] = acc;
  }
  return out;
}

/// −g^{jk} T_{j k ·}: contraction of the first two slots with the inverse
/// metric, negated.
inline JetTensor negative_trace(const PointGeometry& geo, const JetTensor& t) {
  const int n = t.dim(), q = t.rank();
  JetTensor out(n, q - 2);
  std::vector<int> idx(q);
  for (int f = 0; f < out.shape.size(); ++f) {
    const auto tail = out.shape.unflat(f);
    std::copy(tail.begin(), tail.end(), idx.begin() + 2);
    Jet acc;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        idx[0] = j;
        idx[1] = k;
        acc -= geo.ginv(j, k) * t.at(idx);
      }
    out.c[f] = acc;
  }
  return out;
}

/// Pointwise Hodge star with the metric at geo.
inline JetTensor hodge_star(const PointGeometry& geo, const JetTensor& w) {
  const int n = w.dim(), r = w.rank();
  const auto src = enumerate_multiindices(n, r);
  const auto dst = enumerate_multiindices(n, n - r);
  std::vector<Jet> inc;
  for (const MultiIndex& J : dst) {
    const MultiIndex Jc = complement(J, n);
    Jet raised;
    for (const MultiIndex& L : src) raised += minor_det(geo.inverse_metric(), Jc.begin(), L.begin(), r) * w.at(L.begin());
    Jet v = geo.volume_density() * raised;
    if (concat_sign(Jc, J) < 0) v *= -1.0;
    inc.push_back(v);
  }
  return form_from_increasing(n, n - r, inc);
}

/// Curvature term of the Weitzenböck formula (values only).
inline JetTensor weitzenbock_term(const PointGeometry& geo, const JetTensor& w) {
  const int n = w.dim(), r = w.rank();
  const CurvatureAtPoint& c = geo.curvature();
  std::vector<double> ric_mixed(static_cast<std::size_t>(n) * n, 0.0);  // Ric_k^l at [k*n+l]
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) ric_mixed[k * n + l] += geo.ginv(l, m).v * c.ricci(k, m);
  // S^{jl}_{ab} = g^{ij} R^l_{i a b}
  std::vector<double> S(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto s_at = [n](int j, int l, int a, int b) { return ((j * n + l) * n + a) * n + b; };
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double v = 0.0;
          for (int i = 0; i < n; ++i) v += geo.ginv(i, j).v * geo.riemann_up(l, i, a, b);
          S[s_at(j, l, a, b)] = v;
        }
  JetTensor out(n, r);
  std::vector<int> K(r), src(r);
  for (int f = 0; f < out.shape.size(); ++f) {
    K = out.shape.unflat(f);
    double acc = 0.0;
    for (int a = 0; a < r; ++a) {
      src = K;
      for (int l = 0; l < n; ++l) {
        src[a] = l;
        acc += ric_mixed[K[a] * n + l] * w.at(src).v;
      }
    }
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        if (a == b) continue;
        src = K;
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) {
            src[a] = j;
            src[b] = l;
            acc -= S[s_at(j, l, K[a], K[b])] * w.at(src).v;
          }
      }
    out.c[f] = Jet(acc);
    out.c[f].order = 0;
  }
  return out;
}

/// (e_j♭ ∧ θ) arranged as a (1, r) tensor with the free covector index first.
inline JetTensor metric_wedge(const PointGeometry& geo, const JetTensor& theta) {
  const int n = theta.dim(), r = theta.rank() + 1;
  JetTensor out(n, r + 1);
  std::vector<int> idx, rest(r - 1);
  for (int f = 0; f < out.shape.size(); ++f) {
    idx = out.shape.unflat(f);
    const int j = idx[0];
    Jet acc;
    for (int a = 0; a < r; ++a) {
      int t = 0;
      for (int b = 0; b < r; ++b)
        if (b != a) rest[t++] = idx[1 + b];
      const Jet term = geo.g(j, idx[1 + a]) * theta.at(rest);
      if (a % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    out.c[f] = acc;
  }
  return out;
}

/// g-inner product of two covariant tensors of equal rank (values).
inline double tensor_inner(const PointGeometry& geo, const JetTensor& a, const JetTensor& b) {
  const int n = a.dim(), q = a.rank();
  // Raise every slot of b, then contract.
  std::vector<double> raised(b.c.size());
  for (std::size_t f = 0; f < b.c.size(); ++f) raised[f] = b.c[f].v;
  std::vector<double> next(raised.size());
  for (int slot = 0; slot < q; ++slot) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int f = 0; f < b.shape.size(); ++f) {
      auto idx = b.shape.unflat(f);
      const int i = idx[slot];
      for (int m = 0; m < n; ++m) {
        idx[slot] = m;
        next[f] += geo.ginv(i, m).v * raised[b.shape.flat(idx)];
      }
    }
    raised.swap(next);
  }
  double s = 0.0;
  for (std::size_t f = 0; f < raised.size(); ++f) s += a.c[f].v * raised[f];
  return s;
}

inline double tensor_norm(const PointGeometry& geo, const JetTensor& a) {
  return std::sqrt(std::max(0.0, tensor_inner(geo, a, a)));
}

// ---------------------------------------------------------------------------
// All operators for one form at one point

class LocalOperators {
 public:
  LocalOperators(const PointGeometry& geo, JetTensor omega) : geo_(geo), w_(std::move(omega)) {
    if (w_.dim() != geo.dim()) throw DimensionError("form and chart dimensions differ");
  }
  LocalOperators(const PointGeometry& geo, const ExprForm& omega) : LocalOperators(geo, omega.jet_at(geo.point())) {}

  int dim() const noexcept { return w_.dim(); }
  int degree() const noexcept { return w_.rank(); }
  const PointGeometry& geometry() const noexcept { return geo_; }
  const JetTensor& form() const noexcept { return w_; }

  const JetTensor& d() const {
    if (!d_) d_ = exterior_d(w_);
    return *d_;
  }
  const JetTensor& nabla() const {
    if (!nabla_) nabla_ = covariant_derivative(geo_, w_);
    return *nabla_;
  }
  const JetTensor& codifferential() const {
    require_positive_degree();
    if (!delta_) delta_ = negative_trace(geo_, nabla());
    return *delta_;
  }
  /// d* as (−1)^{n(r+1)+1} *d*.
  JetTensor codifferential_by_star() const {
    require_positive_degree();
    const int n = dim(), r = degree();
    JetTensor s = hodge_star(geo_, exterior_d(hodge_star(geo_, w_)));
    if ((n * (r + 1) + 1) % 2) s *= -1.0;
    return s;
  }
  const JetTensor& d_codifferential() const {
    if (!d_delta_) {
      if (degree() == 0)
        d_delta_ = JetTensor(dim(), 0);
      else
        d_delta_ = exterior_d(codifferential());
    }
    return *d_delta_;
  }
  const JetTensor& codifferential_d() const {
    if (!delta_d_) {
      if (degree() == dim())
        delta_d_ = JetTensor(dim(), degree());
      else
        delta_d_ = negative_trace(geo_, covariant_derivative(geo_, d()));
    }
    return *delta_d_;
  }
  JetTensor hodge_laplacian() const { return d_codifferential() + codifferential_d(); }
  const JetTensor& rough_laplacian() const {
    if (!rough_) rough_ = negative_trace(geo_, covariant_derivative(geo_, nabla()));
    return *rough_;
  }
  const JetTensor& weitzenbock() const {
    if (!weitz_) weitz_ = weitzenbock_term(geo_, w_);
    return *weitz_;
  }
  JetTensor tachibana(TachibanaRoute route) const {
    require_interior_degree();
    const int n = dim(), r = degree();
    JetTensor base = route == TachibanaRoute::Rough ? rough_laplacian() : hodge_laplacian() - weitzenbock();
    base -= (1.0 / (r + 1)) * codifferential_d();
    base -= (1.0 / (n - r + 1)) * d_codifferential();
    base *= 1.0 / (r * (r + 1));
    return base;
  }
  JetTensor star() const { return hodge_star(geo_, w_); }

  /// D1ω, D2ω, D3ω as (1, r) tensors.
  JetTensor basis_part(int which) const {
    require_interior_degree();
    const int n = dim(), r = degree();
    switch (which) {
      case 1:
        return (1.0 / (r + 1)) * d();
      case 2:
        return (-1.0 / (n - r + 1)) * metric_wedge(geo_, codifferential());
      case 3:
        return nabla() - basis_part(1) - basis_part(2);
      default:
        throw DimensionError("basis operator index must be 1, 2 or 3");
    }
  }

 private:
  void require_positive_degree() const {
    if (degree() < 1) throw DimensionError("codifferential of a 0-form");
  }
  void require_interior_degree() const {
    if (degree() < 1 || degree() > dim() - 1)
      throw DimensionError("operator needs 1 <= r <= n-1 (got r=" + std::to_string(degree()) + ")");
  }

  const PointGeometry& geo_;
  JetTensor w_;
  mutable std::optional<JetTensor> d_, nabla_, delta_, d_delta_, delta_d_, rough_, weitz_;
};

// ---------------------------------------------------------------------------
// Operators on closed-form forms, evaluated at sample points

enum class Operator { D, Codifferential, CodifferentialByStar, HodgeLaplacian, RoughLaplacian, Weitzenbock, Tachibana, Star };

inline const char* operator_name(Operator op) {
  switch (op) {
    case Operator::D: return "d";
    case Operator::Codifferential: return "codifferential";
    case Operator::CodifferentialByStar: return "codifferential";
    case Operator::HodgeLaplacian: return "hodge laplacian";
    case Operator::RoughLaplacian: return "rough laplacian";
    case Operator::Weitzenbock: return "weitzenbock term";
    case Operator::Tachibana: return "tachibana laplacian";
    case Operator::Star: return "hodge star";
  }
  return "?";
}

/// Increasing-index component values of a form at a list of points.
struct SampledForm {
  int degree = 0;
  std::vector<Point> points;
  std::vector<std::vector<double>> values;
};

template <typename Form>
struct OperatorResult {
  Form form;
  std::string provenance;
};

inline int output_degree(Operator op, int n, int r) {
  switch (op) {
    case Operator::D: return r + 1;
    case Operator::Codifferential:
    case Operator::CodifferentialByStar: return r - 1;
    case Operator::Star: return n - r;
    default: return r;
  }
}

inline JetTensor apply_local(Operator op, const LocalOperators& L, TachibanaRoute route) {
  switch (op) {
    case Operator::D: return L.d();
    case Operator::Codifferential: return L.codifferential();
    case Operator::CodifferentialByStar: return L.codifferential_by_star();
    case Operator::HodgeLaplacian: return L.hodge_laplacian();
    case Operator::RoughLaplacian: return L.rough_laplacian();
    case Operator::Weitzenbock: return L.weitzenbock();
    case Operator::Tachibana: return L.tachibana(route);
    case Operator::Star: return L.star();
  }
  throw InternalError("unknown operator");
}

inline OperatorResult<SampledForm> apply(Operator op, const ExprForm& w, const std::vector<Point>& points,
                                         TachibanaRoute route = TachibanaRoute::Rough) {
  const int n = w.dim(), r = w.degree();
  if (op == Operator::D && r >= n) throw DimensionError("exterior derivative of a top-degree form");
  if ((op == Operator::Codifferential || op == Operator::CodifferentialByStar) && r < 1)
    throw DimensionError("codifferential of a 0-form");
  if ((op == Operator::Weitzenbock || op == Operator::Tachibana) && (r < 1 || r > n - 1))
    throw DimensionError("operator needs 1 <= r <= n-1");
  OperatorResult<SampledForm> out;
  out.form.degree = output_degree(op, n, r);
  out.provenance = operator_name(op);
  if (op == Operator::Tachibana) out.provenance += std::string(" via ") + route_name(route);
  if (op == Operator::Codifferential) out.provenance += " via divergence";
  if (op == Operator::CodifferentialByStar) out.provenance += " via star";
  for (const Point& p : points) {
    const PointGeometry geo(*w.chart(), p);
    const LocalOperators L(geo, w);
    out.form.points.push_back(p);
    out.form.values.push_back(increasing_values(apply_local(op, L, route)));
  }
  return out;
}

/// Full (1, r) components of D1ω, D2ω or D3ω at p, row-major with the
/// covector index first.
inline std::vector<double> apply_D(int which, const ExprForm& w, std::span<const double> p) {
  const PointGeometry geo(*w.chart(), p);
  const LocalOperators L(geo, w);
  const JetTensor t = L.basis_part(which);
  std::vector<double> v;
  for (const Jet& x : t.c) v.push_back(x.v);
  return v;
}

/// (∇ω)_{j;I} at p, same layout as apply_D.
inline std::vector<double> covariant_derivative(const ExprForm& w, std::span<const double> p) {
  const PointGeometry geo(*w.chart(), p);
  const JetTensor t = covariant_derivative(geo, w.jet_at(p));
  std::vector<double> v;
  for (const Jet& x : t.c) v.push_back(x.v);
  return v;
}

// ---------------------------------------------------------------------------
// Symbolic exterior derivative

inline ExprForm exterior_d(const ExprForm& w) {
  const int n = w.dim(), r = w.degree();
  if (r >= n) throw DimensionError("exterior derivative of a top-degree form");
  std::vector<Expression> out;
  for (const MultiIndex& I : enumerate_multiindices(n, r + 1)) {
    Expression acc;
    for (int a = 0; a <= r; ++a) {
      std::vector<int> rest;
      for (int b = 0; b <= r; ++b)
        if (b != a) rest.push_back(I[b]);
      const Expression term = differentiate(w.component(MultiIndex(rest)), I[a] + 1);
      acc = a % 2 == 0 ? acc + term : acc - term;
    }
    out.push_back(acc);
  }
  return ExprForm(w.chart(), r + 1, std::move(out));
}

/// d of a scalar function as a 1-form.
inline ExprForm exterior_d(ChartPtr chart, const Expression& f) {
  return exterior_d(ExprForm(std::move(chart), 0, {f}));
}

// ---------------------------------------------------------------------------
// Fourier operators on flat tori

namespace detail {

inline Eigen::VectorXcd mode_vector(const FourierForm& w, int f) {
  Eigen::VectorXcd v(w.component_count());
  for (int p = 0; p < w.component_count(); ++p) v[p] = w.coeff(f, p);
  return v;
}

template <typename BlockFn>
FourierForm map_modes(const FourierForm& w, int out_degree, BlockFn block) {
  FourierForm out(w.dim(), out_degree, w.band(), w.periods());
  for (int f = 0; f < w.frequency_count(); ++f) {
    const Eigen::VectorXcd v = block(w.wave_vector(f)) * mode_vector(w, f);
    for (int p = 0; p < out.component_count(); ++p) out.coeff(f, p) = v[p];
  }
  return out;
}

}  // namespace detail

/// Per-mode matrix of d on r-forms: exterior multiplication by iξ.
inline Eigen::MatrixXcd d_block(int n, int r, std::span<const double> xi) {
  return std::complex<double>(0.0, 1.0) * exterior_multiplication(n, r, xi).cast<std::complex<double>>();
}

/// Per-mode matrix of d* on r-forms: adjoint of the d-block at degree r−1.
inline Eigen::MatrixXcd codifferential_block(int n, int r, std::span<const double> xi) {
  return d_block(n, r - 1, xi).adjoint();
}

inline Eigen::MatrixXcd hodge_laplacian_block(int n, int r, std::span<const double> xi) {
  const auto size = static_cast<Eigen::Index>(binomial(n, r));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  if (r < n) {
    const Eigen::MatrixXcd D = d_block(n, r, xi);
    m += D.adjoint() * D;
  }
  if (r > 0) {
    const Eigen::MatrixXcd D = d_block(n, r - 1, xi);
    m += D * D.adjoint();
  }
  return m;
}

inline Eigen::MatrixXcd tachibana_block(int n, int r, std::span<const double> xi) {
  if (r < 1 || r > n - 1) throw DimensionError("tachibana laplacian needs 1 <= r <= n-1");
  double k2 = 0.0;
  for (int a = 0; a < n; ++a) k2 += xi[a] * xi[a];
  const auto size = static_cast<Eigen::Index>(binomial(n, r));
  const Eigen::MatrixXcd Du = d_block(n, r, xi), Dl = d_block(n, r - 1, xi);
  Eigen::MatrixXcd m = k2 * Eigen::MatrixXcd::Identity(size, size);
  m -= (1.0 / (r + 1)) * (Du.adjoint() * Du);
  m -= (1.0 / (n - r + 1)) * (Dl * Dl.adjoint());
  return m / static_cast<double>(r * (r + 1));
}

/// Flat Hodge star as a constant matrix.
inline Eigen::MatrixXcd star_matrix(int n, int r) {
  const auto src = enumerate_multiindices(n, r);
  const auto dst = enumerate_multiindices(n, n - r);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
  for (std::size_t j = 0; j < dst.size(); ++j) {
    const MultiIndex Jc = complement(dst[j], n);
    m(static_cast<Eigen::Index>(j), position(Jc, n)) = static_cast<double>(concat_sign(Jc, dst[j]));
  }
  return m;
}

inline OperatorResult<FourierForm> apply(Operator op, const FourierForm& w) {
  const int n = w.dim(), r = w.degree();
  auto result = [&](FourierForm f, std::string tag) { return OperatorResult<FourierForm>{std::move(f), std::move(tag)}; };
  switch (op) {
    case Operator::D:
      if (r >= n) throw DimensionError("exterior derivative of a top-degree form");
      return result(detail::map_modes(w, r + 1, [&](const auto& xi) { return d_block(n, r, xi); }), "d via modes");
    case Operator::Codifferential:
    case Operator::CodifferentialByStar:
      if (r < 1) throw DimensionError("codifferential of a 0-form");
      return result(detail::map_modes(w, r - 1, [&](const auto& xi) { return codifferential_block(n, r, xi); }),
                    "codifferential via modes");
    case Operator::HodgeLaplacian:
    case Operator::RoughLaplacian:
      return result(detail::map_modes(w, r, [&](const auto& xi) { return hodge_laplacian_block(n, r, xi); }),
                    std::string(operator_name(op)) + " via modes");
    case Operator::Weitzenbock:
      if (r < 1 || r > n - 1) throw DimensionError("operator needs 1 <= r <= n-1");
      return result(FourierForm(n, r, w.band(), w.periods()), "weitzenbock term via modes");
    case Operator::Tachibana:
      return result(detail::map_modes(w, r, [&](const auto& xi) { return tachibana_block(n, r, xi); }),
                    "tachibana laplacian via modes");
    case Operator::Star: {
      const Eigen::MatrixXcd S = star_matrix(n, r);
      return result(detail::map_modes(w, n - r, [&](const auto&) { return S; }), "hodge star via modes");
    }
  }
  throw InternalError("unknown operator");
}

inline FourierForm exterior_d(const FourierForm& w) { return apply(Operator::D, w).form; }
inline FourierForm codifferential(const FourierForm& w) { return apply(Operator::Codifferential, w).form; }
inline FourierForm hodge_laplacian(const FourierForm& w) { return apply(Operator::HodgeLaplacian, w).form; }
inline FourierForm tachibana_laplacian(const FourierForm& w) { return apply(Operator::Tachibana, w).form; }
inline FourierForm hodge_star(const FourierForm& w) { return apply(Operator::Star, w).form; }

}  // namespace ckforms
