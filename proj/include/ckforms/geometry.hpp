#pragma once
//
// Model Riemannian charts and the pointwise geometry derived from them.
//
// Curvature sign convention (reported in every CLI document):
//   R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z,   R(X,Y,Z,W) = g(R(X,Y)Z, W),
//   K(X,Y)  = R(X,Y,Y,X) / (|X|²|Y|² − g(X,Y)²),
//   Ric(Y,Z) = trace(X ↦ R(X,Y)Z),  s = g^{jk} Ric_jk.
// With it the round sphere has K = C > 0 and Ric = (n−1)C g.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ckforms/error.hpp"
#include "ckforms/expr.hpp"
#include "ckforms/jet.hpp"
#include "ckforms/linalg.hpp"

namespace ckforms {

inline constexpr const char* kCurvatureConvention =
    "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; R(X,Y,Z,W) = g(R(X,Y)Z,W); "
    "K(X,Y) = R(X,Y,Y,X)/(|X|^2|Y|^2 - g(X,Y)^2); Ric(Y,Z) = tr(X -> R(X,Y)Z); s = g^jk Ric_jk";

enum class Model { FlatTorus, RoundSphere, PoincareBall, ConformallyFlat, Custom };

inline const char* model_name(Model m) {
  switch (m) {
    case Model::FlatTorus: return "flat-torus";
    case Model::RoundSphere: return "round-sphere";
    case Model::PoincareBall: return "poincare-ball";
    case Model::ConformallyFlat: return "conformally-flat";
    case Model::Custom: return "custom";
  }
  return "custom";
}

/// Coordinate box with per-axis periodicity and an optional ball constraint
/// (|x| < max_radius when max_radius > 0).
struct Domain {
  std::vector<double> lo, hi;
  std::vector<bool> periodic;
  double max_radius = 0.0;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(std::span<const double> p) const {
    if (p.size() != lo.size()) return false;
    double r2 = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (!std::isfinite(p[a])) return false;
      if (!periodic[a] && (p[a] <= lo[a] || p[a] >= hi[a])) return false;
      r2 += p[a] * p[a];
    }
    return max_radius <= 0.0 || std::sqrt(r2) < max_radius;
  }
};

using Point = std::vector<double>;

/// A single coordinate chart with metric components given as expressions.
/// Immutable after construction.
class MetricChart {
 public:
  struct Label {
    Model model = Model::Custom;
    double curvature = 0.0;           // C for sphere/ball
    Expression conformal_exponent{};  // f for conformally-flat, g = e^{2f} δ
  };

  MetricChart(int n, Domain domain, SquareMatrix<Expression> metric, Label label)
      : n_(n), domain_(std::move(domain)), g_(std::move(metric)), label_(std::move(label)) {
    if (n < 1 || n > kMaxDim) throw DimensionError("chart dimension must be in 1.." + std::to_string(kMaxDim));
    if (domain_.dim() != n || g_.n != n) throw DimensionError("chart domain/metric size mismatch");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (max_variable(g_(i, j)) > n) throw DimensionError("metric entry uses a coordinate beyond x" + std::to_string(n));
        if (j < i && !structurally_equal(g_(i, j), g_(j, i)))
          throw DimensionError("metric must be symmetric (entries " + std::to_string(j + 1) + "," +
                               std::to_string(i + 1) + ")");
      }
    dg_.resize(static_cast<std::size_t>(n) * n * n);
    ddg_.resize(static_cast<std::size_t>(n) * n * n * n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const Expression d = differentiate(g_(i, j), k + 1);
          dg_[(i * n + j) * n + k] = d;
          dg_[(j * n + i) * n + k] = d;
          for (int l = k; l < n; ++l) {
            const Expression dd = differentiate(d, l + 1);
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
              ddg_[((a * n + b) * n + k) * n + l] = dd;
              ddg_[((a * n + b) * n + l) * n + k] = dd;
            }
          }
        }
    Expression det;
    ginv_ = symbolic_inverse(g_, &det);
    sqrt_det_ = sqrt(det);
  }

  int dim() const noexcept { return n_; }
  const Domain& domain() const noexcept { return domain_; }
  const Label& label() const noexcept { return label_; }
  Model model() const noexcept { return label_.model; }
  const Expression& metric(int i, int j) const { return g_(i, j); }
  const SquareMatrix<Expression>& metric() const noexcept { return g_; }
  /// Symbolic inverse metric and volume density, used by the symbolic Hodge star.
  const SquareMatrix<Expression>& inverse_metric() const noexcept { return ginv_; }
  const Expression& volume_density() const noexcept { return sqrt_det_; }
  const Expression& metric_derivative(int i, int j, int k) const { return dg_[(i * n_ + j) * n_ + k]; }
  const Expression& metric_second_derivative(int i, int j, int k, int l) const {
    return ddg_[((i * n_ + j) * n_ + k) * n_ + l];
  }

  /// Curvature declared by the model label: sphere/ball C, flat torus 0.
  std::optional<double> constant_curvature() const {
    switch (label_.model) {
      case Model::FlatTorus: return 0.0;
      case Model::RoundSphere:
      case Model::PoincareBall: return label_.curvature;
      default: return std::nullopt;
    }
  }
  bool conformally_flat() const noexcept { return label_.model != Model::Custom; }

  /// Axis lengths of a periodic box (flat tori).
  std::vector<double> periods() const {
    std::vector<double> p(n_);
    for (int a = 0; a < n_; ++a) p[a] = domain_.hi[a] - domain_.lo[a];
    return p;
  }

  std::string describe() const {
    std::string s = std::string(model_name(label_.model)) + "(n=" + std::to_string(n_);
    if (label_.model == Model::RoundSphere || label_.model == Model::PoincareBall)
      s += ",C=" + format_double(label_.curvature);
    if (label_.model == Model::ConformallyFlat) s += ",f=" + to_string(label_.conformal_exponent);
    return s + ")";
  }

  void require_interior(std::span<const double> p) const {
    if (!domain_.contains(p)) {
      std::string s = "point (";
      for (std::size_t a = 0; a < p.size(); ++a) s += (a ? "," : "") + format_double(p[a]);
      throw DomainError(s + ") is outside the domain of " + describe());
    }
  }

 private:
  int n_;
  Domain domain_;
  SquareMatrix<Expression> g_;
  Label label_;
  std::vector<Expression> dg_, ddg_;
  SquareMatrix<Expression> ginv_;
  Expression sqrt_det_;
};

using ChartPtr = std::shared_ptr<const MetricChart>;

// ---------------------------------------------------------------------------
// Sampling

struct SampleSet {
  std::string id;
  std::vector<Point> points;
};

namespace detail {
// Portable uniform double in [0,1) from a 64-bit engine.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
}  // namespace detail

/// Seeded interior points. Box axes are shrunk by 5% on each side; ball
/// domains are sampled inside 0.7 of their radius.
inline SampleSet sample_points(const MetricChart& chart, int count, std::uint64_t seed) {
  if (count < 1) throw DimensionError("sample count must be positive");
  const Domain& d = chart.domain();
  std::mt19937_64 rng(seed);
  SampleSet s;
  s.id = "seed=" + std::to_string(seed) + ";count=" + std::to_string(count);
  while (static_cast<int>(s.points.size()) < count) {
    Point p(chart.dim());
    double r2 = 0.0;
    for (int a = 0; a < chart.dim(); ++a) {
      const double w = d.hi[a] - d.lo[a];
      p[a] = d.lo[a] + w * (0.05 + 0.9 * detail::unit_uniform(rng));
      r2 += p[a] * p[a];
    }
    if (d.max_radius > 0.0 && std::sqrt(r2) >= 0.7 * d.max_radius) continue;
    s.points.push_back(std::move(p));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Model constructors

inline std::shared_ptr<MetricChart> make_chart(int n, Domain domain, SquareMatrix<Expression> g,
                                               MetricChart::Label label) {
  auto chart = std::make_shared<MetricChart>(n, std::move(domain), std::move(g), std::move(label));
  return chart;
}

namespace detail {

inline Domain box(int n, double half_width) {
  Domain d;
  d.lo.assign(n, -half_width);
  d.hi.assign(n, half_width);
  d.periodic.assign(n, false);
  return d;
}

inline SquareMatrix<Expression> scalar_metric(int n, const Expression& factor) {
  SquareMatrix<Expression> g(n);
  for (int i = 0; i < n; ++i) g(i, i) = factor;
  return g;
}

// 4 / (1 + C|x|²)², the stereographic factor of constant curvature C.
inline Expression stereographic_factor(int n, double C) {
  Expression r2;
  for (int i = 1; i <= n; ++i) r2 = r2 + pow(Expression::variable(i), 2);
  return Expression(4.0) / pow(Expression(1.0) + Expression(C) * r2, 2);
}

}  // namespace detail

inline ChartPtr make_flat_torus(int n, std::vector<double> periods = {}) {
  if (n < 2) throw DimensionError("flat torus needs n >= 2");
  if (n > kMaxDim) throw DimensionError("dimension above supported maximum");
  if (periods.empty()) periods.assign(n, 2.0 * std::numbers::pi);
  if (static_cast<int>(periods.size()) != n) throw DimensionError("need one period per axis");
  Domain d;
  for (double L : periods) {
    if (!(L > 0)) throw DimensionError("torus periods must be positive");
    d.lo.push_back(0.0);
    d.hi.push_back(L);
    d.periodic.push_back(true);
  }
  return make_chart(n, std::move(d), detail::scalar_metric(n, Expression(1.0)), {Model::FlatTorus, 0.0, {}});
}

/// Stereographic chart of the n-sphere of curvature C, g = 4δ/(1 + C|x|²)²,
/// on the box |x_i| < 1/√C.
inline ChartPtr make_round_sphere(int n, double C) {
  if (!(C > 0)) throw DimensionError("round sphere needs C > 0");
  if (n < 2 || n > kMaxDim) throw DimensionError("sphere dimension out of range");
  return make_chart(n, detail::box(n, 1.0 / std::sqrt(C)), detail::scalar_metric(n, detail::stereographic_factor(n, C)),
                    {Model::RoundSphere, C, {}});
}

/// Poincaré ball of curvature C < 0, g = 4δ/(1 + C|x|²)² on |x| < 1/√|C|.
inline ChartPtr make_poincare_ball(int n, double C) {
  if (!(C < 0)) throw DimensionError("Poincare ball needs C < 0");
  if (n < 2 || n > kMaxDim) throw DimensionError("ball dimension out of range");
  const double rho = 1.0 / std::sqrt(-C);
  Domain d = detail::box(n, rho);
  d.max_radius = rho;
  return make_chart(n, std::move(d), detail::scalar_metric(n, detail::stereographic_factor(n, C)),
                    {Model::PoincareBall, C, {}});
}

/// g = e^{2f} δ on the box [-half_width, half_width]^n.
inline ChartPtr make_conformally_flat(int n, const Expression& f, double half_width = 1.0) {
  if (n < 2 || n > kMaxDim) throw DimensionError("dimension out of range");
  if (max_variable(f) > n) throw DimensionError("conformal exponent uses a coordinate beyond x" + std::to_string(n));
  return make_chart(n, detail::box(n, half_width), detail::scalar_metric(n, exp(Expression(2.0) * f)),
                    {Model::ConformallyFlat, 0.0, f});
}

// ---------------------------------------------------------------------------
// Pointwise geometry

/// Curvature data at one point, in coordinate components.
struct CurvatureAtPoint {
  int n = 0;
  Point point;
  std::vector<double> gamma;  // Γ^m_{jk} at [(m*n + j)*n + k]
  std::vector<double> R;      // R_{ijkl} at [((i*n + j)*n + k)*n + l]
  std::vector<double> ric;    // Ric_{jk}
  double s = 0.0;

  double christoffel(int m, int j, int k) const { return gamma[(m * n + j) * n + k]; }
  double riemann(int i, int j, int k, int l) const { return R[((i * n + j) * n + k) * n + l]; }
  double ricci(int j, int k) const { return ric[j * n + k]; }
};

/// Metric jets, Christoffel symbols and curvature at a point. Build once per
/// point and reuse for every form evaluated there.
class PointGeometry {
 public:
  PointGeometry(const MetricChart& chart, std::span<const double> p) : n_(chart.dim()), point_(p.begin(), p.end()) {
    if (static_cast<int>(p.size()) != n_) throw DimensionError("point dimension does not match chart");
    chart.require_interior(p);
    const int n = n_;
    SquareMatrix<Jet> g(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet& x = g(i, j);
        if (j < i) {
          x = g(j, i);
          continue;
        }
        x.v = evaluate(chart.metric(i, j), p);
        for (int k = 0; k < n; ++k) {
          x.g[k] = evaluate(chart.metric_derivative(i, j, k), p);
          for (int l = k; l < n; ++l) {
            const double v = evaluate(chart.metric_second_derivative(i, j, k, l), p);
            x.h[k * kMaxDim + l] = v;
            x.h[l * kMaxDim + k] = v;
          }
        }
      }
    g_ = g;
    Jet det;
    ginv_ = invert(g, &det);
    if (!(det.v > 0)) throw DomainError("metric is not positive definite at " + describe_point());
    sqrt_det_ = sqrt(det);

    // Γ^m_{jk} = ½ g^{ml}(∂_j g_{lk} + ∂_k g_{lj} − ∂_l g_{jk})
    gamma_.assign(static_cast<std::size_t>(n) * n * n, Jet());
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Jet lower = 0.5 * (g(l, k).partial(j) + g(l, j).partial(k) - g(j, k).partial(l));
          for (int m = 0; m < n; ++m) gamma_[(m * n + j) * n + k] += ginv_(m, l) * lower;
        }
    for (Jet& x : gamma_) x.order = std::min(x.order, 1);

    // R^l_{ijk} = ∂_iΓ^l_{jk} − ∂_jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik}
    curv_.n = n;
    curv_.point = point_;
    curv_.gamma.resize(gamma_.size());
    for (std::size_t a = 0; a < gamma_.size(); ++a) curv_.gamma[a] = gamma_[a].v;
    riemann_up_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double v = gamma(l, j, k).g[i] - gamma(l, i, k).g[j];
            for (int m = 0; m < n; ++m)
              v += gamma(l, i, m).v * gamma(m, j, k).v - gamma(l, j, m).v * gamma(m, i, k).v;
            riemann_up_[((l * n + i) * n + j) * n + k] = v;
          }
    curv_.R.assign(riemann_up_.size(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double v = 0.0;
            for (int m = 0; m < n; ++m) v += riemann_up(m, i, j, k) * g(m, l).v;
            curv_.R[((i * n + j) * n + k) * n + l] = v;
          }
    curv_.ric.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) curv_.ric[j * n + k] += riemann_up(i, i, j, k);
    curv_.s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) curv_.s += ginv_(j, k).v * curv_.ric[j * n + k];
  }

  int dim() const noexcept { return n_; }
  const Point& point() const noexcept { return point_; }
  const Jet& g(int i, int j) const { return g_(i, j); }
  const Jet& ginv(int i, int j) const { return ginv_(i, j); }
  const SquareMatrix<Jet>& inverse_metric() const noexcept { return ginv_; }
  const Jet& volume_density() const noexcept { return sqrt_det_; }
  const Jet& gamma(int m, int j, int k) const { return gamma_[(m * n_ + j) * n_ + k]; }
  /// R^l_{ijk}: R(∂_i, ∂_j)∂_k = R^l_{ijk} ∂_l.
  double riemann_up(int l, int i, int j, int k) const { return riemann_up_[((l * n_ + i) * n_ + j) * n_ + k]; }
  const CurvatureAtPoint& curvature() const noexcept { return curv_; }

  Eigen::MatrixXd metric_matrix() const {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = g_(i, j).v;
    return m;
  }
  Eigen::MatrixXd inverse_metric_matrix() const {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = ginv_(i, j).v;
    return m;
  }
  /// Columns are an orthonormal frame: with g = LLᵀ (Cholesky), E = L⁻ᵀ.
  Eigen::MatrixXd orthonormal_frame() const {
    Eigen::LLT<Eigen::MatrixXd> llt(metric_matrix());
    if (llt.info() != Eigen::Success) throw DomainError("metric Cholesky failed at " + describe_point());
    const Eigen::MatrixXd L = llt.matrixL();
    return L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n_, n_));
  }

 private:
  std::string describe_point() const {
    std::string s = "(";
    for (std::size_t a = 0; a < point_.size(); ++a) s += (a ? "," : "") + format_double(point_[a]);
    return s + ")";
  }

  int n_;
  Point point_;
  SquareMatrix<Jet> g_, ginv_;
  Jet sqrt_det_;
  std::vector<Jet> gamma_;
  std::vector<double> riemann_up_;
  CurvatureAtPoint curv_;
};

inline CurvatureAtPoint curvature_at(const MetricChart& chart, std::span<const double> p) {
  return PointGeometry(chart, p).curvature();
}

/// K(X,Y) = R(X,Y,Y,X) / (|X|²|Y|² − g(X,Y)²).
inline double sectional_curvature(const CurvatureAtPoint& c, const Eigen::MatrixXd& g, const Eigen::VectorXd& X,
                                  const Eigen::VectorXd& Y) {
  const int n = c.n;
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) num += c.riemann(i, j, k, l) * X[i] * Y[j] * Y[k] * X[l];
  const double xx = X.dot(g * X), yy = Y.dot(g * Y), xy = X.dot(g * Y);
  return num / (xx * yy - xy * xy);
}

/// Matrix of the curvature operator on 2-forms in the Cholesky orthonormal
/// frame, rows/columns indexed by pairs a<b in lexicographic order:
/// M_(ab),(cd) = R(e_a, e_b, e_d, e_c). Positive on spheres.
inline Eigen::MatrixXd curvature_operator_at(const MetricChart& chart, std::span<const double> p) {
  const PointGeometry geo(chart, p);
  const CurvatureAtPoint& c = geo.curvature();
  const Eigen::MatrixXd E = geo.orthonormal_frame();
  const int n = chart.dim();
  // Frame components of R.
  std::vector<double> Rf(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto at = [n](int a, int b, int cc, int d) { return ((a * n + b) * n + cc) * n + d; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) v += E(i, a) * E(j, b) * E(k, cc) * E(l, d) * c.riemann(i, j, k, l);
          Rf[at(a, b, cc, d)] = v;
        }
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  Eigen::MatrixXd M(pairs.size(), pairs.size());
  for (std::size_t u = 0; u < pairs.size(); ++u)
    for (std::size_t w = 0; w < pairs.size(); ++w)
      M(u, w) = Rf[at(pairs[u].first, pairs[u].second, pairs[w].second, pairs[w].first)];
  return M;
}

// ---------------------------------------------------------------------------
// Chart fixture files
//
//   dim 2
//   model round-sphere 1        (flat-torus | round-sphere C | poincare-ball C |
//                                conformally-flat <f> | custom)
//   axis 1 -1 1                 (axis i lo hi [periodic]; one per axis)
//   radius 0.9                  (optional ball constraint)
//   metric 1 1 : 4/(1+x1^2+x2^2)^2
//
// Missing metric entries are zero; an entry (i,j) also sets (j,i). The model
// line is taken at face value: it labels the chart for hypothesis checks and
// is not re-derived from the metric.

namespace detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

inline ChartPtr parse_chart_fixture(const std::string& text) {
  int n = 0;
  MetricChart::Label label;
  std::vector<std::string> axes_lines, metric_lines;
  std::vector<std::size_t> metric_lineno;
  double radius = 0.0;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::string model_rest;
  std::size_t model_lineno = 0;
  Domain d;
  std::vector<bool> axis_seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dim") {
      if (!(ls >> n) || n < 1 || n > kMaxDim) throw ParseError("bad dimension", lineno);
      d.lo.assign(n, 0.0);
      d.hi.assign(n, 0.0);
      d.periodic.assign(n, false);
      axis_seen.assign(n, false);
    } else if (key == "model") {
      std::getline(ls, model_rest);
      model_rest = detail::trim(model_rest);
      model_lineno = lineno;
    } else if (key == "axis") {
      if (n == 0) throw ParseError("'dim' must precede 'axis'", lineno);
      int i;
      double lo, hi;
      if (!(ls >> i >> lo >> hi) || i < 1 || i > n || !(lo < hi)) throw ParseError("bad axis line", lineno);
      std::string flag;
      ls >> flag;
      if (!flag.empty() && flag != "periodic") throw ParseError("unknown axis flag '" + flag + "'", lineno);
      d.lo[i - 1] = lo;
      d.hi[i - 1] = hi;
      d.periodic[i - 1] = flag == "periodic";
      axis_seen[i - 1] = true;
    } else if (key == "radius") {
      if (!(ls >> radius) || !(radius > 0)) throw ParseError("bad radius", lineno);
    } else if (key == "metric") {
      metric_lines.push_back(line.substr(6));
      metric_lineno.push_back(lineno);
    } else {
      throw ParseError("unknown chart key '" + key + "'", lineno);
    }
  }
  if (n == 0) throw ParseError("chart fixture lacks 'dim'", lineno);
  for (int a = 0; a < n; ++a)
    if (!axis_seen[a]) throw ParseError("missing axis " + std::to_string(a + 1), lineno);
  d.max_radius = radius;

  std::istringstream ms(model_rest);
  std::string model;
  ms >> model;
  if (model.empty() || model == "custom") {
    label.model = Model::Custom;
  } else if (model == "flat-torus") {
    label.model = Model::FlatTorus;
  } else if (model == "round-sphere" || model == "poincare-ball") {
    label.model = model == "round-sphere" ? Model::RoundSphere : Model::PoincareBall;
    if (!(ms >> label.curvature)) throw ParseError("model needs a curvature value", model_lineno);
  } else if (model == "conformally-flat") {
    std::string rest;
    std::getline(ms, rest);
    label.model = Model::ConformallyFlat;
    label.conformal_exponent = parse(detail::trim(rest), n);
  } else {
    throw ParseError("unknown model '" + model + "'", model_lineno);
  }

  SquareMatrix<Expression> g(n);
  for (std::size_t k = 0; k < metric_lines.size(); ++k) {
    const std::string& ml = metric_lines[k];
    const auto colon = ml.find(':');
    if (colon == std::string::npos) throw ParseError("metric line needs ':'", metric_lineno[k]);
    std::istringstream is(ml.substr(0, colon));
    int i, j;
    if (!(is >> i >> j) || i < 1 || j < 1 || i > n || j > n) throw ParseError("bad metric indices", metric_lineno[k]);
    Expression e;
    try {
      e = parse(ml.substr(colon + 1), n);
    } catch (const ParseError& err) {
      throw ParseError(std::string("metric expression: ") + err.what(), metric_lineno[k]);
    }
    g(i - 1, j - 1) = e;
    g(j - 1, i - 1) = e;
  }
  return make_chart(n, std::move(d), std::move(g), label);
}

inline ChartPtr load_chart_fixture(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open chart fixture '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_chart_fixture(ss.str());
}

inline std::string write_chart_fixture(const MetricChart& chart) {
  std::string s = "dim " + std::to_string(chart.dim()) + "\nmodel " + model_name(chart.model());
  const auto& lab = chart.label();
  if (lab.model == Model::RoundSphere || lab.model == Model::PoincareBall) s += " " + format_double(lab.curvature);
  if (lab.model == Model::ConformallyFlat) s += " " + to_string(lab.conformal_exponent);
  s += '\n';
  const Domain& d = chart.domain();
  for (int a = 0; a < chart.dim(); ++a)
    s += "axis " + std::to_string(a + 1) + " " + format_double(d.lo[a]) + " " + format_double(d.hi[a]) +
         (d.periodic[a] ? " periodic" : "") + "\n";
  if (d.max_radius > 0) s += "radius " + format_double(d.max_radius) + "\n";
  for (int i = 0; i < chart.dim(); ++i)
    for (int j = i; j < chart.dim(); ++j)
      if (!chart.metric(i, j).is_zero())
        s += "metric " + std::to_string(i + 1) + " " + std::to_string(j + 1) + " : " + to_string(chart.metric(i, j)) +
             "\n";
  return s;
}

}  // namespace ckforms
