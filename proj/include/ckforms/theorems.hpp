#pragma once
//
// Pointwise verification of curvature identities and eigenvalue statements
// for conformal Killing forms, plus two constructions on flat tori: the
// parallel wedge witness for Tachibana numbers and the Killing/planar split
// of a conformal Killing form.
//
// Identity ids (r = degree, n = dimension, C = sectional curvature,
// s = scalar curvature, F = Weitzenböck term, δ = d*):
//
//   weitzenbock                       Δω = Δ̄ω + Fω
//   tachibana-routes                  □ω from Δ̄ equals □ω from Δ − F
//   ck-laplacian                      ω ∈ T:  Δω = Fω + δdω/(r+1) + dδω/(n−r+1)
//   conformal-weitzenbock             n = 2r, conformally flat:  Fω = r s/(2(2r−1)) ω
//   conformal-ck-eigen                n = 2r, conformally flat, ω ∈ T:  Δω = (r+1) s/(2(2r−1)) ω
//   conformal-tachibana               n = 2r, conformally flat:  r s/(2(2r−1)) ω = r/(r+1) Δω − r(r+1) □ω
//   conformal-harmonic-tachibana      n = 2r, conformally flat, ω ∈ H:  r s/(2(2r−1)) ω = −r(r+1) □ω
//   constant-curvature-weitzenbock    Fω = r(n−r) C ω
//   constant-curvature-tachibana      r(r+1)□ = Δ − r(n−r)C − δd/(r+1) − dδ/(n−r+1)
//   constant-curvature-tachibana-dd   r(r+1)□ = (n−r)/(n−r+1) Δ − r(n−r)C − (n−2r)/((r+1)(n−r+1)) δd
//   constant-curvature-tachibana-dc   r(r+1)□ = r/(r+1) Δ − r(n−r)C + (n−2r)/((r+1)(n−r+1)) dδ
//   harmonic-tachibana-eigen          C < 0, ω ∈ H:  □ω = −(n−r) C/(r+1) ω
//   planar-hodge-eigen                C > 0, ω ∈ P:  Δω = r(n−r+1) C ω
//   killing-hodge-eigen               C > 0, ω ∈ K:  Δω = (n−r)(r+1) C ω
//   scalar-curvature-eigen            n = 2r, conformally flat, s constant:
//                                       s > 0, ω ∈ T:  Δω = (r+1) s/(2(2r−1)) ω
//                                       s < 0, ω ∈ H:  □ω = −s/(2(r+1)(2r−1)) ω
//
// Residual: sup over sample points of max_I |lhs_I − rhs_I|, divided by
// ‖ω‖∞ (sup of the largest component).

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ckforms/classify.hpp"
#include "ckforms/error.hpp"
#include "ckforms/expr.hpp"
#include "ckforms/forms.hpp"
#include "ckforms/geometry.hpp"
#include "ckforms/operators.hpp"
#include "ckforms/spectral.hpp"

namespace ckforms {

// ---------------------------------------------------------------------------
// Chart and form specs
//
//   chart:  torus:<n> | sphere:<n>:<C> | ball:<n>:<C> | conformal:<n>:<f> | file:<path>
//   form:   const:<i1,…,ir>       constant coordinate form dx_I
//           random:<r>:<seed>     seeded polynomial/trigonometric r-form
//           closedck:<a>          dX_a for the ambient coordinate X_a (sphere, ball)
//           killing:<a>:<b>       X_b dX_a − X_a dX_b (sphere, ball)
//           harmonic:<a>          d of a harmonic function (ball: Poisson kernel
//                                 at the a-th boundary axis point; torus or
//                                 conformal n=2: dx_a)
//           star:<form>  d:<form>  file:<path>
//
// Ambient coordinates of the stereographic charts of curvature C:
//   X_a = 2x_a/(1 + C|x|²) (a ≤ n),  X_{n+1} = (1 − C|x|²)/(√|C| (1 + C|x|²)).
// They satisfy Hess X = −C X g, so dX_a is closed conformal Killing.

namespace detail {

inline std::vector<std::string> split_colon(const std::string& s, std::size_t max_parts) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (out.size() + 1 < max_parts) {
    const auto c = s.find(':', start);
    if (c == std::string::npos) break;
    out.push_back(s.substr(start, c - start));
    start = c + 1;
  }
  out.push_back(s.substr(start));
  return out;
}

inline int parse_int(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw ParseError("bad " + what + " '" + s + "'", 0);
  return static_cast<int>(v);
}

inline double parse_real(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ParseError("bad " + what + " '" + s + "'", 0);
  return v;
}

inline std::string resolve(const std::string& path, const std::string& base_dir) {
  if (base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).string();
}

inline Expression radius_squared(int n) {
  Expression r2;
  for (int i = 1; i <= n; ++i) r2 += pow(Expression::variable(i), 2);
  return r2;
}

}  // namespace detail

inline ChartPtr chart_from_spec(const std::string& spec, const std::string& base_dir = {}) {
  const auto parts = detail::split_colon(spec, 3);
  const std::string& kind = parts[0];
  if (kind == "file") {
    if (parts.size() < 2) throw ParseError("chart spec 'file:' needs a path", 0);
    return load_chart_fixture(detail::resolve(spec.substr(5), base_dir));
  }
  if (parts.size() < 2) throw ParseError("chart spec '" + spec + "' needs a dimension", 0);
  const int n = detail::parse_int(parts[1], "dimension");
  if (kind == "torus") {
    if (parts.size() != 2) throw ParseError("chart spec 'torus:<n>' takes one parameter", 0);
    return make_flat_torus(n);
  }
  if (parts.size() != 3) throw ParseError("chart spec '" + spec + "' needs two parameters", 0);
  if (kind == "sphere") return make_round_sphere(n, detail::parse_real(parts[2], "curvature"));
  if (kind == "ball") return make_poincare_ball(n, detail::parse_real(parts[2], "curvature"));
  if (kind == "conformal") return make_conformally_flat(n, parse(parts[2], n));
  throw ParseError("unknown chart kind '" + kind + "'", 0);
}

/// Ambient coordinate X_a (1-based, a ≤ n+1) of a sphere or ball chart.
inline Expression ambient_coordinate(const MetricChart& chart, int a) {
  const Model m = chart.model();
  if (m != Model::RoundSphere && m != Model::PoincareBall)
    throw DimensionError("ambient coordinates exist only on sphere and ball charts");
  const int n = chart.dim();
  if (a < 1 || a > n + 1) throw DimensionError("ambient coordinate index out of range 1..n+1");
  const double C = chart.label().curvature;
  const Expression r2 = detail::radius_squared(n);
  const Expression den = Expression(1.0) + Expression(C) * r2;
  if (a <= n) return Expression(2.0) * Expression::variable(a) / den;
  return (Expression(1.0) - Expression(C) * r2) / (Expression(std::sqrt(std::abs(C))) * den);
}

/// Harmonic function whose differential backs `harmonic:<a>`.
inline Expression harmonic_function(const MetricChart& chart, int a) {
  const int n = chart.dim();
  if (a < 1 || a > n) throw DimensionError("harmonic axis out of range 1..n");
  switch (chart.model()) {
    case Model::FlatTorus:
      return Expression::variable(a);
    case Model::ConformallyFlat:
      if (n != 2) throw DimensionError("coordinate functions are harmonic only in conformally flat dimension 2");
      return Expression::variable(a);
    case Model::PoincareBall: {
      // ((1 − |y|²)/|y − e_a|²)^{n−1} with y = √|C| x.
      const double C = chart.label().curvature, k = std::sqrt(std::abs(C));
      Expression dist2;
      for (int i = 1; i <= n; ++i) {
        Expression y = Expression(k) * Expression::variable(i);
        if (i == a) y -= Expression(1.0);
        dist2 += pow(y, 2);
      }
      const Expression num = Expression(1.0) + Expression(C) * detail::radius_squared(n);
      return pow(num / dist2, n - 1);
    }
    default:
      throw DimensionError("no harmonic test functions on " + std::string(model_name(chart.model())) + " charts");
  }
}

inline ExprForm form_from_spec(const std::string& spec, const ChartPtr& chart, const std::string& base_dir = {}) {
  const auto head = detail::split_colon(spec, 2);
  const std::string& kind = head[0];
  const std::string rest = head.size() > 1 ? head[1] : std::string();
  const int n = chart->dim();
  if (kind == "star") return hodge_star(form_from_spec(rest, chart, base_dir));
  if (kind == "d") return exterior_d(form_from_spec(rest, chart, base_dir));
  if (kind == "file") return load_form_fixture(detail::resolve(rest, base_dir), chart);
  const auto parts = detail::split_colon(spec, 8);
  if (kind == "const") {
    if (parts.size() != 2) throw ParseError("form spec 'const:<i1,...,ir>' expected", 0);
    std::vector<int> idx;
    std::istringstream is(parts[1]);
    std::string tok;
    while (std::getline(is, tok, ',')) idx.push_back(detail::parse_int(tok, "index") - 1);
    std::vector<int> sorted = idx;
    if (sort_with_sign(sorted) != 1 || idx.front() < 0 || idx.back() >= n)
      throw ParseError("constant form indices must be increasing in 1..n", 0);
    return coordinate_form(chart, MultiIndex(sorted));
  }
  if (kind == "random") {
    if (parts.size() != 3) throw ParseError("form spec 'random:<r>:<seed>' expected", 0);
    return random_expr_form(chart, detail::parse_int(parts[1], "degree"),
                            static_cast<std::uint64_t>(detail::parse_int(parts[2], "seed")));
  }
  if (kind == "closedck") {
    if (parts.size() != 2) throw ParseError("form spec 'closedck:<a>' expected", 0);
    return exterior_d(chart, ambient_coordinate(*chart, detail::parse_int(parts[1], "axis")));
  }
  if (kind == "killing") {
    if (parts.size() != 3) throw ParseError("form spec 'killing:<a>:<b>' expected", 0);
    const int a = detail::parse_int(parts[1], "axis"), b = detail::parse_int(parts[2], "axis");
    if (a == b) throw DimensionError("killing:<a>:<b> needs distinct axes");
    const Expression Xa = ambient_coordinate(*chart, a), Xb = ambient_coordinate(*chart, b);
    return exterior_d(chart, Xa).scaled(Xb) - exterior_d(chart, Xb).scaled(Xa);
  }
  if (kind == "harmonic") {
    if (parts.size() != 2) throw ParseError("form spec 'harmonic:<a>' expected", 0);
    return exterior_d(chart, harmonic_function(*chart, detail::parse_int(parts[1], "axis")));
  }
  throw ParseError("unknown form kind '" + kind + "'", 0);
}

// ---------------------------------------------------------------------------
// Identity registry

enum class ChartHypothesis {
  None,
  ConformalMiddle,          // conformally flat, n = 2r
  ConstantCurvature,
  PositiveCurvature,
  NegativeCurvature,
  ConformalMiddleConstantScalar,
};

struct IdentityContext {
  int n = 0, r = 0;
  double C = 0.0;  // sectional curvature (0 when not constant)
  double s = 0.0;  // scalar curvature at the current point
};

/// Returns lhs − rhs at one point.
using IdentityResidual = std::function<JetTensor(const LocalOperators&, const IdentityContext&)>;

struct IdentitySpec {
  std::string id;
  std::string statement;
  ChartHypothesis chart = ChartHypothesis::None;
  std::optional<FormClass> form_class;  // scalar-curvature-eigen picks its class from the sign of s
  double default_tol = 1e-8;
  IdentityResidual residual;
  std::function<std::optional<double>(const IdentityContext&)> eigenvalue;
};

namespace detail {

inline double conformal_weitzenbock_coefficient(const IdentityContext& c) {
  return c.r * c.s / (2.0 * (2 * c.r - 1));
}

inline std::vector<IdentitySpec> build_identities() {
  using L = const LocalOperators&;
  using X = const IdentityContext&;
  auto none = [](X) -> std::optional<double> { return std::nullopt; };
  std::vector<IdentitySpec> v;
  v.push_back({"weitzenbock", "Δω = Δ̄ω + Fω", ChartHypothesis::None, std::nullopt, 1e-8,
               [](L o, X) { return o.hodge_laplacian() - o.rough_laplacian() - o.weitzenbock(); }, none});
  v.push_back({"tachibana-routes", "□ω from Δ̄ equals □ω from Δ − F", ChartHypothesis::None, std::nullopt, 1e-8,
               [](L o, X) { return o.tachibana(TachibanaRoute::Rough) - o.tachibana(TachibanaRoute::Weitzenbock); },
               none});
  v.push_back({"ck-laplacian", "ω ∈ T: Δω = Fω + δdω/(r+1) + dδω/(n−r+1)", ChartHypothesis::None, FormClass::T, 1e-7,
               [](L o, X c) {
                 return o.hodge_laplacian() - o.weitzenbock() - (1.0 / (c.r + 1)) * o.codifferential_d() -
                        (1.0 / (c.n - c.r + 1)) * o.d_codifferential();
               },
               none});
  v.push_back({"conformal-weitzenbock", "n = 2r, conformally flat: Fω = r s/(2(2r−1)) ω",
               ChartHypothesis::ConformalMiddle, std::nullopt, 1e-8,
               [](L o, X c) { return o.weitzenbock() - conformal_weitzenbock_coefficient(c) * o.form(); }, none});
  v.push_back({"conformal-ck-eigen", "n = 2r, conformally flat, ω ∈ T: Δω = (r+1) s/(2(2r−1)) ω",
               ChartHypothesis::ConformalMiddle, FormClass::T, 1e-7,
               [](L o, X c) { return o.hodge_laplacian() - ((c.r + 1) * c.s / (2.0 * (2 * c.r - 1))) * o.form(); },
               [](X c) -> std::optional<double> { return (c.r + 1) * c.s / (2.0 * (2 * c.r - 1)); }});
  v.push_back({"conformal-tachibana", "n = 2r, conformally flat: r s/(2(2r−1)) ω = r/(r+1) Δω − r(r+1) □ω",
               ChartHypothesis::ConformalMiddle, std::nullopt, 1e-8,
               [](L o, X c) {
                 return conformal_weitzenbock_coefficient(c) * o.form() -
                        (static_cast<double>(c.r) / (c.r + 1)) * o.hodge_laplacian() +
                        static_cast<double>(c.r * (c.r + 1)) * o.tachibana(TachibanaRoute::Rough);
               },
               none});
  v.push_back({"conformal-harmonic-tachibana", "n = 2r, conformally flat, ω ∈ H: r s/(2(2r−1)) ω = −r(r+1) □ω",
               ChartHypothesis::ConformalMiddle, FormClass::H, 1e-7,
               [](L o, X c) {
                 return conformal_weitzenbock_coefficient(c) * o.form() +
                        static_cast<double>(c.r * (c.r + 1)) * o.tachibana(TachibanaRoute::Rough);
               },
               none});
  v.push_back({"constant-curvature-weitzenbock", "Fω = r(n−r) C ω", ChartHypothesis::ConstantCurvature, std::nullopt,
               1e-8, [](L o, X c) { return o.weitzenbock() - (c.r * (c.n - c.r) * c.C) * o.form(); }, none});
  v.push_back({"constant-curvature-tachibana", "r(r+1)□ = Δ − r(n−r)C − δd/(r+1) − dδ/(n−r+1)",
               ChartHypothesis::ConstantCurvature, std::nullopt, 1e-8,
               [](L o, X c) {
                 JetTensor rhs = o.hodge_laplacian() - (c.r * (c.n - c.r) * c.C) * o.form() -
                                 (1.0 / (c.r + 1)) * o.codifferential_d() -
                                 (1.0 / (c.n - c.r + 1)) * o.d_codifferential();
                 return static_cast<double>(c.r * (c.r + 1)) * o.tachibana(TachibanaRoute::Rough) - rhs;
               },
               none});
  v.push_back({"constant-curvature-tachibana-dd", "r(r+1)□ = (n−r)/(n−r+1) Δ − r(n−r)C − (n−2r)/((r+1)(n−r+1)) δd",
               ChartHypothesis::ConstantCurvature, std::nullopt, 1e-8,
               [](L o, X c) {
                 const double a = static_cast<double>(c.n - c.r) / (c.n - c.r + 1);
                 const double b = static_cast<double>(c.n - 2 * c.r) / ((c.r + 1) * (c.n - c.r + 1));
                 JetTensor rhs = a * o.hodge_laplacian() - (c.r * (c.n - c.r) * c.C) * o.form() -
                                 b * o.codifferential_d();
                 return static_cast<double>(c.r * (c.r + 1)) * o.tachibana(TachibanaRoute::Rough) - rhs;
               },
               none});
  v.push_back({"constant-curvature-tachibana-dc", "r(r+1)□ = r/(r+1) Δ − r(n−r)C + (n−2r)/((r+1)(n−r+1)) dδ",
               ChartHypothesis::ConstantCurvature, std::nullopt, 1e-8,
               [](L o, X c) {
                 const double a = static_cast<double>(c.r) / (c.r + 1);
                 const double b = static_cast<double>(c.n - 2 * c.r) / ((c.r + 1) * (c.n - c.r + 1));
                 JetTensor rhs = a * o.hodge_laplacian() - (c.r * (c.n - c.r) * c.C) * o.form() +
                                 b * o.d_codifferential();
                 return static_cast<double>(c.r * (c.r + 1)) * o.tachibana(TachibanaRoute::Rough) - rhs;
               },
               none});
  v.push_back({"harmonic-tachibana-eigen", "C < 0, ω ∈ H: □ω = −(n−r) C/(r+1) ω", ChartHypothesis::NegativeCurvature,
               FormClass::H, 1e-7,
               [](L o, X c) {
                 return o.tachibana(TachibanaRoute::Rough) - (-(c.n - c.r) * c.C / (c.r + 1)) * o.form();
               },
               [](X c) -> std::optional<double> { return -(c.n - c.r) * c.C / (c.r + 1); }});
  v.push_back({"planar-hodge-eigen", "C > 0, ω ∈ P: Δω = r(n−r+1) C ω", ChartHypothesis::PositiveCurvature,
               FormClass::P, 1e-7,
               [](L o, X c) { return o.hodge_laplacian() - (c.r * (c.n - c.r + 1) * c.C) * o.form(); },
               [](X c) -> std::optional<double> { return c.r * (c.n - c.r + 1) * c.C; }});
  v.push_back({"killing-hodge-eigen", "C > 0, ω ∈ K: Δω = (n−r)(r+1) C ω", ChartHypothesis::PositiveCurvature,
               FormClass::K, 1e-7,
               [](L o, X c) { return o.hodge_laplacian() - ((c.n - c.r) * (c.r + 1) * c.C) * o.form(); },
               [](X c) -> std::optional<double> { return (c.n - c.r) * (c.r + 1) * c.C; }});
  v.push_back({"scalar-curvature-eigen",
               "n = 2r, conformally flat, s constant: s > 0, ω ∈ T: Δω = (r+1)s/(2(2r−1)) ω; "
               "s < 0, ω ∈ H: □ω = −s/(2(r+1)(2r−1)) ω",
               ChartHypothesis::ConformalMiddleConstantScalar, std::nullopt, 1e-7,
               [](L o, X c) {
                 if (c.s > 0) return o.hodge_laplacian() - ((c.r + 1) * c.s / (2.0 * (2 * c.r - 1))) * o.form();
                 return o.tachibana(TachibanaRoute::Rough) - (-c.s / (2.0 * (c.r + 1) * (2 * c.r - 1))) * o.form();
               },
               [](X c) -> std::optional<double> {
                 if (c.s > 0) return (c.r + 1) * c.s / (2.0 * (2 * c.r - 1));
                 return -c.s / (2.0 * (c.r + 1) * (2 * c.r - 1));
               }});
  return v;
}

}  // namespace detail

inline const std::vector<IdentitySpec>& identity_catalogue() {
  static const std::vector<IdentitySpec> specs = detail::build_identities();
  return specs;
}

inline const IdentitySpec& find_identity(const std::string& id) {
  for (const IdentitySpec& s : identity_catalogue())
    if (s.id == id) return s;
  throw ParseError("unknown identity id '" + id + "'", 0);
}

struct IdentityCheck {
  std::string id;
  std::string chart;
  std::string form;
  std::string sample_id;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::optional<double> eigenvalue;
  std::string error;  // hypothesis violation, when the check could not run
};

inline IdentityCheck verify_identity(const std::string& id, const ExprForm& w, const SampleSet& samples,
                                     std::optional<double> tol = std::nullopt) {
  const IdentitySpec& spec = find_identity(id);
  const MetricChart& chart = *w.chart();
  const int n = chart.dim(), r = w.degree();
  if (samples.points.empty()) throw DimensionError("identity check needs at least one sample point");
  IdentityCheck out;
  out.id = id;
  out.chart = chart.describe();
  out.sample_id = samples.id;
  out.tol = tol.value_or(spec.default_tol);

  auto violated = [&](const std::string& why) { throw HypothesisError(id + ": " + why); };
  if (r < 1 || r > n - 1) violated("needs 1 <= r <= n-1, got r=" + std::to_string(r) + ", n=" + std::to_string(n));

  IdentityContext ctx{n, r, 0.0, 0.0};
  const auto C = chart.constant_curvature();
  switch (spec.chart) {
    case ChartHypothesis::None:
      break;
    case ChartHypothesis::ConformalMiddle:
    case ChartHypothesis::ConformalMiddleConstantScalar:
      if (!chart.conformally_flat()) violated("chart is not known to be conformally flat");
      if (n != 2 * r) violated("needs n = 2r, got n=" + std::to_string(n) + ", r=" + std::to_string(r));
      break;
    case ChartHypothesis::ConstantCurvature:
      if (!C) violated("chart does not have constant curvature");
      break;
    case ChartHypothesis::PositiveCurvature:
      if (!C || !(*C > 0)) violated("needs constant curvature C > 0");
      break;
    case ChartHypothesis::NegativeCurvature:
      if (!C || !(*C < 0)) violated("needs constant curvature C < 0");
      break;
  }
  if (C) ctx.C = *C;

  std::optional<FormClass> needed = spec.form_class;
  if (spec.chart == ChartHypothesis::ConformalMiddleConstantScalar) {
    const double s0 = curvature_at(chart, samples.points.front()).s;
    for (const Point& p : samples.points)
      if (std::abs(curvature_at(chart, p).s - s0) > 1e-8 * (1.0 + std::abs(s0)))
        violated("scalar curvature is not constant over the sample points");
    if (std::abs(s0) <= 1e-8) violated("needs nonzero scalar curvature");
    needed = s0 > 0 ? FormClass::T : FormClass::H;
  }
  if (needed) {
    const ClassificationReport rep = classify(w, samples);
    if (!rep.is(*needed))
      violated(std::string("form is not ") + class_description(*needed) + " (classes found: '" + rep.classes() + "')");
  }

  double res = 0.0, norm = 0.0;
  for (const Point& p : samples.points) {
    const PointGeometry geo(chart, p);
    const LocalOperators L(geo, w);
    ctx.s = geo.curvature().s;
    res = std::max(res, sup_norm(spec.residual(L, ctx)));
    norm = std::max(norm, sup_norm(L.form()));
    if (!out.eigenvalue) out.eigenvalue = spec.eigenvalue(ctx);
  }
  out.residual = norm > 0.0 ? res / norm : res;
  out.pass = out.residual <= out.tol;
  return out;
}

/// Predicted Hodge-Laplacian eigenvalues on a constant-curvature chart with
/// n = 2r from the conformal-ck, planar and Killing statements; the three
/// must coincide.
struct EigenvalueChain {
  double conformal_ck = 0.0, planar = 0.0, killing = 0.0;
  bool consistent() const {
    const double scale = 1e-12 * (1.0 + std::abs(planar));
    return std::abs(conformal_ck - planar) <= scale && std::abs(killing - planar) <= scale;
  }
};

inline EigenvalueChain eigenvalue_chain(int r, double C) {
  const int n = 2 * r;
  const double s = n * (n - 1) * C;
  return {(r + 1) * s / (2.0 * (2 * r - 1)), r * (n - r + 1) * C, (n - r) * (r + 1) * C};
}

// ---------------------------------------------------------------------------
// Fixture catalogue
//
//   # comment
//   <id> <chart spec> <form spec> [tol]

struct CatalogueEntry {
  std::string id, chart, form;
  std::optional<double> tol;
  std::size_t line = 0;
};

inline std::vector<CatalogueEntry> parse_catalogue(const std::string& text) {
  std::vector<CatalogueEntry> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 3 || tok.size() > 4) throw ParseError("catalogue line needs '<id> <chart> <form> [tol]'", lineno);
    CatalogueEntry e{tok[0], tok[1], tok[2], std::nullopt, lineno};
    try {
      find_identity(e.id);
      if (tok.size() == 4) e.tol = detail::parse_real(tok[3], "tolerance");
    } catch (const ParseError& err) {
      throw ParseError(err.what(), lineno);
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) throw ParseError("no fixtures", lineno);
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline constexpr const char* kDefaultCatalogue = R"(# id                               chart                              form
weitzenbock                        sphere:2:1                         random:1:11
weitzenbock                        sphere:3:1                         random:1:12
weitzenbock                        sphere:3:1                         random:2:13
weitzenbock                        ball:3:-1                          random:1:14
weitzenbock                        conformal:2:0.3*sin(x1)+0.2*x2^2   random:1:15
weitzenbock                        conformal:3:0.2*x1*x2+0.1*cos(x3)  random:2:16
weitzenbock                        sphere:4:1                         random:2:17
tachibana-routes                   sphere:2:1                         random:1:21
tachibana-routes                   sphere:3:1                         random:2:22
tachibana-routes                   ball:3:-1                          random:1:23
tachibana-routes                   conformal:3:0.2*x1*x2+0.1*cos(x3)  random:1:24
tachibana-routes                   sphere:4:1                         random:2:25
tachibana-routes                   torus:3                            random:1:26
ck-laplacian                       sphere:3:1                         closedck:1
ck-laplacian                       sphere:3:1                         killing:1:2
ck-laplacian                       ball:3:-1                          killing:1:4
ck-laplacian                       sphere:3:1                         star:killing:1:2
conformal-weitzenbock              sphere:2:1                         random:1:31
conformal-weitzenbock              ball:2:-1                          random:1:32
conformal-weitzenbock              conformal:2:0.3*sin(x1)+0.2*x2^2   random:1:33
conformal-weitzenbock              sphere:4:1                         random:2:34
conformal-weitzenbock              conformal:4:0.1*x1*x2+0.2*sin(x3)  random:2:35
conformal-ck-eigen                 sphere:2:1                         closedck:3
conformal-ck-eigen                 sphere:2:1                         killing:1:2
conformal-ck-eigen                 sphere:4:1                         d:killing:1:2
conformal-tachibana                sphere:2:1                         random:1:41
conformal-tachibana                conformal:2:0.3*sin(x1)+0.2*x2^2   random:1:42
conformal-tachibana                sphere:4:1                         random:2:43
conformal-harmonic-tachibana       ball:2:-1                          harmonic:1
conformal-harmonic-tachibana       torus:2                            const:1
conformal-harmonic-tachibana       conformal:2:0.3*sin(x1)+0.2*x2^2   harmonic:2
constant-curvature-weitzenbock     sphere:2:1                         random:1:51
constant-curvature-weitzenbock     sphere:3:1                         random:1:52
constant-curvature-weitzenbock     sphere:3:1                         random:2:53
constant-curvature-weitzenbock     ball:3:-1                          random:1:54
constant-curvature-weitzenbock     sphere:4:1                         random:2:55
constant-curvature-weitzenbock     torus:3                            random:1:56
constant-curvature-tachibana       sphere:3:1                         random:1:61
constant-curvature-tachibana       ball:3:-1                          random:2:62
constant-curvature-tachibana       sphere:4:1                         random:2:63
constant-curvature-tachibana-dd    sphere:3:1                         random:1:64
constant-curvature-tachibana-dd    ball:3:-1                          random:2:65
constant-curvature-tachibana-dd    sphere:4:1                         random:1:66
constant-curvature-tachibana-dc    sphere:3:1                         random:1:67
constant-curvature-tachibana-dc    ball:3:-1                          random:2:68
constant-curvature-tachibana-dc    sphere:4:1                         random:1:69
harmonic-tachibana-eigen           ball:3:-1                          harmonic:1
harmonic-tachibana-eigen           ball:3:-1                          star:harmonic:1
harmonic-tachibana-eigen           ball:2:-1                          harmonic:2
planar-hodge-eigen                 sphere:3:1                         closedck:1
planar-hodge-eigen                 sphere:3:1                         closedck:4
planar-hodge-eigen                 sphere:3:1                         star:killing:1:2
planar-hodge-eigen                 sphere:4:1                         d:killing:1:2
killing-hodge-eigen                sphere:3:1                         killing:1:2
killing-hodge-eigen                sphere:3:1                         killing:1:4
killing-hodge-eigen                sphere:3:1                         star:closedck:1
scalar-curvature-eigen             sphere:2:1                         closedck:1
scalar-curvature-eigen             sphere:2:1                         killing:2:3
scalar-curvature-eigen             ball:2:-1                          harmonic:1
)";

inline IdentityCheck run_entry(const CatalogueEntry& e, int points, std::uint64_t seed, const std::string& base_dir = {}) {
  const ChartPtr chart = chart_from_spec(e.chart, base_dir);
  const ExprForm w = form_from_spec(e.form, chart, base_dir);
  const SampleSet samples = sample_points(*chart, points, seed);
  IdentityCheck out;
  try {
    out = verify_identity(e.id, w, samples, e.tol);
  } catch (const HypothesisError& err) {
    out.id = e.id;
    out.sample_id = samples.id;
    out.tol = e.tol.value_or(find_identity(e.id).default_tol);
    out.pass = false;
    out.error = err.what();
  }
  out.chart = e.chart;
  out.form = e.form;
  return out;
}

inline std::vector<IdentityCheck> run_catalogue(const std::vector<CatalogueEntry>& entries, int points,
                                                std::uint64_t seed, const std::string& base_dir = {}) {
  std::vector<IdentityCheck> out;
  for (const CatalogueEntry& e : entries) out.push_back(run_entry(e, points, seed, base_dir));
  return out;
}

// ---------------------------------------------------------------------------
// Parallel wedge witness on flat tori

struct WedgeWitness {
  int n = 0, h = 0, r = 0;
  std::vector<ExprForm> forms;
  std::vector<std::string> labels;
  int rank = 0;
  long long lower_bound = 0;  // C(h, r)
  bool all_parallel = false;
};

/// All r-fold wedges of dx1, …, dx_h on T^n. They are parallel, so each is
/// conformal Killing, and their Gram matrix has rank C(h,r).
inline WedgeWitness parallel_wedge_construct(int n, int h, int r, int points = 5, std::uint64_t seed = 1) {
  if (h < 1 || h > n) throw DimensionError("need 1 <= h <= n");
  if (r < 1 || r >= h) throw DimensionError("need 1 <= r < h (got r=" + std::to_string(r) + ", h=" + std::to_string(h) + ")");
  const ChartPtr torus = make_flat_torus(n);
  WedgeWitness w;
  w.n = n;
  w.h = h;
  w.r = r;
  w.lower_bound = binomial(h, r);
  std::vector<ExprForm> one_forms;
  for (int a = 0; a < h; ++a) one_forms.push_back(coordinate_form(torus, MultiIndex(std::vector<int>{a})));
  for (const MultiIndex& I : enumerate_multiindices(h, r)) {
    ExprForm f = one_forms[I[0]];
    for (int b = 1; b < r; ++b) f = wedge(f, one_forms[I[b]]);
    w.forms.push_back(f);
    std::string label;
    for (int b = 0; b < r; ++b) label += (b ? "^dx" : "dx") + std::to_string(I[b] + 1);
    w.labels.push_back(label);
  }
  const SampleSet samples = sample_points(*torus, points, seed);
  w.all_parallel = true;
  for (const ExprForm& f : w.forms) w.all_parallel = w.all_parallel && classify(f, samples).is(FormClass::C);
  const auto m = static_cast<Eigen::Index>(w.forms.size());
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      gram(i, j) = pointwise_inner(w.forms[i], w.forms[j], samples.points.front());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-9 * std::max(1.0, s[0])) ++w.rank;
  return w;
}

// ---------------------------------------------------------------------------
// Killing / planar split of a conformal Killing form on a flat torus

struct CkDecomposition {
  FourierForm killing_part;  // coexact + harmonic
  FourierForm planar_part;   // exact
  ClassificationReport whole, killing, planar;
  bool pass = false;
};

/// ω = ω' + ω'' with ω' ∈ K and ω'' ∈ P, via the Hodge projectors mode by
/// mode. Harmonic (k = 0) parts are parallel and go to ω'.
inline CkDecomposition decomposition_check(const FourierForm& w, double tol = kDefaultClassifyTol, int points = 20,
                                           std::uint64_t seed = 1) {
  const int n = w.dim(), r = w.degree();
  const ChartPtr torus = make_flat_torus(n, w.periods());
  const SampleSet samples = sample_points(*torus, points, seed);
  CkDecomposition out{FourierForm(n, r, w.band(), w.periods()), FourierForm(n, r, w.band(), w.periods()), {}, {}, {},
                      false};
  out.whole = classify(w.to_expr_form(torus), samples, tol);
  if (!out.whole.is(FormClass::T)) throw HypothesisError("form is not conformal Killing on the torus");
  for (int f = 0; f < w.frequency_count(); ++f) {
    const auto xi = w.wave_vector(f);
    double k2 = 0.0;
    for (double x : xi) k2 += x * x;
    const Eigen::VectorXcd c = detail::mode_vector(w, f);
    Eigen::VectorXcd exact = Eigen::VectorXcd::Zero(c.size());
    if (k2 > 0.0) {
      const Eigen::MatrixXcd D = d_block(n, r - 1, xi);
      exact = D * (D.adjoint() * c) / k2;
    }
    const Eigen::VectorXcd rest = c - exact;
    for (int p = 0; p < w.component_count(); ++p) {
      out.planar_part.coeff(f, p) = exact[p];
      out.killing_part.coeff(f, p) = rest[p];
    }
  }
  out.killing = classify(out.killing_part.to_expr_form(torus), samples, tol);
  out.planar = classify(out.planar_part.to_expr_form(torus), samples, tol);
  out.pass = out.killing.is(FormClass::K) && out.planar.is(FormClass::P);
  return out;
}

}  // namespace ckforms
