#pragma once
//
// Place a form in the inclusion diagram of form classes by residual tests:
//
//   D  closed                 dω = 0
//   F  co-closed              d*ω = 0
//   T  conformal Killing      D3ω = 0
//   H  harmonic               D ∧ F
//   K  Killing                T ∧ F
//   P  planar                 T ∧ D   (closed conformal Killing)
//   C  parallel               ∇ω = 0
//
// Residuals are sup over the sample points of the pointwise g-norms of D1ω,
// D2ω, D3ω and ∇ω. Since ∇ω is their orthogonal sum, C implies every other
// class at any tolerance.

#include <array>
#include <string>
#include <vector>

#include "ckforms/error.hpp"
#include "ckforms/forms.hpp"
#include "ckforms/geometry.hpp"
#include "ckforms/operators.hpp"

namespace ckforms {

inline constexpr double kDefaultClassifyTol = 1e-7;

enum class FormClass { D, F, T, H, K, P, C };
inline constexpr std::array<FormClass, 7> kAllClasses = {FormClass::D, FormClass::F, FormClass::T, FormClass::H,
                                                         FormClass::K, FormClass::P, FormClass::C};

inline const char* class_name(FormClass c) {
  switch (c) {
    case FormClass::D: return "D";
    case FormClass::F: return "F";
    case FormClass::T: return "T";
    case FormClass::H: return "H";
    case FormClass::K: return "K";
    case FormClass::P: return "P";
    case FormClass::C: return "C";
  }
  return "?";
}

inline const char* class_description(FormClass c) {
  switch (c) {
    case FormClass::D: return "closed";
    case FormClass::F: return "co-closed";
    case FormClass::T: return "conformal Killing";
    case FormClass::H: return "harmonic";
    case FormClass::K: return "Killing";
    case FormClass::P: return "planar (closed conformal Killing)";
    case FormClass::C: return "parallel";
  }
  return "?";
}

struct ClassificationReport {
  int degree = 0;
  double tol = kDefaultClassifyTol;
  std::string sample_id;
  double form_norm = 0.0;  // sup of the pointwise g-norm of ω
  double residual_d = 0.0, residual_codifferential = 0.0, residual_D3 = 0.0, residual_nabla = 0.0;
  std::array<bool, 7> member{};

  bool is(FormClass c) const { return member[static_cast<int>(c)]; }
  double threshold() const { return tol * (1.0 + form_norm); }
  std::string classes() const {
    std::string s;
    for (FormClass c : kAllClasses)
      if (is(c)) s += class_name(c);
    return s;
  }
};

inline ClassificationReport classify(const ExprForm& w, const SampleSet& samples, double tol = kDefaultClassifyTol) {
  const int n = w.dim(), r = w.degree();
  if (r < 1 || r > n - 1) throw DimensionError("classification needs 1 <= r <= n-1 (got r=" + std::to_string(r) + ")");
  if (samples.points.empty()) throw DimensionError("classification needs at least one sample point");
  if (!(tol > 0)) throw DimensionError("tolerance must be positive");
  ClassificationReport rep;
  rep.degree = r;
  rep.tol = tol;
  rep.sample_id = samples.id;
  for (const Point& p : samples.points) {
    const PointGeometry geo(*w.chart(), p);
    const LocalOperators L(geo, w);
    rep.form_norm = std::max(rep.form_norm, tensor_norm(geo, L.form()));
    rep.residual_d = std::max(rep.residual_d, tensor_norm(geo, L.basis_part(1)));
    rep.residual_codifferential = std::max(rep.residual_codifferential, tensor_norm(geo, L.basis_part(2)));
    rep.residual_D3 = std::max(rep.residual_D3, tensor_norm(geo, L.basis_part(3)));
    rep.residual_nabla = std::max(rep.residual_nabla, tensor_norm(geo, L.nabla()));
  }
  const double thr = rep.threshold();
  auto set = [&](FormClass c, bool v) { rep.member[static_cast<int>(c)] = v; };
  const bool D = rep.residual_d <= thr, F = rep.residual_codifferential <= thr, T = rep.residual_D3 <= thr;
  const bool C = rep.residual_nabla <= thr;
  set(FormClass::D, D);
  set(FormClass::F, F);
  set(FormClass::T, T);
  set(FormClass::H, D && F);
  set(FormClass::K, T && F);
  set(FormClass::P, T && D);
  set(FormClass::C, C);
  if (C && !(rep.is(FormClass::K) && rep.is(FormClass::P) && rep.is(FormClass::H)))
    throw InternalError("parallel form failed a weaker class test (residuals d=" + format_double(rep.residual_d) +
                        ", d*=" + format_double(rep.residual_codifferential) +
                        ", D3=" + format_double(rep.residual_D3) + ")");
  return rep;
}

}  // namespace ckforms
