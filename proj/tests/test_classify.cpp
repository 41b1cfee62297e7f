#include <gtest/gtest.h>

#include "ckforms/classify.hpp"
#include "ckforms/theorems.hpp"

using namespace ckforms;

namespace {

MultiIndex mi(std::vector<int> one_based) {
  for (int& i : one_based) --i;
  return MultiIndex(one_based);
}

std::string fixture(const std::string& rel) { return std::string(CKFORMS_FIXTURE_DIR) + "/" + rel; }

}  // namespace

TEST(Classify, ConstantFormIsParallel) {
  const ChartPtr t = make_flat_torus(3);
  const ExprForm w = ExprForm::from_map(t, 1, {{mi({1}), Expression(1.0)}, {mi({2}), Expression(-0.5)}});
  const auto rep = classify(w, sample_points(*t, 20, 1));
  EXPECT_EQ(rep.classes(), "DFTHKPC");
  EXPECT_EQ(rep.residual_nabla, 0.0);
  EXPECT_EQ(rep.degree, 1);
  EXPECT_EQ(rep.sample_id, "seed=1;count=20");
}

TEST(Classify, SinDx1IsOnlyClosed) {
  const ChartPtr t = make_flat_torus(2);
  const ExprForm w = load_form_fixture(fixture("forms/sin_dx1.form"), t);
  const SampleSet s = sample_points(*t, 20, 2);
  const auto rep = classify(w, s);
  EXPECT_EQ(rep.classes(), "D");
  // |D2 ω|_g = |d*ω| |g|_g / n = |cos x1| / √2
  double expect = 0.0;
  for (const Point& p : s.points) expect = std::max(expect, std::abs(std::cos(p[0])) / std::sqrt(2.0));
  EXPECT_NEAR(rep.residual_codifferential, expect, 1e-14);
  EXPECT_EQ(rep.residual_d, 0.0);
}

TEST(Classify, SphereAmbientDifferentialIsPlanar) {
  const ChartPtr s2 = load_chart_fixture(fixture("charts/sphere2.chart"));
  const ExprForm w = load_form_fixture(fixture("forms/ambient_z.form"), s2);
  const auto rep = classify(w, sample_points(*s2, 30, 3));
  EXPECT_EQ(rep.classes(), "DTP");
  EXPECT_GT(rep.residual_codifferential, 1e-2);

  // same form from a form spec string, on the built-in model
  const ChartPtr m = make_round_sphere(2, 1.0);
  EXPECT_EQ(classify(form_from_spec("closedck:3", m), sample_points(*m, 30, 3)).classes(), "DTP");
}

TEST(Classify, KnownExamplesOnSpheres) {
  const ChartPtr s3 = make_round_sphere(3, 1.0);
  const SampleSet pts = sample_points(*s3, 20, 4);
  EXPECT_EQ(classify(form_from_spec("killing:1:2", s3), pts).classes(), "FTK");
  EXPECT_EQ(classify(form_from_spec("closedck:4", s3), pts).classes(), "DTP");
  EXPECT_EQ(classify(form_from_spec("random:1:3", s3), pts).classes(), "");
  const ChartPtr b3 = make_poincare_ball(3, -1.0);
  EXPECT_EQ(classify(form_from_spec("harmonic:1", b3), sample_points(*b3, 20, 4)).classes(), "DFH");
}

TEST(Classify, StarDuality) {
  const ChartPtr s3 = make_round_sphere(3, 1.0);
  const SampleSet pts = sample_points(*s3, 20, 5);
  for (const char* spec : {"killing:1:2", "closedck:1", "killing:2:4", "closedck:3", "random:1:1", "random:2:2"}) {
    const ExprForm w = form_from_spec(spec, s3);
    const auto a = classify(w, pts), b = classify(hodge_star(w), pts);
    EXPECT_EQ(a.is(FormClass::T), b.is(FormClass::T)) << spec;
    EXPECT_EQ(a.is(FormClass::P), b.is(FormClass::K)) << spec;
    EXPECT_EQ(a.is(FormClass::K), b.is(FormClass::P)) << spec;
    // full-tensor norms of r-forms carry a factor √r!
    const double f = std::sqrt(double(factorial(3 - a.degree)) / double(factorial(a.degree)));
    EXPECT_NEAR(f * a.residual_D3, b.residual_D3, 1e-9 * (1 + b.residual_D3)) << spec;
    EXPECT_NEAR(f * a.residual_d, b.residual_codifferential, 1e-9 * (1 + b.residual_codifferential)) << spec;
    EXPECT_NEAR(f * a.residual_codifferential, b.residual_d, 1e-9 * (1 + b.residual_d)) << spec;
  }
}

TEST(Classify, MonotoneInTolerance) {
  const ChartPtr ch = make_round_sphere(4, 1.0);
  const SampleSet pts = sample_points(*ch, 10, 6);
  for (const char* spec : {"random:2:1", "closedck:2", "killing:1:3", "star:closedck:1"}) {
    const ExprForm w = form_from_spec(spec, ch);
    const double tols[] = {1.0, 1e-2, 1e-5, 1e-7, 1e-10, 1e-14};
    std::array<bool, 7> prev{};
    prev.fill(true);
    for (double tol : tols) {
      const auto rep = classify(w, pts, tol);
      for (FormClass c : kAllClasses) EXPECT_LE(rep.is(c), prev[static_cast<int>(c)]) << spec << " " << tol;
      prev = rep.member;
    }
  }
}

TEST(Classify, LatticeConsistency) {
  const ChartPtr ch = load_chart_fixture(fixture("charts/warped.chart"));
  const SampleSet pts = sample_points(*ch, 5, 7);
  for (int r = 1; r <= 2; ++r)
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
      for (double tol : {1e-7, 1e3}) {
        const auto rep = classify(random_expr_form(ch, r, seed), pts, tol);
        EXPECT_EQ(rep.is(FormClass::H), rep.is(FormClass::D) && rep.is(FormClass::F));
        EXPECT_EQ(rep.is(FormClass::K), rep.is(FormClass::T) && rep.is(FormClass::F));
        EXPECT_EQ(rep.is(FormClass::P), rep.is(FormClass::T) && rep.is(FormClass::D));
        if (rep.is(FormClass::C)) {
          EXPECT_TRUE(rep.is(FormClass::K) && rep.is(FormClass::P) && rep.is(FormClass::H));
        }
      }
}

TEST(Classify, ResidualsMatchNablaDecomposition) {
  // |∇ω|² = |D1ω|² + |D2ω|² + |D3ω|² pointwise, so at a single point the sup
  // residuals obey the same relation
  const ChartPtr ch = make_poincare_ball(4, -2.0);
  for (int r = 1; r <= 3; ++r) {
    const ExprForm w = random_expr_form(ch, r, 10 + r);
    for (const Point& p : sample_points(*ch, 5, 8).points) {
      const auto rep = classify(w, SampleSet{"one", {p}});
      const double sum = rep.residual_d * rep.residual_d + rep.residual_codifferential * rep.residual_codifferential +
                         rep.residual_D3 * rep.residual_D3;
      EXPECT_NEAR(sum, rep.residual_nabla * rep.residual_nabla, 1e-9 * (1 + sum));
    }
  }
}

TEST(Classify, Errors) {
  const ChartPtr t = make_flat_torus(3);
  const SampleSet pts = sample_points(*t, 2, 1);
  EXPECT_THROW(classify(ExprForm::zero(t, 0), pts), DimensionError);
  EXPECT_THROW(classify(ExprForm::zero(t, 3), pts), DimensionError);
  EXPECT_THROW(classify(ExprForm::zero(t, 1), SampleSet{"empty", {}}), DimensionError);
  EXPECT_THROW(classify(ExprForm::zero(t, 1), pts, 0.0), DimensionError);
}
