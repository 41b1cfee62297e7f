#include <gtest/gtest.h>

#include <random>

#include "ckforms/spectral.hpp"

using namespace ckforms;

namespace {

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXcd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues();
}

std::string phase(const std::vector<int>& k) {
  std::string s;
  for (std::size_t a = 0; a < k.size(); ++a) s += (a ? "+" : "") + std::to_string(k[a]) + "*x" + std::to_string(a + 1);
  return s;
}

// Real kernel dimension of [□; B] on band-1 forms on T^n, computed from the
// pointwise jet operators on the real basis cos(k·x) dx^I, sin(k·x) dx^I.
int real_kernel_oracle(int n, int r, Operator side) {
  const ChartPtr t = make_flat_torus(n);
  const auto pts = sample_points(*t, 40, 99).points;
  std::vector<ExprForm> basis;
  int total = 1;
  for (int a = 0; a < n; ++a) total *= 3;
  std::vector<int> k(n);
  for (int f = 0; f < total; ++f) {
    int rem = f;
    for (int a = 0; a < n; ++a) {
      k[a] = rem % 3 - 1;
      rem /= 3;
    }
    if (!is_half_space_representative(k)) continue;
    const bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
    for (const MultiIndex& I : enumerate_multiindices(n, r)) {
      basis.push_back(ExprForm::from_map(t, r, {{I, parse("cos(" + phase(k) + ")", n)}}));
      if (!zero) basis.push_back(ExprForm::from_map(t, r, {{I, parse("sin(" + phase(k) + ")", n)}}));
    }
  }
  std::vector<std::vector<double>> cols;
  for (const ExprForm& b : basis) {
    std::vector<double> col;
    for (Operator op : {Operator::Tachibana, side})
      for (const auto& v : apply(op, b, pts).form.values) col.insert(col.end(), v.begin(), v.end());
    cols.push_back(std::move(col));
  }
  Eigen::MatrixXd m(cols.front().size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) m(i, j) = cols[j][i];
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-8 * s[0]) ++rank;
  return static_cast<int>(m.cols()) - rank;
}

}  // namespace

TEST(Blocks, TwoTorusOneForms) {
  const int k[2] = {1, 0};
  const FreqBlock b = assemble_block(2, 1, k);
  EXPECT_LE((b.laplacian - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LE((b.tachibana - 0.25 * Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(b.d.rows(), 1);
  EXPECT_EQ(b.codifferential.rows(), 1);
}

TEST(Blocks, ThreeTorusExample) {
  const int k[3] = {1, 0, 0};
  const Eigen::VectorXd ev = sorted_eigenvalues(assemble_block(3, 1, k).tachibana);
  EXPECT_NEAR(ev[0], 0.25, 1e-15);
  EXPECT_NEAR(ev[1], 0.25, 1e-15);
  EXPECT_NEAR(ev[2], 1.0 / 3.0, 1e-15);
}

TEST(Blocks, ClosedFormSpectra) {
  // exact modes: (n−r)|ξ|²/(r(r+1)(n−r+1)), multiplicity C(n−1,r−1)
  // coexact modes: |ξ|²/(r+1)², multiplicity C(n−1,r)
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(-3, 3);
  for (int n = 2; n <= 5; ++n)
    for (int r = 1; r < n; ++r)
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<int> k(n);
        do {
          for (int& v : k) v = pick(rng);
        } while (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; }));
        const FreqBlock b = assemble_block(n, r, k);
        double k2 = 0.0;
        for (double x : b.xi) k2 += x * x;
        std::vector<double> expect;
        for (long long i = 0; i < binomial(n - 1, r); ++i) expect.push_back(k2 / ((r + 1.0) * (r + 1.0)));
        for (long long i = 0; i < binomial(n - 1, r - 1); ++i)
          expect.push_back((n - r) * k2 / (r * (r + 1.0) * (n - r + 1.0)));
        std::sort(expect.begin(), expect.end());
        const Eigen::VectorXd ev = sorted_eigenvalues(b.tachibana);
        ASSERT_EQ(static_cast<std::size_t>(ev.size()), expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(ev[i], expect[i], 1e-12 * k2);
        const Eigen::VectorXd lap = sorted_eigenvalues(b.laplacian);
        for (Eigen::Index i = 0; i < lap.size(); ++i) EXPECT_NEAR(lap[i], k2, 1e-12 * k2);
      }
}

TEST(Blocks, HodgeSplitRanks) {
  // ker of the nonzero-frequency block splits into im d and im d*
  for (int n = 2; n <= 5; ++n)
    for (int r = 1; r < n; ++r) {
      std::vector<int> k(n, 0);
      k[0] = 1;
      k[n - 1] = 2;
      const FreqBlock b = assemble_block(n, r, k);
      const int rank_d = static_cast<int>(b.d.cols()) - kernel_dimension(b.d);
      const int rank_delta = static_cast<int>(b.codifferential.cols()) - kernel_dimension(b.codifferential);
      EXPECT_EQ(rank_d + rank_delta, binomial(n, r));
      EXPECT_EQ(rank_d, binomial(n - 1, r));
    }
}

TEST(Blocks, Errors) {
  const int k[2] = {0, 0};
  EXPECT_THROW(assemble_block(2, 0, k), DimensionError);
  EXPECT_THROW(assemble_block(2, 2, k), DimensionError);
  EXPECT_THROW(assemble_block(3, 1, k), DimensionError);
}

TEST(KernelDimension, Examples) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  EXPECT_EQ(kernel_dimension(m), 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-14;
  EXPECT_EQ(kernel_dimension(m), 1);
  EXPECT_EQ(kernel_dimension(Eigen::MatrixXcd::Identity(3, 3)), 0);
  EXPECT_EQ(kernel_dimension(Eigen::MatrixXcd(0, 4)), 4);
  Eigen::MatrixXcd wide = Eigen::MatrixXcd::Zero(1, 3);
  wide(0, 1) = 2.0;
  EXPECT_EQ(kernel_dimension(wide), 2);
}

TEST(KernelDimension, IndeterminateGap) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 2e-9;
  m(2, 2) = 5e-10;
  EXPECT_THROW(kernel_dimension(m, 1e-9), IndeterminateGap);
  m(1, 1) = 1e-3;
  EXPECT_EQ(kernel_dimension(m, 1e-9), 1);
  EXPECT_THROW(kernel_dimension(m, 0.0), DimensionError);
}

TEST(Numbers, FlatToriEqualBinomial) {
  for (int n = 2; n <= 4; ++n)
    for (int r = 1; r < n; ++r)
      for (int B = 1; B <= (n == 4 ? 2 : 3); ++B) {
        const SpectralNumbers s = compute_numbers(n, r, B);
        const long long c = binomial(n, r);
        EXPECT_EQ(s.b, c);
        EXPECT_EQ(s.t, c);
        EXPECT_EQ(s.k, c);
        EXPECT_EQ(s.p, c);
        // smallest |ξ| = 1 eigenvalue of the closed-form □ spectrum
        const double gap = std::min(1.0 / ((r + 1.0) * (r + 1.0)), (n - r) / (r * (r + 1.0) * (n - r + 1.0)));
        EXPECT_NEAR(s.min_nonzero_block_sv, gap, 1e-12);
        ASSERT_EQ(s.blocks.size(), 1u);
        EXPECT_EQ(s.blocks[0].multiplicity, 1);
      }
}

TEST(Numbers, NonStandardPeriods) {
  const SpectralNumbers s = compute_numbers(3, 1, 2, kDefaultKernelTol, {1.0, 2.0, 5.0});
  EXPECT_EQ(s.t, 3);
  EXPECT_EQ(s.k, 3);
}

TEST(Numbers, Errors) {
  EXPECT_THROW(compute_numbers(3, 0, 1), DimensionError);
  EXPECT_THROW(compute_numbers(3, 3, 1), DimensionError);
  EXPECT_THROW(compute_numbers(1, 1, 1), DimensionError);
  EXPECT_THROW(compute_numbers(3, 1, 0), DimensionError);
}

TEST(Numbers, DualityRelations) {
  for (int n = 2; n <= 4; ++n)
    for (int r = 1; r < n; ++r) {
      const auto rels = duality_check(compute_numbers(n, r, 1), compute_numbers(n, n - r, 1));
      ASSERT_EQ(rels.size(), 4u);
      for (const auto& c : rels) EXPECT_TRUE(c.pass) << c.name;
    }
  EXPECT_THROW(duality_check(compute_numbers(3, 1, 1), compute_numbers(3, 1, 1)), DimensionError);
}

TEST(Numbers, Bounds) {
  EXPECT_EQ(tachibana_bound(3, 1), 10);
  EXPECT_EQ(killing_bound(3, 1), 6);
  EXPECT_EQ(planar_bound(3, 1), 4);
  // killing 1-forms on R^n: n(n+1)/2; closed conformal Killing: n+1
  for (int n = 2; n <= 5; ++n) {
    EXPECT_EQ(killing_bound(n, 1), n * (n + 1) / 2);
    EXPECT_EQ(planar_bound(n, 1), n + 1);
    for (int r = 1; r < n; ++r) {
      EXPECT_EQ(killing_bound(n, r), planar_bound(n, n - r));
      EXPECT_EQ(tachibana_bound(n, r), killing_bound(n, r) + planar_bound(n, r));
    }
  }
  for (int n = 2; n <= 4; ++n)
    for (int r = 1; r < n; ++r)
      for (const auto& c : bound_check(compute_numbers(n, r, 1))) EXPECT_TRUE(c.pass) << c.name;
}

TEST(Numbers, RealMatrixOracle) {
  for (auto [n, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}}) {
    const SpectralNumbers s = compute_numbers(n, r, 1);
    EXPECT_EQ(real_kernel_oracle(n, r, Operator::Codifferential), s.k) << n << " " << r;
    EXPECT_EQ(real_kernel_oracle(n, r, Operator::D), s.p) << n << " " << r;
  }
}
