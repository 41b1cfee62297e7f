#pragma once
//
// Exact kernels of Δ, □ and their intersections with ker d, ker d* on flat
// tori. Every operator is diagonal in the Fourier basis up to a small block
// per frequency, so kernel dimensions are sums of block kernel dimensions.
//
// Real counting: the zero frequency counts once; every other frequency is
// represented by its lexicographically positive member k (first nonzero
// entry > 0) and counts twice, once for each of the real modes cos(ξ·x) and
// sin(ξ·x).

#include <Eigen/Dense>

#include <algorithm>
#include <string>
#include <vector>

#include "ckforms/error.hpp"
#include "ckforms/multi_index.hpp"
#include "ckforms/operators.hpp"

namespace ckforms {

inline constexpr double kDefaultKernelTol = 1e-9;
inline constexpr double kRequiredGap = 1e3;

struct FreqBlock {
  std::vector<int> k;
  std::vector<double> xi;
  int n = 0, r = 0;
  Eigen::MatrixXcd laplacian;       // C(n,r) × C(n,r)
  Eigen::MatrixXcd tachibana;       // C(n,r) × C(n,r)
  Eigen::MatrixXcd d;               // C(n,r+1) × C(n,r)
  Eigen::MatrixXcd codifferential;  // C(n,r−1) × C(n,r)
};

inline FreqBlock assemble_block(int n, int r, std::span<const int> k, const std::vector<double>& periods = {}) {
  if (n < 2 || n > kMaxDim) throw DimensionError("torus dimension out of range");
  if (r < 1 || r > n - 1) throw DimensionError("degree r=" + std::to_string(r) + " out of range 1..n-1");
  if (static_cast<int>(k.size()) != n) throw DimensionError("frequency has wrong length");
  FreqBlock b;
  b.n = n;
  b.r = r;
  b.k.assign(k.begin(), k.end());
  for (int a = 0; a < n; ++a) {
    const double L = periods.empty() ? 2.0 * std::numbers::pi : periods.at(a);
    b.xi.push_back(2.0 * std::numbers::pi * k[a] / L);
  }
  b.laplacian = hodge_laplacian_block(n, r, b.xi);
  b.tachibana = tachibana_block(n, r, b.xi);
  b.d = d_block(n, r, b.xi);
  b.codifferential = codifferential_block(n, r, b.xi);
  return b;
}

struct KernelAnalysis {
  int dimension = 0;
  double threshold = 0.0;
  double smallest_kept = 0.0;    // 0 when nothing is kept
  double largest_dropped = 0.0;  // 0 when nothing is dropped
  std::vector<double> singular_values;
};

/// Kernel dimension as columns minus numerical rank. Singular values below
/// tol·max(1, σ_max) are dropped; kept and dropped values must be separated
/// by at least kRequiredGap, otherwise IndeterminateGap is thrown.
inline KernelAnalysis kernel_analysis(const Eigen::MatrixXcd& m, double tol = kDefaultKernelTol) {
  if (!(tol > 0)) throw DimensionError("kernel tolerance must be positive");
  KernelAnalysis out;
  if (m.cols() == 0) return out;
  if (m.rows() == 0) {
    out.dimension = static_cast<int>(m.cols());
    return out;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() ? s[0] : 0.0;
  out.threshold = tol * std::max(1.0, smax);
  int rank = 0;
  for (double v : out.singular_values) {
    if (v >= out.threshold) {
      ++rank;
      out.smallest_kept = v;
    } else {
      out.largest_dropped = std::max(out.largest_dropped, v);
    }
  }
  out.dimension = static_cast<int>(m.cols()) - rank;
  if (rank > 0 && out.largest_dropped > 0.0 && out.smallest_kept < kRequiredGap * out.largest_dropped)
    throw IndeterminateGap("singular values " + format_double(out.smallest_kept) + " and " +
                           format_double(out.largest_dropped) + " straddle the threshold " +
                           format_double(out.threshold) + " without a clear gap");
  return out;
}

inline int kernel_dimension(const Eigen::MatrixXcd& m, double tol = kDefaultKernelTol) {
  return kernel_analysis(m, tol).dimension;
}

inline Eigen::MatrixXcd stack(const Eigen::MatrixXcd& top, const Eigen::MatrixXcd& bottom) {
  Eigen::MatrixXcd s(top.rows() + bottom.rows(), top.cols());
  s << top, bottom;
  return s;
}

/// True for k = 0 and for the lexicographically positive member of ±k.
inline bool is_half_space_representative(std::span<const int> k) {
  for (int v : k)
    if (v != 0) return v > 0;
  return true;
}

struct BlockDiagnostic {
  std::vector<int> k;
  int multiplicity = 1;
  int b = 0, t = 0, kill = 0, p = 0;
  double min_sv_laplacian = 0.0;
  double min_sv_tachibana = 0.0;
};

struct SpectralNumbers {
  int n = 0, r = 0, band = 0;
  double tol = kDefaultKernelTol;
  int b = 0, t = 0, k = 0, p = 0;
  std::vector<BlockDiagnostic> blocks;  // only blocks with a nonzero kernel, plus k = 0
  double min_nonzero_block_sv = 0.0;    // smallest singular value over blocks without kernel
};

inline double min_singular_value(const KernelAnalysis& a) {
  return a.singular_values.empty() ? 0.0 : a.singular_values.back();
}

inline SpectralNumbers compute_numbers(int n, int r, int band, double tol = kDefaultKernelTol,
                                       const std::vector<double>& periods = {}) {
  if (n < 2 || n > kMaxDim) throw DimensionError("torus dimension must be in 2.." + std::to_string(kMaxDim));
  if (r < 1 || r > n - 1)
    throw DimensionError("degree r=" + std::to_string(r) + " out of range 1..n-1 for n=" + std::to_string(n));
  if (band < 1) throw DimensionError("band limit must be at least 1");
  SpectralNumbers out;
  out.n = n;
  out.r = r;
  out.band = band;
  out.tol = tol;
  const int side = 2 * band + 1;
  int total = 1;
  for (int a = 0; a < n; ++a) total *= side;
  double min_sv = std::numeric_limits<double>::infinity();
  std::vector<int> k(n);
  for (int f = 0; f < total; ++f) {
    int rem = f;
    for (int a = n - 1; a >= 0; --a) {
      k[a] = rem % side - band;
      rem /= side;
    }
    if (!is_half_space_representative(k)) continue;
    const bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
    const int mult = zero ? 1 : 2;
    const FreqBlock blk = assemble_block(n, r, k, periods);
    const KernelAnalysis lap = kernel_analysis(blk.laplacian, tol);
    const KernelAnalysis tach = kernel_analysis(blk.tachibana, tol);
    BlockDiagnostic diag;
    diag.k = k;
    diag.multiplicity = mult;
    diag.b = lap.dimension;
    diag.t = tach.dimension;
    diag.kill = kernel_dimension(stack(blk.tachibana, blk.codifferential), tol);
    diag.p = kernel_dimension(stack(blk.tachibana, blk.d), tol);
    diag.min_sv_laplacian = min_singular_value(lap);
    diag.min_sv_tachibana = min_singular_value(tach);
    out.b += mult * diag.b;
    out.t += mult * diag.t;
    out.k += mult * diag.kill;
    out.p += mult * diag.p;
    if (diag.b || diag.t || diag.kill || diag.p || zero)
      out.blocks.push_back(std::move(diag));
    else
      min_sv = std::min({min_sv, diag.min_sv_laplacian, diag.min_sv_tachibana});
  }
  out.min_nonzero_block_sv = std::isfinite(min_sv) ? min_sv : 0.0;
  return out;
}

struct RelationCheck {
  std::string name;
  long long lhs = 0, rhs = 0;
  bool pass = false;
};

/// t_r = t_{n−r}, p_r = k_{n−r}, b_r = b_{n−r}.
inline std::vector<RelationCheck> duality_check(const SpectralNumbers& a, const SpectralNumbers& b) {
  if (a.n != b.n || a.r + b.r != a.n) throw DimensionError("duality needs degrees r and n-r on the same torus");
  if (a.band != b.band || a.tol != b.tol) throw DimensionError("duality needs equal band and tolerance");
  auto rel = [](std::string name, long long l, long long r) { return RelationCheck{std::move(name), l, r, l == r}; };
  const std::string r = std::to_string(a.r), nr = std::to_string(b.r);
  return {rel("b_" + r + " = b_" + nr, a.b, b.b), rel("t_" + r + " = t_" + nr, a.t, b.t),
          rel("p_" + r + " = k_" + nr, a.p, b.k), rel("k_" + r + " = p_" + nr, a.k, b.p)};
}

inline long long tachibana_bound(int n, int r) { return factorial(n + 2) / (factorial(r + 1) * factorial(n - r + 1)); }
inline long long killing_bound(int n, int r) { return factorial(n + 1) / (factorial(r + 1) * factorial(n - r)); }
inline long long planar_bound(int n, int r) { return factorial(n + 1) / (factorial(r) * factorial(n - r + 1)); }

/// Upper bounds on t_r, k_r, p_r; each RelationCheck reads value ≤ bound.
inline std::vector<RelationCheck> bound_check(const SpectralNumbers& s) {
  auto rel = [](std::string name, long long v, long long bound) {
    return RelationCheck{std::move(name), v, bound, v <= bound};
  };
  const std::string r = std::to_string(s.r);
  return {rel("t_" + r + " <= (n+2)!/((r+1)!(n-r+1)!)", s.t, tachibana_bound(s.n, s.r)),
          rel("k_" + r + " <= (n+1)!/((r+1)!(n-r)!)", s.k, killing_bound(s.n, s.r)),
          rel("p_" + r + " <= (n+1)!/(r!(n-r+1)!)", s.p, planar_bound(s.n, s.r))};
}

}  // namespace ckforms
