#pragma once
//
// Differential forms in two representations:
//
//  * ExprForm: closed-form components ω_I(x) on a chart, one Expression
//    per increasing multi-index I.
//  * FourierForm: band-limited real form on a flat torus, complex
//    coefficients per frequency k (‖k‖∞ ≤ B) and multi-index.
//
// Conventions. Components are stored for increasing multi-indices only; the
// pointwise inner product is g(ω,θ) = Σ_{I,J increasing} det(g^{-1}[I,J]) ω_I θ_J,
// which equals the full-index contraction divided by r!. Orientation is the
// coordinate one (dx1∧…∧dxn positive), so (*ω)_J = √det g · sgn(Jᶜ,J) · ω^{Jᶜ}.

#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ckforms/error.hpp"
#include "ckforms/expr.hpp"
#include "ckforms/geometry.hpp"
#include "ckforms/linalg.hpp"
#include "ckforms/multi_index.hpp"
#include "ckforms/tensor.hpp"

namespace ckforms {

class ExprForm {
 public:
  ExprForm(ChartPtr chart, int degree, std::vector<Expression> components)
      : chart_(std::move(chart)), r_(degree), comps_(std::move(components)) {
    if (!chart_) throw DimensionError("form needs a chart");
    const int n = chart_->dim();
    if (r_ < 0 || r_ > n) throw DimensionError("form degree " + std::to_string(r_) + " out of range for n=" + std::to_string(n));
    const auto count = static_cast<std::size_t>(binomial(n, r_));
    if (comps_.empty()) comps_.resize(count);
    if (comps_.size() != count) throw DimensionError("form needs C(n,r) components");
    for (const Expression& e : comps_)
      if (max_variable(e) > n) throw DimensionError("form component uses a coordinate beyond x" + std::to_string(n));
    d1_.resize(count * n);
    d2_.resize(count * n * n);
    for (std::size_t c = 0; c < count; ++c)
      for (int k = 0; k < n; ++k) {
        const Expression d = differentiate(comps_[c], k + 1);
        d1_[c * n + k] = d;
        for (int l = k; l < n; ++l) {
          const Expression dd = differentiate(d, l + 1);
          d2_[(c * n + k) * n + l] = dd;
          d2_[(c * n + l) * n + k] = dd;
        }
      }
  }

  static ExprForm zero(ChartPtr chart, int degree) { return ExprForm(std::move(chart), degree, {}); }

  static ExprForm from_map(ChartPtr chart, int degree, const std::map<MultiIndex, Expression>& entries) {
    const int n = chart->dim();
    std::vector<Expression> comps(static_cast<std::size_t>(binomial(n, degree)));
    for (const auto& [I, e] : entries) {
      if (I.degree() != degree) throw DimensionError("multi-index degree does not match form degree");
      if (!I.to_vector().empty() && I.to_vector().back() >= n) throw DimensionError("multi-index exceeds dimension");
      comps[position(I, n)] = e;
    }
    return ExprForm(std::move(chart), degree, std::move(comps));
  }

  const ChartPtr& chart() const noexcept { return chart_; }
  int dim() const noexcept { return chart_->dim(); }
  int degree() const noexcept { return r_; }
  const std::vector<Expression>& components() const noexcept { return comps_; }
  const Expression& component(int pos) const { return comps_.at(pos); }
  const Expression& component(const MultiIndex& I) const { return comps_.at(position(I, dim())); }

  /// Full antisymmetric component jets (value, gradient, Hessian) at p.
  JetTensor jet_at(std::span<const double> p) const {
    const int n = dim();
    std::vector<Jet> inc(comps_.size());
    for (std::size_t c = 0; c < comps_.size(); ++c) {
      Jet& j = inc[c];
      j.v = evaluate(comps_[c], p);
      for (int k = 0; k < n; ++k) {
        j.g[k] = evaluate(d1_[c * n + k], p);
        for (int l = k; l < n; ++l) {
          const double v = evaluate(d2_[(c * n + k) * n + l], p);
          j.h[k * kMaxDim + l] = v;
          j.h[l * kMaxDim + k] = v;
        }
      }
    }
    return form_from_increasing(n, r_, inc);
  }

  std::vector<double> values_at(std::span<const double> p) const {
    std::vector<double> v;
    for (const Expression& e : comps_) v.push_back(evaluate(e, p));
    return v;
  }

  ExprForm operator+(const ExprForm& o) const {
    require_compatible(o);
    std::vector<Expression> c(comps_.size());
    for (std::size_t a = 0; a < c.size(); ++a) c[a] = comps_[a] + o.comps_[a];
    return ExprForm(chart_, r_, std::move(c));
  }
  ExprForm operator-(const ExprForm& o) const {
    require_compatible(o);
    std::vector<Expression> c(comps_.size());
    for (std::size_t a = 0; a < c.size(); ++a) c[a] = comps_[a] - o.comps_[a];
    return ExprForm(chart_, r_, std::move(c));
  }
  ExprForm scaled(const Expression& s) const {
    std::vector<Expression> c(comps_.size());
    for (std::size_t a = 0; a < c.size(); ++a) c[a] = s * comps_[a];
    return ExprForm(chart_, r_, std::move(c));
  }

  void require_compatible(const ExprForm& o) const {
    if (chart_ != o.chart_) throw DimensionError("forms live on different charts");
    if (r_ != o.r_) throw DimensionError("forms have different degrees");
  }

 private:
  ChartPtr chart_;
  int r_;
  std::vector<Expression> comps_;
  std::vector<Expression> d1_, d2_;
};

/// Constant coordinate form dx_I.
inline ExprForm coordinate_form(ChartPtr chart, const MultiIndex& I) {
  return ExprForm::from_map(std::move(chart), I.degree(), {{I, Expression(1.0)}});
}

inline ExprForm wedge(const ExprForm& a, const ExprForm& b) {
  if (a.chart() != b.chart()) throw DimensionError("wedge of forms on different charts");
  const int n = a.dim(), p = a.degree(), q = b.degree();
  if (p + q > n) throw DimensionError("wedge degree " + std::to_string(p + q) + " exceeds dimension " + std::to_string(n));
  std::vector<Expression> out(static_cast<std::size_t>(binomial(n, p + q)));
  const auto left = enumerate_multiindices(n, p);
  const auto right = enumerate_multiindices(n, q);
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (a.component(static_cast<int>(i)).is_zero()) continue;
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (b.component(static_cast<int>(j)).is_zero()) continue;
      std::vector<int> t = left[i].to_vector();
      t.insert(t.end(), right[j].begin(), right[j].end());
      const int sign = sort_with_sign(t);
      if (sign == 0) continue;
      const Expression term = a.component(static_cast<int>(i)) * b.component(static_cast<int>(j));
      Expression& slot = out[position(MultiIndex(t), n)];
      slot = sign > 0 ? slot + term : slot - term;
    }
  }
  return ExprForm(a.chart(), p + q, std::move(out));
}

/// Symbolic Hodge star with the chart's metric.
inline ExprForm hodge_star(const ExprForm& w) {
  const MetricChart& chart = *w.chart();
  const int n = chart.dim(), r = w.degree();
  const auto src = enumerate_multiindices(n, r);
  const auto dst = enumerate_multiindices(n, n - r);
  std::vector<Expression> out(dst.size());
  for (std::size_t j = 0; j < dst.size(); ++j) {
    const MultiIndex Jc = complement(dst[j], n);
    Expression raised;
    for (std::size_t l = 0; l < src.size(); ++l) {
      if (w.component(static_cast<int>(l)).is_zero()) continue;
      raised += minor_det(chart.inverse_metric(), Jc.begin(), src[l].begin(), r) * w.component(static_cast<int>(l));
    }
    const Expression v = chart.volume_density() * raised;
    out[j] = concat_sign(Jc, dst[j]) > 0 ? v : -v;
  }
  return ExprForm(w.chart(), n - r, std::move(out));
}

/// g(ω,θ) at p.
inline double pointwise_inner(const ExprForm& a, const ExprForm& b, std::span<const double> p) {
  a.require_compatible(b);
  const PointGeometry geo(*a.chart(), p);
  const int n = a.dim(), r = a.degree();
  SquareMatrix<double> ginv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ginv(i, j) = geo.ginv(i, j).v;
  const auto idx = enumerate_multiindices(n, r);
  const auto va = a.values_at(p), vb = b.values_at(p);
  double s = 0.0;
  for (std::size_t I = 0; I < idx.size(); ++I)
    for (std::size_t J = 0; J < idx.size(); ++J)
      s += minor_det(ginv, idx[I].begin(), idx[J].begin(), r) * va[I] * vb[J];
  return s;
}

// ---------------------------------------------------------------------------
// Exterior multiplication matrices (shared by Fourier operators and spectral
// block assembly).

/// Matrix of θ ↦ v∧θ from r-forms to (r+1)-forms in increasing bases, for a
/// real covector v.
inline Eigen::MatrixXd exterior_multiplication(int n, int r, std::span<const double> v) {
  const auto src = enumerate_multiindices(n, r);
  const auto dst = enumerate_multiindices(n, r + 1);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
  for (std::size_t c = 0; c < src.size(); ++c)
    for (int a = 0; a < n; ++a) {
      if (v[a] == 0.0 || src[c].contains(a)) continue;
      std::vector<int> t{a};
      t.insert(t.end(), src[c].begin(), src[c].end());
      const int sign = sort_with_sign(t);
      M(position(MultiIndex(t), n), static_cast<Eigen::Index>(c)) += sign * v[a];
    }
  return M;
}

// ---------------------------------------------------------------------------
// Band-limited Fourier forms on flat tori

class FourierForm {
 public:
  using Complex = std::complex<double>;

  FourierForm(int n, int degree, int band, std::vector<double> periods = {})
      : n_(n), r_(degree), band_(band), periods_(std::move(periods)) {
    if (n < 1 || n > kMaxDim) throw DimensionError("torus dimension out of range");
    if (degree < 0 || degree > n) throw DimensionError("form degree out of range");
    if (band < 0) throw DimensionError("band limit must be non-negative");
    if (periods_.empty()) periods_.assign(n, 2.0 * std::numbers::pi);
    if (static_cast<int>(periods_.size()) != n) throw DimensionError("need one period per axis");
    side_ = 2 * band + 1;
    nfreq_ = 1;
    for (int a = 0; a < n; ++a) nfreq_ *= side_;
    ncomp_ = static_cast<int>(binomial(n, degree));
    coeff_.assign(static_cast<std::size_t>(nfreq_) * ncomp_, Complex(0.0, 0.0));
  }

  int dim() const noexcept { return n_; }
  int degree() const noexcept { return r_; }
  int band() const noexcept { return band_; }
  const std::vector<double>& periods() const noexcept { return periods_; }
  int frequency_count() const noexcept { return nfreq_; }
  int component_count() const noexcept { return ncomp_; }

  double volume() const {
    double v = 1.0;
    for (double L : periods_) v *= L;
    return v;
  }

  std::vector<int> frequency(int f) const {
    std::vector<int> k(n_);
    for (int a = n_ - 1; a >= 0; --a) {
      k[a] = f % side_ - band_;
      f /= side_;
    }
    return k;
  }
  int frequency_index(std::span<const int> k) const {
    int f = 0;
    for (int a = 0; a < n_; ++a) {
      if (std::abs(k[a]) > band_) throw DimensionError("frequency outside band");
      f = f * side_ + (k[a] + band_);
    }
    return f;
  }
  int negated(int f) const { return nfreq_ - 1 - f; }

  /// Physical wave vector ξ_a = 2π k_a / L_a.
  std::vector<double> wave_vector(int f) const {
    const auto k = frequency(f);
    std::vector<double> xi(n_);
    for (int a = 0; a < n_; ++a) xi[a] = 2.0 * std::numbers::pi * k[a] / periods_[a];
    return xi;
  }

  Complex& coeff(int f, int pos) { return coeff_[static_cast<std::size_t>(f) * ncomp_ + pos]; }
  const Complex& coeff(int f, int pos) const { return coeff_[static_cast<std::size_t>(f) * ncomp_ + pos]; }
  Complex& coeff(std::span<const int> k, const MultiIndex& I) { return coeff(frequency_index(k), position(I, n_)); }
  const Complex& coeff(std::span<const int> k, const MultiIndex& I) const {
    return coeff(frequency_index(k), position(I, n_));
  }

  /// Sets coeff(k,I) = c and coeff(−k,I) = conj(c).
  void set_real_mode(std::span<const int> k, const MultiIndex& I, Complex c) {
    const int f = frequency_index(k), pos = position(I, n_);
    if (f == negated(f)) c = Complex(c.real(), 0.0);
    coeff(f, pos) = c;
    coeff(negated(f), pos) = std::conj(c);
  }

  /// max |coeff(−k,I) − conj(coeff(k,I))|.
  double reality_defect() const {
    double m = 0.0;
    for (int f = 0; f < nfreq_; ++f)
      for (int p = 0; p < ncomp_; ++p) m = std::max(m, std::abs(coeff(negated(f), p) - std::conj(coeff(f, p))));
    return m;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const Complex& c : coeff_) m = std::max(m, std::abs(c));
    return m;
  }

  FourierForm& operator+=(const FourierForm& o) {
    require_compatible(o);
    for (std::size_t a = 0; a < coeff_.size(); ++a) coeff_[a] += o.coeff_[a];
    return *this;
  }
  FourierForm& operator-=(const FourierForm& o) {
    require_compatible(o);
    for (std::size_t a = 0; a < coeff_.size(); ++a) coeff_[a] -= o.coeff_[a];
    return *this;
  }
  FourierForm& operator*=(double s) {
    for (Complex& c : coeff_) c *= s;
    return *this;
  }
  friend FourierForm operator+(FourierForm a, const FourierForm& b) { return a += b; }
  friend FourierForm operator-(FourierForm a, const FourierForm& b) { return a -= b; }
  friend FourierForm operator*(double s, FourierForm a) { return a *= s; }

  void require_compatible(const FourierForm& o) const {
    if (n_ != o.n_ || band_ != o.band_ || periods_ != o.periods_) throw DimensionError("Fourier forms on different tori/bands");
    if (r_ != o.r_) throw DimensionError("Fourier forms have different degrees");
  }

  /// Seeded random real form with coefficients uniform in the unit square.
  static FourierForm random(int n, int degree, int band, std::uint64_t seed, std::vector<double> periods = {}) {
    FourierForm w(n, degree, band, std::move(periods));
    std::mt19937_64 rng(seed);
    for (int f = 0; f < w.nfreq_; ++f) {
      if (f > w.negated(f)) continue;
      for (int p = 0; p < w.ncomp_; ++p) {
        const double re = 2.0 * detail::unit_uniform(rng) - 1.0;
        const double im = f == w.negated(f) ? 0.0 : 2.0 * detail::unit_uniform(rng) - 1.0;
        w.coeff(f, p) = Complex(re, im);
        w.coeff(w.negated(f), p) = Complex(re, -im);
      }
    }
    return w;
  }

  /// Real closed-form version on `torus` (must have matching periods).
  ExprForm to_expr_form(ChartPtr torus) const {
    if (torus->model() != Model::FlatTorus || torus->dim() != n_ || torus->periods() != periods_)
      throw DimensionError("Fourier form needs the flat torus it was built for");
    std::vector<Expression> comps(ncomp_);
    for (int f = 0; f < nfreq_; ++f) {
      if (f > negated(f)) continue;
      const auto xi = wave_vector(f);
      Expression phase;
      for (int a = 0; a < n_; ++a)
        if (xi[a] != 0.0) phase += Expression(xi[a]) * Expression::variable(a + 1);
      for (int p = 0; p < ncomp_; ++p) {
        const Complex c = coeff(f, p);
        if (c == Complex(0.0, 0.0)) continue;
        if (f == negated(f)) {
          comps[p] += Expression(c.real());
          continue;
        }
        // c e^{iθ} + conj(c) e^{−iθ} = 2 Re c cos θ − 2 Im c sin θ
        if (c.real() != 0.0) comps[p] += Expression(2.0 * c.real()) * cos(phase);
        if (c.imag() != 0.0) comps[p] -= Expression(2.0 * c.imag()) * sin(phase);
      }
    }
    return ExprForm(std::move(torus), r_, std::move(comps));
  }

  /// Coefficients from samples on the (2B+1)^n grid; exact when `w` is
  /// band-limited to B.
  static FourierForm from_expr_form(const ExprForm& w, int band) {
    const MetricChart& chart = *w.chart();
    if (chart.model() != Model::FlatTorus) throw DimensionError("Fourier expansion needs a flat torus");
    FourierForm out(chart.dim(), w.degree(), band, chart.periods());
    const int n = out.n_, N = out.side_;
    const double norm = 1.0 / out.nfreq_;
    for (int s = 0; s < out.nfreq_; ++s) {
      Point x(n);
      int rem = s;
      std::vector<int> grid(n);
      for (int a = n - 1; a >= 0; --a) {
        grid[a] = rem % N;
        rem /= N;
        x[a] = out.periods_[a] * grid[a] / N;
      }
      const auto vals = w.values_at(x);
      for (int f = 0; f < out.nfreq_; ++f) {
        const auto xi = out.wave_vector(f);
        double theta = 0.0;
        for (int a = 0; a < n; ++a) theta += xi[a] * x[a];
        const Complex e = std::polar(norm, -theta);
        for (int p = 0; p < out.ncomp_; ++p) out.coeff(f, p) += vals[p] * e;
      }
    }
    return out;
  }

 private:
  int n_, r_, band_;
  std::vector<double> periods_;
  int side_ = 1, nfreq_ = 1, ncomp_ = 1;
  std::vector<Complex> coeff_;
};

/// ⟨ω,θ⟩ = ∫ g(ω,θ) dvol, exact by Parseval on the flat torus.
inline double global_inner(const FourierForm& a, const FourierForm& b) {
  a.require_compatible(b);
  double s = 0.0;
  for (int f = 0; f < a.frequency_count(); ++f)
    for (int p = 0; p < a.component_count(); ++p) s += (a.coeff(f, p) * std::conj(b.coeff(f, p))).real();
  return a.volume() * s;
}

// ---------------------------------------------------------------------------
// Seeded random closed-form test forms

/// Polynomial/trigonometric r-form with seeded coefficients: each component is
/// c0 + c1 sin(a·x + b) + c2 x_i x_j + c3 x_k cos(a'·x).
inline ExprForm random_expr_form(ChartPtr chart, int degree, std::uint64_t seed) {
  const int n = chart->dim();
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * detail::unit_uniform(rng); };
  auto pick = [&] { return 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto linear = [&] {
    Expression e(uni(-1.0, 1.0));
    for (int a = 1; a <= n; ++a) e += Expression(uni(-1.5, 1.5)) * Expression::variable(a);
    return e;
  };
  std::vector<Expression> comps(static_cast<std::size_t>(binomial(n, degree)));
  for (Expression& c : comps) {
    c = Expression(uni(-1.0, 1.0));
    c += Expression(uni(-1.0, 1.0)) * sin(linear());
    c += Expression(uni(-1.0, 1.0)) * Expression::variable(pick()) * Expression::variable(pick());
    c += Expression(uni(-1.0, 1.0)) * Expression::variable(pick()) * cos(linear());
  }
  return ExprForm(std::move(chart), degree, std::move(comps));
}

// ---------------------------------------------------------------------------
// Form fixture files
//
//   degree 1
//   1 : sin(x1)
//   2 : cos(x2)*x1
//
// Fourier fixture files:
//
//   dim 3
//   degree 1
//   band 2
//   periods 6.283185307179586 6.283185307179586 6.283185307179586   (optional)
//   1,0,0 ; 2 ; 0.5,0
//
// Entries whose conjugate partner is absent get it filled in; contradictory
// partners are an error.

inline ExprForm parse_form_fixture(const std::string& text, ChartPtr chart) {
  const int n = chart->dim();
  int degree = -1;
  std::map<MultiIndex, Expression> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.rfind("degree", 0) == 0) {
      std::istringstream ls(line.substr(6));
      if (!(ls >> degree) || degree < 0 || degree > n) throw ParseError("bad degree", lineno);
      continue;
    }
    if (degree < 0) throw ParseError("'degree' must come first", lineno);
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("component line needs ':'", lineno);
    std::vector<int> idx;
    std::istringstream is(line.substr(0, colon));
    std::string tok;
    while (std::getline(is, tok, ',')) {
      tok = detail::trim(tok);
      if (tok.empty()) continue;
      char* end = nullptr;
      const long v = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0' || v < 1 || v > n) throw ParseError("bad index '" + tok + "'", lineno);
      idx.push_back(static_cast<int>(v - 1));
    }
    if (static_cast<int>(idx.size()) != degree) throw ParseError("multi-index length does not match degree", lineno);
    std::vector<int> sorted = idx;
    const int sign = sort_with_sign(sorted);
    if (sign == 0) throw ParseError("repeated index in multi-index", lineno);
    Expression e;
    try {
      e = parse(line.substr(colon + 1), n);
    } catch (const ParseError& err) {
      throw ParseError(std::string("component expression: ") + err.what(), lineno);
    }
    Expression& slot = entries[MultiIndex(sorted)];
    slot = sign > 0 ? slot + e : slot - e;
  }
  if (degree < 0) throw ParseError("form fixture lacks 'degree'", lineno);
  return ExprForm::from_map(std::move(chart), degree, entries);
}

inline ExprForm load_form_fixture(const std::string& path, ChartPtr chart) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open form fixture '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_form_fixture(ss.str(), std::move(chart));
}

inline std::string write_form_fixture(const ExprForm& w) {
  std::string s = "degree " + std::to_string(w.degree()) + "\n";
  const auto idx = enumerate_multiindices(w.dim(), w.degree());
  for (std::size_t a = 0; a < idx.size(); ++a)
    if (!w.component(static_cast<int>(a)).is_zero())
      s += idx[a].to_string() + " : " + to_string(w.component(static_cast<int>(a))) + "\n";
  return s;
}

inline FourierForm parse_fourier_fixture(const std::string& text) {
  int n = 0, degree = -1, band = -1;
  std::vector<double> periods;
  struct Entry {
    std::vector<int> k;
    MultiIndex I;
    std::complex<double> c;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(detail::trim(tok));
    return out;
  };
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
      if (!(ls >> n) || n < 1 || n > kMaxDim) throw ParseError("bad dim", lineno);
    } else if (key == "degree") {
      if (!(ls >> degree)) throw ParseError("bad degree", lineno);
    } else if (key == "band") {
      if (!(ls >> band) || band < 0) throw ParseError("bad band", lineno);
    } else if (key == "periods") {
      double L;
      while (ls >> L) periods.push_back(L);
    } else {
      const auto parts = split(line, ';');
      if (parts.size() != 3) throw ParseError("expected 'k1,...,kn ; I ; re,im'", lineno);
      Entry e;
      e.line = lineno;
      for (const auto& t : split(parts[0], ',')) e.k.push_back(std::stoi(t));
      std::vector<int> idx;
      for (const auto& t : split(parts[1], ','))
        if (!t.empty()) idx.push_back(std::stoi(t) - 1);
      std::vector<int> sorted = idx;
      if (sort_with_sign(sorted) != 1) throw ParseError("multi-index must be strictly increasing", lineno);
      e.I = MultiIndex(sorted);
      const auto c = split(parts[2], ',');
      if (c.size() != 2) throw ParseError("coefficient must be 're,im'", lineno);
      e.c = {std::stod(c[0]), std::stod(c[1])};
      entries.push_back(std::move(e));
    }
  }
  if (n == 0 || degree < 0 || band < 0) throw ParseError("Fourier fixture needs dim, degree and band", lineno);
  FourierForm w(n, degree, band, periods);
  std::vector<bool> given(static_cast<std::size_t>(w.frequency_count()) * w.component_count(), false);
  for (const Entry& e : entries) {
    if (static_cast<int>(e.k.size()) != n) throw ParseError("frequency has wrong length", e.line);
    if (e.I.degree() != degree || (degree > 0 && e.I[degree - 1] >= n)) throw ParseError("bad multi-index", e.line);
    int f;
    try {
      f = w.frequency_index(e.k);
    } catch (const DimensionError&) {
      throw ParseError("frequency outside band", e.line);
    }
    const int p = position(e.I, n);
    w.coeff(f, p) = e.c;
    given[static_cast<std::size_t>(f) * w.component_count() + p] = true;
  }
  for (int f = 0; f < w.frequency_count(); ++f)
    for (int p = 0; p < w.component_count(); ++p) {
      const int g = w.negated(f);
      if (given[static_cast<std::size_t>(f) * w.component_count() + p] &&
          !given[static_cast<std::size_t>(g) * w.component_count() + p])
        w.coeff(g, p) = std::conj(w.coeff(f, p));
    }
  if (w.reality_defect() > 1e-12 * std::max(1.0, w.max_abs_coefficient()))
    throw ParseError("coefficients violate coeff(-k,I) = conj(coeff(k,I))", lineno);
  return w;
}

}  // namespace ckforms
