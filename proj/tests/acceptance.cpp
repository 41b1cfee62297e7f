// Acceptance criteria. One line per criterion; exit status 0 iff all pass.
// Usage: acceptance [path-to-ckforms-cli]

#include <Eigen/Dense>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ckforms/report.hpp"

using namespace ckforms;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!ok) o.detail += (o.detail.empty() ? "" : "; ") + what;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const std::vector<std::pair<int, int>> kTorusPairs = {{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}};

std::string phase(const std::vector<int>& k) {
  std::string s;
  for (std::size_t a = 0; a < k.size(); ++a) s += (a ? "+" : "") + std::to_string(k[a]) + "*x" + std::to_string(a + 1);
  return s;
}

// Kernel of the stacked real operator [□; side] on all real band-B modes
// cos(k·x) dx^I, sin(k·x) dx^I, assembled column by column from the
// pointwise jet operators at seeded points and reduced by one SVD.
int real_kernel_oracle(int n, int r, int band, Operator side) {
  const ChartPtr t = make_flat_torus(n);
  const int side_len = 2 * band + 1;
  int total = 1;
  for (int a = 0; a < n; ++a) total *= side_len;
  std::vector<ExprForm> basis;
  std::vector<int> k(n);
  for (int f = 0; f < total; ++f) {
    int rem = f;
    for (int a = 0; a < n; ++a) {
      k[a] = rem % side_len - band;
      rem /= side_len;
    }
    if (!is_half_space_representative(k)) continue;
    const bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
    for (const MultiIndex& I : enumerate_multiindices(n, r)) {
      basis.push_back(ExprForm::from_map(t, r, {{I, parse("cos(" + phase(k) + ")", n)}}));
      if (!zero) basis.push_back(ExprForm::from_map(t, r, {{I, parse("sin(" + phase(k) + ")", n)}}));
    }
  }
  const int rows_per_point = static_cast<int>(binomial(n, r) + binomial(n, output_degree(side, n, r)));
  const int points = static_cast<int>(2 * basis.size() / rows_per_point) + 10;
  const auto pts = sample_points(*t, points, 2024).points;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(points) * rows_per_point, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    Eigen::Index i = 0;
    for (Operator op : {Operator::Tachibana, side})
      for (const auto& v : apply(op, basis[j], pts).form.values)
        for (double x : v) m(i++, static_cast<Eigen::Index>(j)) = x;
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-8 * s[0]) ++rank;
  return static_cast<int>(m.cols()) - rank;
}

Outcome torus_numbers() {
  Outcome o;
  double seconds = 0.0;
  for (auto [n, r] : kTorusPairs) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpectralNumbers s = compute_numbers(n, r, 2);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const long long c = binomial(n, r);
    const std::string tag = "T" + std::to_string(n) + " r=" + std::to_string(r);
    note(o, s.b == c && s.t == c && s.k == c && s.p == c,
         tag + " got b,t,k,p=" + std::to_string(s.b) + "," + std::to_string(s.t) + "," + std::to_string(s.k) + "," +
             std::to_string(s.p));
    // the full real SVD is affordable at B=2 up to n=3; T^4 uses B=1
    const int ob = n == 4 ? 1 : 2;
    const int ok = real_kernel_oracle(n, r, ob, Operator::Codifferential);
    const int op = real_kernel_oracle(n, r, ob, Operator::D);
    note(o, ok == s.k && op == s.p, tag + " oracle k,p=" + std::to_string(ok) + "," + std::to_string(op));
  }
  note(o, seconds < 30.0, "numbers took " + fmt(seconds) + " s");
  o.detail = o.pass ? "b=t=k=p=C(n,r) on T2..T4 at B=2 in " + fmt(seconds) + " s; real SVD oracle agrees" : o.detail;
  return o;
}

Outcome duality() {
  Outcome o;
  int count = 0;
  for (auto [n, r] : kTorusPairs)
    for (const RelationCheck& c : duality_check(compute_numbers(n, r, 2), compute_numbers(n, n - r, 2))) {
      ++count;
      note(o, c.pass, "T" + std::to_string(n) + " " + c.name);
    }
  if (o.pass) o.detail = std::to_string(count) + " relations hold exactly";
  return o;
}

Outcome block_spectrum() {
  Outcome o;
  const int k[3] = {1, 0, 0};
  const FreqBlock b = assemble_block(3, 1, k);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.tachibana);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double expect[3] = {0.25, 0.25, 1.0 / 3.0};
  double err = 0.0;
  for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(ev[i] - expect[i]));
  note(o, err <= 1e-12, "max error " + fmt(err));
  // the block is Hermitian, so the general solver must agree
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ce(b.tachibana);
  std::vector<double> re;
  for (int i = 0; i < 3; ++i) re.push_back(ce.eigenvalues()[i].real());
  std::sort(re.begin(), re.end());
  for (int i = 0; i < 3; ++i) note(o, std::abs(re[i] - expect[i]) <= 1e-12, "general eigensolver disagrees");
  if (o.pass) o.detail = "eigenvalues {1/4, 1/4, 1/3}, max error " + fmt(err);
  return o;
}

Outcome check_ids(const std::string& id, const std::vector<std::pair<std::string, std::string>>& fixtures, double tol,
                  int points, std::optional<double> eigen = std::nullopt) {
  Outcome o;
  double worst = 0.0;
  for (const auto& [chart, form] : fixtures) {
    const IdentityCheck c = run_entry(CatalogueEntry{id, chart, form, tol, 0}, points, 7);
    worst = std::max(worst, c.residual);
    note(o, c.pass && c.error.empty(), chart + " " + form + " residual " + fmt(c.residual) + " " + c.error);
    if (eigen) note(o, c.eigenvalue && std::abs(*c.eigenvalue - *eigen) <= 1e-12, chart + " eigenvalue mismatch");
  }
  if (o.pass) o.detail = "worst residual " + fmt(worst);
  return o;
}

Outcome weitzenbock() {
  std::vector<std::pair<std::string, std::string>> f;
  const char* charts[] = {"sphere:2:1", "sphere:3:1", "ball:3:-1", "conformal:3:0.2*x1*x2+0.1*cos(x3)",
                          "conformal:2:0.3*sin(x1)+0.2*x2^2"};
  int seed = 1;
  for (const char* c : charts) {
    const int n = c[std::string(c).find(':') + 1] - '0';
    for (int r = 1; r < n; ++r) f.push_back({c, "random:" + std::to_string(r) + ":" + std::to_string(seed++)});
  }
  return check_ids("weitzenbock", f, 1e-8, 50);
}

Outcome constant_curvature() {
  return check_ids("constant-curvature-weitzenbock",
                   {{"sphere:2:1", "random:1:1"},
                    {"sphere:3:1", "random:1:2"},
                    {"sphere:3:1", "random:2:3"},
                    {"ball:3:-1", "random:1:4"},
                    {"sphere:4:1", "random:2:5"}},
                   1e-8, 50);
}

Outcome conformal_middle() {
  Outcome a = check_ids("conformal-weitzenbock", {{"sphere:2:1", "random:1:6"}}, 1e-7, 50);
  Outcome b = check_ids("conformal-ck-eigen", {{"sphere:2:1", "closedck:3"}, {"sphere:2:1", "closedck:1"}}, 1e-7, 50,
                        2.0);
  Outcome o;
  note(o, a.pass, "F = (s/2)ω: " + a.detail);
  note(o, b.pass, "Δω = 2ω: " + b.detail);
  if (o.pass) o.detail = "F = (s/2)ω " + a.detail + "; Δω = 2ω " + b.detail;
  return o;
}

Outcome theorem3() {
  Outcome k = check_ids("killing-hodge-eigen", {{"sphere:3:1", "killing:1:2"}}, 1e-7, 50, 4.0);
  Outcome p = check_ids("planar-hodge-eigen", {{"sphere:3:1", "closedck:1"}}, 1e-7, 50, 3.0);
  Outcome h = check_ids("harmonic-tachibana-eigen", {{"ball:3:-1", "harmonic:1"}}, 1e-7, 50, 1.0);
  Outcome o;
  note(o, k.pass, "Killing: " + k.detail);
  note(o, p.pass, "planar: " + p.detail);
  note(o, h.pass, "harmonic: " + h.detail);
  if (o.pass) o.detail = "Δ=4 " + k.detail + "; Δ=3 " + p.detail + "; □=1 " + h.detail;
  return o;
}

Outcome operator_laws() {
  Outcome o;
  double dd = 0, cc = 0, ss = 0, adj = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 3, r = i % (n + 1);
    const FourierForm w = FourierForm::random(n, r, 2, 500 + i);
    const double scale = std::max(1.0, w.max_abs_coefficient());
    if (r + 2 <= n) dd = std::max(dd, exterior_d(exterior_d(w)).max_abs_coefficient() / scale);
    if (r >= 2) cc = std::max(cc, codifferential(codifferential(w)).max_abs_coefficient() / scale);
    FourierForm back = hodge_star(hodge_star(w));
    if ((r * (n - r)) % 2) back *= -1.0;
    ss = std::max(ss, (back - w).max_abs_coefficient() / scale);
    if (r < n) {
      const FourierForm th = FourierForm::random(n, r + 1, 2, 900 + i);
      const double lhs = global_inner(exterior_d(w), th), rhs = global_inner(w, codifferential(th));
      adj = std::max(adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  note(o, dd <= 1e-10, "dd " + fmt(dd));
  note(o, cc <= 1e-10, "d*d* " + fmt(cc));
  note(o, ss <= 1e-10, "** " + fmt(ss));
  note(o, adj <= 1e-10, "adjoint " + fmt(adj));

  double comm = 0.0;
  for (auto [n, C] : std::vector<std::pair<int, double>>{{2, 1.0}, {3, 1.0}, {4, 1.0}})
    for (int r = 0; r <= n; ++r) {
      const ChartPtr s = make_round_sphere(n, C);
      const ExprForm w = random_expr_form(s, r, 40 + r), sw = hodge_star(w);
      for (const Point& p : sample_points(*s, 10, 3).points) {
        const PointGeometry geo(*s, p);
        const LocalOperators L(geo, w), Ls(geo, sw);
        const JetTensor lhs = hodge_star(geo, L.hodge_laplacian());
        comm = std::max(comm, sup_norm(lhs - Ls.hodge_laplacian()) / std::max(1.0, sup_norm(L.form())));
      }
    }
  note(o, comm <= 1e-9, "*Δ-Δ* " + fmt(comm));
  if (o.pass)
    o.detail = "dd " + fmt(dd) + ", d*d* " + fmt(cc) + ", ** " + fmt(ss) + ", adjoint " + fmt(adj) + ", *Δ-Δ* " +
               fmt(comm);
  return o;
}

Outcome route_agreement() {
  Outcome o;
  double worst = 0.0;
  int fixtures = 0;
  for (const CatalogueEntry& e : parse_catalogue(kDefaultCatalogue)) {
    const ChartPtr chart = chart_from_spec(e.chart);
    const ExprForm w = form_from_spec(e.form, chart);
    const int n = chart->dim(), r = w.degree();
    if (r < 1 || r > n - 1) continue;
    ++fixtures;
    double res = 0.0, norm = 0.0;
    for (const Point& p : sample_points(*chart, 20, 11).points) {
      const PointGeometry geo(*chart, p);
      const LocalOperators L(geo, w);
      res = std::max(res, sup_norm(L.tachibana(TachibanaRoute::Rough) - L.tachibana(TachibanaRoute::Weitzenbock)));
      norm = std::max(norm, sup_norm(L.form()));
    }
    const double rel = norm > 0 ? res / norm : res;
    worst = std::max(worst, rel);
    note(o, rel <= 1e-8, e.id + " " + e.chart + " " + e.form + " " + fmt(rel));
  }
  if (o.pass) o.detail = std::to_string(fixtures) + " fixtures, worst " + fmt(worst);
  return o;
}

Outcome wedge_witness() {
  Outcome o;
  const WedgeWitness w = parallel_wedge_construct(4, 4, 2);
  const SpectralNumbers t = compute_numbers(4, 2, 2);
  note(o, w.forms.size() == 6, "form count " + std::to_string(w.forms.size()));
  note(o, w.rank == 6, "rank " + std::to_string(w.rank));
  note(o, w.all_parallel, "not all parallel");
  bool ck = true;
  const SampleSet pts = sample_points(*make_flat_torus(4), 10, 1);
  for (const ExprForm& f : w.forms) ck = ck && classify(f, pts).is(FormClass::T);
  note(o, ck, "not all conformal Killing");
  note(o, t.t == 6 && t.t >= w.rank, "computed t_2 = " + std::to_string(t.t));
  if (o.pass) o.detail = "6 wedges, rank 6, all parallel; computed t_2(T4) = " + std::to_string(t.t);
  return o;
}

Outcome bounds() {
  Outcome o;
  const SpectralNumbers s = compute_numbers(3, 1, 2);
  const auto rel = bound_check(s);
  note(o, s.t == 3 && s.k == 3 && s.p == 3, "numbers differ from 3");
  note(o, rel[0].rhs == 10 && rel[1].rhs == 6 && rel[2].rhs == 4, "bound values");
  for (const auto& c : rel) note(o, c.pass, c.name);
  if (o.pass) o.detail = "t_1=3<=10, k_1=3<=6, p_1=3<=4";
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism(const char* cli) {
  Outcome o;
  RunConfig c;
  c.command = "report";
  c.seed = 7;
  c.points = 20;
  const std::string a = to_json_text(cmd_report(c).doc), b = to_json_text(cmd_report(c).doc);
  note(o, a == b, "in-process reports differ");
  std::string how = "in-process";
  if (cli) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto fa = dir / "ckforms_acceptance_a.json", fb = dir / "ckforms_acceptance_b.json";
    int codes = 0;
    for (const auto& f : {fa, fb}) {
      const std::string cmd =
          std::string("\"") + cli + "\" report --seed 7 --points 20 --out \"" + f.string() + "\"";
      codes |= std::system(cmd.c_str());
    }
    const std::string ca = slurp(fa), cb = slurp(fb);
    note(o, codes == 0, "cli exited non-zero");
    note(o, !ca.empty() && ca == cb, "cli reports differ");
    note(o, ca == a, "cli report differs from in-process report");
    std::filesystem::remove(fa);
    std::filesystem::remove(fb);
    how += " and cli";
  }
  if (o.pass) o.detail = how + " reports byte-identical (" + std::to_string(a.size()) + " bytes)";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"torus numbers", torus_numbers},
      {"duality", duality},
      {"block spectrum", block_spectrum},
      {"weitzenbock", weitzenbock},
      {"constant-curvature weitzenbock", constant_curvature},
      {"conformally flat n=2r", conformal_middle},
      {"hodge/tachibana eigenvalues", theorem3},
      {"operator laws", operator_laws},
      {"route agreement", route_agreement},
      {"parallel wedge witness", wedge_witness},
      {"bounds", bounds},
      {"determinism", [cli] { return determinism(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
