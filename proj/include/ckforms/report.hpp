#pragma once
//
// Machine-readable reports for the command-line front end. Documents are
// nlohmann ordered_json (fixed key order) printed by `to_json_text`, which
// writes every float with 17 significant digits so equal runs give
// byte-identical output.

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ckforms/classify.hpp"
#include "ckforms/error.hpp"
#include "ckforms/geometry.hpp"
#include "ckforms/spectral.hpp"
#include "ckforms/theorems.hpp"

namespace ckforms {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  std::string manifold = "torus";  // torus | sphere | ball | conformal | custom
  int dim = 3;
  int r = 1;
  int band = 2;
  double curvature = 1.0;
  std::string exponent;   // conformal factor exponent f for g = e^{2f}δ
  std::string chart;      // chart fixture path (custom manifold)
  std::string form;       // form spec or form fixture path
  std::string catalogue;  // catalogue path; empty means the built-in one
  std::uint64_t seed = 1;
  std::optional<double> tol;
  int points = 50;
  std::string format = "json";
};

/// Invalid configuration; maps to exit code 2 like parse errors.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline void write_json(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        write_json(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write_json(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

inline std::string to_json_text(const Json& j) {
  std::string s;
  detail::write_json(s, j, 0);
  return s + "\n";
}

// ---------------------------------------------------------------------------
// Configuration

inline void validate(const RunConfig& c) {
  static const std::vector<std::string> manifolds = {"torus", "sphere", "ball", "conformal", "custom"};
  if (std::find(manifolds.begin(), manifolds.end(), c.manifold) == manifolds.end())
    throw ConfigError("unknown manifold '" + c.manifold + "'");
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
  if (c.manifold != "custom" && (c.dim < 2 || c.dim > kMaxDim))
    throw ConfigError("dimension must be in 2.." + std::to_string(kMaxDim));
  if (c.points < 1) throw ConfigError("--points must be positive");
  if (c.tol && !(*c.tol > 0)) throw ConfigError("--tol must be positive");
  if (c.band < 1) throw ConfigError("--band must be at least 1");
  if (c.manifold == "custom" && c.chart.empty()) throw ConfigError("--manifold custom needs --chart <file>");
  if (c.manifold == "conformal" && c.exponent.empty()) throw ConfigError("--manifold conformal needs --exponent <f>");
}

inline ChartPtr chart_from_config(const RunConfig& c) {
  if (c.manifold == "torus") return make_flat_torus(c.dim);
  if (c.manifold == "sphere") return make_round_sphere(c.dim, c.curvature);
  if (c.manifold == "ball") return make_poincare_ball(c.dim, c.curvature);
  if (c.manifold == "conformal") return make_conformally_flat(c.dim, parse(c.exponent, c.dim));
  return load_chart_fixture(c.chart);
}

inline Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["manifold"] = c.manifold;
  j["dim"] = c.dim;
  j["r"] = c.r;
  j["band"] = c.band;
  if (c.manifold == "sphere" || c.manifold == "ball") j["curvature"] = c.curvature;
  if (!c.exponent.empty()) j["exponent"] = c.exponent;
  if (!c.chart.empty()) j["chart"] = c.chart;
  if (!c.form.empty()) j["form"] = c.form;
  j["catalogue"] = c.catalogue.empty() ? std::string("built-in") : c.catalogue;
  j["seed"] = c.seed;
  j["points"] = c.points;
  if (c.tol) j["tol"] = *c.tol;
  return j;
}

inline Json document(const RunConfig& c) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = c.command;
  j["curvature_convention"] = kCurvatureConvention;
  j["config"] = config_json(c);
  return j;
}

// ---------------------------------------------------------------------------
// numbers

inline Json relations_json(const std::vector<RelationCheck>& rel) {
  Json a = Json::array();
  for (const RelationCheck& x : rel) a.push_back(Json{{"relation", x.name}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"pass", x.pass}});
  return a;
}

inline Json numbers_json(const SpectralNumbers& s) {
  Json j;
  j["n"] = s.n;
  j["r"] = s.r;
  j["band"] = s.band;
  j["tol"] = s.tol;
  j["b"] = s.b;
  j["t"] = s.t;
  j["k"] = s.k;
  j["p"] = s.p;
  Json blocks = Json::array();
  for (const BlockDiagnostic& d : s.blocks)
    blocks.push_back(Json{{"k", d.k}, {"multiplicity", d.multiplicity}, {"b", d.b}, {"t", d.t}, {"killing", d.kill},
                          {"planar", d.p}});
  j["kernel_blocks"] = blocks;
  j["min_singular_value_other_blocks"] = s.min_nonzero_block_sv;
  return j;
}

struct CommandResult {
  Json doc;
  std::string csv;
  bool pass = true;
};

inline CommandResult cmd_numbers(const RunConfig& c) {
  validate(c);
  if (c.manifold != "torus") throw ConfigError("spectral kernels supported on flat tori only");
  if (c.r < 1 || c.r > c.dim - 1)
    throw ConfigError("degree r=" + std::to_string(c.r) + " out of range 1..n-1 for n=" + std::to_string(c.dim));
  const double tol = c.tol.value_or(kDefaultKernelTol);
  const SpectralNumbers s = compute_numbers(c.dim, c.r, c.band, tol);
  const SpectralNumbers dual = compute_numbers(c.dim, c.dim - c.r, c.band, tol);
  const auto duality = duality_check(s, dual);
  const auto bounds = bound_check(s);
  CommandResult out;
  out.doc = document(c);
  out.doc["numbers"] = numbers_json(s);
  out.doc["dual_numbers"] = numbers_json(dual);
  out.doc["duality"] = relations_json(duality);
  out.doc["bounds"] = relations_json(bounds);
  for (const auto& x : duality) out.pass = out.pass && x.pass;
  for (const auto& x : bounds) out.pass = out.pass && x.pass;
  out.doc["pass"] = out.pass;
  std::ostringstream csv;
  csv << "n,r,band,tol,b,t,k,p\n"
      << s.n << ',' << s.r << ',' << s.band << ',' << format_double(tol) << ',' << s.b << ',' << s.t << ',' << s.k << ','
      << s.p << '\n';
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------
// classify

/// Form spec if its head names a known kind, otherwise a fixture path.
inline ExprForm form_from_config(const RunConfig& c, const ChartPtr& chart) {
  if (c.form.empty()) throw ConfigError("classify needs --form <spec or file>");
  static const std::vector<std::string> kinds = {"const", "random", "closedck", "killing", "harmonic", "star", "d", "file"};
  const std::string head = c.form.substr(0, c.form.find(':'));
  if (c.form.find(':') != std::string::npos && std::find(kinds.begin(), kinds.end(), head) != kinds.end())
    return form_from_spec(c.form, chart);
  return load_form_fixture(c.form, chart);
}

inline Json classification_json(const ClassificationReport& rep) {
  Json j;
  j["degree"] = rep.degree;
  j["sample_id"] = rep.sample_id;
  j["tol"] = rep.tol;
  j["form_norm"] = rep.form_norm;
  j["threshold"] = rep.threshold();
  j["residuals"] = Json{{"d", rep.residual_d},
                        {"d*", rep.residual_codifferential},
                        {"D3", rep.residual_D3},
                        {"nabla", rep.residual_nabla}};
  Json m;
  for (FormClass c : kAllClasses) m[class_name(c)] = rep.is(c);
  j["memberships"] = m;
  j["classes"] = rep.classes();
  return j;
}

inline CommandResult cmd_classify(const RunConfig& c) {
  validate(c);
  const ChartPtr chart = chart_from_config(c);
  const ExprForm w = form_from_config(c, chart);
  const SampleSet samples = sample_points(*chart, c.points, c.seed);
  const ClassificationReport rep = classify(w, samples, c.tol.value_or(kDefaultClassifyTol));
  CommandResult out;
  out.doc = document(c);
  out.doc["chart"] = chart->describe();
  out.doc["classification"] = classification_json(rep);
  std::ostringstream csv;
  csv << "quantity,value\n"
      << "residual_d," << format_double(rep.residual_d) << "\nresidual_d*," << format_double(rep.residual_codifferential)
      << "\nresidual_D3," << format_double(rep.residual_D3) << "\nresidual_nabla," << format_double(rep.residual_nabla)
      << '\n';
  for (FormClass f : kAllClasses) csv << class_name(f) << ',' << (rep.is(f) ? "true" : "false") << '\n';
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------
// verify

inline Json checks_json(const std::vector<IdentityCheck>& checks) {
  Json a = Json::array();
  for (const IdentityCheck& x : checks) {
    Json j;
    j["id"] = x.id;
    j["chart"] = x.chart;
    j["form"] = x.form;
    j["residual"] = x.residual;
    j["tol"] = x.tol;
    j["pass"] = x.pass;
    if (x.eigenvalue) j["eigenvalue"] = *x.eigenvalue;
    if (!x.error.empty()) j["error"] = x.error;
    a.push_back(j);
  }
  return a;
}

inline std::vector<CatalogueEntry> catalogue_from_config(const RunConfig& c, std::string* base_dir) {
  if (c.catalogue.empty()) {
    if (base_dir) base_dir->clear();
    return parse_catalogue(kDefaultCatalogue);
  }
  if (base_dir) *base_dir = std::filesystem::path(c.catalogue).parent_path().string();
  return parse_catalogue(read_text_file(c.catalogue));
}

inline CommandResult cmd_verify(const RunConfig& c) {
  validate(c);
  std::string base;
  const auto entries = catalogue_from_config(c, &base);
  const auto checks = run_catalogue(entries, c.points, c.seed, base);
  CommandResult out;
  out.doc = document(c);
  int passed = 0;
  for (const auto& x : checks) passed += x.pass;
  out.pass = passed == static_cast<int>(checks.size());
  out.doc["checks"] = checks_json(checks);
  out.doc["summary"] = Json{{"total", checks.size()}, {"passed", passed}, {"failed", checks.size() - passed}};
  out.doc["pass"] = out.pass;
  std::ostringstream csv;
  csv << "id,chart,form,residual,tol,pass,eigenvalue,error\n";
  for (const auto& x : checks)
    csv << x.id << ',' << detail::csv_field(x.chart) << ',' << detail::csv_field(x.form) << ','
        << format_double(x.residual) << ',' << format_double(x.tol) << ',' << (x.pass ? "true" : "false") << ','
        << (x.eigenvalue ? format_double(*x.eigenvalue) : "") << ',' << detail::csv_field(x.error) << '\n';
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------
// report: everything above in one document

inline CommandResult cmd_report(const RunConfig& c) {
  validate(c);
  if (c.format != "json") throw ConfigError("report is only available as json");
  CommandResult out;
  out.doc = document(c);

  // Spectral numbers on the flat tori T^2..T^4 at every degree.
  Json tori = Json::array();
  for (int n = 2; n <= 4; ++n)
    for (int r = 1; r <= n - 1; ++r) {
      RunConfig nc = c;
      nc.command = "numbers";
      nc.manifold = "torus";
      nc.dim = n;
      nc.r = r;
      const CommandResult res = cmd_numbers(nc);
      Json j = res.doc["numbers"];
      j["duality"] = res.doc["duality"];
      j["bounds"] = res.doc["bounds"];
      j.erase("kernel_blocks");
      tori.push_back(j);
      out.pass = out.pass && res.pass;
    }
  out.doc["torus_numbers"] = tori;

  // Classification examples.
  struct Example {
    const char* chart;
    const char* form;
  };
  const Example examples[] = {{"torus:3", "const:1"},        {"torus:2", "file:-"},         {"sphere:2:1", "closedck:3"},
                              {"sphere:3:1", "killing:1:2"}, {"ball:3:-1", "harmonic:1"}, {"torus:4", "const:1,2"}};
  Json cls = Json::array();
  for (const Example& e : examples) {
    const ChartPtr chart = chart_from_spec(e.chart);
    const ExprForm w = std::string(e.form) == "file:-"
                           ? parse_form_fixture("degree 1\n1 : sin(x1)\n", chart)
                           : form_from_spec(e.form, chart);
    const SampleSet samples = sample_points(*chart, c.points, c.seed);
    Json j;
    j["chart"] = e.chart;
    j["form"] = std::string(e.form) == "file:-" ? std::string("sin(x1) dx1") : std::string(e.form);
    j["classification"] = classification_json(classify(w, samples, c.tol.value_or(kDefaultClassifyTol)));
    cls.push_back(j);
  }
  out.doc["classification_examples"] = cls;

  // Identity catalogue.
  RunConfig vc = c;
  vc.command = "verify";
  const CommandResult ver = cmd_verify(vc);
  out.doc["identity_checks"] = ver.doc["checks"];
  out.doc["identity_summary"] = ver.doc["summary"];
  out.pass = out.pass && ver.pass;

  // Eigenvalue predictions for n = 2r on constant-curvature charts.
  Json chain = Json::array();
  for (int r = 1; r <= 2; ++r)
    for (double C : {1.0, -1.0}) {
      const EigenvalueChain e = eigenvalue_chain(r, C);
      chain.push_back(Json{{"n", 2 * r},
                           {"r", r},
                           {"C", C},
                           {"conformal_ck", e.conformal_ck},
                           {"planar", e.planar},
                           {"killing", e.killing},
                           {"consistent", e.consistent()}});
      out.pass = out.pass && e.consistent();
    }
  out.doc["eigenvalue_chain"] = chain;

  // Parallel wedge witness against the computed Tachibana number.
  const WedgeWitness w = parallel_wedge_construct(4, 4, 2, 5, c.seed);
  const SpectralNumbers t4 = compute_numbers(4, 2, c.band, c.tol.value_or(kDefaultKernelTol));
  Json wit;
  wit["n"] = w.n;
  wit["h"] = w.h;
  wit["r"] = w.r;
  wit["forms"] = w.labels;
  wit["rank"] = w.rank;
  wit["lower_bound"] = w.lower_bound;
  wit["all_parallel"] = w.all_parallel;
  wit["computed_t"] = t4.t;
  wit["pass"] = w.all_parallel && w.rank == w.lower_bound && t4.t >= w.lower_bound;
  out.pass = out.pass && wit["pass"].get<bool>();
  out.doc["parallel_wedge_witness"] = wit;

  out.doc["scope"] =
      "Identity checks are pointwise at the sampled points; global statements about compact manifolds are "
      "represented by their pointwise ingredients and by the flat-torus kernel computations.";
  out.doc["pass"] = out.pass;
  return out;
}

inline CommandResult run_command(const RunConfig& c) {
  if (c.command == "numbers") return cmd_numbers(c);
  if (c.command == "classify") return cmd_classify(c);
  if (c.command == "verify") return cmd_verify(c);
  if (c.command == "report") return cmd_report(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

}  // namespace ckforms
