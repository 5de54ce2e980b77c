// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/scenario.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "degenwave/errors.hpp"
#include "degenwave/function_spaces.hpp"
#include "degenwave/json_writer.hpp"

namespace degenwave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("section '" + section + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + it.key() + "' in section '" + section + "'");
    }
  }
}

double require_finite(const json& j, const std::string& name) {
  if (!j.is_number()) throw ConfigError("'" + name + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("'" + name + "' must be finite");
  return v;
}

// number, or the string "auto" -> nullopt
std::optional<double> auto_or_number(const json& j, const std::string& name) {
  if (j.is_string()) {
    if (j.get<std::string>() == "auto") return std::nullopt;
    throw ConfigError("'" + name + "' must be a number or \"auto\"");
  }
  return require_finite(j, name);
}

std::vector<std::pair<double, double>> parse_terms(const json& j, const std::string& name) {
  if (!j.is_array()) throw ConfigError("'" + name + "' must be an array of [coef, exp] pairs");
  std::vector<std::pair<double, double>> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2) {
      throw ConfigError("'" + name + "' entries must be [coefficient, exponent] pairs");
    }
    terms.emplace_back(require_finite(t[0], name), require_finite(t[1], name));
  }
  return terms;
}

CoefficientsConfig parse_coefficients(const json& j) {
  check_keys(j, "coefficients",
             {"kind", "K_exp", "h_exp", "b_scale", "a_terms", "b_terms", "a_table",
              "b_table"});
  CoefficientsConfig c;
  if (!j.contains("kind")) throw ConfigError("coefficients: 'kind' is required");
  c.kind = j.at("kind").get<std::string>();
  if (c.kind == "power") {
    if (j.contains("K_exp")) c.K_exp = require_finite(j["K_exp"], "K_exp");
    if (j.contains("h_exp")) c.h_exp = require_finite(j["h_exp"], "h_exp");
    if (j.contains("b_scale")) c.b_scale = require_finite(j["b_scale"], "b_scale");
  } else if (c.kind == "sum_power") {
    if (!j.contains("a_terms")) throw ConfigError("sum_power coefficients need 'a_terms'");
    c.a_terms = parse_terms(j["a_terms"], "a_terms");
    if (j.contains("b_terms")) c.b_terms = parse_terms(j["b_terms"], "b_terms");
  } else if (c.kind == "tabulated") {
    if (!j.contains("a_table")) throw ConfigError("tabulated coefficients need 'a_table'");
    c.a_table = j.at("a_table").get<std::string>();
    if (j.contains("b_table")) c.b_table = j.at("b_table").get<std::string>();
  } else {
    throw ConfigError("coefficients: unknown kind '" + c.kind + "'");
  }
  return c;
}

ScenarioConfig parse_scenario_json(const json& j) {
  check_keys(j, "<root>",
             {"coefficients", "beta", "mesh", "time", "initial", "analysis", "output"});
  ScenarioConfig cfg;
  if (!j.contains("coefficients")) throw ConfigError("'coefficients' section is required");
  cfg.coefficients = parse_coefficients(j["coefficients"]);

  if (j.contains("beta")) {
    cfg.beta = require_finite(j["beta"], "beta");
    if (cfg.beta < 0.0) throw ConfigError("'beta' must be >= 0");
  }
  if (j.contains("mesh")) {
    const json& m = j["mesh"];
    check_keys(m, "mesh", {"N", "gamma"});
    if (m.contains("N")) {
      if (!m["N"].is_number_integer()) throw ConfigError("mesh: 'N' must be an integer");
      cfg.mesh.N = m["N"].get<int>();
      if (cfg.mesh.N < 4) throw ConfigError("mesh: 'N' must be >= 4");
    }
    if (m.contains("gamma")) cfg.mesh.gamma = auto_or_number(m["gamma"], "gamma");
  }
  if (j.contains("time")) {
    const json& t = j["time"];
    check_keys(t, "time", {"T", "dt", "stride"});
    if (t.contains("T")) {
      cfg.time.T = require_finite(t["T"], "T");
      if (!(cfg.time.T > 0.0)) throw ConfigError("time: 'T' must be > 0");
    }
    if (t.contains("dt")) {
      cfg.time.dt = auto_or_number(t["dt"], "dt");
      if (cfg.time.dt && !(*cfg.time.dt > 0.0)) throw ConfigError("time: 'dt' must be > 0");
    }
    if (t.contains("stride")) {
      if (t["stride"].is_string()) {
        if (t["stride"].get<std::string>() != "auto") {
          throw ConfigError("time: 'stride' must be an integer or \"auto\"");
        }
      } else {
        cfg.time.stride = t["stride"].get<int>();
        if (cfg.time.stride < 1) throw ConfigError("time: 'stride' must be >= 1");
      }
    }
  }
  if (j.contains("initial")) {
    const json& i = j["initial"];
    check_keys(i, "initial", {"preset", "center", "width", "k"});
    if (i.contains("preset")) cfg.initial.preset = i.at("preset").get<std::string>();
    if (cfg.initial.preset != "poly" && cfg.initial.preset != "bump" &&
        cfg.initial.preset != "mode") {
      throw ConfigError("initial: unknown preset '" + cfg.initial.preset + "'");
    }
    if (i.contains("center")) cfg.initial.center = require_finite(i["center"], "center");
    if (i.contains("width")) cfg.initial.width = require_finite(i["width"], "width");
    if (i.contains("k")) cfg.initial.k = i["k"].get<int>();
  }
  if (j.contains("analysis")) {
    const json& a = j["analysis"];
    check_keys(a, "analysis", {"delta", "window", "discard_fraction"});
    if (a.contains("delta")) {
      if (a["delta"].is_string() && a["delta"].get<std::string>() == "optimal") {
        cfg.analysis.delta_optimal = true;
      } else {
        cfg.analysis.delta = auto_or_number(a["delta"], "delta");
      }
    }
    if (a.contains("window")) {
      const json& w = a["window"];
      if (!w.is_array() || w.size() != 2) {
        throw ConfigError("analysis: 'window' must be [s, T]");
      }
      cfg.analysis.window_s = require_finite(w[0], "window");
      cfg.analysis.window_t = require_finite(w[1], "window");
      if (!(cfg.analysis.window_s >= 0.0) ||
          !(cfg.analysis.window_t > cfg.analysis.window_s)) {
        throw ConfigError("analysis: window needs 0 <= s < T");
      }
    }
    if (a.contains("discard_fraction")) {
      cfg.analysis.discard_fraction = require_finite(a["discard_fraction"], "discard_fraction");
      if (cfg.analysis.discard_fraction < 0.0 || cfg.analysis.discard_fraction >= 1.0) {
        throw ConfigError("analysis: 'discard_fraction' must be in [0, 1)");
      }
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "output", {"directory", "formats"});
    if (o.contains("directory")) cfg.output.directory = o.at("directory").get<std::string>();
    if (o.contains("formats")) {
      cfg.output.formats.clear();
      for (const auto& f : o["formats"]) {
        const std::string name = f.get<std::string>();
        if (name != "csv" && name != "json" && name != "dat" && name != "matrices") {
          throw ConfigError("output: unknown format '" + name + "'");
        }
        cfg.output.formats.push_back(name);
      }
    }
  }
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<std::vector<double>, std::vector<double>> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficient table '" + path + "'");
  std::vector<double> xs, vs;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, v;
    if (ls >> x >> v) {
      if (!xs.empty() && x <= xs.back()) {
        throw ConfigError("coefficient table '" + path + "' is not strictly increasing in x");
      }
      xs.push_back(x);
      vs.push_back(v);
    }
  }
  if (xs.size() < 3) throw ConfigError("coefficient table '" + path + "' needs >= 3 rows");
  return {xs, vs};
}

struct Prepared {
  CoefficientModel model;
  double K;
  HypothesisReport hyp;
};

Prepared prepare(const ScenarioConfig& cfg) {
  CoefficientModel model = make_model(cfg.coefficients);
  const double K = degeneracy_constant(model);
  HypothesisReport hyp = check_hypotheses(model, K);
  return {std::move(model), K, hyp};
}

std::string hypothesis_message(const std::string& field, const HypothesisReport& hyp) {
  char buf[160];
  if (field == "hyp_basic") {
    return "hyp_basic: b/a is not integrable near x = 0 (non-integrable drift)";
  }
  if (field == "hyp_ass0") {
    return "hyp_ass0: x^K / a is not nondecreasing near x = 0";
  }
  if (field == "hyp_ass1") {
    return "hyp_ass1: coefficients are not (WD)/(SD) with bounded x b / a";
  }
  if (field == "hyp_ass2") {
    std::snprintf(buf, sizeof buf,
                  "hyp_ass2: drift smallness margin eps0 = %.17g is not positive", hyp.eps0);
    return buf;
  }
  return field + ": coefficient classification is not usable (K = " +
         format_double(hyp.K) + ")";
}

void gate_simulable(const HypothesisReport& hyp) {
  if (!hyp.hyp_basic) {
    throw HypothesisViolation("hyp_basic", hypothesis_message("hyp_basic", hyp));
  }
  if (!hyp.hyp_ass0) {
    throw HypothesisViolation("hyp_ass0", hypothesis_message("hyp_ass0", hyp));
  }
  if (hyp.classification == Degeneracy::Invalid) {
    throw HypothesisViolation("classification", hypothesis_message("classification", hyp));
  }
}

void gate_report(const HypothesisReport& hyp) {
  const std::string field = hyp.first_failure();
  if (!field.empty()) {
    throw HypothesisViolation(field, hypothesis_message(field, hyp));
  }
}

JsonValue hypothesis_json(const HypothesisReport& hyp) {
  JsonValue j = JsonValue::object();
  j.set("K", hyp.K);
  j.set("classification", to_string(hyp.classification));
  j.set("hyp_basic", hyp.hyp_basic);
  j.set("hyp_ass0", hyp.hyp_ass0);
  j.set("hyp_ass1", hyp.hyp_ass1);
  j.set("hyp_ass2", hyp.hyp_ass2);
  j.set("eps0", hyp.eps0);
  j.set("xb_over_a_sup", hyp.xb_over_a_sup);
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void write_trace_csv(const fs::path& path, const EvolutionTrace& trace) {
  std::string out = "t,E,y1,v1,cumulative_dissipation\n";
  char buf[200];
  for (size_t n = 0; n < trace.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", trace.times[n],
                  trace.energies[n], trace.y_boundary[n], trace.v_boundary[n],
                  trace.cumulative_dissipation[n]);
    out += buf;
  }
  write_text(path, out);
}

void write_snapshots(const fs::path& dir, const EvolutionTrace& trace, const Mesh& mesh) {
  char name[64], buf[120];
  for (size_t j = 0; j < trace.snapshots.size(); ++j) {
    const State& st = trace.snapshots[j];
    std::snprintf(name, sizeof name, "snapshot_%06d.dat", trace.snapshot_steps[j]);
    std::string out;
    std::snprintf(buf, sizeof buf, "# t = %.17g\n# x y v\n", st.t);
    out += buf;
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", 0.0, 0.0, 0.0);
    out += buf;
    for (int i = 0; i < st.y.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", mesh.nodes[i + 1], st.y[i],
                    st.v[i]);
      out += buf;
    }
    write_text(dir / name, out);
  }
}

GridFunction zero_function(const MeshPtr& mesh) {
  GridFunction g;
  g.mesh = mesh;
  g.dirichlet = true;
  g.values.setZero(mesh->n_nodes());
  return g;
}

struct SimulationBundle {
  FellerWeight weight;
  MeshPtr mesh;
  SystemPtr sys;
  EvolutionTrace trace;
  double dt;
  int stride;
};

SimulationBundle run_simulation(const ScenarioConfig& cfg, const Prepared& prep) {
  FellerWeight w = feller_weight(prep.model);
  const double gamma = cfg.mesh.gamma
                           ? *cfg.mesh.gamma
                           : auto_gamma(prep.K, prep.model.degenerate_at_zero());
  MeshPtr mesh = build_mesh(cfg.mesh.N, gamma);
  SystemPtr sys = assemble_system(prep.model, w, mesh, cfg.beta, prep.K);
  const double dt = cfg.time.dt ? *cfg.time.dt : auto_dt(cfg.mesh.N);
  const int stride = cfg.time.stride > 0 ? cfg.time.stride : auto_stride(dt);
  GridFunction y0 = initial_displacement(cfg.initial, mesh, *sys);
  GridFunction y1 = zero_function(mesh);
  EvolutionTrace trace = simulate(sys, y0, y1, cfg.time.T, dt, stride);
  return {std::move(w), mesh, sys, std::move(trace), dt, stride};
}

bool has_format(const ScenarioConfig& cfg, const std::string& f) {
  for (const auto& s : cfg.output.formats) {
    if (s == f) return true;
  }
  return false;
}

}  // namespace

double auto_gamma(double K, bool degenerate) {
  if (!degenerate || !(K > 0.0) || !(K < 2.0)) return 1.0;
  return std::max(1.0, 2.0 / (2.0 - K));
}

double auto_dt(int N) { return std::min(1.0 / (4.0 * N), 1e-3); }

int auto_stride(double dt) { return std::max(1, static_cast<int>(std::llround(0.01 / dt))); }

unsigned long long verification_seed() {
  if (const char* env = std::getenv("DEGENWAVE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ConfigError("DEGENWAVE_SEED must be an unsigned integer");
  }
  return 20260810ULL;
}

CoefficientModel make_model(const CoefficientsConfig& cfg) {
  if (cfg.kind == "power") {
    return CoefficientModel::power_law(cfg.K_exp, cfg.h_exp, cfg.b_scale);
  }
  if (cfg.kind == "sum_power") {
    return CoefficientModel::sum_power(cfg.a_terms, cfg.b_terms);
  }
  auto [xa, va] = read_table(cfg.a_table);
  std::vector<double> xb, vb;
  if (!cfg.b_table.empty()) std::tie(xb, vb) = read_table(cfg.b_table);
  return CoefficientModel::tabulated(xa, va, xb, vb);
}

ScenarioConfig parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_scenario_json(j);
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  return parse_scenario_text(read_file(path));
}

GridFunction initial_displacement(const InitialConfig& cfg, const MeshPtr& mesh,
                                  const DiscreteSystem& sys) {
  if (cfg.preset == "poly") {
    return interpolate(mesh, [](double x) { return x * (2.0 - x); });
  }
  if (cfg.preset == "bump") {
    const double c = cfg.center, w = cfg.width;
    if (!(w > 0.0)) throw ConfigError("initial: bump width must be > 0");
    return interpolate(mesh, [c, w](double x) {
      const double lo = c - 0.5 * w, hi = c + 0.5 * w;
      if (x <= lo || x >= hi) return 0.0;
      const double s = std::sin(std::numbers::pi * (x - lo) / w);
      return s * s;
    });
  }
  // mode: k-th generalized eigenvector of (K_beta, M), interpolated exactly.
  const int n = sys.dimension();
  if (cfg.k < 1 || cfg.k > n) throw ConfigError("initial: mode index out of range");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.K_beta.dense(),
                                                               sys.M.dense());
  if (es.info() != Eigen::Success) throw EigenFailure("initial mode eigensolve failed");
  Eigen::VectorXd mode = es.eigenvectors().col(cfg.k - 1);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(mode[i]) > std::abs(scale)) scale = mode[i];
  }
  mode /= scale;  // sup-normalized with a deterministic sign
  return from_reduced(mesh, mode);
}

void run_classify(const ScenarioConfig& cfg) {
  const Prepared prep = prepare(cfg);
  const std::string text = hypothesis_json(prep.hyp).dump();
  write_text(fs::path(cfg.output.directory) / "classify.json", text);
  std::fputs(text.c_str(), stdout);
}

void run_check(const ScenarioConfig& cfg) {
  const Prepared prep = prepare(cfg);
  gate_simulable(prep.hyp);
  FellerWeight w = feller_weight(prep.model);
  const double gamma = cfg.mesh.gamma
                           ? *cfg.mesh.gamma
                           : auto_gamma(prep.K, prep.model.degenerate_at_zero());

  // Hardy-Poincare constant under mesh refinement N/4, N/2, N.
  const int N = cfg.mesh.N;
  std::vector<int> sizes{std::max(4, N / 4), std::max(4, N / 2), N};
  std::vector<double> values;
  SystemPtr finest;
  for (int n : sizes) {
    MeshPtr mesh = build_mesh(n, gamma);
    SystemPtr sys = assemble_system(prep.model, w, mesh, cfg.beta, prep.K);
    values.push_back(hardy_poincare_constant(w, *sys));
    finest = sys;
  }
  const double d1 = values[1] - values[0];
  const double d2 = values[2] - values[1];
  double order = 0.0, extrapolated = values.back();
  if (std::abs(d2) > 0.0 && d1 * d2 > 0.0) {
    order = std::log2(d1 / d2);
    extrapolated = values[2] + d2 / (std::pow(2.0, order) - 1.0);
  }
  const double c_hp = values.back();
  const auto [eq_lower, eq_upper] = norm_equivalence_constants(w, c_hp);

  // Random verification of the inequalities behind the constants.
  std::mt19937_64 rng(verification_seed());
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> lam_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> beta_dist(0.0, 3.0);
  const int samples = 100;
  double hp_min_slack = std::numeric_limits<double>::infinity();
  double eq_min_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    GridFunction u;
    u.mesh = finest->mesh;
    u.dirichlet = true;
    u.values.resize(u.mesh->n_nodes());
    for (int k = 0; k < u.values.size(); ++k) u.values[k] = gauss(rng);
    u.values[0] = 0.0;
    const NormBundle nb = weighted_norms(u, w, cfg.beta);
    const double h1_sq = nb.h1_seminorm * nb.h1_seminorm;
    const double l2_sq = nb.l2_sigma * nb.l2_sigma;
    const double h1s_sq = nb.h1_sigma * nb.h1_sigma;
    hp_min_slack = std::min(hp_min_slack, (c_hp * h1_sq - l2_sq) / h1_sq);
    eq_min_slack = std::min(eq_min_slack, (eq_lower * h1s_sq - h1_sq) / h1_sq);
    eq_min_slack = std::min(eq_min_slack, (eq_upper * h1_sq - h1s_sq) / h1_sq);
  }
  double aux_triple_min = std::numeric_limits<double>::infinity();
  double aux_l2_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double lam = lam_dist(rng);
    const double bet = beta_dist(rng);
    const AuxiliaryEstimates est = auxiliary_estimates(lam, bet, w, c_hp);
    const double scale = std::max(lam * lam, 1e-12);
    aux_triple_min = std::min(aux_triple_min, (est.triple_bound - est.triple_sq) / scale);
    aux_l2_min = std::min(aux_l2_min, (est.l2_sigma_bound - est.l2_sigma_sq) / scale);
  }

  JsonValue j = JsonValue::object();
  j.set("K", prep.K);
  j.set("classification", to_string(prep.hyp.classification));
  JsonValue ch = JsonValue::object();
  JsonValue meshes = JsonValue::array();
  for (size_t i = 0; i < sizes.size(); ++i) {
    JsonValue e = JsonValue::object();
    e.set("N", sizes[i]);
    e.set("value", values[i]);
    meshes.push(std::move(e));
  }
  ch.set("meshes", std::move(meshes));
  ch.set("extrapolated", extrapolated);
  ch.set("observed_order", order);
  j.set("c_hp", std::move(ch));
  JsonValue eq = JsonValue::object();
  eq.set("lower", eq_lower);
  eq.set("upper", eq_upper);
  j.set("equivalence", std::move(eq));
  JsonValue ver = JsonValue::object();
  ver.set("seed", static_cast<long long>(verification_seed()));
  ver.set("samples", samples);
  ver.set("hp_min_slack", hp_min_slack);
  ver.set("equivalence_min_slack", eq_min_slack);
  ver.set("aux_triple_min_slack", aux_triple_min);
  ver.set("aux_l2_min_slack", aux_l2_min);
  j.set("verification", std::move(ver));

  const fs::path dir(cfg.output.directory);
  write_text(dir / "check.json", j.dump());

  if (has_format(cfg, "matrices")) {
    std::ostringstream m_txt, k_txt;
    write_coordinate(m_txt, finest->M);
    write_coordinate(k_txt, finest->K_eta);
    write_text(dir / "mass_matrix.txt", m_txt.str());
    write_text(dir / "stiffness_matrix.txt", k_txt.str());
  }
}

void run_simulate(const ScenarioConfig& cfg) {
  const Prepared prep = prepare(cfg);
  gate_simulable(prep.hyp);
  SimulationBundle bundle = run_simulation(cfg, prep);
  const fs::path dir(cfg.output.directory);
  write_trace_csv(dir / "trace.csv", bundle.trace);
  write_snapshots(dir / "snapshots", bundle.trace, *bundle.mesh);
}

void run_spectrum(const ScenarioConfig& cfg) {
  const Prepared prep = prepare(cfg);
  gate_simulable(prep.hyp);
  FellerWeight w = feller_weight(prep.model);
  const double gamma = cfg.mesh.gamma
                           ? *cfg.mesh.gamma
                           : auto_gamma(prep.K, prep.model.degenerate_at_zero());
  MeshPtr mesh = build_mesh(cfg.mesh.N, gamma);
  SystemPtr sys = assemble_system(prep.model, w, mesh, cfg.beta, prep.K);
  const Spectrum sp = spectrum(assemble_generator(sys));

  std::string csv = "re,im\n";
  char buf[96];
  for (const auto& ev : sp.eigenvalues) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", ev.real(), ev.imag());
    csv += buf;
  }
  const fs::path dir(cfg.output.directory);
  write_text(dir / "eigenvalues.csv", csv);
  JsonValue j = JsonValue::object();
  j.set("abscissa", sp.abscissa);
  j.set("count", static_cast<long long>(sp.eigenvalues.size()));
  write_text(dir / "spectrum.json", j.dump());
}

void run_report(const ScenarioConfig& cfg) {
  const Prepared prep = prepare(cfg);
  const fs::path dir(cfg.output.directory);
  write_text(dir / "hypothesis_report.json", hypothesis_json(prep.hyp).dump());
  gate_report(prep.hyp);

  SimulationBundle bundle = run_simulation(cfg, prep);
  const DiscreteSystem& sys = *bundle.sys;
  const EvolutionTrace& trace = bundle.trace;

  const double c_hp = hardy_poincare_constant(bundle.weight, sys);
  StabilityConstants constants;
  if (cfg.analysis.delta_optimal) {
    const StabilityConstants base =
        theoretical_constants(prep.model, bundle.weight, prep.hyp, c_hp, cfg.beta);
    constants = theoretical_constants(prep.model, bundle.weight, prep.hyp, c_hp, cfg.beta,
                                      minimize_delta(base));
  } else {
    constants = theoretical_constants(prep.model, bundle.weight, prep.hyp, c_hp, cfg.beta,
                                      cfg.analysis.delta);
  }

  StabilityReport rep;
  rep.constants = constants;
  rep.dissipation_res = dissipation_residual(trace);
  const double e0 = trace.energies.front();
  double worst_increase = 0.0;
  for (size_t n = 0; n + 1 < trace.size(); ++n) {
    worst_increase = std::max(worst_increase, trace.energies[n + 1] - trace.energies[n]);
  }
  rep.energy_nonincreasing = worst_increase <= 1e-10 * std::max(e0, 1e-300);
  std::tie(rep.bound_ok, rep.bound_max_violation) =
      decay_bound_check(trace, constants.m_decay);
  rep.fitted_rate = fit_decay_rate(trace, cfg.analysis.discard_fraction);
  const EmpiricalDecay emp = empirical_decay_constant(trace);
  rep.m_empirical = emp.m_empirical;
  rep.decayed = emp.decayed;

  const double win_s = cfg.analysis.window_s;
  const double win_t = std::min(cfg.analysis.window_t, trace.times.back());
  rep.multiplier_residual = multiplier_identity_residual(trace, sys, win_s, win_t);
  rep.slacks = inequality_suite(trace, sys, constants, win_s, win_t);
  rep.window_s = win_s;
  rep.window_t = win_t;

  if (sys.dimension() <= 1024) {
    const Spectrum sp = spectrum(assemble_generator(bundle.sys));
    rep.spectral_abscissa = sp.abscissa;
    std::string dat = "# re im\n";
    char buf[96];
    for (const auto& ev : sp.eigenvalues) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", ev.real(), ev.imag());
      dat += buf;
    }
    write_text(dir / "spectrum_scatter.dat", dat);
  } else {
    rep.spectral_abscissa = std::numeric_limits<double>::quiet_NaN();
  }

  // report.json
  JsonValue j = JsonValue::object();
  JsonValue jc = JsonValue::object();
  jc.set("C_HP", constants.c_hp);
  jc.set("Theta", constants.theta);
  jc.set("C1", constants.c1);
  jc.set("delta", constants.delta);
  jc.set("M", constants.m_decay);
  jc.set("eps0", constants.eps0);
  jc.set("K", constants.K);
  jc.set("beta", constants.beta);
  jc.set("eta_min", constants.eta_min);
  jc.set("eta_max", constants.eta_max);
  jc.set("sigma1", constants.sigma1);
  jc.set("eta1", constants.eta1);
  j.set("constants", std::move(jc));
  j.set("fitted_rate", rep.fitted_rate);
  j.set("spectral_abscissa", rep.spectral_abscissa);
  j.set("bound_ok", rep.bound_ok);
  j.set("bound_max_violation", rep.bound_max_violation);
  j.set("dissipation_residual", rep.dissipation_res);
  j.set("multiplier_residual", rep.multiplier_residual);
  JsonValue js = JsonValue::object();
  js.set("tolerance", rep.slacks.tolerance);
  auto ineq = [](const InequalityCheck& c) {
    JsonValue v = JsonValue::object();
    v.set("lhs", c.lhs);
    v.set("rhs", c.rhs);
    v.set("slack", c.slack);
    return v;
  };
  js.set("boundary_trace_bound", ineq(rep.slacks.boundary_trace_bound));
  js.set("interior_energy_bound", ineq(rep.slacks.interior_energy_bound));
  js.set("boundary_term_identity", ineq(rep.slacks.boundary_term_identity));
  j.set("inequality_slacks", std::move(js));
  j.set("m_empirical", rep.m_empirical);
  j.set("decayed", rep.decayed);
  j.set("energy_nonincreasing", rep.energy_nonincreasing);
  JsonValue win = JsonValue::array();
  win.push(rep.window_s);
  win.push(rep.window_t);
  j.set("window", std::move(win));
  write_text(dir / "report.json", j.dump());

  write_trace_csv(dir / "trace.csv", trace);
  write_snapshots(dir / "snapshots", trace, *bundle.mesh);

  // plot data: t, E and the theoretical envelope
  std::string dat = "# t E bound\n";
  char buf[160];
  for (size_t n = 0; n < trace.size(); ++n) {
    const double bound = e0 * std::exp(1.0 - trace.times[n] / constants.m_decay);
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", trace.times[n],
                  trace.energies[n], bound);
    dat += buf;
  }
  write_text(dir / "energy_decay.dat", dat);
}

void run_sweep(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep config is not valid JSON: ") + e.what());
  }
  check_keys(j, "<root>", {"scenarios"});
  if (!j.contains("scenarios") || !j["scenarios"].is_array()) {
    throw ConfigError("sweep config needs a 'scenarios' array");
  }
  int index = 0;
  for (const auto& entry : j["scenarios"]) {
    ScenarioConfig cfg = parse_scenario_json(entry);
    if (cfg.output.directory == "out") {
      char name[40];
      std::snprintf(name, sizeof name, "out/scenario_%03d", index);
      cfg.output.directory = name;
    }
    run_report(cfg);
    ++index;
  }
}

}  // namespace degenwave
