#include "cqed/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "cqed/propagator.hpp"
#include "scenario_registry.hpp"

namespace cqed {

using nlohmann::json;

namespace {

// Representative Rydberg-atom values: |λ_a| ~ |λ_b| ~ Ω ~ 7×10⁵ s⁻¹, Δ ~ 10⁷ s⁻¹.
constexpr double kDefaultCoupling = 7e5;
constexpr double kDefaultDetuning = 1e7;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) throw ValidationError("unknown key '" + item.key() + "' in " + where);
  }
}

double finite_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ValidationError(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(what + " must be finite");
  return x;
}

Scalar complex_value(const json& v, const std::string& what) {
  if (v.is_number()) return {finite_number(v, what), 0.0};
  if (v.is_array() && v.size() == 2) return {finite_number(v[0], what + "[0]"), finite_number(v[1], what + "[1]")};
  throw ValidationError(what + " must be a number or a [re, im] pair");
}

int cutoff(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 100000) {
    throw ValidationError(what + " must be a non-negative integer");
  }
  return v.get<int>();
}

std::vector<double> parse_times(const json& v) {
  std::vector<double> times;
  if (v.is_array()) {
    for (std::size_t k = 0; k < v.size(); ++k) times.push_back(finite_number(v[k], "times[" + std::to_string(k) + "]"));
  } else if (v.is_object()) {
    reject_unknown_keys(v, {"start", "stop", "count"}, "times");
    if (!v.contains("stop") || !v.contains("count")) throw ValidationError("times range needs 'stop' and 'count'");
    const double start = v.contains("start") ? finite_number(v["start"], "times.start") : 0.0;
    const double stop = finite_number(v["stop"], "times.stop");
    if (!v["count"].is_number_integer()) throw ValidationError("times.count must be an integer");
    times = linear_grid(start, stop, v["count"].get<int>());
  } else {
    throw ValidationError("times must be an array or a {start, stop, count} range");
  }
  for (double t : times) {
    if (t < 0.0) throw ValidationError("times must be non-negative");
  }
  return times;
}

std::string format_float(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace

double report_round(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_float(value).c_str(), nullptr);
}

ScenarioConfig parse_config(const json& doc) {
  reject_unknown_keys(doc, {"scenario", "params", "traversal", "truncation", "times", "outputs", "seed", "options"},
                      "config");
  if (!doc.contains("scenario") || !doc["scenario"].is_string()) {
    throw ValidationError("config needs a string 'scenario'");
  }
  ScenarioConfig cfg;
  cfg.source = doc;
  cfg.scenario = doc["scenario"].get<std::string>();
  const detail::ScenarioEntry& entry = detail::find_scenario(cfg.scenario);

  PhysicalParams& p = cfg.params;
  p.lambda_a = kDefaultCoupling;
  p.lambda_b = kDefaultCoupling;
  p.omega_cl = kDefaultCoupling;
  p.delta_big = kDefaultDetuning;
  p.process = entry.default_process;
  bool omega_given = false;
  if (doc.contains("params")) {
    const json& jp = doc["params"];
    reject_unknown_keys(jp, {"lambda_a", "lambda_b", "omega_cl", "delta_big", "delta_small", "process"}, "params");
    if (jp.contains("lambda_a")) p.lambda_a = complex_value(jp["lambda_a"], "params.lambda_a");
    if (jp.contains("lambda_b")) p.lambda_b = complex_value(jp["lambda_b"], "params.lambda_b");
    if (jp.contains("omega_cl")) {
      p.omega_cl = complex_value(jp["omega_cl"], "params.omega_cl");
      omega_given = true;
    }
    if (jp.contains("delta_big")) p.delta_big = finite_number(jp["delta_big"], "params.delta_big");
    if (jp.contains("delta_small")) {
      p.delta_small = finite_number(jp["delta_small"], "params.delta_small");
      cfg.delta_small_given = true;
    }
    if (jp.contains("process")) {
      if (!jp["process"].is_string()) throw ValidationError("params.process must be a string");
      p.process = parse_process(jp["process"].get<std::string>());
    }
  }
  // Down-conversion default: Ω = −i|Ω| puts the squeezing in x_a − x_b and p_a + p_b.
  if (!omega_given && p.process == Process::PDC) p.omega_cl = Scalar{0.0, -kDefaultCoupling};
  if (p.delta_big == 0.0) throw ValidationError("params.delta_big must be nonzero");

  if (doc.contains("traversal")) {
    const json& jt = doc["traversal"];
    reject_unknown_keys(jt, {"waist_w", "alpha", "tau"}, "traversal");
    TraversalSpec t{0.6, std::nan(""), std::nan("")};
    if (jt.contains("waist_w")) t.waist_cm = finite_number(jt["waist_w"], "traversal.waist_w");
    if (jt.contains("alpha")) t.alpha = finite_number(jt["alpha"], "traversal.alpha");
    if (jt.contains("tau")) t.tau = finite_number(jt["tau"], "traversal.tau");
    if (!(t.waist_cm > 0.0)) throw ValidationError("traversal.waist_w must be positive");
    if (jt.contains("alpha") && !(t.alpha > 0.0)) throw ValidationError("traversal.alpha must be positive");
    if (jt.contains("tau") && !(t.tau > 0.0)) throw ValidationError("traversal.tau must be positive");
    cfg.traversal = t;
  }
  if (doc.contains("truncation")) {
    const json& jt = doc["truncation"];
    reject_unknown_keys(jt, {"n_max_a", "n_max_b"}, "truncation");
    Truncation tr = entry.default_truncation;
    if (jt.contains("n_max_a")) tr.n_max_a = cutoff(jt["n_max_a"], "truncation.n_max_a");
    if (jt.contains("n_max_b")) tr.n_max_b = cutoff(jt["n_max_b"], "truncation.n_max_b");
    cfg.truncation = tr;
  }
  if (doc.contains("times")) cfg.times = parse_times(doc["times"]);
  if (doc.contains("outputs")) {
    if (!doc["outputs"].is_array()) throw ValidationError("outputs must be an array of metric names");
    for (const auto& o : doc["outputs"]) {
      if (!o.is_string()) throw ValidationError("outputs must be an array of metric names");
      cfg.outputs.push_back(o.get<std::string>());
    }
  }
  if (doc.contains("seed")) {
    const json& js = doc["seed"];
    if (!js.is_number_integer() || js.get<std::int64_t>() < 0) {
      throw ValidationError("seed must be a non-negative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("options")) {
    const std::set<std::string> allowed(entry.option_keys.begin(), entry.option_keys.end());
    reject_unknown_keys(doc["options"], allowed, "options of scenario '" + cfg.scenario + "'");
    cfg.options = doc["options"];
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& e : detail::registry()) names.push_back(e.name);
  return names;
}

std::string scenario_description(const std::string& name) { return detail::find_scenario(name).description; }

namespace {

Truncation effective_truncation(const detail::ScenarioEntry& entry, const ScenarioConfig& cfg) {
  Truncation tr = cfg.truncation.value_or(entry.default_truncation);
  if (entry.single_mode) tr.n_max_b = 0;
  return tr;
}

Truncation refine(const detail::ScenarioEntry& entry, Truncation tr) {
  tr.n_max_a += kConvergenceStep;
  if (!entry.single_mode) tr.n_max_b += kConvergenceStep;
  return tr;
}

std::string truncation_label(const Truncation& tr) {
  return "(" + std::to_string(tr.n_max_a) + ", " + std::to_string(tr.n_max_b) + ")";
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& run) {
  const detail::ScenarioEntry& entry = detail::find_scenario(config.scenario);
  const Truncation base = effective_truncation(entry, config);
  ScenarioResult result = entry.run(config, base);
  result.scenario = entry.name;
  result.config_echo = config.source;

  if (run.converge_check && entry.truncation_dependent) {
    const Truncation refined = refine(entry, base);
    const ScenarioResult check = entry.run(config, refined);
    if (check.gate_values.size() != result.gate_values.size()) {
      throw ConvergenceGateError("convergence gate: result shape changed with the truncation");
    }
    double worst = 0.0;
    std::size_t worst_at = 0;
    for (std::size_t k = 0; k < result.gate_values.size(); ++k) {
      const double change = std::abs(check.gate_values[k] - result.gate_values[k]);
      if (!(change <= worst)) {
        worst = change;
        worst_at = k;
      }
    }
    if (!(worst <= kConvergenceThreshold)) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "convergence gate failed for '" << entry.name << "': value " << worst_at << " is "
          << result.gate_values[worst_at] << " at n_max " << truncation_label(base) << " and "
          << check.gate_values[worst_at] << " at " << truncation_label(refined) << " (change " << worst
          << " > " << kConvergenceThreshold << ")";
      throw ConvergenceGateError(msg.str());
    }
    result.convergence = ConvergenceCheck{base, refined, worst};
  }

  if (!config.outputs.empty()) {
    std::map<std::string, double> kept;
    for (const auto& name : config.outputs) {
      const auto it = result.metrics.find(name);
      if (it == result.metrics.end()) {
        throw ValidationError("requested output '" + name + "' is not produced by scenario '" + entry.name + "'");
      }
      kept.emplace(name, it->second);
    }
    result.metrics = std::move(kept);
  }
  for (auto& [name, value] : result.metrics) value = report_round(value);
  return result;
}

SweepReport convergence_sweep(const ScenarioConfig& config, const std::vector<int>& n_max_list) {
  if (n_max_list.size() < 2) throw ValidationError("a convergence sweep needs at least two truncations");
  const detail::ScenarioEntry& entry = detail::find_scenario(config.scenario);
  SweepReport report;
  if (!entry.truncation_dependent) {
    throw ValidationError("scenario '" + entry.name +
                          "' does not depend on the Fock cutoff; sweep a field scenario such as pdc_epr");
  }
  report.scenario = entry.name;
  for (int n : n_max_list) {
    if (n < 0) throw ValidationError("cutoffs must be non-negative");
    const Truncation tr{n, entry.single_mode ? 0 : n};
    const ScenarioResult r = entry.run(config, tr);
    report.metric = r.primary_metric;
    report.rows.push_back({tr, r.metrics.at(r.primary_metric)});
  }
  const auto& rows = report.rows;
  report.last_change = std::abs(rows[rows.size() - 1].metric - rows[rows.size() - 2].metric);
  report.converged = report.last_change <= kConvergenceThreshold;
  return report;
}

// ---------------------------------------------------------------------------

BellPreparation prepare_bell(BellState target, const PhysicalParams& params) {
  const bool psi_family = target == BellState::PsiPlus || target == BellState::PsiMinus;
  const int sign = (target == BellState::PsiPlus || target == BellState::PhiPlus) ? +1 : -1;
  const TwoPhotonKind kind = psi_family ? TwoPhotonKind::BS : TwoPhotonKind::TMS;
  const Scalar coupling = two_photon_coupling(params, kind);
  if (std::abs(coupling) == 0.0) throw ValidationError("prepare_bell: two-photon coupling vanishes");

  const HilbertSpace space = make_space(3, 2, 2);
  const HilbertSpace field = space.field_space();
  const StateVector initial = psi_family ? StateVector::basis(space, Level::g, 1, 0)
                                         : StateVector::basis(space, Level::e, 0, 0);
  const double t = (std::numbers::pi / 4.0) / std::abs(coupling);
  const StateVector evolved = evolve_static(two_photon_hamiltonian(space, params, kind), initial, t);

  // The atomic measurement phase θ absorbs the coupling phase so the
  // post-selected field is the target with real relative sign.
  const double theta = psi_family ? std::arg(coupling) - std::numbers::pi / 2.0
                                  : std::arg(coupling) + std::numbers::pi / 2.0;
  const Scalar e_weight = static_cast<double>(sign) * std::exp(-kI * theta);
  const Vector amps = (project_atom(evolved, Level::g).amplitudes() +
                       e_weight * project_atom(evolved, Level::e).amplitudes()) /
                      std::sqrt(2.0);
  const double success = amps.squaredNorm();
  const StateVector post(field, amps / std::sqrt(success));

  BellPreparation out{target, post, bell_state_fidelity(post, target), success, json::object()};

  const auto pair = [](Scalar z) { return json::array({report_round(z.real()), report_round(z.imag())}); };
  json pre = json::object();
  for (Eigen::Index k = 0; k < evolved.amplitudes().size(); ++k) {
    const Scalar z = evolved.amplitudes()[k];
    if (std::abs(z) < 1e-12) continue;
    const BasisIndex idx = space.unflatten(k);
    pre["|" + std::string(to_string(static_cast<Level>(idx.atom))) + "," + std::to_string(idx.n_a) + "," +
        std::to_string(idx.n_b) + ">"] = pair(z);
  }
  json field_amps = json::object();
  for (Eigen::Index k = 0; k < post.amplitudes().size(); ++k) {
    const Scalar z = post.amplitudes()[k];
    if (std::abs(z) < 1e-12) continue;
    const BasisIndex idx = field.unflatten(k);
    field_amps["|" + std::to_string(idx.n_a) + "," + std::to_string(idx.n_b) + ">"] = pair(z);
  }
  out.transcript = {
      {"target", std::string(to_string(target))},
      {"interaction", psi_family ? "zeta (a b^dag sigma_eg + h.c.)" : "kappa (a b sigma_eg + h.c.)"},
      {"initial_state", psi_family ? "|g,1,0>" : "|e,0,0>"},
      {"coupling", pair(coupling)},
      {"interaction_time_s", report_round(t)},
      {"coupling_times_time", report_round(std::abs(coupling) * t)},
      {"pre_measurement_state", pre},
      {"measurement_basis", "(|g> + sign*exp(i*theta)|e>)/sqrt(2)"},
      {"measurement_sign", sign},
      {"measurement_phase_theta", report_round(theta)},
      {"post_selected_field", field_amps},
      {"success_probability", report_round(success)},
      {"bell_fidelity", report_round(out.fidelity)},
  };
  return out;
}

// ---------------------------------------------------------------------------

json result_to_json(const ScenarioResult& result, const std::map<std::string, std::string>& files) {
  json doc;
  doc["scenario"] = result.scenario;
  doc["config"] = result.config_echo;
  json metrics = json::object();
  for (const auto& [name, value] : result.metrics) metrics[name] = report_round(value);
  doc["metrics"] = metrics;
  json series = json::object();
  for (const auto& s : result.series) {
    const auto it = files.find(s.name);
    if (it != files.end()) {
      series[s.name] = {{"file", it->second}, {"columns", s.columns}, {"records", s.rows.size()}};
      continue;
    }
    json rows = json::array();
    for (const auto& row : s.rows) {
      json r = json::array();
      for (double v : row) r.push_back(report_round(v));
      rows.push_back(r);
    }
    series[s.name] = {{"columns", s.columns}, {"rows", rows}};
  }
  doc["series"] = series;
  json states = json::object();
  for (const auto& [name, state] : result.states) {
    const auto it = files.find("state:" + name);
    if (it != files.end()) states[name] = it->second;
  }
  if (!states.empty()) doc["state_files"] = states;
  if (!result.transcript.empty()) doc["transcript"] = result.transcript;
  doc["warnings"] = result.warnings;
  if (result.convergence) {
    const auto& c = *result.convergence;
    doc["convergence"] = {{"n_max", {c.base.n_max_a, c.base.n_max_b}},
                          {"n_max_refined", {c.refined.n_max_a, c.refined.n_max_b}},
                          {"max_change", report_round(c.max_change)},
                          {"threshold", kConvergenceThreshold}};
  }
  return doc;
}

std::string metrics_to_csv(const ScenarioResult& result) {
  std::ostringstream out;
  out << "metric,value\n";
  for (const auto& [name, value] : result.metrics) out << name << ',' << format_float(value) << '\n';
  return out.str();
}

std::string series_to_csv(const Series& series) {
  std::ostringstream out;
  for (std::size_t k = 0; k < series.columns.size(); ++k) out << (k ? "," : "") << series.columns[k];
  out << '\n';
  for (const auto& row : series.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_float(row[k]);
    out << '\n';
  }
  return out.str();
}

json sweep_to_json(const SweepReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"n_max_a", r.truncation.n_max_a}, {"n_max_b", r.truncation.n_max_b},
                    {"value", report_round(r.metric)}});
  }
  return {{"scenario", report.scenario},  {"metric", report.metric},
          {"rows", rows},                 {"last_change", report_round(report.last_change)},
          {"converged", report.converged}, {"threshold", kConvergenceThreshold}};
}

std::string sweep_to_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "n_max_a,n_max_b," << report.metric << '\n';
  for (const auto& r : report.rows) {
    out << r.truncation.n_max_a << ',' << r.truncation.n_max_b << ',' << format_float(r.metric) << '\n';
  }
  return out.str();
}

}  // namespace cqed
