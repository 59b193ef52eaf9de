#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cqed/hamiltonian.hpp"
#include "cqed/observables.hpp"
#include "cqed/profile.hpp"

namespace cqed {

/// Neither truncation of a convergence-gated run agreed to 1e-6.
class ConvergenceGateError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

struct Truncation {
  int n_max_a = 0;
  int n_max_b = 0;
};

struct ScenarioConfig {
  std::string scenario;
  PhysicalParams params;
  bool delta_small_given = false;  // otherwise δ is set to resonance_delta(params)
  std::optional<TraversalSpec> traversal;
  std::optional<Truncation> truncation;
  std::vector<double> times;
  std::vector<std::string> outputs;  // empty = every metric
  std::uint64_t seed = 0;
  nlohmann::json options = nlohmann::json::object();
  nlohmann::json source = nlohmann::json::object();  // the document as read
};

/// Validates against the published schema; unknown keys are rejected.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

/// Tabular output, written as CSV (header row, one record per line).
struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ConvergenceCheck {
  Truncation base;
  Truncation refined;
  double max_change = 0.0;
};

struct ScenarioResult {
  std::string scenario;
  nlohmann::json config_echo;
  std::map<std::string, double> metrics;
  std::vector<Series> series;
  std::vector<std::pair<std::string, StateVector>> states;
  nlohmann::json transcript = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::string primary_metric;
  std::vector<double> gate_values;  // compared across truncations
  std::optional<ConvergenceCheck> convergence;
};

struct RunOptions {
  bool converge_check = true;
};

inline constexpr double kConvergenceThreshold = 1e-6;
inline constexpr int kConvergenceStep = 4;

std::vector<std::string> scenario_names();
std::string scenario_description(const std::string& name);

/// Runs a registered scenario. Truncation-dependent scenarios are repeated
/// with every cutoff raised by 4 and must agree to 1e-6 unless the check is
/// disabled.
ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& run = {});

struct SweepRow {
  Truncation truncation;
  double metric = 0.0;
};

struct SweepReport {
  std::string scenario;
  std::string metric;
  std::vector<SweepRow> rows;
  double last_change = 0.0;
  bool converged = false;
};

/// Runs the scenario at each cutoff (both modes, or mode a only for
/// single-mode scenarios) and reports its primary metric.
SweepReport convergence_sweep(const ScenarioConfig& config, const std::vector<int>& n_max_list);

struct BellPreparation {
  BellState target;
  StateVector field;  // post-selected, normalized
  double fidelity = 0.0;
  double success_probability = 0.0;
  nlohmann::json transcript;
};

/// Single-atom Bell-state preparation with the two-photon interactions:
/// quarter-period evolution, then projection of the atom on (|g⟩ ± e^{iθ}|e⟩)/√2
/// with θ chosen to cancel the coupling phase.
BellPreparation prepare_bell(BellState target, const PhysicalParams& params);

/// Rounds to 12 significant digits, the precision of every reported float.
double report_round(double value);

nlohmann::json result_to_json(const ScenarioResult& result, const std::map<std::string, std::string>& files = {});
std::string metrics_to_csv(const ScenarioResult& result);
std::string series_to_csv(const Series& series);
nlohmann::json sweep_to_json(const SweepReport& report);
std::string sweep_to_csv(const SweepReport& report);

}  // namespace cqed
