#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cqed/scenario.hpp"
#include "cqed/serialize.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cqed::ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

// Series and states go next to the main output as <stem>.<name>.csv / .state.
std::map<std::string, std::string> write_side_files(const cqed::ScenarioResult& result, const fs::path& out) {
  std::map<std::string, std::string> files;
  const fs::path dir = out.parent_path();
  const std::string stem = out.stem().string();
  for (const auto& s : result.series) {
    const fs::path p = dir / (stem + "." + s.name + ".csv");
    write_file(p, cqed::series_to_csv(s));
    files[s.name] = p.filename().string();
  }
  for (const auto& [name, state] : result.states) {
    const fs::path p = dir / (stem + "." + name + ".state");
    cqed::save_state(p.string(), state, false);
    files["state:" + name] = p.filename().string();
  }
  return files;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

std::vector<int> parse_cutoffs(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size() || n < 0) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw cqed::ValidationError("--nmax expects comma-separated non-negative integers, got '" + text + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated-Fock-space simulator of two-mode cavity up- and down-conversion"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "json", nmax = "8,16,24";
  bool no_check = false;

  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_path, "output file (default: stdout)");
  run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--no-converge-check", no_check, "skip the truncation convergence gate");

  auto* list = app.add_subcommand("list-scenarios", "List registered scenarios");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario at several Fock cutoffs");
  sweep->add_option("config", config_path, "config file")->required();
  sweep->add_option("--nmax", nmax, "comma-separated cutoffs");
  sweep->add_option("--out", out_path, "output file (default: stdout)");
  sweep->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& name : cqed::scenario_names()) {
        std::cout << name << "  " << cqed::scenario_description(name) << '\n';
      }
      return 0;
    }
    const cqed::ScenarioConfig cfg = cqed::load_config(config_path);
    if (run->parsed()) {
      const cqed::ScenarioResult result = cqed::run_scenario(cfg, {.converge_check = !no_check});
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      if (format == "csv") {
        emit(cqed::metrics_to_csv(result), out_path);
        if (!out_path.empty()) write_side_files(result, out_path);
        return 0;
      }
      std::map<std::string, std::string> files;
      if (!out_path.empty()) files = write_side_files(result, out_path);
      emit(cqed::result_to_json(result, files).dump(2) + "\n", out_path);
      return 0;
    }
    if (sweep->parsed()) {
      const cqed::SweepReport report = cqed::convergence_sweep(cfg, parse_cutoffs(nmax));
      emit(format == "csv" ? cqed::sweep_to_csv(report) : cqed::sweep_to_json(report).dump(2) + "\n", out_path);
      if (!report.converged) std::cerr << "warning: last cutoff step changed the metric by " << report.last_change << '\n';
      return 0;
    }
  } catch (const cqed::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cqed::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
