#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cqed/scenario.hpp"
#include "support.hpp"

using namespace cqed;
using nlohmann::json;

namespace {

ScenarioResult run(const json& doc, bool check = true) { return run_scenario(parse_config(doc), {check}); }

}  // namespace

TEST_CASE("config defaults") {
  const ScenarioConfig c = parse_config({{"scenario", "puc_swap"}});
  CHECK(c.params.process == Process::PUC);
  CHECK(c.params.lambda_a == Scalar{7e5, 0.0});
  CHECK(c.params.delta_big == 1e7);
  CHECK_FALSE(c.delta_small_given);
  CHECK_FALSE(c.truncation.has_value());
  const ScenarioConfig d = parse_config({{"scenario", "pdc_epr"}});
  CHECK(d.params.process == Process::PDC);
  CHECK(d.params.omega_cl == Scalar{0.0, -7e5});
}

TEST_CASE("config parsing") {
  const json doc = {{"scenario", "pdc_epr"},
                    {"params", {{"lambda_b", {1e5, -2e5}}, {"delta_small", 1.5e4}, {"process", "PDC"}}},
                    {"truncation", {{"n_max_a", 12}}},
                    {"times", {{"start", 0.0}, {"stop", 1e-4}, {"count", 5}}},
                    {"outputs", {"xi_abs"}},
                    {"seed", 42}};
  const ScenarioConfig c = parse_config(doc);
  CHECK(c.params.lambda_b == Scalar{1e5, -2e5});
  CHECK(c.delta_small_given);
  CHECK(c.params.delta_small == 1.5e4);
  CHECK(c.truncation->n_max_a == 12);
  CHECK(c.truncation->n_max_b == 40);
  CHECK(c.times.size() == 5);
  CHECK(c.times.back() == 1e-4);
  CHECK(c.seed == 42);
  CHECK(c.source == doc);
}

TEST_CASE("config validation") {
  const auto bad = [](const json& doc) { CHECK_THROWS_AS(parse_config(doc), ValidationError); };
  bad(json::array());
  bad({{"params", json::object()}});
  bad({{"scenario", "no_such"}});
  bad({{"scenario", "puc_swap"}, {"colour", 1}});
  bad({{"scenario", "puc_swap"}, {"params", {{"lambda_c", 1.0}}}});
  bad({{"scenario", "puc_swap"}, {"params", {{"lambda_a", "big"}}}});
  bad({{"scenario", "puc_swap"}, {"params", {{"lambda_a", {1.0, 2.0, 3.0}}}}});
  bad({{"scenario", "puc_swap"}, {"params", {{"delta_big", 0.0}}}});
  bad({{"scenario", "puc_swap"}, {"params", {{"process", "SHG"}}}});
  bad({{"scenario", "puc_swap"}, {"truncation", {{"n_max_a", -1}}}});
  bad({{"scenario", "puc_swap"}, {"truncation", {{"n_max_a", 2.5}}}});
  bad({{"scenario", "puc_swap"}, {"times", {1e-4, "x"}}});
  bad({{"scenario", "puc_swap"}, {"times", {-1e-4}}});
  bad({{"scenario", "puc_swap"}, {"times", {{"stop", 1.0}}}});
  bad({{"scenario", "puc_swap"}, {"seed", -3}});
  bad({{"scenario", "puc_swap"}, {"options", {{"xi_tau", 1.0}}}});
  bad({{"scenario", "gaussian_profile"}, {"traversal", {{"waist_w", -0.6}}}});
  bad({{"scenario", "gaussian_profile"}, {"traversal", {{"alpha", 0.0}}}});
  bad({{"scenario", "gaussian_profile"}, {"traversal", {{"speed", 1.0}}}});
}

TEST_CASE("registry") {
  const std::vector<std::string> expected{"puc_swap",         "pdc_epr",           "epr_quality", "epr_variances",
                                          "full_vs_effective", "gaussian_profile",  "degenerate_squeeze",
                                          "bell_prep",        "wigner_scan",       "convergence"};
  CHECK(scenario_names() == expected);
  for (const auto& n : expected) CHECK_FALSE(scenario_description(n).empty());
  CHECK_THROWS_AS(scenario_description("nope"), ValidationError);
}

TEST_CASE("epr_quality at |xi| tau = 0.68") {
  const ScenarioResult r = run({{"scenario", "epr_quality"}, {"options", {{"xi_tau", {0.68}}}}});
  CHECK(std::abs(r.metrics.at("quality_0") - 0.74) < 0.01);
  CHECK(r.metrics.at("tail_bound_excess") == 0.0);
  REQUIRE(r.convergence.has_value());
  CHECK(r.convergence->refined.n_max_a == 44);
}

TEST_CASE("puc_swap moves the photon") {
  const ScenarioResult r = run({{"scenario", "puc_swap"}});
  CHECK(std::abs(r.metrics.at("p_swap") - 1.0) < 1e-9);
  CHECK(r.metrics.at("photon_number_drift") < 1e-9);
  const ScenarioResult two = run({{"scenario", "puc_swap"}, {"options", {{"input", {2, 0}}}}});
  CHECK(std::abs(two.metrics.at("p_swap") - 1.0) < 1e-9);
  CHECK_THROWS_AS(run({{"scenario", "puc_swap"}, {"options", {{"input", {3, 0}}}}}), ValidationError);
}

TEST_CASE("gaussian_profile at the longer crossing") {
  const ScenarioResult r = run({{"scenario", "gaussian_profile"}, {"traversal", {{"tau", 5.32e-4}}}});
  CHECK(std::abs(r.metrics.at("r") - 1.36) < 0.01);
  CHECK(r.metrics.at("r_at_fit_tau") == doctest::Approx(0.51));
  const ScenarioResult given =
      run({{"scenario", "gaussian_profile"}, {"traversal", {{"tau", 2e-4}, {"alpha", r.metrics.at("alpha")}}}});
  CHECK(given.metrics.at("r") == doctest::Approx(0.51).epsilon(1e-9));
}

TEST_CASE("process restrictions") {
  CHECK_THROWS_AS(run({{"scenario", "puc_swap"}, {"params", {{"process", "PDC"}}}}), ValidationError);
  CHECK_THROWS_AS(run({{"scenario", "degenerate_squeeze"}, {"params", {{"process", "PUC"}}}}), ValidationError);
}

TEST_CASE("off-resonant detuning is rejected") {
  CHECK_THROWS_AS(run({{"scenario", "pdc_epr"}, {"params", {{"delta_small", 0.0}}}}), ValidationError);
}

TEST_CASE("output selection") {
  const ScenarioResult r = run({{"scenario", "puc_swap"}, {"outputs", {"p_swap"}}});
  CHECK(r.metrics.size() == 1);
  CHECK_THROWS_AS(run({{"scenario", "puc_swap"}, {"outputs", {"p_swop"}}}), ValidationError);
}

TEST_CASE("convergence gate") {
  const json doc = {{"scenario", "pdc_epr"}, {"truncation", {{"n_max_a", 4}, {"n_max_b", 4}}}};
  CHECK_THROWS_AS(run(doc), ConvergenceGateError);
  try {
    run(doc);
  } catch (const ConvergenceGateError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("(4, 4)") != std::string::npos);
    CHECK(msg.find("(8, 8)") != std::string::npos);
  }
  const ScenarioResult r = run(doc, false);
  CHECK_FALSE(r.convergence.has_value());
  CHECK(r.metrics.at("fidelity_vs_tmsv") < 1.0 - 1e-6);
}

TEST_CASE("single-mode scenarios keep mode b empty") {
  const ScenarioResult r = run({{"scenario", "degenerate_squeeze"},
                                {"truncation", {{"n_max_a", 160}, {"n_max_b", 7}}},
                                {"options", {{"wigner_fit", false}}}});
  REQUIRE(r.convergence.has_value());
  CHECK(r.convergence->base.n_max_b == 0);
  CHECK(r.convergence->refined.n_max_b == 0);
  CHECK(r.convergence->refined.n_max_a == 164);
  CHECK(r.metrics.at("r") == doctest::Approx(1.372));
  CHECK(r.metrics.at("variance_numerical") == doctest::Approx(squeezed_variance(1.372)).epsilon(1e-6));
}

TEST_CASE("sweep") {
  const ScenarioConfig c = parse_config({{"scenario", "pdc_epr"}});
  const SweepReport s = convergence_sweep(c, {8, 16, 24});
  CHECK(s.metric == "fidelity_vs_tmsv");
  REQUIRE(s.rows.size() == 3);
  CHECK(s.rows[2].truncation.n_max_b == 24);
  CHECK(s.converged);
  const SweepReport coarse = convergence_sweep(c, {2, 4});
  CHECK_FALSE(coarse.converged);
  CHECK_THROWS_AS(convergence_sweep(c, {8}), ValidationError);
  // |ξ|τ = 2 needs a larger cutoff than 0.68
  const ScenarioConfig strong = parse_config({{"scenario", "pdc_epr"}, {"options", {{"xi_tau", 2.0}}}});
  CHECK_FALSE(convergence_sweep(strong, {16, 24}).converged);
  const ScenarioConfig single = parse_config({{"scenario", "degenerate_squeeze"}, {"options", {{"wigner_fit", false}}}});
  CHECK(convergence_sweep(single, {100, 120}).rows[1].truncation.n_max_b == 0);
  CHECK_THROWS_AS(convergence_sweep(parse_config({{"scenario", "convergence"}}), {8, 16}), ValidationError);
}

TEST_CASE("Bell preparation") {
  const PhysicalParams p = cqed::testing::reference_params(Process::TWO_PHOTON_TMS);
  for (BellState b : {BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus}) {
    const BellPreparation prep = prepare_bell(b, p);
    CHECK(prep.fidelity >= 0.99);
    CHECK(std::abs(prep.success_probability - 0.5) < 1e-9);
    CHECK(prep.transcript.at("coupling_times_time").get<double>() == doctest::Approx(std::numbers::pi / 4));
  }
  // κ real: pre-measurement (|e,0,0⟩ − i|g,1,1⟩)/√2
  const auto pre = prepare_bell(BellState::PhiPlus, p).transcript.at("pre_measurement_state");
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(pre.at("|e,0,0>")[0].get<double>() == doctest::Approx(s));
  CHECK(pre.at("|g,1,1>")[1].get<double>() == doctest::Approx(-s));
  // complex couplings are absorbed by the measurement phase
  PhysicalParams q = p;
  q.lambda_a = std::polar(6e5, 1.3);
  q.lambda_b = std::polar(8e5, -0.4);
  for (BellState b : {BellState::PsiMinus, BellState::PhiMinus}) CHECK(prepare_bell(b, q).fidelity >= 1.0 - 1e-12);
}

TEST_CASE("reporting") {
  CHECK(report_round(0.1234567890123456) == 0.123456789012);
  CHECK(report_round(3.4300000000000004e3) == 3430.0);
  const ScenarioResult r = run({{"scenario", "bell_prep"}, {"options", {{"targets", {"phi+"}}}}});
  const json j = result_to_json(r);
  CHECK(j.at("scenario") == "bell_prep");
  CHECK(j.at("metrics").contains("fidelity_phi+"));
  CHECK(j.at("transcript").contains("phi+"));
  CHECK(metrics_to_csv(r).rfind("metric,value\n", 0) == 0);
  const ScenarioResult sw = run({{"scenario", "puc_swap"}});
  const json withfile = result_to_json(sw, {{"trajectory", "x.trajectory.csv"}});
  CHECK(withfile.at("series").at("trajectory").at("file") == "x.trajectory.csv");
  const std::string csv = series_to_csv(sw.series.front());
  CHECK(csv.rfind("t,xi_t,p_input,p_swapped,n_total\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);
}

TEST_CASE("results are reproducible") {
  for (const auto& name : scenario_names()) {
    if (name == "full_vs_effective") continue;  // covered by the acceptance run
    const json doc = {{"scenario", name}};
    const std::string a = result_to_json(run(doc)).dump();
    const std::string b = result_to_json(run(doc)).dump();
    CHECK_MESSAGE(a == b, name);
  }
}
