// Infidelity and leakage envelopes of the full three-level up-conversion
// dynamics against the reduced field dynamics, sampled across one fast
// (2π/Δ) period around |ξ|t = π/2 for several Δ/λ.
#include <cmath>
#include <cstdio>
#include <numbers>

#include "cqed/hamiltonian.hpp"
#include "cqed/propagator.hpp"

using namespace cqed;

int main() {
  std::printf("delta_over_lambda  max_infid/r2  max_leak/r2  mean_leak/r2\n");
  for (double ratio : {10.0, 14.2857142857, 20.0, 30.0, 50.0}) {
    PhysicalParams p;
    p.lambda_a = p.lambda_b = p.omega_cl = 7e5;
    p.delta_big = ratio * 7e5;
    p.process = Process::PUC;
    p.delta_small = resonance_delta(p);
    const HilbertSpace space = make_space(3, 6, 6);
    const HilbertSpace field = space.field_space();
    const double t_end = (std::numbers::pi / 2.0) / std::abs(effective_xi(p));
    const double period = 2.0 * std::numbers::pi / p.delta_big;
    std::vector<double> grid{0.0};
    for (int k = 0; k <= 64; ++k) grid.push_back(t_end - period + 2.0 * period * k / 64.0);
    std::vector<double> leak_grid = linear_grid(0.0, t_end, 4001);

    const auto full = full_puc_hamiltonian(space, p);
    const auto red = reduced_hamiltonian(field, p);
    const auto psi0 = StateVector::basis(space, Level::i, 1, 0);
    const auto tf = evolve_td(full, psi0, grid);
    const auto te = evolve_td(red, StateVector::fock(field, 1, 0), grid);
    double worst = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const StateVector fp(field, project_atom(tf.states[k], Level::i).amplitudes());
      worst = std::max(worst, 1.0 - std::norm(inner_product(te.states[k], fp)));
    }
    const auto tl = evolve_td(full, psi0, leak_grid, {}, {{"p_i", atomic_sigma(space, Level::i, Level::i)}});
    double peak = 0.0, mean = 0.0;
    for (double pi : tl.expectations.at("p_i")) {
      peak = std::max(peak, 1.0 - pi);
      mean += (1.0 - pi) / static_cast<double>(leak_grid.size());
    }
    const double r2 = 1.0 / (ratio * ratio);
    std::printf("%17.4f  %12.4f  %11.4f  %12.4f\n", ratio, worst / r2, peak / r2, mean / r2);
  }
}
