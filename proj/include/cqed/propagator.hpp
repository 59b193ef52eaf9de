#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cqed/hamiltonian.hpp"

namespace cqed {

enum class PropagationMethod {
  EXPM_ACTION,     // static H only
  PIECEWISE_EXPM,  // fourth-order commutator-free exponential steps, adaptive
  ADAPTIVE_RK,     // Dormand–Prince 5(4), cross-check only (not norm preserving)
};

struct PropagatorOptions {
  PropagationMethod method = PropagationMethod::PIECEWISE_EXPM;
  double dt_max = 1e-3;    // s
  double rel_tol = 1e-9;
  int record_stride = 1;   // record every n-th grid point (first and last always)
};

void validate(const PropagatorOptions& opts);

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> norms;
  std::map<std::string, std::vector<double>> expectations;
  bool failed = false;  // a recorded norm left 1 ± 1e-7
  long steps = 0;       // accepted integrator steps
};

/// exp(coeff·H)·v by a scaled, shifted Taylor series. `H` is Hermitian and
/// coeff = −i·t; the series runs until terms fall below tol relative to ‖v‖.
Vector expm_action(const SparseMatrix& H, double t, const Vector& v, double tol = 1e-15);

/// exp(−iHt)|ψ₀⟩.
StateVector evolve_static(const Operator& H, const StateVector& psi0, double t,
                          const PropagatorOptions& opts = {});

/// Integrates i d|ψ⟩/dt = H(t)|ψ⟩ across t_grid (strictly increasing; ψ₀ is
/// the state at t_grid.front()). Named observables are evaluated at every
/// recorded sample.
Trajectory evolve_td(const TimeDependentOperator& H, const StateVector& psi0,
                     const std::vector<double>& t_grid, const PropagatorOptions& opts = {},
                     const std::vector<std::pair<std::string, Operator>>& observables = {});

/// Applies exp[−i·sign·t(χ_a a†a + χ_b b†b)] to every Fock component.
StateVector frame_transform(const StateVector& state, double chi_a, double chi_b, double t, int sign);

/// Evenly spaced grid with `count` ≥ 2 points on [t0, t1].
std::vector<double> linear_grid(double t0, double t1, int count);

}  // namespace cqed
