#pragma once

#include <random>

#include "cqed/hamiltonian.hpp"

namespace cqed::testing {

inline PhysicalParams reference_params(Process process) {
  PhysicalParams p;
  p.lambda_a = 7e5;
  p.lambda_b = 7e5;
  p.omega_cl = 7e5;
  p.delta_big = 1e7;
  p.process = process;
  p.delta_small = 0.0;
  return p;
}

inline PhysicalParams resonant(PhysicalParams p) {
  p.delta_small = resonance_delta(p);
  return p;
}

inline StateVector random_state(const HilbertSpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(space.total_dim());
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = Scalar{g(rng), g(rng)};
  return StateVector(space, v / v.norm());
}

inline double state_distance(const StateVector& x, const StateVector& y) {
  return (x.amplitudes() - y.amplitudes()).norm();
}

}  // namespace cqed::testing
