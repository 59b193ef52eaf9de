#pragma once

#include <functional>

#include "cqed/hamiltonian.hpp"

namespace cqed {

/// Straight, symmetric crossing of a Gaussian cavity mode: the atom moves at
/// constant speed v = alpha·waist/tau and sits at x(t) = v(t − tau/2), so the
/// path covered in the crossing time is alpha waists long.
struct TraversalSpec {
  double waist_cm = 0.6;
  double alpha = 1.0;  // path length over waist
  double tau = 0.0;    // crossing time, s

  double velocity() const { return alpha * waist_cm / tau; }
  double position(double t) const { return velocity() * (t - 0.5 * tau); }
};

void validate(const TraversalSpec& traversal);

/// f(x(t)) = exp(−x²/w²).
double gaussian_profile_factor(double t, const TraversalSpec& traversal);

/// r = |ξ|·2∫₀^τ f(x(t))² dt, by adaptive Simpson quadrature.
double profile_squeezing_factor(const PhysicalParams& params, const TraversalSpec& traversal);

/// The path-to-waist ratio for which profile_squeezing_factor equals r_target
/// at crossing time tau.
double fit_traversal_alpha(const PhysicalParams& params, double waist_cm, double tau, double r_target);

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_depth = 50);

}  // namespace cqed
