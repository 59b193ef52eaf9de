#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cqed/fock.hpp"

namespace cqed {

enum class Quadrature { x, p };

/// x = (β + β†)/2, p = −i(β − β†)/2; vacuum variance 1/4.
Operator quadrature_operator(const HilbertSpace& space, Mode mode, Quadrature kind);

struct EprMetrics {
  double var_x_minus = 0.0;  // ⟨(x_a − x_b)²⟩
  double var_p_plus = 0.0;   // ⟨(p_a + p_b)²⟩
  double quality_operational = 0.0;               // 1 − (var_x_minus + var_p_plus)
  std::optional<double> quality_analytic;         // 1 − e^{−2|ξ|τ}, when |ξ|τ is known
};

/// Requires a field-only state. The analytic quality is reported only when
/// the squeeze parameter is supplied; the two are never combined.
EprMetrics epr_metrics(const StateVector& state, std::optional<double> squeeze_param = std::nullopt);

double epr_quality_analytic(double squeeze_param);

struct TmsvSpec {
  double squeeze_param = 0.0;  // |ξ|τ
  double phase = 0.0;          // arg ξ
};

struct TmsvState {
  StateVector state;
  double tail_mass = 0.0;  // tanh^{2(n+1)} beyond the truncation
};

/// exp(−iτ(ξab + ξ*a†b†))|0,0⟩ truncated to the field space:
/// Σ_n (−i e^{−i arg ξ} tanh r)ⁿ / cosh r |n,n⟩, renormalized after truncation.
TmsvState tmsv_analytic(const TmsvSpec& spec, const HilbertSpace& field_space);

/// e^{−2r}/4.
double squeezed_variance(double r);
/// 1 − e^{−2r}.
double squeezing_fraction(double r);

/// Symmetrized covariance of (x, p) for one mode.
Eigen::Matrix2d quadrature_covariance(const StateVector& state, Mode mode);
/// Smallest quadrature variance over all phase-space directions.
double min_quadrature_variance(const StateVector& state, Mode mode);

/// |⟨s1|s2⟩|².
double fidelity(const StateVector& s1, const StateVector& s2);

/// Marginal photon-number distribution of one mode (atom traced out).
std::vector<double> photon_number_distribution(const StateVector& state, Mode mode);

enum class BellState { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

std::string_view to_string(BellState which);
BellState parse_bell_state(std::string_view name);

StateVector bell_state(const HilbertSpace& field_space, BellState which);
/// Overlap with a Bell state, insensitive to the global phase of `state`.
double bell_state_fidelity(const StateVector& state, BellState which);

}  // namespace cqed
