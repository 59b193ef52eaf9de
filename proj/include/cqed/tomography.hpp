#pragma once

#include <numbers>
#include <utility>
#include <vector>

#include "cqed/fock.hpp"

namespace cqed {

struct ProbeOutcome {
  double p_i = 0.0;
  double p_f = 0.0;
  double signal() const { return p_f - p_i; }
};

struct PhaseSpacePoint {
  Scalar eta_a{0.0, 0.0};
  Scalar eta_b{0.0, 0.0};
};

struct PhaseSpaceGrid {
  std::vector<PhaseSpacePoint> points;

  /// n×n points with Re η_a, Re η_b ∈ [−extent, extent] and zero imaginary parts.
  static PhaseSpaceGrid real_axes(int n, double extent);
  /// n points along the line s·e^{iθ}, s ∈ [−extent, extent], on mode a only.
  static PhaseSpaceGrid single_mode_line(int n, double extent, double theta);
};

void validate(const PhaseSpaceGrid& grid);

/// Population allowed in the two highest Fock levels of a displaced mode.
inline constexpr double kDisplacementTailLimit = 1e-8;

/// D(η_a)D(η_b)|ψ⟩ with D(η) = exp(η β† − η* β), on a field-only state.
/// Throws TruncationError when the displaced state leaks into the top levels.
StateVector displace(const StateVector& state, Scalar eta_a, Scalar eta_b);

/// Dispersive-probe sequence: atom (|i⟩+|f⟩)/√2, conditional phase
/// exp[iφ(a†a + b†b)] on the |i⟩ branch, Ramsey π/2 pulse, level statistics.
ProbeOutcome probe_protocol(const StateVector& field_state, double phi);

/// (1 + Re⟨e^{iφN}⟩)/2 and (1 − Re⟨e^{iφN}⟩)/2 evaluated directly.
ProbeOutcome probe_closed_form(const StateVector& field_state, double phi);

/// Probe time t = φΔ/|λ|² giving conditional phase φ.
double probe_interaction_time(double phi, double delta_big, double lambda_abs);

/// Wigner normalization: (2/π) for a single-mode space (n_max_b = 0), (2/π)² otherwise.
double wigner_normalization(const HilbertSpace& field_space);

/// W(η) = c·⟨D(−η)ψ| Π |D(−η)ψ⟩ with Π = (−1)^N.
std::vector<double> wigner_direct(const StateVector& field_state, const PhaseSpaceGrid& grid);

struct ProtocolScan {
  std::vector<double> wigner;  // −c·(P_f − P_i)
  std::vector<double> signal;  // P_f − P_i
};

/// Displace by −η, run probe_protocol, rescale. At φ = π this equals wigner_direct.
ProtocolScan wigner_via_protocol(const StateVector& field_state, const PhaseSpaceGrid& grid, double phi = std::numbers::pi);

}  // namespace cqed
