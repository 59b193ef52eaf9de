#pragma once

#include <string_view>
#include <vector>

#include "cqed/fock.hpp"

namespace cqed {

// Units throughout: ħ = 1, couplings and detunings are angular rates in s⁻¹.

enum class Process { PUC, PDC, DEGENERATE_PDC, TWO_PHOTON_BS, TWO_PHOTON_TMS };

std::string_view to_string(Process p);
Process parse_process(std::string_view name);

struct PhysicalParams {
  Scalar lambda_a{0.0, 0.0};
  Scalar lambda_b{0.0, 0.0};
  Scalar omega_cl{0.0, 0.0};
  double delta_big = 0.0;    // Δ
  double delta_small = 0.0;  // δ, detuning of the classical drive
  Process process = Process::PUC;

  /// |Δ| ≥ 10·max(|λ_a|, |λ_b|, |Ω|). Diagnostic only.
  bool dispersive() const;
};

/// Cavity-mode Stark shifts χ_ℓ = |λ_ℓ|²/Δ and the sign of the frame that removes them.
struct FrameSpec {
  double chi_a = 0.0;
  double chi_b = 0.0;
  int sign = +1;  // +1 up-conversion frame, −1 down-conversion frame
};

FrameSpec frame_spec(const PhysicalParams& params);

/// One drive pair O·e^{iνt} + O†·e^{−iνt}.
struct OscillatingTerm {
  Operator op;
  double frequency = 0.0;
};

/// H(t) = H_static + Σ_j (O_j e^{iν_j t} + O_j† e^{−iν_j t}).
class TimeDependentOperator {
 public:
  explicit TimeDependentOperator(Operator static_part, std::vector<OscillatingTerm> terms = {});

  const HilbertSpace& space() const { return static_part_.space(); }
  const Operator& static_part() const { return static_part_; }
  const std::vector<OscillatingTerm>& oscillating_parts() const { return terms_; }

  Operator at(double t) const;
  /// Same as at(t).matrix(), without the intermediate pruning.
  SparseMatrix matrix_at(double t) const;
  /// Fastest |ν_j| among terms with a nonzero operator; 0 if H is static.
  double max_frequency() const;
  bool is_static() const { return max_frequency() == 0.0; }

 private:
  Operator static_part_;
  std::vector<OscillatingTerm> terms_;
  std::vector<SparseMatrix> adjoints_;
};

/// Λ configuration in the rotating frame of exp[−iΔt(σ_ee+σ_gg)]:
/// λ_a a σ_ig + λ_b b σ_ie + Ω e^{−iδt} σ_ge + h.c. − Δ(σ_ee + σ_gg).
TimeDependentOperator full_puc_hamiltonian(const HilbertSpace& space, const PhysicalParams& params);

/// Ladder configuration in the interaction picture of the bare atom + field
/// Hamiltonian: λ_a a σ_ig e^{−iΔt} + λ_b b σ_ei e^{iΔt} + Ω σ_ge e^{−iδt} + h.c.
TimeDependentOperator full_pdc_hamiltonian(const HilbertSpace& space, const PhysicalParams& params);

/// Second-order (dispersive) Λ Hamiltonian with all level shifts, Stark terms
/// and drive-assisted exchange.
TimeDependentOperator effective_puc_hamiltonian(const HilbertSpace& space, const PhysicalParams& params);

/// Second-order ladder Hamiltonian, counterpart of effective_puc_hamiltonian.
TimeDependentOperator effective_pdc_hamiltonian(const HilbertSpace& space, const PhysicalParams& params);

/// Generator of the field dynamics conditioned on the atom staying in |i⟩,
/// on a field-only space and without the constant level shift:
///   up-conversion:    χ_a a†a + χ_b b†b + ξ e^{−iδt} ab† + h.c.
///   down-conversion: −χ_a a†a − χ_b b†b + ξ e^{−iδt} ab  + h.c.
TimeDependentOperator reduced_hamiltonian(const HilbertSpace& field_space, const PhysicalParams& params);

/// Constant energy of the |i⟩ block in the effective Hamiltonians.
double level_i_shift(const PhysicalParams& params);

/// Time-independent bilinear generator in the frame that removes the Stark
/// shifts: ξab† + ξ*a†b (PUC), ξab + ξ*a†b† (PDC), ξa² + ξ*a†² (degenerate).
/// Requires δ = resonance_delta(params) to 1e-9 relative.
Operator reduced_bilinear_generator(const HilbertSpace& field_space, const PhysicalParams& params);

/// Drive detuning that cancels the Stark-shift rotation of the bilinear term.
double resonance_delta(const PhysicalParams& params);

/// ξ = Ωλ_aλ_b*/Δ² (up-conversion) or Ωλ_aλ_b/Δ² (down-conversion).
Scalar effective_xi(const PhysicalParams& params);

enum class TwoPhotonKind { BS, TMS };

/// ζ = λ_aλ_b*/Δ (BS) or κ = λ_aλ_b/Δ (TMS).
Scalar two_photon_coupling(const PhysicalParams& params, TwoPhotonKind kind);

/// ζ ab†σ_eg + h.c. (BS) or κ ab σ_eg + h.c. (TMS). Stark terms are left out.
Operator two_photon_hamiltonian(const HilbertSpace& space, const PhysicalParams& params, TwoPhotonKind kind);

}  // namespace cqed
