#include "cqed/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqed {

std::string_view to_string(Process p) {
  switch (p) {
    case Process::PUC: return "PUC";
    case Process::PDC: return "PDC";
    case Process::DEGENERATE_PDC: return "DEGENERATE_PDC";
    case Process::TWO_PHOTON_BS: return "TWO_PHOTON_BS";
    case Process::TWO_PHOTON_TMS: return "TWO_PHOTON_TMS";
  }
  return "?";
}

Process parse_process(std::string_view name) {
  for (Process p : {Process::PUC, Process::PDC, Process::DEGENERATE_PDC, Process::TWO_PHOTON_BS,
                    Process::TWO_PHOTON_TMS}) {
    if (to_string(p) == name) return p;
  }
  throw ValidationError("unknown process '" + std::string(name) + "'");
}

bool PhysicalParams::dispersive() const {
  const double largest = std::max({std::abs(lambda_a), std::abs(lambda_b), std::abs(omega_cl)});
  return std::abs(delta_big) >= 10.0 * largest;
}

namespace {

void require_detuning(const PhysicalParams& params) {
  if (params.delta_big == 0.0 || !std::isfinite(params.delta_big)) {
    throw ValidationError("Delta must be finite and nonzero");
  }
}

void require_process(const PhysicalParams& params, Process expected, std::string_view who) {
  if (params.process != expected) {
    throw ValidationError(std::string(who) + " requires process " + std::string(to_string(expected)) +
                          ", got " + std::string(to_string(params.process)));
  }
}

void require_atom(const HilbertSpace& space, std::string_view who) {
  if (space.atom_levels() < 3) throw ValidationError(std::string(who) + " needs a 3- or 4-level atom");
}

bool up_conversion_frame(Process p) { return p == Process::PUC || p == Process::TWO_PHOTON_BS; }

// Shorthand bundle of the elementary operators on one space.
struct Elementary {
  explicit Elementary(const HilbertSpace& s)
      : a(annihilation(s, Mode::a)),
        b(annihilation(s, Mode::b)),
        ad(creation(s, Mode::a)),
        bd(creation(s, Mode::b)),
        na(number(s, Mode::a)),
        nb(number(s, Mode::b)) {}
  Operator a, b, ad, bd, na, nb;
};

Operator sigma(const HilbertSpace& s, Level k, Level l) { return atomic_sigma(s, k, l); }

}  // namespace

FrameSpec frame_spec(const PhysicalParams& params) {
  require_detuning(params);
  FrameSpec f;
  f.chi_a = std::norm(params.lambda_a) / params.delta_big;
  f.chi_b = std::norm(params.lambda_b) / params.delta_big;
  f.sign = up_conversion_frame(params.process) ? +1 : -1;
  return f;
}

// ---------------------------------------------------------------------------

TimeDependentOperator::TimeDependentOperator(Operator static_part, std::vector<OscillatingTerm> terms)
    : static_part_(std::move(static_part)) {
  // ν = 0 terms are folded into the static part as O + O†.
  for (auto& term : terms) {
    require_same_space(static_part_.space(), term.op.space(), "TimeDependentOperator");
    if (!std::isfinite(term.frequency)) throw ValidationError("oscillation frequency must be finite");
    if (term.frequency == 0.0) {
      static_part_ += term.op + term.op.adjoint();
    } else {
      terms_.push_back(std::move(term));
    }
  }
  adjoints_.reserve(terms_.size());
  for (const auto& term : terms_) adjoints_.emplace_back(term.op.matrix().adjoint());
}

SparseMatrix TimeDependentOperator::matrix_at(double t) const {
  SparseMatrix m = static_part_.matrix();
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const Scalar phase = std::exp(kI * (terms_[j].frequency * t));
    m += phase * terms_[j].op.matrix() + std::conj(phase) * adjoints_[j];
  }
  return m;
}

Operator TimeDependentOperator::at(double t) const { return Operator(space(), matrix_at(t)); }

double TimeDependentOperator::max_frequency() const {
  double nu = 0.0;
  for (const auto& term : terms_) {
    if (term.op.matrix().nonZeros() > 0) nu = std::max(nu, std::abs(term.frequency));
  }
  return nu;
}

// ---------------------------------------------------------------------------

TimeDependentOperator full_puc_hamiltonian(const HilbertSpace& space, const PhysicalParams& params) {
  require_process(params, Process::PUC, "full_puc_hamiltonian");
  require_atom(space, "full_puc_hamiltonian");
  const Elementary op(space);
  const Operator coupling = params.lambda_a * op.a * sigma(space, Level::i, Level::g) +
                            params.lambda_b * op.b * sigma(space, Level::i, Level::e);
  Operator h = coupling + coupling.adjoint() -
               params.delta_big * (sigma(space, Level::e, Level::e) + sigma(space, Level::g, Level::g));
  std::vector<OscillatingTerm> drive{{params.omega_cl * sigma(space, Level::g, Level::e), -params.delta_small}};
  return TimeDependentOperator(std::move(h), std::move(drive));
}

TimeDependentOperator full_pdc_hamiltonian(const HilbertSpace& space, const PhysicalParams& params) {
  require_process(params, Process::PDC, "full_pdc_hamiltonian");
  require_atom(space, "full_pdc_hamiltonian");
  const Elementary op(space);
  // Interaction-picture phases: ω_i−ω_g−ω_a = −Δ, ω_e−ω_i−ω_b = Δ, ω₀ = ω_e−ω_g−δ.
  std::vector<OscillatingTerm> terms{
      {params.lambda_a * op.a * sigma(space, Level::i, Level::g), -params.delta_big},
      {params.lambda_b * op.b * sigma(space, Level::e, Level::i), params.delta_big},
      {params.omega_cl * sigma(space, Level::g, Level::e), -params.delta_small},
  };
  SparseMatrix zero(space.total_dim(), space.total_dim());
  return TimeDependentOperator(Operator(space, std::move(zero)), std::move(terms));
}

// The dispersive Hamiltonians below are assembled term by term from the
// displayed second-order result. Where that display has unbalanced brackets
// (the Stark block) the terms are read as
//   (1/Δ)[(|λ_a|²a†a + |λ_b|²b†b)σ_ii − |λ_a|²a†aσ_gg − |λ_b|²b†bσ_ee]
// and with complex Ω the "h.c." of Ω e^{−iδt}σ_ge is Ω* e^{iδt}σ_eg.

TimeDependentOperator effective_puc_hamiltonian(const HilbertSpace& space, const PhysicalParams& params) {
  require_process(params, Process::PUC, "effective_puc_hamiltonian");
  require_atom(space, "effective_puc_hamiltonian");
  require_detuning(params);
  const Elementary op(space);
  const double delta = params.delta_big;
  const double la2 = std::norm(params.lambda_a);
  const double lb2 = std::norm(params.lambda_b);
  const Operator sgg = sigma(space, Level::g, Level::g);
  const Operator see = sigma(space, Level::e, Level::e);
  const Operator sii = sigma(space, Level::i, Level::i);
  const Operator sge = sigma(space, Level::g, Level::e);
  const Operator seg = sigma(space, Level::e, Level::g);
  const Operator stark_weighted = la2 * op.na + lb2 * op.nb;

  Operator h = -(delta + lb2 / delta) * see - (delta + la2 / delta) * sgg + ((la2 + lb2) / delta) * sii;
  h += (1.0 / delta) * (stark_weighted * sii - la2 * (op.na * sgg) - lb2 * (op.nb * see));
  const Operator exchange = (params.lambda_a * std::conj(params.lambda_b) / delta) * (op.a * op.bd * seg);
  h -= exchange + exchange.adjoint();

  const Scalar omega = params.omega_cl;
  const Scalar xi = effective_xi(params);
  Operator drive = omega * (1.0 - (la2 + lb2) / (2.0 * delta * delta)) * sge;
  drive -= (omega / (delta * delta)) * (stark_weighted * sge);
  drive += xi * (op.a * op.bd * (sii - sgg - see));
  return TimeDependentOperator(std::move(h), {{std::move(drive), -params.delta_small}});
}

TimeDependentOperator effective_pdc_hamiltonian(const HilbertSpace& space, const PhysicalParams& params) {
  require_process(params, Process::PDC, "effective_pdc_hamiltonian");
  require_atom(space, "effective_pdc_hamiltonian");
  require_detuning(params);
  const Elementary op(space);
  const double delta = params.delta_big;
  const double la2 = std::norm(params.lambda_a);
  const double lb2 = std::norm(params.lambda_b);
  const Operator sgg = sigma(space, Level::g, Level::g);
  const Operator see = sigma(space, Level::e, Level::e);
  const Operator sii = sigma(space, Level::i, Level::i);
  const Operator sge = sigma(space, Level::g, Level::e);
  const Operator seg = sigma(space, Level::e, Level::g);
  const Operator stark_weighted = la2 * op.na + lb2 * op.nb;

  // The g-level shift uses |λ_a|²/Δ, the first-order Stark shift, like its e counterpart.
  Operator h = (delta + la2 / delta) * sgg + (delta + lb2 / delta) * see - ((la2 + lb2) / delta) * sii;
  const Operator pair = (params.lambda_a * params.lambda_b / delta) * (op.a * op.b * seg);
  h += pair + pair.adjoint();
  h += (1.0 / delta) * (-(stark_weighted * sii) + la2 * (op.na * sgg) + lb2 * (op.nb * see));

  const Scalar omega = params.omega_cl;
  const Scalar xi = effective_xi(params);
  Operator drive = omega * (1.0 - (la2 + lb2) / (2.0 * delta * delta)) * sge;
  drive -= (omega / (delta * delta)) * (stark_weighted * sge);
  drive -= xi * (op.a * op.b * (see - sii + sgg));
  return TimeDependentOperator(std::move(h), {{std::move(drive), -params.delta_small}});
}

double level_i_shift(const PhysicalParams& params) {
  require_detuning(params);
  const double s = (std::norm(params.lambda_a) + std::norm(params.lambda_b)) / params.delta_big;
  return up_conversion_frame(params.process) ? s : -s;
}

TimeDependentOperator reduced_hamiltonian(const HilbertSpace& field_space, const PhysicalParams& params) {
  if (!field_space.is_field_only()) throw ValidationError("reduced_hamiltonian expects a field-only space");
  const FrameSpec frame = frame_spec(params);
  const Elementary op(field_space);
  const Scalar xi = effective_xi(params);
  switch (params.process) {
    case Process::PUC:
      return TimeDependentOperator(frame.chi_a * op.na + frame.chi_b * op.nb,
                                   {{xi * (op.a * op.bd), -params.delta_small}});
    case Process::PDC:
      return TimeDependentOperator(-frame.chi_a * op.na - frame.chi_b * op.nb,
                                   {{xi * (op.a * op.b), -params.delta_small}});
    case Process::DEGENERATE_PDC:
      return TimeDependentOperator(-frame.chi_a * op.na, {{xi * (op.a * op.a), -params.delta_small}});
    default:
      throw ValidationError("reduced_hamiltonian: no classical drive for two-photon processes");
  }
}

double resonance_delta(const PhysicalParams& params) {
  require_detuning(params);
  const double la2 = std::norm(params.lambda_a);
  const double lb2 = std::norm(params.lambda_b);
  switch (params.process) {
    case Process::PUC:
    case Process::TWO_PHOTON_BS:
      return (lb2 - la2) / params.delta_big;
    case Process::PDC:
    case Process::TWO_PHOTON_TMS:
      return (la2 + lb2) / params.delta_big;
    case Process::DEGENERATE_PDC:
      return 2.0 * la2 / params.delta_big;
  }
  return 0.0;
}

Scalar effective_xi(const PhysicalParams& params) {
  require_detuning(params);
  const double d2 = params.delta_big * params.delta_big;
  switch (params.process) {
    case Process::PUC:
    case Process::TWO_PHOTON_BS:
      return params.omega_cl * params.lambda_a * std::conj(params.lambda_b) / d2;
    case Process::PDC:
    case Process::TWO_PHOTON_TMS:
      return params.omega_cl * params.lambda_a * params.lambda_b / d2;
    case Process::DEGENERATE_PDC:
      return params.omega_cl * params.lambda_a * params.lambda_a / d2;
  }
  return {};
}

Operator reduced_bilinear_generator(const HilbertSpace& field_space, const PhysicalParams& params) {
  if (!field_space.is_field_only()) {
    throw ValidationError("reduced_bilinear_generator expects a field-only space");
  }
  const double required = resonance_delta(params);
  const double scale = std::max(std::abs(required),
                                (std::norm(params.lambda_a) + std::norm(params.lambda_b)) /
                                    std::abs(params.delta_big));
  if (std::abs(params.delta_small - required) > 1e-9 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "drive detuning delta = " << params.delta_small << " is off resonance; the bilinear generator "
        << "requires delta = " << required << " s^-1";
    throw ValidationError(msg.str());
  }
  const Elementary op(field_space);
  const Scalar xi = effective_xi(params);
  Operator h = [&] {
    switch (params.process) {
      case Process::PUC: return xi * (op.a * op.bd);
      case Process::PDC: return xi * (op.a * op.b);
      case Process::DEGENERATE_PDC: return xi * (op.a * op.a);
      default: throw ValidationError("reduced_bilinear_generator: process has no bilinear generator");
    }
  }();
  return h + h.adjoint();
}

Scalar two_photon_coupling(const PhysicalParams& params, TwoPhotonKind kind) {
  require_detuning(params);
  if (kind == TwoPhotonKind::BS) return params.lambda_a * std::conj(params.lambda_b) / params.delta_big;
  return params.lambda_a * params.lambda_b / params.delta_big;
}

Operator two_photon_hamiltonian(const HilbertSpace& space, const PhysicalParams& params, TwoPhotonKind kind) {
  require_atom(space, "two_photon_hamiltonian");
  const Elementary op(space);
  const Scalar c = two_photon_coupling(params, kind);
  const Operator field = (kind == TwoPhotonKind::BS) ? op.a * op.bd : op.a * op.b;
  const Operator h = c * (field * sigma(space, Level::e, Level::g));
  return h + h.adjoint();
}

}  // namespace cqed
