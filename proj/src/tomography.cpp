#include "cqed/tomography.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cqed/propagator.hpp"

namespace cqed {

PhaseSpaceGrid PhaseSpaceGrid::real_axes(int n, double extent) {
  if (n < 1) throw ValidationError("grid needs at least one point per axis");
  PhaseSpaceGrid grid;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xa = n == 1 ? 0.0 : -extent + 2.0 * extent * i / (n - 1);
      const double xb = n == 1 ? 0.0 : -extent + 2.0 * extent * j / (n - 1);
      grid.points.push_back({Scalar{xa, 0.0}, Scalar{xb, 0.0}});
    }
  }
  return grid;
}

PhaseSpaceGrid PhaseSpaceGrid::single_mode_line(int n, double extent, double theta) {
  if (n < 1) throw ValidationError("grid needs at least one point");
  PhaseSpaceGrid grid;
  const Scalar dir = std::polar(1.0, theta);
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? 0.0 : -extent + 2.0 * extent * i / (n - 1);
    grid.points.push_back({s * dir, Scalar{}});
  }
  return grid;
}

void validate(const PhaseSpaceGrid& grid) {
  if (grid.points.empty()) throw ValidationError("phase-space grid is empty");
  for (const auto& p : grid.points) {
    if (!std::isfinite(std::abs(p.eta_a)) || !std::isfinite(std::abs(p.eta_b))) {
      throw ValidationError("phase-space grid has non-finite points");
    }
  }
}

namespace {

void require_field(const StateVector& s, const char* who) {
  if (!s.space().is_field_only()) throw ValidationError(std::string(who) + " expects a field-only state");
}

// Population in the two highest Fock levels of one mode.
double top_levels_mass(const StateVector& s, Mode mode) {
  const HilbertSpace& space = s.space();
  const int n_max = mode == Mode::a ? space.n_max_a() : space.n_max_b();
  double mass = 0.0;
  for (Eigen::Index k = 0; k < s.amplitudes().size(); ++k) {
    const BasisIndex idx = space.unflatten(k);
    const int n = mode == Mode::a ? idx.n_a : idx.n_b;
    if (n >= n_max - 1) mass += std::norm(s.amplitudes()[k]);
  }
  return mass;
}

StateVector displace_mode(const StateVector& s, Mode mode, Scalar eta) {
  const HilbertSpace& space = s.space();
  const int n_max = mode == Mode::a ? space.n_max_a() : space.n_max_b();
  if (n_max == 0) throw ValidationError("cannot displace a mode truncated at n_max = 0");
  // D(η) = exp(−iG) with G = i(η β† − η* β) Hermitian.
  const Operator g = kI * (eta * creation(space, mode) - std::conj(eta) * annihilation(space, mode));
  StateVector out(space, expm_action(g.matrix(), 1.0, s.amplitudes()));
  const double tail = top_levels_mass(out, mode);
  if (tail > kDisplacementTailLimit) {
    std::ostringstream msg;
    msg << "displacement by |eta| = " << std::abs(eta) << " leaves population " << tail
        << " in the top Fock levels of mode " << (mode == Mode::a ? 'a' : 'b') << " (n_max = " << n_max
        << "); increase the truncation";
    throw TruncationError(msg.str());
  }
  return out;
}

}  // namespace

StateVector displace(const StateVector& state, Scalar eta_a, Scalar eta_b) {
  require_field(state, "displace");
  StateVector out = state;
  if (eta_a != Scalar{}) out = displace_mode(out, Mode::a, eta_a);
  if (eta_b != Scalar{}) out = displace_mode(out, Mode::b, eta_b);
  return out;
}

ProbeOutcome probe_protocol(const StateVector& field_state, double phi) {
  require_field(field_state, "probe_protocol");
  const HilbertSpace& fs = field_state.space();
  const HilbertSpace space = make_space(4, fs.n_max_a(), fs.n_max_b());

  // Atom enters in (|i⟩ + |f⟩)/√2; |f⟩ does not couple to the cavity.
  Eigen::VectorXcd atom = Eigen::VectorXcd::Zero(4);
  atom[static_cast<int>(Level::i)] = atom[static_cast<int>(Level::f)] = 1.0 / std::sqrt(2.0);
  StateVector psi = product_state(space, atom, field_state);

  // Dispersive passage: exp[iφ(a†a + b†b)] on the |i⟩ branch only.
  Vector& amps = psi.amplitudes();
  const int fd = space.field_dim();
  const Eigen::Index off_i = static_cast<Eigen::Index>(Level::i) * fd;
  for (int j = 0; j < fd; ++j) {
    const BasisIndex idx = fs.unflatten(j);
    amps[off_i + j] *= std::exp(kI * (phi * (idx.n_a + idx.n_b)));
  }

  // Ramsey π/2: |i⟩ → (|i⟩+|f⟩)/√2, |f⟩ → (|i⟩−|f⟩)/√2.
  const double s = 1.0 / std::sqrt(2.0);
  const Operator ramsey = atomic_sigma(space, Level::g, Level::g) + atomic_sigma(space, Level::e, Level::e) +
                          s * (atomic_sigma(space, Level::i, Level::i) + atomic_sigma(space, Level::f, Level::i) +
                               atomic_sigma(space, Level::i, Level::f) - atomic_sigma(space, Level::f, Level::f));
  psi = StateVector(space, ramsey.apply(psi.amplitudes()));

  const double total = psi.amplitudes().squaredNorm();
  ProbeOutcome out;
  out.p_i = project_atom(psi, Level::i).amplitudes().squaredNorm() / total;
  out.p_f = project_atom(psi, Level::f).amplitudes().squaredNorm() / total;
  return out;
}

ProbeOutcome probe_closed_form(const StateVector& field_state, double phi) {
  require_field(field_state, "probe_closed_form");
  const HilbertSpace& fs = field_state.space();
  const Vector& amps = field_state.amplitudes();
  Scalar mean{};
  for (Eigen::Index k = 0; k < amps.size(); ++k) {
    const BasisIndex idx = fs.unflatten(k);
    mean += std::norm(amps[k]) * std::exp(kI * (phi * (idx.n_a + idx.n_b)));
  }
  mean /= amps.squaredNorm();
  return {0.5 * (1.0 + mean.real()), 0.5 * (1.0 - mean.real())};
}

double probe_interaction_time(double phi, double delta_big, double lambda_abs) {
  if (lambda_abs == 0.0) throw ValidationError("probe coupling must be nonzero");
  return phi * delta_big / (lambda_abs * lambda_abs);
}

double wigner_normalization(const HilbertSpace& field_space) {
  const double single = 2.0 / std::numbers::pi;
  return field_space.n_max_b() == 0 ? single : single * single;
}

namespace {

double parity(const StateVector& s) {
  const HilbertSpace& fs = s.space();
  double p = 0.0;
  for (Eigen::Index k = 0; k < s.amplitudes().size(); ++k) {
    const BasisIndex idx = fs.unflatten(k);
    p += ((idx.n_a + idx.n_b) % 2 == 0 ? 1.0 : -1.0) * std::norm(s.amplitudes()[k]);
  }
  return p;
}

}  // namespace

std::vector<double> wigner_direct(const StateVector& field_state, const PhaseSpaceGrid& grid) {
  require_field(field_state, "wigner_direct");
  validate(grid);
  const double c = wigner_normalization(field_state.space());
  std::vector<double> w;
  w.reserve(grid.points.size());
  for (const auto& pt : grid.points) w.push_back(c * parity(displace(field_state, -pt.eta_a, -pt.eta_b)));
  return w;
}

ProtocolScan wigner_via_protocol(const StateVector& field_state, const PhaseSpaceGrid& grid, double phi) {
  require_field(field_state, "wigner_via_protocol");
  validate(grid);
  const double c = wigner_normalization(field_state.space());
  ProtocolScan scan;
  for (const auto& pt : grid.points) {
    const ProbeOutcome o = probe_protocol(displace(field_state, -pt.eta_a, -pt.eta_b), phi);
    scan.signal.push_back(o.signal());
    scan.wigner.push_back(-c * o.signal());
  }
  return scan;
}

}  // namespace cqed
