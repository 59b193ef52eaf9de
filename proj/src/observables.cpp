#include "cqed/observables.hpp"

#include <algorithm>
#include <cmath>

namespace cqed {

Operator quadrature_operator(const HilbertSpace& space, Mode mode, Quadrature kind) {
  const Operator lower = annihilation(space, mode);
  const Operator raise = creation(space, mode);
  if (kind == Quadrature::x) return 0.5 * (lower + raise);
  return Scalar{0.0, -0.5} * (lower - raise);
}

double epr_quality_analytic(double squeeze_param) { return 1.0 - std::exp(-2.0 * squeeze_param); }

EprMetrics epr_metrics(const StateVector& state, std::optional<double> squeeze_param) {
  const HilbertSpace& space = state.space();
  if (!space.is_field_only()) throw ValidationError("epr_metrics expects a two-mode field state");
  const Operator x_minus = quadrature_operator(space, Mode::a, Quadrature::x) -
                           quadrature_operator(space, Mode::b, Quadrature::x);
  const Operator p_plus = quadrature_operator(space, Mode::a, Quadrature::p) +
                          quadrature_operator(space, Mode::b, Quadrature::p);
  EprMetrics m;
  m.var_x_minus = x_minus.apply(state.amplitudes()).squaredNorm();
  m.var_p_plus = p_plus.apply(state.amplitudes()).squaredNorm();
  m.quality_operational = 1.0 - (m.var_x_minus + m.var_p_plus);
  if (squeeze_param) m.quality_analytic = epr_quality_analytic(*squeeze_param);
  return m;
}

TmsvState tmsv_analytic(const TmsvSpec& spec, const HilbertSpace& field_space) {
  if (!field_space.is_field_only()) throw ValidationError("tmsv_analytic expects a field-only space");
  if (!std::isfinite(spec.squeeze_param) || spec.squeeze_param < 0.0) {
    throw ValidationError("TMSV squeeze parameter must be finite and non-negative");
  }
  const double r = spec.squeeze_param;
  const int n_max = std::min(field_space.n_max_a(), field_space.n_max_b());
  const Scalar ratio = -kI * std::exp(-kI * spec.phase) * std::tanh(r);
  Vector v = Vector::Zero(field_space.total_dim());
  Scalar c = 1.0 / std::cosh(r);
  for (int n = 0; n <= n_max; ++n) {
    v[field_space.flatten({0, n, n})] = c;
    c *= ratio;
  }
  TmsvState out{StateVector(field_space, v / v.norm()), std::pow(std::tanh(r), 2.0 * (n_max + 1))};
  return out;
}

double squeezed_variance(double r) { return std::exp(-2.0 * r) / 4.0; }

double squeezing_fraction(double r) { return 1.0 - std::exp(-2.0 * r); }

Eigen::Matrix2d quadrature_covariance(const StateVector& state, Mode mode) {
  const HilbertSpace& space = state.space();
  const Vector& psi = state.amplitudes();
  const double norm2 = psi.squaredNorm();
  const Vector xpsi = quadrature_operator(space, mode, Quadrature::x).apply(psi);
  const Vector ppsi = quadrature_operator(space, mode, Quadrature::p).apply(psi);
  const double mx = psi.dot(xpsi).real() / norm2;
  const double mp = psi.dot(ppsi).real() / norm2;
  Eigen::Matrix2d cov;
  cov(0, 0) = xpsi.squaredNorm() / norm2 - mx * mx;
  cov(1, 1) = ppsi.squaredNorm() / norm2 - mp * mp;
  cov(0, 1) = cov(1, 0) = xpsi.dot(ppsi).real() / norm2 - mx * mp;
  return cov;
}

double min_quadrature_variance(const StateVector& state, Mode mode) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(quadrature_covariance(state, mode),
                                                              Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

double fidelity(const StateVector& s1, const StateVector& s2) { return std::norm(inner_product(s1, s2)); }

std::vector<double> photon_number_distribution(const StateVector& state, Mode mode) {
  const HilbertSpace& space = state.space();
  std::vector<double> p(static_cast<std::size_t>(mode == Mode::a ? space.dim_a() : space.dim_b()), 0.0);
  const Vector& amps = state.amplitudes();
  for (Eigen::Index k = 0; k < amps.size(); ++k) {
    const BasisIndex idx = space.unflatten(k);
    p[static_cast<std::size_t>(mode == Mode::a ? idx.n_a : idx.n_b)] += std::norm(amps[k]);
  }
  return p;
}

std::string_view to_string(BellState which) {
  switch (which) {
    case BellState::PsiPlus: return "psi+";
    case BellState::PsiMinus: return "psi-";
    case BellState::PhiPlus: return "phi+";
    case BellState::PhiMinus: return "phi-";
  }
  return "?";
}

BellState parse_bell_state(std::string_view name) {
  for (BellState b : {BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus}) {
    if (to_string(b) == name) return b;
  }
  throw ValidationError("unknown Bell state '" + std::string(name) + "' (psi+, psi-, phi+, phi-)");
}

StateVector bell_state(const HilbertSpace& field_space, BellState which) {
  if (!field_space.is_field_only() || field_space.n_max_a() < 1 || field_space.n_max_b() < 1) {
    throw ValidationError("Bell states need a field-only space with n_max >= 1 per mode");
  }
  const double s = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(field_space.total_dim());
  switch (which) {
    case BellState::PsiPlus:
    case BellState::PsiMinus:
      v[field_space.flatten({0, 1, 0})] = s;
      v[field_space.flatten({0, 0, 1})] = (which == BellState::PsiPlus) ? s : -s;
      break;
    case BellState::PhiPlus:
    case BellState::PhiMinus:
      v[field_space.flatten({0, 1, 1})] = s;
      v[field_space.flatten({0, 0, 0})] = (which == BellState::PhiPlus) ? s : -s;
      break;
  }
  return StateVector(field_space, std::move(v));
}

double bell_state_fidelity(const StateVector& state, BellState which) {
  return fidelity(bell_state(state.space(), which), state);
}

}  // namespace cqed
