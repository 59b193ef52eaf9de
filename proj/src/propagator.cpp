#include "cqed/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cqed {

void validate(const PropagatorOptions& opts) {
  if (!(opts.dt_max > 0.0)) throw ValidationError("dt_max must be positive");
  if (!(opts.rel_tol > 0.0)) throw ValidationError("rel_tol must be positive");
  if (opts.record_stride < 1) throw ValidationError("record_stride must be at least 1");
}

namespace {

constexpr double kNormTolerance = 1e-7;
constexpr double kMinStep = 1e-18;
// Per-substep bound on |t|·‖H − μ‖; the series then needs ~30 terms.
constexpr double kTaylorTheta = 3.0;
constexpr int kMaxTaylorTerms = 120;

struct SpectralBox {
  double center = 0.0;
  double half_width = 0.0;
};

// Gershgorin interval of a Hermitian matrix.
SpectralBox gershgorin(const SparseMatrix& H) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index r = 0; r < H.outerSize(); ++r) {
    double diag = 0.0;
    double radius = 0.0;
    for (SparseMatrix::InnerIterator it(H, r); it; ++it) {
      if (it.col() == it.row()) {
        diag = it.value().real();
      } else {
        radius += std::abs(it.value());
      }
    }
    lo = std::min(lo, diag - radius);
    hi = std::max(hi, diag + radius);
  }
  if (H.outerSize() == 0) return {};
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

}  // namespace

Vector expm_action(const SparseMatrix& H, double t, const Vector& v, double tol) {
  if (t == 0.0 || H.nonZeros() == 0) return v;
  const SpectralBox box = gershgorin(H);
  const auto substeps = static_cast<long>(std::max(1.0, std::ceil(std::abs(t) * box.half_width / kTaylorTheta)));
  const double dt = t / static_cast<double>(substeps);
  const Scalar shift_phase = std::exp(-kI * (box.center * dt));

  Vector acc = v;
  Vector term(v.size());
  for (long s = 0; s < substeps; ++s) {
    term = acc;
    const double ref = acc.norm();
    double prev = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int k = 1; k <= kMaxTaylorTerms; ++k) {
      term = (H * term - box.center * term) * (-kI * dt / static_cast<double>(k));
      acc += term;
      const double tn = term.norm();
      if (tn + prev <= tol * ref) {
        converged = true;
        break;
      }
      prev = tn;
    }
    if (!converged) throw ConvergenceError("matrix-exponential series did not converge");
    acc *= shift_phase;
  }
  return acc;
}

StateVector evolve_static(const Operator& H, const StateVector& psi0, double t, const PropagatorOptions& opts) {
  validate(opts);
  require_same_space(H.space(), psi0.space(), "evolve_static");
  if (!H.is_hermitian()) throw ValidationError("evolve_static: Hamiltonian is not Hermitian");
  // Series truncation per substep stays well below rel_tol.
  const double tol = std::min(1e-15, opts.rel_tol * 1e-3);
  return StateVector(psi0.space(), expm_action(H.matrix(), t, psi0.amplitudes(), tol));
}

namespace {

// One fourth-order commutator-free exponential step from t over h.
Vector cf4_step(const TimeDependentOperator& H, double t, double h, const Vector& psi, double tol) {
  static const double r3 = std::sqrt(3.0);
  const double c1 = 0.5 - r3 / 6.0;
  const double c2 = 0.5 + r3 / 6.0;
  const double w1 = (3.0 - 2.0 * r3) / 12.0;
  const double w2 = (3.0 + 2.0 * r3) / 12.0;
  const SparseMatrix h1 = H.matrix_at(t + c1 * h);
  const SparseMatrix h2 = H.matrix_at(t + c2 * h);
  const SparseMatrix first = w2 * h1 + w1 * h2;
  const SparseMatrix second = w1 * h1 + w2 * h2;
  return expm_action(second, h, expm_action(first, h, psi, tol), tol);
}

Vector rhs(const TimeDependentOperator& H, double t, const Vector& psi) {
  return (-kI) * (H.matrix_at(t) * psi);
}

// Dormand–Prince 5(4); returns the fifth-order solution and the error estimate.
std::pair<Vector, double> dopri_step(const TimeDependentOperator& H, double t, double h, const Vector& y) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  const Vector k1 = rhs(H, t, y);
  const Vector k2 = rhs(H, t + c2 * h, y + h * (a21 * k1));
  const Vector k3 = rhs(H, t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const Vector k4 = rhs(H, t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const Vector k5 = rhs(H, t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const Vector k6 = rhs(H, t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  Vector y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Vector k7 = rhs(H, t + h, y5);
  const double err = (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).norm();
  return {std::move(y5), err};
}

// Both error estimates scale as h⁵.
double next_step(double h, double err, double tol) {
  const double factor = (err == 0.0) ? 4.0 : 0.9 * std::pow(tol / err, 0.2);
  return h * std::clamp(factor, 0.2, 4.0);
}

}  // namespace

Trajectory evolve_td(const TimeDependentOperator& H, const StateVector& psi0, const std::vector<double>& t_grid,
                     const PropagatorOptions& opts,
                     const std::vector<std::pair<std::string, Operator>>& observables) {
  validate(opts);
  require_same_space(H.space(), psi0.space(), "evolve_td");
  if (t_grid.empty()) throw ValidationError("evolve_td: empty time grid");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) throw ValidationError("evolve_td: time grid must be strictly increasing");
  }
  for (const auto& [name, op] : observables) require_same_space(op.space(), psi0.space(), "observable " + name);
  if (H.static_part().hermiticity_error() > 1e-12) throw ValidationError("evolve_td: static part is not Hermitian");

  const bool is_static = H.is_static();
  if (opts.method == PropagationMethod::EXPM_ACTION && !is_static) {
    throw ValidationError("EXPM_ACTION needs a static Hamiltonian; use PIECEWISE_EXPM or ADAPTIVE_RK");
  }
  const double nu = H.max_frequency();
  const double dt_cap = nu > 0.0 ? std::min(opts.dt_max, 0.1 / nu) : opts.dt_max;
  const double series_tol = std::min(1e-15, opts.rel_tol * 1e-3);
  const double norm0 = psi0.norm();

  Trajectory traj;
  const auto record = [&](double t, const Vector& psi) {
    StateVector s(psi0.space(), psi);
    const double n = s.norm();
    traj.times.push_back(t);
    traj.norms.push_back(n);
    if (std::abs(n - norm0) > kNormTolerance) traj.failed = true;
    for (const auto& [name, op] : observables) traj.expectations[name].push_back(expectation(op, s).real());
    traj.states.push_back(std::move(s));
  };

  Vector psi = psi0.amplitudes();
  record(t_grid.front(), psi);
  double h = dt_cap;
  const std::size_t last = t_grid.size() - 1;
  for (std::size_t k = 1; k <= last; ++k) {
    double t = t_grid[k - 1];
    const double t_end = t_grid[k];
    if (is_static && opts.method != PropagationMethod::ADAPTIVE_RK) {
      psi = expm_action(H.static_part().matrix(), t_end - t, psi, series_tol);
      ++traj.steps;
    } else {
      while (t < t_end) {
        const double remaining = t_end - t;
        double step = std::min(h, dt_cap);
        // never leave a sliver of a few ulps before the grid point
        if (remaining - step <= 1e-6 * step) step = remaining;
        if (step < kMinStep) throw ConvergenceError("evolve_td: step size underflow (stiff or misconfigured)");
        double err = 0.0;
        Vector candidate;
        if (opts.method == PropagationMethod::ADAPTIVE_RK) {
          std::tie(candidate, err) = dopri_step(H, t, step, psi);
          err /= std::max(1.0, psi.norm());
        } else {
          const Vector full = cf4_step(H, t, step, psi, series_tol);
          candidate = cf4_step(H, t + 0.5 * step, 0.5 * step, cf4_step(H, t, 0.5 * step, psi, series_tol),
                               series_tol);
          err = (candidate - full).norm() / 15.0;
        }
        if (err <= opts.rel_tol) {
          psi = std::move(candidate);
          t = (step == remaining) ? t_end : t + step;
          ++traj.steps;
          h = next_step(step, err, opts.rel_tol);
        } else {
          h = next_step(step, err, opts.rel_tol);
        }
      }
    }
    if (k == last || k % static_cast<std::size_t>(opts.record_stride) == 0) record(t_end, psi);
  }
  return traj;
}

StateVector frame_transform(const StateVector& state, double chi_a, double chi_b, double t, int sign) {
  const HilbertSpace& space = state.space();
  Vector out = state.amplitudes();
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const BasisIndex idx = space.unflatten(k);
    const double angle = -static_cast<double>(sign) * t * (chi_a * idx.n_a + chi_b * idx.n_b);
    out[k] *= std::exp(kI * angle);
  }
  return StateVector(space, std::move(out));
}

std::vector<double> linear_grid(double t0, double t1, int count) {
  if (count < 2) throw ValidationError("linear_grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = t0 + (t1 - t0) * k / (count - 1);
  grid.back() = t1;
  return grid;
}

}  // namespace cqed
