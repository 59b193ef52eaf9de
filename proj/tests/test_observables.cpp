#include <doctest.h>

#include <cmath>

#include "cqed/observables.hpp"
#include "cqed/propagator.hpp"
#include "support.hpp"

using namespace cqed;
using cqed::testing::reference_params;
using cqed::testing::random_state;
using cqed::testing::resonant;

namespace {

PhysicalParams squeezer() {
  PhysicalParams p = resonant(reference_params(Process::PDC));
  p.omega_cl = Scalar{0.0, -7e5};
  return p;
}

StateVector evolved_tmsv(const HilbertSpace& f, double r) {
  const PhysicalParams p = squeezer();
  return evolve_static(reduced_bilinear_generator(f, p), StateVector::fock(f, 0, 0), r / std::abs(effective_xi(p)));
}

}  // namespace

TEST_CASE("quadratures") {
  const HilbertSpace f = make_field_space(8, 8);
  const StateVector vac = StateVector::fock(f, 0, 0);
  const Operator x = quadrature_operator(f, Mode::a, Quadrature::x);
  const Operator p = quadrature_operator(f, Mode::a, Quadrature::p);
  CHECK(x.is_hermitian());
  CHECK(p.is_hermitian());
  CHECK(expectation(x * x, vac).real() == doctest::Approx(0.25));
  CHECK(expectation(p * p, vac).real() == doctest::Approx(0.25));
  for (int n = 0; n <= 8; ++n) CHECK(std::abs(expectation(x, StateVector::fock(f, n, 3))) == 0.0);
  const Operator comm = x * p - p * x;
  for (Eigen::Index k = 0; k < f.total_dim(); ++k) {
    if (f.unflatten(k).n_a == f.n_max_a()) continue;
    CHECK(std::abs(comm.element(k, k) - Scalar{0.0, 0.5}) < 1e-15);
  }
}

TEST_CASE("EPR metrics of the vacuum") {
  const EprMetrics m = epr_metrics(StateVector::fock(make_field_space(3, 3), 0, 0));
  CHECK(m.var_x_minus + m.var_p_plus == doctest::Approx(1.0));
  CHECK(std::abs(m.quality_operational) < 1e-15);
  CHECK_FALSE(m.quality_analytic.has_value());
  CHECK_THROWS_AS(epr_metrics(StateVector::basis(make_space(3, 1, 1), Level::g, 0, 0)), ValidationError);
}

TEST_CASE("analytic quality") {
  CHECK(epr_quality_analytic(0.68) == doctest::Approx(0.7433).epsilon(1e-3));
  CHECK(std::abs(epr_quality_analytic(0.68) - 0.74) < 0.01);
  CHECK(std::abs(epr_quality_analytic(2.0) - 0.98) < 0.01);
  CHECK(epr_quality_analytic(0.0) == 0.0);
}

TEST_CASE("closed-form TMSV") {
  const HilbertSpace f = make_field_space(40, 40);
  const TmsvState zero = tmsv_analytic({0.0, 0.0}, f);
  CHECK(std::norm(zero.state.amplitude(0, 0)) == doctest::Approx(1.0));
  const TmsvState t = tmsv_analytic({0.68, 0.3}, f);
  CHECK(std::norm(t.state.amplitude(0, 0)) == doctest::Approx(1.0 / std::pow(std::cosh(0.68), 2)).epsilon(1e-12));
  CHECK(t.tail_mass == doctest::Approx(std::pow(std::tanh(0.68), 82)));
  for (Eigen::Index k = 0; k < f.total_dim(); ++k) {
    const BasisIndex idx = f.unflatten(k);
    if (idx.n_a != idx.n_b) CHECK(t.state.amplitudes()[k] == Scalar{});
  }
  CHECK_THROWS_AS(tmsv_analytic({-0.1, 0.0}, f), ValidationError);
  CHECK_THROWS_AS(tmsv_analytic({0.5, 0.0}, make_space(3, 2, 2)), ValidationError);
}

TEST_CASE("evolved vacuum matches the closed-form TMSV") {
  const HilbertSpace f = make_field_space(40, 40);
  const PhysicalParams p = squeezer();
  for (double r : {0.1, 0.68, 0.9}) {
    const TmsvState ideal = tmsv_analytic({r, std::arg(effective_xi(p))}, f);
    REQUIRE(ideal.tail_mass < 1e-10);
    CHECK(fidelity(evolved_tmsv(f, r), ideal.state) >= 1.0 - 1e-8);
  }
  // any drive phase is tracked by the TMSV phase
  PhysicalParams q = p;
  q.omega_cl = std::polar(7e5, 2.2);
  const StateVector out = evolve_static(reduced_bilinear_generator(f, q), StateVector::fock(f, 0, 0), 0.68 / 3430.0);
  CHECK(fidelity(out, tmsv_analytic({0.68, std::arg(effective_xi(q))}, f).state) >= 1.0 - 1e-8);
}

TEST_CASE("EPR variance identity and quality duality") {
  const HilbertSpace f = make_field_space(40, 40);
  for (double r : {0.3, 0.68, 1.0}) {
    const EprMetrics m = epr_metrics(evolved_tmsv(f, r), r);
    const double tail = std::pow(std::tanh(r), 2.0 * 41);
    CHECK(std::abs(m.var_x_minus - std::exp(-2.0 * r) / 2.0) <= tail + 1e-7);
    CHECK(std::abs(m.var_p_plus - std::exp(-2.0 * r) / 2.0) <= tail + 1e-7);
    CHECK(std::abs(m.quality_operational - *m.quality_analytic) <= tail + 1e-7);
  }
}

TEST_CASE("photon-number invariants") {
  const HilbertSpace f = make_field_space(4, 4);
  PhysicalParams bs = reference_params(Process::PUC);
  const Operator g_bs = reduced_bilinear_generator(f, bs);
  const Operator g_tms = reduced_bilinear_generator(f, squeezer());
  const Operator n_sum = number(f, Mode::a) + number(f, Mode::b);
  const Operator n_diff = number(f, Mode::a) - number(f, Mode::b);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const StateVector psi = random_state(f, seed);
    const double n0 = expectation(n_sum, psi).real();
    const double d0 = expectation(n_diff, psi).real();
    for (double t : {1e-4, 3e-4}) {
      CHECK(std::abs(expectation(n_sum, evolve_static(g_bs, psi, t)).real() - n0) <= 1e-9 * n0);
      CHECK(std::abs(expectation(n_diff, evolve_static(g_tms, psi, t)).real() - d0) <= 1e-9);
    }
  }
}

TEST_CASE("squeezing closed forms") {
  CHECK(squeezed_variance(0.0) == 0.25);
  CHECK(squeezed_variance(1.36) == doctest::Approx(1.64e-2).epsilon(0.01));
  CHECK(squeezing_fraction(1.36) == doctest::Approx(0.934).epsilon(0.001));
  CHECK(squeezed_variance(0.51) == doctest::Approx(9.0e-2).epsilon(0.01));
}

TEST_CASE("quadrature covariance of a squeezed single mode") {
  const HilbertSpace f = make_field_space(200, 0);
  const PhysicalParams p = resonant(reference_params(Process::DEGENERATE_PDC));
  const StateVector out = evolve_static(reduced_bilinear_generator(f, p), StateVector::fock(f, 0, 0), 2e-4);
  const double r = 2.0 * std::abs(effective_xi(p)) * 2e-4;
  CHECK(min_quadrature_variance(out, Mode::a) == doctest::Approx(squeezed_variance(r)).epsilon(1e-8));
  CHECK(quadrature_covariance(StateVector::fock(f, 0, 0), Mode::a).isApprox(0.25 * Eigen::Matrix2d::Identity()));
}

TEST_CASE("fidelity") {
  const HilbertSpace f = make_field_space(40, 40);
  const StateVector psi = random_state(f, 2);
  CHECK(fidelity(psi, psi) == doctest::Approx(1.0));
  CHECK(fidelity(StateVector::fock(f, 1, 0), StateVector::fock(f, 0, 1)) == 0.0);
  CHECK(fidelity(tmsv_analytic({0.68, 0.0}, f).state, StateVector::fock(f, 0, 0)) ==
        doctest::Approx(1.0 / std::pow(std::cosh(0.68), 2)));
}

TEST_CASE("photon-number distribution") {
  const HilbertSpace f = make_field_space(40, 40);
  const auto vac = photon_number_distribution(StateVector::fock(f, 0, 0), Mode::a);
  CHECK(vac[0] == 1.0);
  const TmsvState t = tmsv_analytic({0.68, 0.0}, f);
  const auto pa = photon_number_distribution(t.state, Mode::a);
  const auto pb = photon_number_distribution(t.state, Mode::b);
  double total = 0.0;
  for (std::size_t n = 0; n < pa.size(); ++n) {
    CHECK(pa[n] == doctest::Approx(pb[n]));
    CHECK(pa[n] == doctest::Approx(std::pow(std::tanh(0.68), 2.0 * n) / std::pow(std::cosh(0.68), 2)));
    total += pa[n];
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
  const StateVector psi = random_state(make_space(3, 2, 3), 4);
  double s = 0.0;
  for (double v : photon_number_distribution(psi, Mode::b)) s += v;
  CHECK(std::abs(s - 1.0) < 1e-9);
}

TEST_CASE("Bell states") {
  const HilbertSpace f = make_field_space(2, 2);
  CHECK(bell_state_fidelity(bell_state(f, BellState::PsiPlus), BellState::PsiPlus) == doctest::Approx(1.0));
  CHECK(bell_state_fidelity(StateVector::fock(f, 1, 0), BellState::PsiPlus) == doctest::Approx(0.5));
  CHECK(bell_state_fidelity(bell_state(f, BellState::PhiPlus), BellState::PsiPlus) == 0.0);
  CHECK(bell_state_fidelity(bell_state(f, BellState::PsiMinus), BellState::PsiPlus) == doctest::Approx(0.0));
  // global phase only
  StateVector phased(f, Scalar{0.0, 1.0} * bell_state(f, BellState::PhiMinus).amplitudes());
  CHECK(bell_state_fidelity(phased, BellState::PhiMinus) == doctest::Approx(1.0));
  CHECK(parse_bell_state("phi-") == BellState::PhiMinus);
  CHECK_THROWS_AS(parse_bell_state("chi+"), ValidationError);
  CHECK_THROWS_AS(bell_state(make_field_space(1, 0), BellState::PsiPlus), ValidationError);
}
