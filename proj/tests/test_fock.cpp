#include <doctest.h>

#include <cmath>

#include "cqed/fock.hpp"
#include "support.hpp"

using namespace cqed;

TEST_CASE("space dimensions") {
  CHECK(make_space(3, 0, 0).total_dim() == 3);
  CHECK(make_space(3, 5, 5).total_dim() == 108);
  CHECK(make_space(4, 10, 10).total_dim() == 484);
  CHECK(make_field_space(4, 2).total_dim() == 15);
  CHECK(make_field_space(4, 2).is_field_only());
}

TEST_CASE("space rejects bad shapes") {
  CHECK_THROWS_AS(make_space(2, 1, 1), ValidationError);
  CHECK_THROWS_AS(make_space(5, 1, 1), ValidationError);
  CHECK_THROWS_AS(make_space(3, -1, 1), ValidationError);
  CHECK_THROWS_AS(make_space(3, 1000, 1000), ValidationError);
  CHECK_NOTHROW(make_space(3, 1000, 1000, 10'000'000));
}

TEST_CASE("index maps are bijective, atom slowest") {
  for (const HilbertSpace& s : {make_space(3, 2, 4), make_space(4, 3, 1), make_field_space(5, 2)}) {
    for (Eigen::Index k = 0; k < s.total_dim(); ++k) CHECK(s.flatten(s.unflatten(k)) == k);
  }
  const HilbertSpace s = make_space(3, 2, 2);
  CHECK(s.flatten(Level::g, 0, 1) == 1);
  CHECK(s.flatten(Level::g, 1, 0) == 3);
  CHECK(s.flatten(Level::e, 0, 0) == 9);
}

TEST_CASE("level labels") {
  CHECK(parse_level("i") == Level::i);
  CHECK(to_string(Level::f) == "f");
  CHECK_THROWS_AS(parse_level("x"), ValidationError);
  CHECK_FALSE(make_space(3, 1, 1).has_level(Level::f));
  CHECK(make_space(4, 1, 1).has_level(Level::f));
  CHECK_THROWS_AS(atomic_sigma(make_space(3, 1, 1), Level::f, Level::g), ValidationError);
}

TEST_CASE("ladder operators") {
  const HilbertSpace s = make_field_space(4, 4);
  const Operator a = annihilation(s, Mode::a);
  const Vector one = StateVector::fock(s, 1, 0).amplitudes();
  const Vector out = a.apply(one);
  CHECK(out[s.flatten({0, 0, 0})] == Scalar{1.0, 0.0});
  CHECK(out.norm() == doctest::Approx(1.0));
  CHECK(a.apply(StateVector::fock(s, 0, 0).amplitudes()).norm() == 0.0);
  CHECK(a.element(s.flatten({0, 2, 0}), s.flatten({0, 3, 0})).real() == doctest::Approx(std::sqrt(3.0)));
  CHECK(annihilation(s, Mode::b).element(s.flatten({0, 1, 1}), s.flatten({0, 1, 2})).real() ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("adjoint of annihilation is creation, element-wise") {
  const HilbertSpace s = make_space(3, 3, 2);
  for (Mode m : {Mode::a, Mode::b}) {
    const SparseMatrix diff = SparseMatrix(annihilation(s, m).adjoint().matrix() - creation(s, m).matrix());
    CHECK(diff.norm() == 0.0);
  }
}

TEST_CASE("commutator [a, a^dag] is identity below the top level") {
  const HilbertSpace s = make_space(3, 5, 4);
  for (Mode m : {Mode::a, Mode::b}) {
    const Operator c = annihilation(s, m) * creation(s, m) - creation(s, m) * annihilation(s, m);
    const int n_max = m == Mode::a ? s.n_max_a() : s.n_max_b();
    for (Eigen::Index r = 0; r < s.total_dim(); ++r) {
      const BasisIndex idx = s.unflatten(r);
      if ((m == Mode::a ? idx.n_a : idx.n_b) == n_max) continue;
      for (Eigen::Index col = 0; col < s.total_dim(); ++col) {
        CHECK(std::abs(c.element(r, col) - Scalar{r == col ? 1.0 : 0.0, 0.0}) < 1e-14);
      }
    }
  }
}

TEST_CASE("atomic projector algebra") {
  const HilbertSpace s = make_space(4, 1, 2);
  const Level levels[] = {Level::g, Level::e, Level::i, Level::f};
  Operator sum = atomic_sigma(s, Level::g, Level::g) * 0.0;
  for (Level k : levels) sum += atomic_sigma(s, k, k);
  CHECK(SparseMatrix(sum.matrix() - identity(s).matrix()).norm() == 0.0);
  for (Level k : levels)
    for (Level l : levels)
      for (Level m : levels)
        for (Level n : levels) {
          const Operator lhs = atomic_sigma(s, k, l) * atomic_sigma(s, m, n);
          const Operator rhs = l == m ? atomic_sigma(s, k, n) : atomic_sigma(s, k, n) * 0.0;
          CHECK(SparseMatrix(lhs.matrix() - rhs.matrix()).norm() == 0.0);
        }
  const StateVector gi = StateVector::basis(s, Level::i, 1, 0);
  CHECK(atomic_sigma(s, Level::g, Level::e).apply(gi.amplitudes()).norm() == 0.0);
}

TEST_CASE("three-level completeness") {
  const HilbertSpace s = make_space(3, 2, 2);
  const Operator sum =
      atomic_sigma(s, Level::g, Level::g) + atomic_sigma(s, Level::e, Level::e) + atomic_sigma(s, Level::i, Level::i);
  CHECK(SparseMatrix(sum.matrix() - identity(s).matrix()).norm() == 0.0);
}

TEST_CASE("operators on different spaces do not combine") {
  const Operator a = annihilation(make_space(3, 2, 2), Mode::a);
  const Operator b = annihilation(make_space(3, 3, 2), Mode::a);
  CHECK_THROWS_AS(a + b, ValidationError);
  CHECK_THROWS_AS(a * b, ValidationError);
  CHECK_THROWS_AS(expectation(a, StateVector::fock(make_field_space(2, 2), 0, 0)), ValidationError);
}

TEST_CASE("project_atom") {
  const HilbertSpace s = make_space(3, 2, 2);
  const StateVector i00 = StateVector::basis(s, Level::i, 0, 0);
  const StateVector pi = project_atom(i00, Level::i);
  CHECK(pi.space().is_field_only());
  CHECK(pi.amplitude(0, 0) == Scalar{1.0, 0.0});
  CHECK(pi.norm() == doctest::Approx(1.0));
  CHECK(project_atom(i00, Level::g).norm() == 0.0);

  Vector v = (StateVector::basis(s, Level::i, 1, 0).amplitudes() + StateVector::basis(s, Level::g, 0, 1).amplitudes()) /
             std::sqrt(2.0);
  const StateVector mixed(s, v);
  const StateVector p = project_atom(mixed, Level::i);
  CHECK(p.amplitudes().squaredNorm() == doctest::Approx(0.5));
  CHECK(std::abs(p.amplitude(1, 0) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("projected populations sum to one") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const HilbertSpace s = make_space(seed % 2 ? 3 : 4, 3, 2);
    const StateVector psi = testing::random_state(s, seed);
    double total = 0.0;
    for (int k = 0; k < s.atom_levels(); ++k) total += project_atom(psi, static_cast<Level>(k)).amplitudes().squaredNorm();
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("expectation values") {
  const HilbertSpace s = make_field_space(6, 3);
  CHECK(expectation(number(s, Mode::a), StateVector::fock(s, 0, 0)).real() == 0.0);
  for (int n = 0; n <= 6; ++n) {
    CHECK(expectation(number(s, Mode::a), StateVector::fock(s, n, 1)).real() == doctest::Approx(n));
  }
  const StateVector psi = testing::random_state(s, 7);
  CHECK(expectation(identity(s), psi).real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("embedding and restriction round trip") {
  const HilbertSpace s = make_space(3, 2, 3);
  const Operator field_op = number(s.field_space(), Mode::b) + annihilation(s.field_space(), Mode::a);
  const Operator lifted = embed_field(field_op, s);
  for (Level l : {Level::g, Level::e, Level::i}) {
    CHECK(SparseMatrix(restrict_to_level(lifted, l).matrix() - field_op.matrix()).norm() == 0.0);
  }
}

TEST_CASE("product states") {
  const HilbertSpace s = make_space(4, 2, 2);
  const StateVector field = StateVector::fock(s.field_space(), 2, 1);
  const StateVector psi = product_state(s, Level::e, field);
  CHECK(psi.amplitude(Level::e, 2, 1) == Scalar{1.0, 0.0});
  Eigen::VectorXcd atom = Eigen::VectorXcd::Zero(3);
  CHECK_THROWS_AS(product_state(s, atom, field), ValidationError);
}

TEST_CASE("hermiticity check") {
  const HilbertSpace s = make_field_space(3, 3);
  CHECK(number(s, Mode::a).is_hermitian());
  CHECK_FALSE(annihilation(s, Mode::a).is_hermitian());
  const Operator x = annihilation(s, Mode::a) + creation(s, Mode::a);
  CHECK(x.hermiticity_error() < 1e-15);
}
