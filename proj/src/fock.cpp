#include "cqed/fock.hpp"

#include <cmath>
#include <vector>

namespace cqed {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::g: return "g";
    case Level::e: return "e";
    case Level::i: return "i";
    case Level::f: return "f";
  }
  return "?";
}

Level parse_level(std::string_view name) {
  if (name == "g") return Level::g;
  if (name == "e") return Level::e;
  if (name == "i") return Level::i;
  if (name == "f") return Level::f;
  throw ValidationError("unknown atomic level '" + std::string(name) + "'");
}

bool HilbertSpace::has_level(Level level) const {
  if (is_field_only()) return false;
  return static_cast<int>(level) < atom_levels_;
}

BasisIndex HilbertSpace::unflatten(Eigen::Index k) const {
  if (k < 0 || k >= total_dim()) throw ValidationError("basis index out of range");
  const auto nb = static_cast<int>(k % dim_b());
  const auto rest = k / dim_b();
  return {static_cast<int>(rest / dim_a()), static_cast<int>(rest % dim_a()), nb};
}

HilbertSpace HilbertSpace::field_space() const { return HilbertSpace(1, n_max_a_, n_max_b_); }

namespace {

void check_truncation(int n_max_a, int n_max_b, int atom_levels, std::size_t cap) {
  if (n_max_a < 0 || n_max_b < 0) throw ValidationError("Fock cutoffs must be non-negative");
  const double dim = static_cast<double>(atom_levels) * (n_max_a + 1.0) * (n_max_b + 1.0);
  if (dim > static_cast<double>(cap)) {
    throw ValidationError("truncation gives dimension " + std::to_string(static_cast<long long>(dim)) +
                          " above the cap of " + std::to_string(cap));
  }
}

}  // namespace

HilbertSpace make_space(int atom_levels, int n_max_a, int n_max_b, std::size_t dimension_cap) {
  if (atom_levels != 3 && atom_levels != 4) {
    throw ValidationError("atom_levels must be 3 or 4, got " + std::to_string(atom_levels));
  }
  check_truncation(n_max_a, n_max_b, atom_levels, dimension_cap);
  return HilbertSpace(atom_levels, n_max_a, n_max_b);
}

HilbertSpace make_field_space(int n_max_a, int n_max_b, std::size_t dimension_cap) {
  check_truncation(n_max_a, n_max_b, 1, dimension_cap);
  return HilbertSpace(1, n_max_a, n_max_b);
}

void require_same_space(const HilbertSpace& lhs, const HilbertSpace& rhs, std::string_view what) {
  if (!(lhs == rhs)) throw ValidationError(std::string(what) + ": Hilbert spaces differ");
}

void prune_small(SparseMatrix& m) {
  m.prune([](Eigen::Index, Eigen::Index, const Scalar& v) { return std::abs(v) >= 1e-15; });
  m.makeCompressed();
}

// ---------------------------------------------------------------------------

Operator::Operator(HilbertSpace space, SparseMatrix matrix)
    : space_(space), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.total_dim() || matrix_.cols() != space_.total_dim()) {
    throw ValidationError("operator matrix does not match its space dimension");
  }
  prune_small(matrix_);
}

Operator Operator::adjoint() const { return Operator(space_, SparseMatrix(matrix_.adjoint())); }

double Operator::hermiticity_error() const {
  const double scale = matrix_.norm();
  if (scale == 0.0) return 0.0;
  const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  return diff.norm() / scale;
}

Vector Operator::apply(const Vector& v) const {
  if (v.size() != matrix_.cols()) throw ValidationError("vector length does not match operator");
  return matrix_ * v;
}

Scalar Operator::element(Eigen::Index row, Eigen::Index col) const {
  return matrix_.coeff(row, col);
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_space(space_, rhs.space_, "operator sum");
  matrix_ += rhs.matrix_;
  prune_small(matrix_);
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_space(space_, rhs.space_, "operator difference");
  matrix_ -= rhs.matrix_;
  prune_small(matrix_);
  return *this;
}

Operator& Operator::operator*=(Scalar s) {
  matrix_ *= s;
  prune_small(matrix_);
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_space(lhs.space_, rhs.space_, "operator product");
  return Operator(lhs.space_, SparseMatrix(lhs.matrix_ * rhs.matrix_));
}

// ---------------------------------------------------------------------------

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(space), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.total_dim()) {
    throw ValidationError("state length does not match its space dimension");
  }
}

StateVector StateVector::basis(const HilbertSpace& space, Level level, int n_a, int n_b) {
  if (!space.has_level(level)) throw ValidationError("level not present in this space");
  if (n_a < 0 || n_a > space.n_max_a() || n_b < 0 || n_b > space.n_max_b()) {
    throw ValidationError("Fock index beyond truncation");
  }
  Vector v = Vector::Zero(space.total_dim());
  v[space.flatten(level, n_a, n_b)] = 1.0;
  return StateVector(space, std::move(v));
}

StateVector StateVector::fock(const HilbertSpace& field_space, int n_a, int n_b) {
  if (!field_space.is_field_only()) throw ValidationError("fock() expects a field-only space");
  if (n_a < 0 || n_a > field_space.n_max_a() || n_b < 0 || n_b > field_space.n_max_b()) {
    throw ValidationError("Fock index beyond truncation");
  }
  Vector v = Vector::Zero(field_space.total_dim());
  v[field_space.flatten({0, n_a, n_b})] = 1.0;
  return StateVector(field_space, std::move(v));
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
  return StateVector(space_, amplitudes_ / n);
}

// ---------------------------------------------------------------------------

Operator identity(const HilbertSpace& space) {
  SparseMatrix m(space.total_dim(), space.total_dim());
  m.setIdentity();
  return Operator(space, std::move(m));
}

Operator annihilation(const HilbertSpace& space, Mode mode) {
  const Eigen::Index n = space.total_dim();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    BasisIndex idx = space.unflatten(k);
    int& occ = (mode == Mode::a) ? idx.n_a : idx.n_b;
    if (occ == 0) continue;
    const double amp = std::sqrt(static_cast<double>(occ));
    --occ;
    triplets.emplace_back(space.flatten(idx), k, amp);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Operator(space, std::move(m));
}

Operator creation(const HilbertSpace& space, Mode mode) { return annihilation(space, mode).adjoint(); }

Operator number(const HilbertSpace& space, Mode mode) {
  const Eigen::Index n = space.total_dim();
  std::vector<Triplet> triplets;
  for (Eigen::Index k = 0; k < n; ++k) {
    const BasisIndex idx = space.unflatten(k);
    const int occ = (mode == Mode::a) ? idx.n_a : idx.n_b;
    if (occ != 0) triplets.emplace_back(k, k, static_cast<double>(occ));
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Operator(space, std::move(m));
}

Operator atomic_sigma(const HilbertSpace& space, Level k, Level l) {
  if (!space.has_level(k) || !space.has_level(l)) {
    throw ValidationError("sigma_" + std::string(to_string(k)) + std::string(to_string(l)) +
                          ": level not present in a " + std::to_string(space.atom_levels()) +
                          "-level space");
  }
  const int fd = space.field_dim();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(fd));
  const Eigen::Index row0 = static_cast<Eigen::Index>(k) * fd;
  const Eigen::Index col0 = static_cast<Eigen::Index>(l) * fd;
  for (int j = 0; j < fd; ++j) triplets.emplace_back(row0 + j, col0 + j, 1.0);
  SparseMatrix m(space.total_dim(), space.total_dim());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Operator(space, std::move(m));
}

StateVector product_state(const HilbertSpace& space, const Eigen::VectorXcd& atom,
                          const StateVector& field) {
  if (atom.size() != space.atom_levels()) throw ValidationError("atomic amplitude count mismatch");
  require_same_space(space.field_space(), field.space(), "product_state");
  const int fd = space.field_dim();
  Vector v(space.total_dim());
  for (int lvl = 0; lvl < space.atom_levels(); ++lvl) {
    v.segment(static_cast<Eigen::Index>(lvl) * fd, fd) = atom[lvl] * field.amplitudes();
  }
  return StateVector(space, std::move(v));
}

StateVector product_state(const HilbertSpace& space, Level level, const StateVector& field) {
  if (!space.has_level(level)) throw ValidationError("level not present in this space");
  Eigen::VectorXcd atom = Eigen::VectorXcd::Zero(space.atom_levels());
  atom[static_cast<int>(level)] = 1.0;
  return product_state(space, atom, field);
}

StateVector project_atom(const StateVector& state, Level level) {
  const HilbertSpace& space = state.space();
  if (!space.has_level(level)) throw ValidationError("level not present in this space");
  const int fd = space.field_dim();
  return StateVector(space.field_space(),
                     state.amplitudes().segment(static_cast<Eigen::Index>(level) * fd, fd));
}

Operator restrict_to_level(const Operator& op, Level level) {
  const HilbertSpace& space = op.space();
  if (!space.has_level(level)) throw ValidationError("level not present in this space");
  const int fd = space.field_dim();
  const Eigen::Index off = static_cast<Eigen::Index>(level) * fd;
  return Operator(space.field_space(), SparseMatrix(op.matrix().block(off, off, fd, fd)));
}

Operator embed_field(const Operator& field_op, const HilbertSpace& space) {
  require_same_space(space.field_space(), field_op.space(), "embed_field");
  const int fd = space.field_dim();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(field_op.matrix().nonZeros() * space.atom_levels()));
  for (int lvl = 0; lvl < space.atom_levels(); ++lvl) {
    const Eigen::Index off = static_cast<Eigen::Index>(lvl) * fd;
    for (Eigen::Index r = 0; r < field_op.matrix().outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(field_op.matrix(), r); it; ++it) {
        triplets.emplace_back(off + it.row(), off + it.col(), it.value());
      }
    }
  }
  SparseMatrix m(space.total_dim(), space.total_dim());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Operator(space, std::move(m));
}

Scalar expectation(const Operator& op, const StateVector& state) {
  require_same_space(op.space(), state.space(), "expectation");
  return state.amplitudes().dot(op.matrix() * state.amplitudes());
}

Scalar inner_product(const StateVector& bra, const StateVector& ket) {
  require_same_space(bra.space(), ket.space(), "inner_product");
  return bra.amplitudes().dot(ket.amplitudes());
}

}  // namespace cqed
