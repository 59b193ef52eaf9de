#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cqed {

using Scalar = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<Scalar>;

inline constexpr Scalar kI{0.0, 1.0};

/// Malformed input: bad level label, mismatched spaces, parameters out of range.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not reach the requested accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fock truncation too small for the requested operation.
class TruncationError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

enum class Mode { a, b };

/// Atomic basis order is (g, e, i, f); f exists only in four-level spaces.
enum class Level : int { g = 0, e = 1, i = 2, f = 3 };

std::string_view to_string(Level level);
Level parse_level(std::string_view name);

inline constexpr std::size_t kDefaultDimensionCap = 2'000'000;

struct BasisIndex {
  int atom = 0;
  int n_a = 0;
  int n_b = 0;
  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Truncated composite space atom ⊗ mode a ⊗ mode b with the atom slowest.
///
/// A field-only space (no atomic factor) has atom_levels() == 1 and is built
/// with make_field_space(); it is the home of projected two-mode states and
/// of the reduced bilinear generators.
class HilbertSpace {
 public:
  int atom_levels() const { return atom_levels_; }
  int n_max_a() const { return n_max_a_; }
  int n_max_b() const { return n_max_b_; }
  int dim_a() const { return n_max_a_ + 1; }
  int dim_b() const { return n_max_b_ + 1; }
  int field_dim() const { return dim_a() * dim_b(); }
  Eigen::Index total_dim() const {
    return static_cast<Eigen::Index>(atom_levels_) * field_dim();
  }
  bool is_field_only() const { return atom_levels_ == 1; }
  bool has_level(Level level) const;

  Eigen::Index flatten(const BasisIndex& idx) const {
    return (static_cast<Eigen::Index>(idx.atom) * dim_a() + idx.n_a) * dim_b() + idx.n_b;
  }
  Eigen::Index flatten(Level level, int n_a, int n_b) const {
    return flatten({static_cast<int>(level), n_a, n_b});
  }
  BasisIndex unflatten(Eigen::Index k) const;

  /// The two-mode space with the same truncation and no atom.
  HilbertSpace field_space() const;

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  friend HilbertSpace make_space(int, int, int, std::size_t);
  friend HilbertSpace make_field_space(int, int, std::size_t);
  HilbertSpace(int atom_levels, int n_max_a, int n_max_b)
      : atom_levels_(atom_levels), n_max_a_(n_max_a), n_max_b_(n_max_b) {}

  int atom_levels_ = 3;
  int n_max_a_ = 0;
  int n_max_b_ = 0;
};

HilbertSpace make_space(int atom_levels, int n_max_a, int n_max_b,
                        std::size_t dimension_cap = kDefaultDimensionCap);
HilbertSpace make_field_space(int n_max_a, int n_max_b,
                              std::size_t dimension_cap = kDefaultDimensionCap);

/// Sparse operator bound to the space it acts on.
class Operator {
 public:
  Operator(HilbertSpace space, SparseMatrix matrix);

  const HilbertSpace& space() const { return space_; }
  const SparseMatrix& matrix() const { return matrix_; }

  Operator adjoint() const;
  /// ‖O − O†‖_F / ‖O‖_F (0 for the zero operator).
  double hermiticity_error() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }

  Vector apply(const Vector& v) const;
  Scalar element(Eigen::Index row, Eigen::Index col) const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Scalar s);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);
  friend Operator operator*(Operator op, Scalar s) { return op *= s; }
  friend Operator operator*(Scalar s, Operator op) { return op *= s; }
  friend Operator operator*(Operator op, double s) { return op *= Scalar{s, 0.0}; }
  friend Operator operator*(double s, Operator op) { return op *= Scalar{s, 0.0}; }
  friend Operator operator-(Operator op) { return op *= Scalar{-1.0, 0.0}; }

 private:
  HilbertSpace space_;
  SparseMatrix matrix_;
};

/// Drops stored entries with magnitude below 1e-15.
void prune_small(SparseMatrix& m);

/// Complex amplitudes over a HilbertSpace. Not renormalized by the library.
class StateVector {
 public:
  StateVector(HilbertSpace space, Vector amplitudes);

  /// Basis state |level, n_a, n_b⟩.
  static StateVector basis(const HilbertSpace& space, Level level, int n_a, int n_b);
  /// Basis state |n_a, n_b⟩ of a field-only space.
  static StateVector fock(const HilbertSpace& field_space, int n_a, int n_b);

  const HilbertSpace& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }

  Scalar amplitude(Level level, int n_a, int n_b) const {
    return amplitudes_[space_.flatten(level, n_a, n_b)];
  }
  /// Field-only accessor.
  Scalar amplitude(int n_a, int n_b) const { return amplitudes_[space_.flatten({0, n_a, n_b})]; }

  double norm() const { return amplitudes_.norm(); }
  StateVector normalized() const;

 private:
  HilbertSpace space_;
  Vector amplitudes_;
};

void require_same_space(const HilbertSpace& lhs, const HilbertSpace& rhs, std::string_view what);

Operator identity(const HilbertSpace& space);
Operator annihilation(const HilbertSpace& space, Mode mode);
Operator creation(const HilbertSpace& space, Mode mode);
Operator number(const HilbertSpace& space, Mode mode);
/// σ_kl = |k⟩⟨l| on the atom, identity on both modes.
Operator atomic_sigma(const HilbertSpace& space, Level k, Level l);

/// Atom-level state ⊗ field state. `atom` holds one amplitude per level of `space`.
StateVector product_state(const HilbertSpace& space, const Eigen::VectorXcd& atom,
                          const StateVector& field);
StateVector product_state(const HilbertSpace& space, Level level, const StateVector& field);

/// ⟨level|ψ⟩ on the two-mode space; unnormalized, squared norm = population.
StateVector project_atom(const StateVector& state, Level level);

/// The block ⟨level|O|level⟩ as a field-space operator.
Operator restrict_to_level(const Operator& op, Level level);

/// Field operator lifted to space as 1_atom ⊗ op.
Operator embed_field(const Operator& field_op, const HilbertSpace& space);

Scalar expectation(const Operator& op, const StateVector& state);
Scalar inner_product(const StateVector& bra, const StateVector& ket);

}  // namespace cqed
