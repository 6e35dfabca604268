#pragma once

#include <optional>
#include <vector>

#include "krylovlab/spin_models.hpp"
#include "krylovlab/types.hpp"

namespace krylovlab {

// Quantum numbers of a symmetry sector. `twice_sz` is 2*S^z_total =
// n_up - n_down, so half-integer magnetizations of odd chains stay exact.
struct SectorSpec {
  std::optional<int> parity;
  std::optional<int> z_reflection;
  std::optional<int> twice_sz;

  bool empty() const { return !parity && !z_reflection && !twice_sz; }
  bool operator==(const SectorSpec&) const = default;
};

// Orthonormal, real basis of a sector embedded in the full 2^L space. Each
// full-space state belongs to at most one column (reflection/flip orbits are
// disjoint), which makes the embedding a pair of flat lookup tables.
class SectorBasis {
 public:
  struct Component {
    BasisState state;
    double amplitude;
  };

  int L() const { return L_; }
  std::uint64_t dim_full() const { return std::uint64_t{1} << L_; }
  std::size_t dim() const { return columns_.size(); }
  const SectorSpec& spec() const { return spec_; }

  const std::vector<Component>& column(std::size_t c) const { return columns_[c]; }
  // Column index of `s`, or -1 when the state is outside the sector support.
  std::int64_t column_of(BasisState s) const { return column_of_[s]; }
  double amplitude_of(BasisState s) const { return amplitude_of_[s]; }

  // Dense dim_full x dim embedding (small L only).
  MatrixXr to_dense() const;

 private:
  friend SectorBasis build_sector_basis(const SectorSpec& spec, int L);

  int L_ = 0;
  SectorSpec spec_;
  std::vector<std::vector<Component>> columns_;
  std::vector<std::int64_t> column_of_;
  std::vector<double> amplitude_of_;
};

BasisState reflect(BasisState s, int L);
BasisState flip_all(BasisState s, int L);
// n_up - n_down of a basis state.
int twice_sz_of(BasisState s, int L);

SparseOperator parity_operator(int L);
SparseOperator z_reflection_operator(int L);
// M = sum_i sigma^z_i / 2.
SparseOperator magnetization_operator(int L);

// Throws Error{EmptySector} when no state survives the projection and
// Error{InvalidArgument} for quantum numbers outside {+1, -1} or an
// impossible magnetization.
SectorBasis build_sector_basis(const SectorSpec& spec, int L);

inline constexpr double kSymmetryTolerance = 1e-10;

// Throws Error{SymmetryViolation} naming the first symmetry of `basis` that
// `op` fails to commute with.
void check_symmetries(const SparseOperator& op, const SectorBasis& basis,
                      double tol = kSymmetryTolerance);

// V^dagger op V after the symmetry check.
MatrixXc project(const SparseOperator& op, const SectorBasis& basis);
// Same as `project` for operators with real entries; throws InvalidArgument
// when `op` has an imaginary part.
MatrixXr project_real(const SparseOperator& op, const SectorBasis& basis);

// Columns `column_index,basis_state_bits,amplitude_re,amplitude_im`, with the
// state written as an L-character bit string (site 1 first).
void write_csv(std::ostream& os, const SectorBasis& basis);

}  // namespace krylovlab
