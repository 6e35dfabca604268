#include "krylovlab/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <string>

#include "krylovlab/csv.hpp"
#include "krylovlab/error.hpp"

namespace krylovlab {

BasisState reflect(BasisState s, int L) {
  BasisState r = 0;
  for (int b = 0; b < L; ++b)
    if ((s >> b) & 1u) r |= BasisState{1} << (L - 1 - b);
  return r;
}

BasisState flip_all(BasisState s, int L) { return s ^ ((BasisState{1} << L) - 1); }

int twice_sz_of(BasisState s, int L) {
  const int down = std::popcount(s);
  return (L - down) - down;
}

namespace {

SparseOperator permutation_operator(int L, BasisState (*perm)(BasisState, int)) {
  if (L < 2) throw Error(ErrorKind::InvalidArgument, "symmetry operators need L >= 2");
  SparseOperator op;
  op.dim = std::uint64_t{1} << L;
  op.hermitian = true;
  op.entries.reserve(op.dim);
  for (BasisState s = 0; s < op.dim; ++s) op.entries.push_back({perm(s, L), s, 1.0});
  op.canonicalize();
  return op;
}

const SparseOperator::Entry* lookup(const SparseOperator& op, BasisState row, BasisState col) {
  auto it = std::lower_bound(op.entries.begin(), op.entries.end(), std::pair{row, col},
                             [](const SparseOperator::Entry& e, const std::pair<BasisState, BasisState>& k) {
                               return e.row != k.first ? e.row < k.first : e.col < k.second;
                             });
  if (it != op.entries.end() && it->row == row && it->col == col) return &*it;
  return nullptr;
}

// max |op(pi r, pi c) - op(r, c)|, which is max|[op, Pi]| for a permutation Pi.
double permutation_defect(const SparseOperator& op, int L, BasisState (*perm)(BasisState, int)) {
  double worst = 0.0;
  for (const auto& e : op.entries) {
    const auto* img = lookup(op, perm(e.row, L), perm(e.col, L));
    worst = std::max(worst, std::abs(e.value - (img ? img->value : Complex{})));
  }
  return worst;
}

double magnetization_defect(const SparseOperator& op, int L) {
  double worst = 0.0;
  for (const auto& e : op.entries)
    if (twice_sz_of(e.row, L) != twice_sz_of(e.col, L)) worst = std::max(worst, std::abs(e.value));
  return worst;
}

void check_quantum_number(const std::optional<int>& q, const char* name) {
  if (q && *q != 1 && *q != -1)
    throw Error(ErrorKind::InvalidArgument, std::string("sector: ") + name + " must be +1 or -1");
}

}  // namespace

SparseOperator parity_operator(int L) { return permutation_operator(L, &reflect); }

SparseOperator z_reflection_operator(int L) { return permutation_operator(L, &flip_all); }

SparseOperator magnetization_operator(int L) {
  if (L < 2) throw Error(ErrorKind::InvalidArgument, "symmetry operators need L >= 2");
  SparseOperator op;
  op.dim = std::uint64_t{1} << L;
  op.hermitian = true;
  for (BasisState s = 0; s < op.dim; ++s) op.entries.push_back({s, s, 0.5 * twice_sz_of(s, L)});
  op.canonicalize();
  return op;
}

MatrixXr SectorBasis::to_dense() const {
  MatrixXr V = MatrixXr::Zero(static_cast<Eigen::Index>(dim_full()), static_cast<Eigen::Index>(dim()));
  for (std::size_t c = 0; c < columns_.size(); ++c)
    for (const auto& comp : columns_[c]) V(static_cast<Eigen::Index>(comp.state), static_cast<Eigen::Index>(c)) = comp.amplitude;
  return V;
}

SectorBasis build_sector_basis(const SectorSpec& spec, int L) {
  if (L < 2 || L > 30) throw Error(ErrorKind::InvalidArgument, "sector basis: L outside 2..30");
  check_quantum_number(spec.parity, "parity");
  check_quantum_number(spec.z_reflection, "z_reflection");
  if (spec.twice_sz) {
    const int m2 = *spec.twice_sz;
    if (std::abs(m2) > L || (L - m2) % 2 != 0)
      throw Error(ErrorKind::InvalidArgument, "sector: magnetization impossible for this chain length");
    if (spec.z_reflection && m2 != 0)
      throw Error(ErrorKind::InvalidArgument,
                  "sector: z_reflection maps S^z to -S^z and needs magnetization 0");
  }

  struct GroupElement {
    bool reflect, flip;
    int character;
  };
  std::vector<GroupElement> group{{false, false, 1}};
  if (spec.parity) group.push_back({true, false, *spec.parity});
  if (spec.z_reflection) group.push_back({false, true, *spec.z_reflection});
  if (spec.parity && spec.z_reflection) group.push_back({true, true, *spec.parity * *spec.z_reflection});

  auto act = [L](const GroupElement& g, BasisState s) {
    if (g.reflect) s = reflect(s, L);
    if (g.flip) s = flip_all(s, L);
    return s;
  };

  SectorBasis basis;
  basis.L_ = L;
  basis.spec_ = spec;
  const std::uint64_t full = std::uint64_t{1} << L;
  basis.column_of_.assign(full, -1);
  basis.amplitude_of_.assign(full, 0.0);

  std::vector<std::pair<BasisState, double>> coeffs;
  for (BasisState s = 0; s < full; ++s) {
    if (spec.twice_sz && twice_sz_of(s, L) != *spec.twice_sz) continue;
    bool representative = true;
    for (const auto& g : group)
      if (act(g, s) < s) representative = false;
    if (!representative) continue;

    coeffs.clear();
    for (const auto& g : group) {
      const BasisState img = act(g, s);
      auto it = std::find_if(coeffs.begin(), coeffs.end(), [img](const auto& p) { return p.first == img; });
      if (it == coeffs.end())
        coeffs.emplace_back(img, g.character);
      else
        it->second += g.character;
    }
    double norm2 = 0.0;
    for (const auto& [st, c] : coeffs) norm2 += c * c;
    if (norm2 < 0.5) continue;  // coefficients are integers; zero means annihilated
    const double inv = 1.0 / std::sqrt(norm2);

    std::vector<SectorBasis::Component> column;
    for (const auto& [st, c] : coeffs)
      if (c != 0.0) column.push_back({st, c * inv});
    std::sort(column.begin(), column.end(), [](const auto& a, const auto& b) { return a.state < b.state; });
    const auto col_index = static_cast<std::int64_t>(basis.columns_.size());
    for (const auto& comp : column) {
      basis.column_of_[comp.state] = col_index;
      basis.amplitude_of_[comp.state] = comp.amplitude;
    }
    basis.columns_.push_back(std::move(column));
  }
  if (basis.columns_.empty()) throw Error(ErrorKind::EmptySector, "sector basis is empty for the requested quantum numbers");
  return basis;
}

void check_symmetries(const SparseOperator& op, const SectorBasis& basis, double tol) {
  const int L = basis.L();
  if (op.dim != basis.dim_full()) throw Error(ErrorKind::DimensionMismatch, "operator and sector basis live in different spaces");
  const auto& spec = basis.spec();
  if (spec.parity && permutation_defect(op, L, &reflect) > tol)
    throw Error(ErrorKind::SymmetryViolation, "operator does not commute with spatial parity", "parity");
  if (spec.z_reflection && permutation_defect(op, L, &flip_all) > tol)
    throw Error(ErrorKind::SymmetryViolation, "operator does not commute with the global spin flip", "z_reflection");
  if (spec.twice_sz && magnetization_defect(op, L) > tol)
    throw Error(ErrorKind::SymmetryViolation, "operator does not conserve total magnetization", "magnetization");
}

namespace {

template <class Matrix, class Convert>
Matrix project_impl(const SparseOperator& op, const SectorBasis& basis, Convert convert) {
  check_symmetries(op, basis);
  const auto d = static_cast<Eigen::Index>(basis.dim());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& e : op.entries) {
    const auto r = basis.column_of(e.row);
    const auto c = basis.column_of(e.col);
    if (r < 0 || c < 0) continue;
    out(r, c) += convert(basis.amplitude_of(e.row) * e.value * basis.amplitude_of(e.col));
  }
  return out;
}

}  // namespace

MatrixXc project(const SparseOperator& op, const SectorBasis& basis) {
  return project_impl<MatrixXc>(op, basis, [](Complex v) { return v; });
}

MatrixXr project_real(const SparseOperator& op, const SectorBasis& basis) {
  if (!op.is_real()) throw Error(ErrorKind::InvalidArgument, "project_real: operator has imaginary entries");
  return project_impl<MatrixXr>(op, basis, [](Complex v) { return v.real(); });
}

void write_csv(std::ostream& os, const SectorBasis& basis) {
  os << "column_index,basis_state_bits,amplitude_re,amplitude_im\n";
  const int L = basis.L();
  for (std::size_t c = 0; c < basis.dim(); ++c) {
    for (const auto& comp : basis.column(c)) {
      std::string bits(static_cast<std::size_t>(L), '0');
      for (int site = 1; site <= L; ++site)
        if ((comp.state >> site_bit(site, L)) & 1u) bits[static_cast<std::size_t>(site - 1)] = '1';
      os << c << ',' << bits << ',' << format_double(comp.amplitude) << ",0\n";
    }
  }
}

}  // namespace krylovlab
