#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "krylovlab/types.hpp"

namespace krylovlab {

enum class ModelFamily { LocalTFIM, NonLocalTFIM, MixedFieldTFIM, LocalXXZ, MixedFieldXXZ };

std::string_view to_string(ModelFamily family);
ModelFamily model_family_from_string(std::string_view name);

// Declarative description of one Hamiltonian. Only the couplings relevant to
// `family` are read; see `uses_*` below for which ones those are.
struct ModelSpec {
  ModelFamily family = ModelFamily::LocalTFIM;
  int L = 2;
  double g = 0.0;        // transverse field
  double h = 0.0;        // longitudinal field
  double gamma = 0.0;    // all-to-all ZZ strength, scaled by 1/sqrt(L)
  double alpha = 0.0;    // power-law exponent
  double J = 1.0;        // XX (+YY) or ZZ base coupling
  double J_zz = 1.0;     // ZZ anisotropy of the XXZ families
  double kappa = 1.0;    // coupling normalization
  double eps_d = 0.0;    // defect strength
  std::optional<int> defect_site;  // 1-based; defaults to floor((L+1)/2)

  // Throws Error{InvalidArgument} on L < 2, kappa <= 0, alpha < 0, non-finite
  // couplings or an out-of-range defect site.
  void validate() const;

  int resolved_defect_site() const { return defect_site.value_or((L + 1) / 2); }

  bool operator==(const ModelSpec&) const = default;
};

bool uses_transverse_fields(ModelFamily f);  // g, h
bool uses_gamma(ModelFamily f);
bool uses_power_law(ModelFamily f);          // alpha, kappa
bool uses_xxz_couplings(ModelFamily f);      // J_zz, eps_d, defect_site
bool uses_J(ModelFamily f);
bool is_xxz(ModelFamily f);

// Coordinate-list sparse matrix on the full 2^L space. Entries are kept in
// lexicographic (row, col) order with duplicates merged.
struct SparseOperator {
  struct Entry {
    BasisState row;
    BasisState col;
    Complex value;
  };

  std::uint64_t dim = 0;
  std::vector<Entry> entries;
  bool hermitian = false;

  // Sort, merge duplicates and drop entries with |value| <= drop_tol.
  void canonicalize(double drop_tol = 0.0);

  bool is_real(double tol = 0.0) const;
  double max_abs() const;
  // max |A - A^dagger| over all entries.
  double hermiticity_defect() const;

  VectorXc apply(const VectorXc& v) const;
  MatrixXc to_dense() const;

  static SparseOperator identity(std::uint64_t dim);
  static SparseOperator from_dense(const MatrixXc& m, double drop_tol = 0.0);
};

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b);
SparseOperator add(const SparseOperator& a, const SparseOperator& b, Complex scale_b = 1.0);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

// Columns `row,col,re,im`.
void write_csv(std::ostream& os, const SparseOperator& op);

// Symmetric L x L coupling table with zero diagonal. Sites are 1-based in the
// accessor to match the physics convention.
class CouplingMatrix {
 public:
  explicit CouplingMatrix(int L) : L_(L), values_(static_cast<std::size_t>(L) * L, 0.0) {}

  int size() const { return L_; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  void set(int i, int j, double v);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * L_ + static_cast<std::size_t>(j - 1);
  }
  int L_;
  std::vector<double> values_;
};

// J / (kappa * |i - j|^alpha). Throws on i == j or kappa <= 0.
double power_law_coupling(double J, double kappa, double alpha, int i, int j);
CouplingMatrix power_law_couplings(double J, double kappa, double alpha, int L);

SparseOperator build_hamiltonian(const ModelSpec& spec);

enum class SeedKind { SingleSz, ParitySymmetricSz };

std::string_view to_string(SeedKind kind);
SeedKind seed_kind_from_string(std::string_view name);

// SingleSz: S^z_i. ParitySymmetricSz: S^z_i + S^z_{L-i+1}. Site is 1-based.
SparseOperator seed_operator(SeedKind kind, int site, int L);

// Bit position of 1-based site i in a BasisState.
constexpr int site_bit(int site, int L) { return L - site; }

}  // namespace krylovlab
