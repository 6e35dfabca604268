#include "krylovlab/spin_models.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/Sparse>

#include "krylovlab/csv.hpp"
#include "krylovlab/error.hpp"

namespace krylovlab {

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::LocalTFIM: return "LocalTFIM";
    case ModelFamily::NonLocalTFIM: return "NonLocalTFIM";
    case ModelFamily::MixedFieldTFIM: return "MixedFieldTFIM";
    case ModelFamily::LocalXXZ: return "LocalXXZ";
    case ModelFamily::MixedFieldXXZ: return "MixedFieldXXZ";
  }
  return "?";
}

ModelFamily model_family_from_string(std::string_view name) {
  for (auto f : {ModelFamily::LocalTFIM, ModelFamily::NonLocalTFIM, ModelFamily::MixedFieldTFIM,
                 ModelFamily::LocalXXZ, ModelFamily::MixedFieldXXZ})
    if (to_string(f) == name) return f;
  throw Error(ErrorKind::InvalidArgument, "unknown model family '" + std::string(name) + "'");
}

bool uses_transverse_fields(ModelFamily f) {
  return f == ModelFamily::LocalTFIM || f == ModelFamily::NonLocalTFIM || f == ModelFamily::MixedFieldTFIM;
}
bool uses_gamma(ModelFamily f) { return f == ModelFamily::NonLocalTFIM; }
bool uses_power_law(ModelFamily f) { return f == ModelFamily::MixedFieldTFIM || f == ModelFamily::MixedFieldXXZ; }
bool is_xxz(ModelFamily f) { return f == ModelFamily::LocalXXZ || f == ModelFamily::MixedFieldXXZ; }
bool uses_xxz_couplings(ModelFamily f) { return is_xxz(f); }
bool uses_J(ModelFamily f) { return uses_power_law(f) || is_xxz(f); }

void ModelSpec::validate() const {
  auto bad = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (L < 2) bad("model: L must be at least 2");
  if (L > 24) bad("model: L above 24 is outside exact-diagonalization reach");
  for (double v : {g, h, gamma, alpha, J, J_zz, kappa, eps_d})
    if (!std::isfinite(v)) bad("model: couplings must be finite");
  if (!(kappa > 0.0)) bad("model: kappa must be positive");
  if (alpha < 0.0) bad("model: alpha must be non-negative");
  if (defect_site && (*defect_site < 1 || *defect_site > L)) bad("model: defect_site outside 1..L");
}

// ---------------------------------------------------------------------------

void SparseOperator::canonicalize(double drop_tol) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
      merged.back().value += e.value;
    else
      merged.push_back(e);
  }
  std::erase_if(merged, [drop_tol](const Entry& e) { return std::abs(e.value) <= drop_tol; });
  entries = std::move(merged);
}

bool SparseOperator::is_real(double tol) const {
  return std::all_of(entries.begin(), entries.end(),
                     [tol](const Entry& e) { return std::abs(e.value.imag()) <= tol; });
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, std::abs(e.value));
  return m;
}

namespace {

const SparseOperator::Entry* find_entry(const SparseOperator& op, BasisState row, BasisState col) {
  auto it = std::lower_bound(op.entries.begin(), op.entries.end(), std::pair{row, col},
                             [](const SparseOperator::Entry& e, const std::pair<BasisState, BasisState>& k) {
                               return e.row != k.first ? e.row < k.first : e.col < k.second;
                             });
  if (it != op.entries.end() && it->row == row && it->col == col) return &*it;
  return nullptr;
}

using EigenSparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor, std::int64_t>;

EigenSparse to_eigen(const SparseOperator& op) {
  std::vector<Eigen::Triplet<Complex, std::int64_t>> trip;
  trip.reserve(op.entries.size());
  for (const auto& e : op.entries)
    trip.emplace_back(static_cast<std::int64_t>(e.row), static_cast<std::int64_t>(e.col), e.value);
  EigenSparse m(static_cast<std::int64_t>(op.dim), static_cast<std::int64_t>(op.dim));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseOperator from_eigen(const EigenSparse& m) {
  SparseOperator op;
  op.dim = static_cast<std::uint64_t>(m.rows());
  for (std::int64_t r = 0; r < m.outerSize(); ++r)
    for (EigenSparse::InnerIterator it(m, r); it; ++it)
      op.entries.push_back({static_cast<BasisState>(it.row()), static_cast<BasisState>(it.col()), it.value()});
  op.canonicalize();
  return op;
}

void require_same_dim(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim != b.dim) throw Error(ErrorKind::DimensionMismatch, "sparse operators of different dimension");
}

}  // namespace

double SparseOperator::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& e : entries) {
    const Entry* t = find_entry(*this, e.col, e.row);
    const Complex partner = t ? std::conj(t->value) : Complex{};
    worst = std::max(worst, std::abs(e.value - partner));
  }
  return worst;
}

VectorXc SparseOperator::apply(const VectorXc& v) const {
  if (static_cast<std::uint64_t>(v.size()) != dim)
    throw Error(ErrorKind::DimensionMismatch, "SparseOperator::apply: vector length mismatch");
  VectorXc out = VectorXc::Zero(v.size());
  for (const auto& e : entries) out[static_cast<Eigen::Index>(e.row)] += e.value * v[static_cast<Eigen::Index>(e.col)];
  return out;
}

MatrixXc SparseOperator::to_dense() const {
  MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& e : entries) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
  return m;
}

SparseOperator SparseOperator::identity(std::uint64_t dim) {
  SparseOperator op;
  op.dim = dim;
  op.hermitian = true;
  op.entries.reserve(dim);
  for (BasisState s = 0; s < dim; ++s) op.entries.push_back({s, s, 1.0});
  return op;
}

SparseOperator SparseOperator::from_dense(const MatrixXc& m, double drop_tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "from_dense: matrix not square");
  SparseOperator op;
  op.dim = static_cast<std::uint64_t>(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > drop_tol)
        op.entries.push_back({static_cast<BasisState>(r), static_cast<BasisState>(c), m(r, c)});
  op.hermitian = op.hermiticity_defect() < 1e-12;
  return op;
}

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b) {
  require_same_dim(a, b);
  EigenSparse p = (to_eigen(a) * to_eigen(b)).pruned();
  return from_eigen(p);
}

SparseOperator add(const SparseOperator& a, const SparseOperator& b, Complex scale_b) {
  require_same_dim(a, b);
  SparseOperator out;
  out.dim = a.dim;
  out.entries = a.entries;
  for (const auto& e : b.entries) out.entries.push_back({e.row, e.col, scale_b * e.value});
  out.canonicalize();
  return out;
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return add(multiply(a, b), multiply(b, a), -1.0);
}

void write_csv(std::ostream& os, const SparseOperator& op) {
  os << "row,col,re,im\n";
  for (const auto& e : op.entries) {
    os << e.row << ',' << e.col << ',' << format_double(e.value.real()) << ',' << format_double(e.value.imag())
       << '\n';
  }
}

// ---------------------------------------------------------------------------

void CouplingMatrix::set(int i, int j, double v) {
  if (i == j) throw Error(ErrorKind::InvalidArgument, "CouplingMatrix: diagonal is fixed at zero");
  values_[index(i, j)] = v;
  values_[index(j, i)] = v;
}

double power_law_coupling(double J, double kappa, double alpha, int i, int j) {
  if (i == j) throw Error(ErrorKind::InvalidArgument, "power_law_coupling: degenerate pair i == j");
  if (!(kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "power_law_coupling: kappa must be positive");
  return J / (kappa * std::pow(static_cast<double>(std::abs(i - j)), alpha));
}

CouplingMatrix power_law_couplings(double J, double kappa, double alpha, int L) {
  CouplingMatrix c(L);
  for (int i = 1; i <= L; ++i)
    for (int j = i + 1; j <= L; ++j) c.set(i, j, power_law_coupling(J, kappa, alpha, i, j));
  return c;
}

namespace {

// sigma^z eigenvalue of site (1-based) in state s.
inline double sz(BasisState s, int site, int L) {
  return ((s >> site_bit(site, L)) & 1u) ? -1.0 : 1.0;
}

inline BasisState flip(BasisState s, int site, int L) { return s ^ (BasisState{1} << site_bit(site, L)); }

// Pair couplings (i < j) entering the ZZ part and, for XXZ, the flip-flop part.
struct PairTerm {
  int i, j;
  double zz;
  double xy;
};

std::vector<PairTerm> pair_terms(const ModelSpec& m) {
  std::vector<PairTerm> terms;
  const int L = m.L;
  switch (m.family) {
    case ModelFamily::LocalTFIM:
      for (int i = 1; i < L; ++i) terms.push_back({i, i + 1, -1.0, 0.0});
      break;
    case ModelFamily::NonLocalTFIM: {
      const double nl = -m.gamma / std::sqrt(static_cast<double>(L));
      for (int i = 1; i <= L; ++i)
        for (int j = i + 1; j <= L; ++j) terms.push_back({i, j, (j == i + 1 ? -1.0 : 0.0) + nl, 0.0});
      break;
    }
    case ModelFamily::MixedFieldTFIM:
      for (int i = 1; i <= L; ++i)
        for (int j = i + 1; j <= L; ++j) terms.push_back({i, j, -power_law_coupling(m.J, m.kappa, m.alpha, i, j), 0.0});
      break;
    case ModelFamily::LocalXXZ:
      for (int i = 1; i < L; ++i) terms.push_back({i, i + 1, m.J_zz / 4.0, m.J / 4.0});
      break;
    case ModelFamily::MixedFieldXXZ:
      for (int i = 1; i <= L; ++i)
        for (int j = i + 1; j <= L; ++j)
          terms.push_back({i, j, power_law_coupling(m.J_zz, m.kappa, m.alpha, i, j) / 4.0,
                           power_law_coupling(m.J, m.kappa, m.alpha, i, j) / 4.0});
      break;
  }
  return terms;
}

}  // namespace

SparseOperator build_hamiltonian(const ModelSpec& spec) {
  spec.validate();
  const int L = spec.L;
  const std::uint64_t dim = std::uint64_t{1} << L;
  const auto pairs = pair_terms(spec);
  const bool tfim = uses_transverse_fields(spec.family);
  const int defect = spec.resolved_defect_site();

  SparseOperator H;
  H.dim = dim;
  H.hermitian = true;
  H.entries.reserve(dim * (1 + (tfim ? L : pairs.size())));

  for (BasisState s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (const auto& p : pairs) diag += p.zz * sz(s, p.i, L) * sz(s, p.j, L);
    if (tfim) {
      for (int i = 1; i <= L; ++i) diag -= spec.h * sz(s, i, L);
      if (spec.g != 0.0)
        for (int i = 1; i <= L; ++i) H.entries.push_back({flip(s, i, L), s, Complex(-spec.g)});
    } else {
      diag += spec.eps_d * 0.5 * sz(s, defect, L);
      // (xx + yy) flips an antiparallel pair with amplitude 2.
      for (const auto& p : pairs)
        if (p.xy != 0.0 && sz(s, p.i, L) != sz(s, p.j, L))
          H.entries.push_back({flip(flip(s, p.i, L), p.j, L), s, Complex(2.0 * p.xy)});
    }
    H.entries.push_back({s, s, Complex(diag)});
  }
  H.canonicalize();
  return H;
}

std::string_view to_string(SeedKind kind) {
  return kind == SeedKind::SingleSz ? "SingleSz" : "ParitySymmetricSz";
}

SeedKind seed_kind_from_string(std::string_view name) {
  if (name == "SingleSz") return SeedKind::SingleSz;
  if (name == "ParitySymmetricSz") return SeedKind::ParitySymmetricSz;
  throw Error(ErrorKind::InvalidArgument, "unknown seed operator kind '" + std::string(name) + "'");
}

SparseOperator seed_operator(SeedKind kind, int site, int L) {
  if (L < 2) throw Error(ErrorKind::InvalidArgument, "seed_operator: L must be at least 2");
  if (site < 1 || site > L) throw Error(ErrorKind::InvalidArgument, "seed_operator: site outside 1..L");
  const int mirror = L - site + 1;
  SparseOperator op;
  op.dim = std::uint64_t{1} << L;
  op.hermitian = true;
  for (BasisState s = 0; s < op.dim; ++s) {
    double v = 0.5 * sz(s, site, L);
    if (kind == SeedKind::ParitySymmetricSz) v += 0.5 * sz(s, mirror, L);
    op.entries.push_back({s, s, Complex(v)});
  }
  op.canonicalize();
  return op;
}

}  // namespace krylovlab
