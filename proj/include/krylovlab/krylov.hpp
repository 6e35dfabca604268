#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "krylovlab/types.hpp"

namespace krylovlab {

// A D x D matrix viewed as a vector in operator space, with the
// infinite-temperature inner product (A|B) = Tr[A^dagger B] / D.
class OperatorVector {
 public:
  OperatorVector() = default;
  explicit OperatorVector(MatrixXc m);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const MatrixXc& matrix() const { return m_; }
  double norm() const { return norm_; }

 private:
  MatrixXc m_;
  double norm_ = 0.0;
};

// [H, O] = HO - OH.
OperatorVector liouvillian_apply(const MatrixXc& H, const OperatorVector& O);
Complex frobenius_inner(const OperatorVector& a, const OperatorVector& b);

enum class Termination { ToleranceHit, MaxIterations, ExactBreakdown };
std::string_view to_string(Termination t);

enum class LanczosBackend {
  // Spectral for a full chain (no max_steps) on sectors up to
  // kSpectralAutoMaxDim; otherwise Packed when H and seed are real and the
  // seed is (anti)symmetric; otherwise Reference.
  Auto,
  Reference,  // dense complex commutators, serial
  Packed,     // real (anti)symmetric packed storage, sparse H, OpenMP kernels
  // Energy eigenbasis, where L is diagonal with entries E_a - E_b. Frequencies
  // closer than merge_tol * max|E| form one atom, so exactly degenerate
  // frequencies stay degenerate and the chain ends at the true Krylov
  // dimension instead of resolving round-off splittings.
  Spectral,
};

constexpr std::size_t kSpectralAutoMaxDim = 2048;

std::string_view to_string(LanczosBackend b);
LanczosBackend lanczos_backend_from_string(std::string_view name);

struct LanczosOptions {
  // Breakdown threshold relative to max(b seen so far); before the first
  // coefficient the Liouvillian norm bound 2*||H||_inf is the scale.
  double tol_rel = 1e-10;
  // Maximum number of coefficients b_n. The Krylov bound D^2 - D + 1 always
  // applies on top of this.
  std::optional<std::size_t> max_steps;
  bool store_basis = false;
  LanczosBackend backend = LanczosBackend::Auto;
  double merge_tol = 1e-9;  // Spectral backend only
};

struct LanczosResult {
  std::vector<double> b;  // b_1 .. b_{K-1}
  std::size_t K = 0;
  Termination termination = Termination::ToleranceHit;
  LanczosBackend backend = LanczosBackend::Auto;  // the one that ran
  std::vector<OperatorVector> basis;  // O_0 .. O_{K-1}, only if stored
};

constexpr std::size_t krylov_dimension_bound(std::size_t D) { return D * D - D + 1; }

// Lanczos on the Liouvillian with two-pass full reorthogonalization.
// Throws InvalidArgument for a zero seed or tol_rel <= 0, DimensionMismatch
// for incompatible shapes and ResourceExhausted when the reorthogonalization
// store would not fit in available memory.
LanczosResult lanczos(const MatrixXc& H, const OperatorVector& seed, const LanczosOptions& opts = {});
LanczosResult lanczos(const MatrixXr& H, const MatrixXr& seed, const LanczosOptions& opts = {});

// Bytes held by the packed backend's reorthogonalization store.
std::size_t packed_lanczos_memory(std::size_t D, std::size_t max_steps);

// Columns `n,b_n`.
void write_csv(std::ostream& os, const LanczosResult& r);

// phi is K x T; phi(n, j) = phi_n(times[j]) with phi_n(0) = delta_{n0}.
struct ComplexityCurve {
  std::vector<double> times;
  MatrixXc phi;
  std::vector<double> c_k;
};

// Amplitudes from the spectral decomposition of the K x K tridiagonal
// Liouvillian, phi_n(t) = i^{-n} [exp(i L t)]_{n0}. Throws InvalidArgument for
// a non-positive or non-finite b entry.
MatrixXc evolve_wavefunction(std::span<const double> b, std::span<const double> times);

// C_K(t) = sum_n n |phi_n(t)|^2, one value per column of `phi`.
std::vector<double> complexity(const MatrixXc& phi);

// Evolve and reduce in one go; drops phi unless `keep_phi` is set, which
// keeps memory at O(K^2) for long grids.
ComplexityCurve complexity_curve(std::span<const double> b, std::span<const double> times,
                                 bool keep_phi = false);

// Columns `t,c_k`; the wide variant appends phi_n real and imaginary parts.
void write_csv(std::ostream& os, const ComplexityCurve& curve, bool wide = false);

// (O_0|L^order|O_0) as the (0,0) entry of the tridiagonal Liouvillian power.
// With chain_closed the sequence is taken as the whole chain (K = size+1);
// otherwise order/2 > b.size() throws InsufficientData.
double moment_from_b(std::span<const double> b, int order, bool chain_closed = false);

}  // namespace krylovlab
