#pragma once

// Hot loops of the toolkit. Each kernel has an OpenMP version (`parallel`)
// and a plain serial version (`serial`) kept as a reference for tests and the
// benchmark. Parallel kernels use a fixed work partition, so their results do
// not depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "krylovlab/types.hpp"

namespace krylovlab::kernels {

enum class Parity { Symmetric, Antisymmetric };

constexpr Parity flip(Parity p) {
  return p == Parity::Symmetric ? Parity::Antisymmetric : Parity::Symmetric;
}

// Real symmetric or antisymmetric D x D operators stored as their upper
// triangle (row-major, diagonal included). Entries are scaled so the plain
// Euclidean dot product of two packed vectors of the same parity equals the
// Frobenius inner product Tr[A^T B] / D.
class PackedSpace {
 public:
  explicit PackedSpace(std::size_t D);

  std::size_t D() const { return D_; }
  std::size_t size() const { return size_; }
  std::size_t row_offset(std::size_t i) const { return i * (2 * D_ - i + 1) / 2; }

  double diag_scale() const { return diag_scale_; }
  double offdiag_scale() const { return offdiag_scale_; }

  void pack(const MatrixXr& dense, std::span<double> out) const;
  MatrixXr unpack(std::span<const double> in, Parity parity) const;

 private:
  std::size_t D_;
  std::size_t size_;
  double diag_scale_;
  double offdiag_scale_;
};

struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  static CsrMatrix from_dense(const MatrixXr& m);
};

namespace serial {

// out = pack([H, unpack(in)]) via dense matrix products.
void liouvillian_packed(const MatrixXr& H, const PackedSpace& space, std::span<const double> in,
                        Parity in_parity, std::span<double> out);

// v -= Q Q^T v, repeated `passes` times. Q holds n_vectors back to back.
void reorthogonalize(std::span<const double> Q, std::size_t n_vectors, std::span<double> v,
                     int passes = 2);

// Z(n, j) = sum_k V(n, k) V(0, k) exp(i lambda_k t_j) by direct summation.
MatrixXc spectral_propagate(const MatrixXr& V, const VectorXr& lambda, std::span<const double> times);

// out[j] = sum_s |sum_n w[s][n] exp(-i E[s][n] t_j)|^2 over flattened samples
// of equal length `levels`.
std::vector<double> sff_numerator(std::span<const double> energies, std::span<const double> weights,
                                  std::size_t levels, std::span<const double> times);

}  // namespace serial

namespace parallel {

// Liouvillian on packed storage with H held in CSR form. Uses two dense D x D
// work buffers, so an instance must not be shared between threads.
class PackedLiouvillian {
 public:
  explicit PackedLiouvillian(const MatrixXr& H);

  const PackedSpace& space() const { return space_; }
  void apply(std::span<const double> in, Parity in_parity, std::span<double> out);

 private:
  CsrMatrix H_;
  PackedSpace space_;
  std::vector<double> dense_;  // unpacked operand, row-major
  std::vector<double> prod_;   // H * operand, row-major
};

void reorthogonalize(std::span<const double> Q, std::size_t n_vectors, std::span<double> v,
                     int passes = 2);

MatrixXc spectral_propagate(const MatrixXr& V, const VectorXr& lambda, std::span<const double> times);

std::vector<double> sff_numerator(std::span<const double> energies, std::span<const double> weights,
                                  std::size_t levels, std::span<const double> times);

}  // namespace parallel

}  // namespace krylovlab::kernels
