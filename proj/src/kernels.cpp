#include "krylovlab/kernels.hpp"

#include <cmath>

#include "krylovlab/error.hpp"

namespace krylovlab::kernels {

namespace {

// Fixed partition sizes. Results depend on these, never on the thread count.
constexpr std::size_t kChunk = 4096;     // vector elements per reduction chunk
constexpr std::size_t kVectorBlock = 8;  // basis vectors per dot-product task
constexpr Eigen::Index kTimeBlock = 16;  // time points per propagation GEMM

void check_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": length mismatch");
}

}  // namespace

PackedSpace::PackedSpace(std::size_t D)
    : D_(D),
      size_(D * (D + 1) / 2),
      diag_scale_(1.0 / std::sqrt(static_cast<double>(D))),
      offdiag_scale_(std::sqrt(2.0 / static_cast<double>(D))) {
  if (D == 0) throw Error(ErrorKind::InvalidArgument, "PackedSpace: zero dimension");
}

void PackedSpace::pack(const MatrixXr& dense, std::span<double> out) const {
  if (static_cast<std::size_t>(dense.rows()) != D_ || dense.rows() != dense.cols())
    throw Error(ErrorKind::DimensionMismatch, "PackedSpace::pack: matrix shape");
  check_len(out.size(), size_, "PackedSpace::pack");
  for (std::size_t i = 0; i < D_; ++i) {
    double* row = out.data() + row_offset(i);
    const auto ii = static_cast<Eigen::Index>(i);
    row[0] = diag_scale_ * dense(ii, ii);
    for (std::size_t j = i + 1; j < D_; ++j) row[j - i] = offdiag_scale_ * dense(ii, static_cast<Eigen::Index>(j));
  }
}

MatrixXr PackedSpace::unpack(std::span<const double> in, Parity parity) const {
  check_len(in.size(), size_, "PackedSpace::unpack");
  const double sign = parity == Parity::Symmetric ? 1.0 : -1.0;
  const auto d = static_cast<Eigen::Index>(D_);
  MatrixXr m(d, d);
  for (std::size_t i = 0; i < D_; ++i) {
    const double* row = in.data() + row_offset(i);
    const auto ii = static_cast<Eigen::Index>(i);
    m(ii, ii) = parity == Parity::Symmetric ? row[0] / diag_scale_ : 0.0;
    for (std::size_t j = i + 1; j < D_; ++j) {
      const double v = row[j - i] / offdiag_scale_;
      m(ii, static_cast<Eigen::Index>(j)) = v;
      m(static_cast<Eigen::Index>(j), ii) = sign * v;
    }
  }
  return m;
}

CsrMatrix CsrMatrix::from_dense(const MatrixXr& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "CsrMatrix: matrix not square");
  CsrMatrix csr;
  csr.n = static_cast<std::size_t>(m.rows());
  csr.row_ptr.reserve(csr.n + 1);
  csr.row_ptr.push_back(0);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) != 0.0) {
        csr.col.push_back(static_cast<std::size_t>(c));
        csr.val.push_back(m(r, c));
      }
    }
    csr.row_ptr.push_back(csr.col.size());
  }
  return csr;
}

// ---------------------------------------------------------------------------
// Serial reference kernels.

namespace serial {

void liouvillian_packed(const MatrixXr& H, const PackedSpace& space, std::span<const double> in,
                        Parity in_parity, std::span<double> out) {
  const MatrixXr O = space.unpack(in, in_parity);
  const MatrixXr C = H * O - O * H;
  space.pack(C, out);
}

void reorthogonalize(std::span<const double> Q, std::size_t n_vectors, std::span<double> v, int passes) {
  const std::size_t N = v.size();
  check_len(Q.size(), n_vectors * N, "serial::reorthogonalize");
  std::vector<double> coeff(n_vectors);
  for (int pass = 0; pass < passes; ++pass) {
    for (std::size_t k = 0; k < n_vectors; ++k) {
      const double* q = Q.data() + k * N;
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) s += q[i] * v[i];
      coeff[k] = s;
    }
    for (std::size_t k = 0; k < n_vectors; ++k) {
      const double* q = Q.data() + k * N;
      for (std::size_t i = 0; i < N; ++i) v[i] -= coeff[k] * q[i];
    }
  }
}

MatrixXc spectral_propagate(const MatrixXr& V, const VectorXr& lambda, std::span<const double> times) {
  const Eigen::Index K = V.rows();
  MatrixXc Z = MatrixXc::Zero(K, static_cast<Eigen::Index>(times.size()));
  for (std::size_t j = 0; j < times.size(); ++j) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const Complex phase = std::polar(V(0, k), lambda(k) * times[j]);
      for (Eigen::Index n = 0; n < K; ++n) Z(n, static_cast<Eigen::Index>(j)) += V(n, k) * phase;
    }
  }
  return Z;
}

std::vector<double> sff_numerator(std::span<const double> energies, std::span<const double> weights,
                                  std::size_t levels, std::span<const double> times) {
  check_len(weights.size(), energies.size(), "serial::sff_numerator");
  const std::size_t samples = levels ? energies.size() / levels : 0;
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t j = 0; j < times.size(); ++j) {
    double total = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      double re = 0.0, im = 0.0;
      for (std::size_t n = s * levels; n < (s + 1) * levels; ++n) {
        const double ph = energies[n] * times[j];
        re += weights[n] * std::cos(ph);
        im -= weights[n] * std::sin(ph);
      }
      total += re * re + im * im;
    }
    out[j] = total;
  }
  return out;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP kernels.

namespace parallel {

PackedLiouvillian::PackedLiouvillian(const MatrixXr& H)
    : H_(CsrMatrix::from_dense(H)),
      space_(static_cast<std::size_t>(H.rows())),
      dense_(space_.D() * space_.D()),
      prod_(space_.D() * space_.D()) {}

void PackedLiouvillian::apply(std::span<const double> in, Parity in_parity, std::span<double> out) {
  const std::size_t D = space_.D();
  check_len(in.size(), space_.size(), "PackedLiouvillian::apply");
  check_len(out.size(), space_.size(), "PackedLiouvillian::apply");
  const double ds = space_.diag_scale(), os = space_.offdiag_scale();
  const double sign = in_parity == Parity::Symmetric ? 1.0 : -1.0;
  double* O = dense_.data();
  double* X = prod_.data();
  const auto sD = static_cast<std::ptrdiff_t>(D);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t si = 0; si < sD; ++si) {
    const auto i = static_cast<std::size_t>(si);
    const double* row = in.data() + space_.row_offset(i);
    O[i * D + i] = in_parity == Parity::Symmetric ? row[0] / ds : 0.0;
    for (std::size_t j = i + 1; j < D; ++j) {
      const double v = row[j - i] / os;
      O[i * D + j] = v;
      O[j * D + i] = sign * v;
    }
  }

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t sr = 0; sr < sD; ++sr) {
    const auto r = static_cast<std::size_t>(sr);
    double* x = X + r * D;
    for (std::size_t j = 0; j < D; ++j) x[j] = 0.0;
    for (std::size_t p = H_.row_ptr[r]; p < H_.row_ptr[r + 1]; ++p) {
      const double h = H_.val[p];
      const double* o = O + H_.col[p] * D;
#pragma omp simd
      for (std::size_t j = 0; j < D; ++j) x[j] += h * o[j];
    }
  }

  // [H, O] = X - X^T for symmetric O and X + X^T for antisymmetric O.
  const double tsign = -sign;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t si = 0; si < sD; ++si) {
    const auto i = static_cast<std::size_t>(si);
    double* row = out.data() + space_.row_offset(i);
    row[0] = ds * (X[i * D + i] + tsign * X[i * D + i]);
    for (std::size_t j = i + 1; j < D; ++j) row[j - i] = os * (X[i * D + j] + tsign * X[j * D + i]);
  }
}

void reorthogonalize(std::span<const double> Q, std::size_t n_vectors, std::span<double> v, int passes) {
  const std::size_t N = v.size();
  check_len(Q.size(), n_vectors * N, "parallel::reorthogonalize");
  if (n_vectors == 0 || N == 0) return;
  const std::size_t n_chunks = (N + kChunk - 1) / kChunk;
  const std::size_t n_blocks = (n_vectors + kVectorBlock - 1) / kVectorBlock;
  std::vector<double> partial(n_chunks * n_vectors);
  std::vector<double> coeff(n_vectors);
  const double* q0 = Q.data();
  double* x = v.data();

  for (int pass = 0; pass < passes; ++pass) {
    const auto tasks = static_cast<std::ptrdiff_t>(n_blocks * n_chunks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < tasks; ++t) {
      const std::size_t blk = static_cast<std::size_t>(t) / n_chunks;
      const std::size_t c = static_cast<std::size_t>(t) % n_chunks;
      const std::size_t lo = c * kChunk, hi = std::min(N, lo + kChunk);
      const std::size_t k_end = std::min(n_vectors, (blk + 1) * kVectorBlock);
      for (std::size_t k = blk * kVectorBlock; k < k_end; ++k) {
        const double* q = q0 + k * N;
        double s = 0.0;
#pragma omp simd reduction(+ : s)
        for (std::size_t i = lo; i < hi; ++i) s += q[i] * x[i];
        partial[c * n_vectors + k] = s;
      }
    }
    for (std::size_t k = 0; k < n_vectors; ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < n_chunks; ++c) s += partial[c * n_vectors + k];
      coeff[k] = s;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t sc = 0; sc < static_cast<std::ptrdiff_t>(n_chunks); ++sc) {
      const std::size_t lo = static_cast<std::size_t>(sc) * kChunk, hi = std::min(N, lo + kChunk);
      for (std::size_t k = 0; k < n_vectors; ++k) {
        const double ck = coeff[k];
        const double* q = q0 + k * N;
#pragma omp simd
        for (std::size_t i = lo; i < hi; ++i) x[i] -= ck * q[i];
      }
    }
  }
}

MatrixXc spectral_propagate(const MatrixXr& V, const VectorXr& lambda, std::span<const double> times) {
  const Eigen::Index K = V.rows();
  const auto T = static_cast<Eigen::Index>(times.size());
  MatrixXc Z(K, T);
  const VectorXr w = V.row(0).transpose();
  const Eigen::Index n_blocks = (T + kTimeBlock - 1) / kTimeBlock;

#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index blk = 0; blk < n_blocks; ++blk) {
    const Eigen::Index j0 = blk * kTimeBlock;
    const Eigen::Index nb = std::min(kTimeBlock, T - j0);
    MatrixXr C(K, nb), S(K, nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
      const double t = times[static_cast<std::size_t>(j0 + j)];
      for (Eigen::Index k = 0; k < K; ++k) {
        const double ph = lambda(k) * t;
        C(k, j) = w(k) * std::cos(ph);
        S(k, j) = w(k) * std::sin(ph);
      }
    }
    const MatrixXr re = V * C;
    const MatrixXr im = V * S;
    Z.middleCols(j0, nb).real() = re;
    Z.middleCols(j0, nb).imag() = im;
  }
  return Z;
}

std::vector<double> sff_numerator(std::span<const double> energies, std::span<const double> weights,
                                  std::size_t levels, std::span<const double> times) {
  check_len(weights.size(), energies.size(), "parallel::sff_numerator");
  const std::size_t samples = levels ? energies.size() / levels : 0;
  std::vector<double> out(times.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t sj = 0; sj < static_cast<std::ptrdiff_t>(times.size()); ++sj) {
    const auto j = static_cast<std::size_t>(sj);
    double total = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      double re = 0.0, im = 0.0;
      for (std::size_t n = s * levels; n < (s + 1) * levels; ++n) {
        const double ph = energies[n] * times[j];
        re += weights[n] * std::cos(ph);
        im -= weights[n] * std::sin(ph);
      }
      total += re * re + im * im;
    }
    out[j] = total;
  }
  return out;
}

}  // namespace parallel

}  // namespace krylovlab::kernels
