#pragma once

// Independent reference constructions for the tests. Nothing here calls into
// the library: Hamiltonians are built from Kronecker products of Pauli
// matrices, sector dimensions by brute-force enumeration.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

inline Mat pauli(char which) {
  Mat m(2, 2);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Product of single-site Paulis; site 1 is the leftmost tensor factor.
inline Mat string_op(int L, std::vector<std::pair<int, char>> sites) {
  Mat out = Mat::Identity(1, 1);
  for (int s = 1; s <= L; ++s) {
    char c = 'i';
    for (auto [site, w] : sites)
      if (site == s) c = w;
    out = kron(out, pauli(c));
  }
  return out;
}

inline Mat tfim(int L, double g, double h, double gamma = 0.0) {
  const auto D = Eigen::Index{1} << L;
  Mat H = Mat::Zero(D, D);
  for (int i = 1; i < L; ++i) H -= string_op(L, {{i, 'z'}, {i + 1, 'z'}});
  for (int i = 1; i <= L; ++i) H -= g * string_op(L, {{i, 'x'}}) + h * string_op(L, {{i, 'z'}});
  for (int i = 1; i <= L; ++i)
    for (int j = i + 1; j <= L; ++j) H -= gamma / std::sqrt(double(L)) * string_op(L, {{i, 'z'}, {j, 'z'}});
  return H;
}

inline Mat mixed_tfim(int L, double g, double h, double alpha, double J = 1.0, double kappa = 1.0) {
  const auto D = Eigen::Index{1} << L;
  Mat H = Mat::Zero(D, D);
  for (int i = 1; i <= L; ++i)
    for (int j = i + 1; j <= L; ++j)
      H -= J / (kappa * std::pow(double(j - i), alpha)) * string_op(L, {{i, 'z'}, {j, 'z'}});
  for (int i = 1; i <= L; ++i) H -= g * string_op(L, {{i, 'x'}}) + h * string_op(L, {{i, 'z'}});
  return H;
}

inline Mat xxz(int L, double J, double Jzz) {
  const auto D = Eigen::Index{1} << L;
  Mat H = Mat::Zero(D, D);
  for (int i = 1; i < L; ++i)
    H += 0.25 * (J * (string_op(L, {{i, 'x'}, {i + 1, 'x'}}) + string_op(L, {{i, 'y'}, {i + 1, 'y'}})) +
                 Jzz * string_op(L, {{i, 'z'}, {i + 1, 'z'}}));
  return H;
}

inline Mat mixed_xxz(int L, double J, double Jzz, double alpha, double kappa, double eps, int defect) {
  const auto D = Eigen::Index{1} << L;
  Mat H = Mat::Zero(D, D);
  for (int i = 1; i <= L; ++i)
    for (int j = i + 1; j <= L; ++j) {
      const double c = 1.0 / (kappa * std::pow(double(j - i), alpha));
      H += 0.25 * c * (J * (string_op(L, {{i, 'x'}, {j, 'x'}}) + string_op(L, {{i, 'y'}, {j, 'y'}})) +
                       Jzz * string_op(L, {{i, 'z'}, {j, 'z'}}));
    }
  H += eps * 0.5 * string_op(L, {{defect, 'z'}});
  return H;
}

// Reflection s_1..s_L -> s_L..s_1 on bit strings with site 1 as the MSB.
inline std::uint64_t reflect_bits(std::uint64_t s, int L) {
  std::uint64_t r = 0;
  for (int b = 0; b < L; ++b)
    if (s >> b & 1) r |= std::uint64_t{1} << (L - 1 - b);
  return r;
}

// dim of the parity sector: (2^L + p * #palindromes) / 2.
inline std::size_t parity_sector_dim(int L, int p) {
  std::size_t pal = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << L); ++s) pal += reflect_bits(s, L) == s;
  return ((std::size_t{1} << L) + (p > 0 ? pal : -pal)) / 2;
}

// Dense matrix exponential of i * H * t via a scaled Taylor series with
// squaring; independent of the eigendecomposition path in the library.
inline Mat expm_iHt(const Mat& H, double t) {
  const double nrm = H.cwiseAbs().rowwise().sum().maxCoeff() * std::abs(t);
  int s = 0;
  while (nrm / std::pow(2.0, s) > 0.25) ++s;
  const Mat A = cd(0, t / std::pow(2.0, s)) * H;
  Mat term = Mat::Identity(H.rows(), H.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * A / double(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

}  // namespace oracle
