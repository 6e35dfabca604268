#include "krylovlab/krylov.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "krylovlab/csv.hpp"
#include "krylovlab/error.hpp"
#include "krylovlab/kernels.hpp"
#include "krylovlab/resources.hpp"

namespace krylovlab {

namespace {

constexpr double kBreakdownFactor = 1e3;

double inner_real(const MatrixXc& a, const MatrixXc& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real() / static_cast<double>(a.rows());
}

template <class M>
double inf_norm(const M& H) {
  return H.cwiseAbs().rowwise().sum().maxCoeff();
}

void check_options(const LanczosOptions& opts) {
  if (!(opts.tol_rel > 0.0) || !std::isfinite(opts.tol_rel))
    throw Error(ErrorKind::InvalidArgument, "lanczos: tol_rel must be positive");
}

std::size_t step_limit(std::size_t D, const LanczosOptions& opts) {
  std::size_t K_max = krylov_dimension_bound(D);
  if (opts.max_steps) K_max = std::min(K_max, *opts.max_steps + 1);
  return K_max;
}

// Classifies b against the running scale. Returns true when the chain stops.
bool stops(double b, double scale, const LanczosOptions& opts, Termination& why) {
  if (b < kBreakdownFactor * std::numeric_limits<double>::epsilon() * scale) {
    why = Termination::ExactBreakdown;
    return true;
  }
  if (b < opts.tol_rel * scale) {
    why = Termination::ToleranceHit;
    return true;
  }
  return false;
}

// Termination when the loop ran out of room rather than hitting a small b.
Termination limit_reason(std::size_t K, std::size_t D, const LanczosOptions& opts) {
  if (opts.max_steps && K == *opts.max_steps + 1) return Termination::MaxIterations;
  (void)D;
  return Termination::ExactBreakdown;  // Krylov space exhausted
}

LanczosResult reference_lanczos(const MatrixXc& H, const OperatorVector& seed, const LanczosOptions& opts) {
  const std::size_t D = seed.dim();
  const std::size_t K_max = step_limit(D, opts);
  require_memory(K_max * D * D * sizeof(Complex), "reference Lanczos basis");

  LanczosResult res;
  res.backend = LanczosBackend::Reference;
  std::vector<MatrixXc> Q;
  Q.push_back(seed.matrix() / seed.norm());
  double scale = 2.0 * inf_norm(H);
  double b_max = 0.0;
  Termination why{};
  bool stopped = false;

  while (Q.size() < K_max) {
    const MatrixXc& cur = Q.back();
    MatrixXc A = H * cur - cur * H;
    if (Q.size() >= 2) A -= res.b.back() * Q[Q.size() - 2];
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<Complex> c(Q.size());
      for (std::size_t k = 0; k < Q.size(); ++k)
        c[k] = (Q[k].conjugate().cwiseProduct(A)).sum() / static_cast<double>(D);
      for (std::size_t k = 0; k < Q.size(); ++k) A -= c[k] * Q[k];
    }
    const double b = std::sqrt(std::max(0.0, inner_real(A, A)));
    if (b_max > 0.0) scale = b_max;
    if (stops(b, scale, opts, why)) {
      stopped = true;
      break;
    }
    b_max = std::max(b_max, b);
    res.b.push_back(b);
    Q.push_back(A / b);
  }
  res.K = Q.size();
  res.termination = stopped ? why : limit_reason(res.K, D, opts);
  if (opts.store_basis) {
    res.basis.reserve(Q.size());
    for (auto& q : Q) res.basis.emplace_back(std::move(q));
  }
  return res;
}

enum class SeedParity { Symmetric, Antisymmetric, Neither };

SeedParity classify(const MatrixXr& m) {
  const double n = m.norm();
  if ((m - m.transpose()).norm() <= 1e-12 * n) return SeedParity::Symmetric;
  if ((m + m.transpose()).norm() <= 1e-12 * n) return SeedParity::Antisymmetric;
  return SeedParity::Neither;
}

LanczosResult packed_lanczos(const MatrixXr& H, const MatrixXr& seed, kernels::Parity p0,
                             const LanczosOptions& opts) {
  using kernels::Parity;
  const std::size_t D = static_cast<std::size_t>(H.rows());
  const std::size_t K_max = step_limit(D, opts);
  require_memory(packed_lanczos_memory(D, K_max - 1), "packed Lanczos store");

  kernels::parallel::PackedLiouvillian L(H);
  const auto& space = L.space();
  const std::size_t N = space.size();

  // One store per parity; vector n has parity p0 flipped n times.
  std::vector<double> store[2];
  const std::size_t n_even = (K_max + 1) / 2, n_odd = K_max / 2;
  store[0].reserve(n_even * N);
  store[1].reserve(n_odd * N);
  auto parity_of = [p0](std::size_t n) { return n % 2 == 0 ? p0 : kernels::flip(p0); };
  auto vec = [&](std::size_t n) {
    return std::span<const double>(store[n % 2].data() + (n / 2) * N, N);
  };

  std::vector<double> A(N);
  {
    space.pack(seed, A);
    double nrm = 0.0;
    for (double x : A) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : A) x /= nrm;
    store[0].insert(store[0].end(), A.begin(), A.end());
  }

  LanczosResult res;
  res.backend = LanczosBackend::Packed;
  double scale = 2.0 * inf_norm(H);
  double b_max = 0.0;
  Termination why{};
  bool stopped = false;
  std::size_t K = 1;

  while (K < K_max) {
    L.apply(vec(K - 1), parity_of(K - 1), A);
    if (K >= 2) {
      const auto prev = vec(K - 2);
      const double bp = res.b.back();
      for (std::size_t i = 0; i < N; ++i) A[i] -= bp * prev[i];
    }
    const auto& same = store[K % 2];
    kernels::parallel::reorthogonalize(same, same.size() / N, A);
    double b2 = 0.0;
#pragma omp parallel for reduction(+ : b2) schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(N); ++i) b2 += A[static_cast<std::size_t>(i)] * A[static_cast<std::size_t>(i)];
    const double b = std::sqrt(b2);
    if (b_max > 0.0) scale = b_max;
    if (stops(b, scale, opts, why)) {
      stopped = true;
      break;
    }
    b_max = std::max(b_max, b);
    res.b.push_back(b);
    for (double& x : A) x /= b;
    store[K % 2].insert(store[K % 2].end(), A.begin(), A.end());
    ++K;
  }
  res.K = K;
  res.termination = stopped ? why : limit_reason(K, D, opts);
  if (opts.store_basis) {
    res.basis.reserve(K);
    for (std::size_t n = 0; n < K; ++n)
      res.basis.emplace_back(space.unpack(vec(n), parity_of(n)).cast<Complex>());
  }
  return res;
}

// Energy eigenbasis of H with the seed expressed in it.
struct EigenFrame {
  VectorXr E;
  MatrixXc V;
  MatrixXc Ot;  // V^dagger O V
};

EigenFrame eigen_frame(const MatrixXr& H, const MatrixXr& O) {
  const auto D = H.rows();
  MatrixXr V = H;
  VectorXr E(D);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(D), V.data(), static_cast<lapack_int>(D),
                     E.data()) != 0)
    throw Error(ErrorKind::InvalidArgument, "spectral Lanczos: eigensolver failed");
  const MatrixXr Ot = V.transpose() * O * V;
  return {E, V.cast<Complex>(), Ot.cast<Complex>()};
}

EigenFrame eigen_frame(const MatrixXc& H, const MatrixXc& O) {
  const auto D = H.rows();
  MatrixXc V = H;
  VectorXr E(D);
  if (LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(D),
                     reinterpret_cast<lapack_complex_double*>(V.data()), static_cast<lapack_int>(D), E.data()) != 0)
    throw Error(ErrorKind::InvalidArgument, "spectral Lanczos: eigensolver failed");
  MatrixXc Ot = V.adjoint() * O * V;
  return {E, std::move(V), std::move(Ot)};
}

// The measure |O_ab|^2 at frequency E_a - E_b is symmetric under w -> -w for
// Hermitian O, so Lanczos vectors alternate between even and odd functions
// of w. Vectors are stored folded onto w >= 0: slot 0 is the zero-frequency
// atom, slot p > 0 holds sqrt(2) times the value at +w_p.
LanczosResult spectral_lanczos(const EigenFrame& f, double h_scale, const LanczosOptions& opts) {
  const auto D = static_cast<std::size_t>(f.E.size());
  const double inv_D = 1.0 / static_cast<double>(D);
  const double e_scale = std::max(f.E.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double merge = opts.merge_tol * e_scale;
  const double drop = 1e-24 * f.Ot.cwiseAbs2().maxCoeff() * inv_D;

  // Pairs a >= b (E ascending, so w = E_a - E_b >= 0).
  struct Pair {
    double w;
    Eigen::Index a, b;
    double weight;  // |u_ab|^2 + |u_ba|^2, or |u_aa|^2 on the diagonal
  };
  std::vector<Pair> pairs;
  for (Eigen::Index b = 0; b < f.Ot.cols(); ++b) {
    for (Eigen::Index a = b; a < f.Ot.rows(); ++a) {
      const double wt = (a == b ? std::norm(f.Ot(a, a)) : std::norm(f.Ot(a, b)) + std::norm(f.Ot(b, a))) * inv_D;
      if (wt > drop) pairs.push_back({f.E(a) - f.E(b), a, b, wt});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.w < y.w; });

  // Slot 0 collects |w| <= merge; later slots are clusters of width merge.
  std::vector<double> x{0.0}, weight{0.0};
  std::vector<std::size_t> count{0};
  std::vector<std::size_t> slot_of(pairs.size());
  double first = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].w <= merge) {
      weight[0] += pairs[i].weight;
      slot_of[i] = 0;
      continue;
    }
    if (x.size() == 1 || pairs[i].w - first > merge) {
      first = pairs[i].w;
      x.push_back(0.0);
      weight.push_back(0.0);
      count.push_back(0);
    }
    x.back() += pairs[i].w;
    weight.back() += pairs[i].weight;  // both signs; each side holds half
    ++count.back();
    slot_of[i] = x.size() - 1;
  }
  const std::size_t S = x.size();
  for (std::size_t k = 1; k < S; ++k) x[k] /= static_cast<double>(count[k]);
  const bool has_zero = weight[0] > 0.0;
  const std::size_t atoms = 2 * (S - 1) + (has_zero ? 1 : 0);

  const std::size_t K_max = std::min(atoms, step_limit(D, opts));
  require_memory((K_max + 2) * S * sizeof(double), "spectral Lanczos store");

  std::vector<double> store[2];  // even and odd vectors
  store[0].reserve(((K_max + 1) / 2) * S);
  store[1].reserve((K_max / 2) * S);
  auto vec = [&](std::size_t n) { return store[n % 2].data() + (n / 2) * S; };

  // Folded entries already carry the sqrt(2), so squares sum to the weights.
  std::vector<double> A(S);
  {
    double nrm = 0.0;
    for (double w : weight) nrm += w;
    nrm = std::sqrt(nrm);
    for (std::size_t k = 0; k < S; ++k) A[k] = std::sqrt(weight[k]) / nrm;
    store[0].insert(store[0].end(), A.begin(), A.end());
  }

  LanczosResult res;
  res.backend = LanczosBackend::Spectral;
  double scale = h_scale;
  double b_max = 0.0;
  Termination why{};
  bool stopped = false;
  std::size_t K = 1;
  while (K < K_max) {
    const double* cur = vec(K - 1);
    for (std::size_t k = 0; k < S; ++k) A[k] = x[k] * cur[k];
    if (K >= 2) {
      const double* prev = vec(K - 2);
      const double bp = res.b.back();
      for (std::size_t k = 0; k < S; ++k) A[k] -= bp * prev[k];
    }
    if (K % 2 == 1) A[0] = 0.0;  // odd functions vanish at w = 0
    const auto& same = store[K % 2];
    kernels::parallel::reorthogonalize(same, same.size() / S, A);
    double b2 = 0.0;
    for (double v : A) b2 += v * v;
    const double b = std::sqrt(b2);
    if (b_max > 0.0) scale = b_max;
    if (stops(b, scale, opts, why)) {
      stopped = true;
      break;
    }
    b_max = std::max(b_max, b);
    res.b.push_back(b);
    for (double& v : A) v /= b;
    store[K % 2].insert(store[K % 2].end(), A.begin(), A.end());
    ++K;
  }
  res.K = K;
  if (stopped)
    res.termination = why;
  else if (K == atoms)
    res.termination = Termination::ExactBreakdown;  // every frequency atom used
  else
    res.termination = limit_reason(K, D, opts);

  if (opts.store_basis) {
    // (O_n)_ab = sqrt(D) q_n(w_ab) u_ab / sqrt(atom weight), u = O~ / sqrt(D).
    res.basis.reserve(K);
    const auto d = static_cast<Eigen::Index>(D);
    for (std::size_t n = 0; n < K; ++n) {
      const double* q = vec(n);
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      MatrixXc Oe = MatrixXc::Zero(d, d);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [w, a, b, wt] = pairs[i];
        (void)w;
        (void)wt;
        const std::size_t k = slot_of[i];
        if (k == 0) {
          const double c = q[0] / std::sqrt(weight[0]);
          Oe(a, b) = c * f.Ot(a, b);
          Oe(b, a) = c * f.Ot(b, a);
        } else {
          // each side has weight[k] / 2 and value q[k] / sqrt(2)
          const double c = q[k] / std::sqrt(weight[k]);
          Oe(a, b) = c * f.Ot(a, b);
          Oe(b, a) = sign * c * f.Ot(b, a);
        }
      }
      res.basis.emplace_back(f.V * Oe * f.V.adjoint());
    }
  }
  return res;
}

void check_square(Eigen::Index r, Eigen::Index c, const char* what) {
  if (r != c) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " is not square");
}

}  // namespace

OperatorVector::OperatorVector(MatrixXc m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw Error(ErrorKind::DimensionMismatch, "operator must be square");
  norm_ = m_.rows() ? std::sqrt(std::max(0.0, inner_real(m_, m_))) : 0.0;
}

OperatorVector liouvillian_apply(const MatrixXc& H, const OperatorVector& O) {
  if (H.rows() != static_cast<Eigen::Index>(O.dim()) || H.cols() != H.rows())
    throw Error(ErrorKind::DimensionMismatch, "liouvillian_apply: shapes differ");
  return OperatorVector(H * O.matrix() - O.matrix() * H);
}

Complex frobenius_inner(const OperatorVector& a, const OperatorVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "frobenius_inner: shapes differ");
  return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum() / static_cast<double>(a.dim());
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::ToleranceHit: return "ToleranceHit";
    case Termination::MaxIterations: return "MaxIterations";
    case Termination::ExactBreakdown: return "ExactBreakdown";
  }
  return "unknown";
}

std::string_view to_string(LanczosBackend b) {
  switch (b) {
    case LanczosBackend::Auto: return "auto";
    case LanczosBackend::Reference: return "reference";
    case LanczosBackend::Packed: return "packed";
    case LanczosBackend::Spectral: return "spectral";
  }
  return "unknown";
}

LanczosBackend lanczos_backend_from_string(std::string_view name) {
  for (auto b : {LanczosBackend::Auto, LanczosBackend::Reference, LanczosBackend::Packed, LanczosBackend::Spectral})
    if (name == to_string(b)) return b;
  throw Error(ErrorKind::InvalidArgument, "unknown Lanczos backend '" + std::string(name) + "'");
}

std::size_t packed_lanczos_memory(std::size_t D, std::size_t max_steps) {
  const std::size_t N = D * (D + 1) / 2;
  // stored vectors + work vector + two dense buffers
  return ((max_steps + 1) + 1) * N * sizeof(double) + 2 * D * D * sizeof(double);
}

namespace {

bool use_spectral(std::size_t D, const LanczosOptions& opts) {
  if (opts.backend == LanczosBackend::Spectral) return true;
  return opts.backend == LanczosBackend::Auto && !opts.max_steps && D <= kSpectralAutoMaxDim;
}

}  // namespace

LanczosResult lanczos(const MatrixXc& H, const OperatorVector& seed, const LanczosOptions& opts) {
  check_options(opts);
  check_square(H.rows(), H.cols(), "Hamiltonian");
  if (static_cast<std::size_t>(H.rows()) != seed.dim())
    throw Error(ErrorKind::DimensionMismatch, "lanczos: Hamiltonian and seed dimensions differ");
  if (!(seed.norm() > 0.0)) throw Error(ErrorKind::InvalidArgument, "lanczos: seed operator is zero");
  const bool real = H.imag().isZero(0.0) && seed.matrix().imag().isZero(0.0);
  if (opts.backend != LanczosBackend::Reference && real)
    return lanczos(MatrixXr(H.real()), MatrixXr(seed.matrix().real()), opts);
  if (opts.backend == LanczosBackend::Packed)
    throw Error(ErrorKind::InvalidArgument, "lanczos: packed backend needs real H and seed");
  if (use_spectral(seed.dim(), opts)) {
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, inf_norm(H)))
      throw Error(ErrorKind::NonHermitian, "lanczos: spectral backend needs Hermitian H");
    return spectral_lanczos(eigen_frame(H, seed.matrix()), 2.0 * inf_norm(H), opts);
  }
  return reference_lanczos(H, seed, opts);
}

LanczosResult lanczos(const MatrixXr& H, const MatrixXr& seed, const LanczosOptions& opts) {
  check_options(opts);
  check_square(H.rows(), H.cols(), "Hamiltonian");
  check_square(seed.rows(), seed.cols(), "seed");
  if (H.rows() != seed.rows()) throw Error(ErrorKind::DimensionMismatch, "lanczos: Hamiltonian and seed dimensions differ");
  if (!(seed.norm() > 0.0)) throw Error(ErrorKind::InvalidArgument, "lanczos: seed operator is zero");

  const bool h_sym = (H - H.transpose()).norm() <= 1e-12 * std::max(1.0, H.norm());
  if (use_spectral(static_cast<std::size_t>(H.rows()), opts)) {
    if (!h_sym) throw Error(ErrorKind::NonHermitian, "lanczos: spectral backend needs symmetric H");
    return spectral_lanczos(eigen_frame(H, seed), 2.0 * inf_norm(H), opts);
  }
  const SeedParity sp = classify(seed);
  const bool packable = h_sym && sp != SeedParity::Neither;
  if (opts.backend == LanczosBackend::Packed && !packable)
    throw Error(ErrorKind::InvalidArgument, "lanczos: packed backend needs symmetric H and an (anti)symmetric seed");
  if (opts.backend == LanczosBackend::Reference || !packable)
    return reference_lanczos(H.cast<Complex>(), OperatorVector(seed.cast<Complex>()), opts);
  return packed_lanczos(H, seed,
                        sp == SeedParity::Symmetric ? kernels::Parity::Symmetric : kernels::Parity::Antisymmetric,
                        opts);
}

void write_csv(std::ostream& os, const LanczosResult& r) {
  os << "n,b_n\n";
  for (std::size_t i = 0; i < r.b.size(); ++i) os << i + 1 << ',' << format_double(r.b[i]) << '\n';
}

// ---------------------------------------------------------------------------

MatrixXc evolve_wavefunction(std::span<const double> b, std::span<const double> times) {
  for (double x : b)
    if (!(x > 0.0) || !std::isfinite(x))
      throw Error(ErrorKind::InvalidArgument, "evolve_wavefunction: Lanczos coefficients must be positive and finite");
  for (double t : times)
    if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "evolve_wavefunction: non-finite time");
  const auto K = static_cast<Eigen::Index>(b.size() + 1);
  require_memory(static_cast<std::size_t>(K) * static_cast<std::size_t>(K) * sizeof(double) * 2 +
                     static_cast<std::size_t>(K) * times.size() * sizeof(Complex),
                 "wavefunction evolution");

  VectorXr d = VectorXr::Zero(K);
  VectorXr e(std::max<Eigen::Index>(K - 1, 1));
  for (Eigen::Index i = 0; i + 1 < K; ++i) e(i) = b[static_cast<std::size_t>(i)];
  MatrixXr V(K, K);
  const lapack_int info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', static_cast<lapack_int>(K), d.data(), e.data(),
                                         V.data(), static_cast<lapack_int>(K));
  if (info != 0) throw Error(ErrorKind::InvalidArgument, "evolve_wavefunction: tridiagonal eigensolver failed");

  MatrixXc phi = kernels::parallel::spectral_propagate(V, d, times);
  // i^{-n} phase
  static const Complex kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (Eigen::Index n = 0; n < K; ++n) phi.row(n) *= kPhase[n % 4];
  // exact amplitudes are real; what is left in the imaginary part is eigenvalue round-off times t
  return phi.real().cast<Complex>();
}

std::vector<double> complexity(const MatrixXc& phi) {
  std::vector<double> c(static_cast<std::size_t>(phi.cols()), 0.0);
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index n = 1; n < phi.rows(); ++n) s += static_cast<double>(n) * std::norm(phi(n, j));
    c[static_cast<std::size_t>(j)] = s;
  }
  return c;
}

ComplexityCurve complexity_curve(std::span<const double> b, std::span<const double> times, bool keep_phi) {
  ComplexityCurve curve;
  curve.times.assign(times.begin(), times.end());
  MatrixXc phi = evolve_wavefunction(b, times);
  curve.c_k = complexity(phi);
  if (keep_phi) curve.phi = std::move(phi);
  return curve;
}

void write_csv(std::ostream& os, const ComplexityCurve& curve, bool wide) {
  if (wide && curve.phi.cols() != static_cast<Eigen::Index>(curve.times.size()))
    throw Error(ErrorKind::InvalidArgument, "write_csv: wide output needs the stored amplitudes");
  os << "t,c_k";
  if (wide)
    for (Eigen::Index n = 0; n < curve.phi.rows(); ++n) os << ",phi_" << n << "_re,phi_" << n << "_im";
  os << '\n';
  for (std::size_t j = 0; j < curve.times.size(); ++j) {
    os << format_double(curve.times[j]) << ',' << format_double(curve.c_k[j]);
    if (wide) {
      for (Eigen::Index n = 0; n < curve.phi.rows(); ++n) {
        const Complex z = curve.phi(n, static_cast<Eigen::Index>(j));
        os << ',' << format_double(z.real()) << ',' << format_double(z.imag());
      }
    }
    os << '\n';
  }
}

double moment_from_b(std::span<const double> b, int order, bool chain_closed) {
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "moment_from_b: negative order");
  if (order % 2 == 1) return 0.0;
  const std::size_t half = static_cast<std::size_t>(order / 2);
  if (!chain_closed && half > b.size())
    throw Error(ErrorKind::InsufficientData, "moment_from_b: need b_1 .. b_" + std::to_string(half));
  // v = T^half e_0 on a chain of length half+1 (or K when closed); mu = |v|^2.
  const std::size_t len = chain_closed ? std::min(half, b.size()) + 1 : half + 1;
  std::vector<double> v(len, 0.0), w(len);
  v[0] = 1.0;
  for (std::size_t step = 0; step < half; ++step) {
    for (std::size_t n = 0; n < len; ++n) {
      double s = 0.0;
      if (n > 0) s += b[n - 1] * v[n - 1];
      if (n + 1 < len) s += b[n] * v[n + 1];
      w[n] = s;
    }
    v.swap(w);
  }
  double mu = 0.0;
  for (double x : v) mu += x * x;
  return mu;
}

}  // namespace krylovlab
