#include "krylovlab/chaos.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "krylovlab/csv.hpp"
#include "krylovlab/error.hpp"
#include "krylovlab/kernels.hpp"
#include "krylovlab/resources.hpp"
#include "krylovlab/rng.hpp"

namespace krylovlab {

namespace {

constexpr double kHermiticityTol = 1e-10;
// Sectors below this size are diagonalized one sample per thread; larger ones
// use the threaded LAPACK on one sample at a time.
constexpr Eigen::Index kSampleParallelDim = 1024;

Spectrum finish(std::vector<double> ev) {
  std::sort(ev.begin(), ev.end());
  Spectrum s;
  s.eigenvalues = std::move(ev);
  return s;
}

bool has_degeneracy(const std::vector<double>& e, double tol) {
  if (e.empty()) return false;
  const double scale = tol * std::max(1.0, std::max(std::abs(e.front()), std::abs(e.back())));
  for (std::size_t i = 1; i < e.size(); ++i)
    if (e[i] - e[i - 1] <= scale) return true;
  return false;
}

}  // namespace

Spectrum diagonalize(const MatrixXr& H) {
  if (H.rows() != H.cols()) throw Error(ErrorKind::DimensionMismatch, "diagonalize: matrix not square");
  if (H.rows() == 0) throw Error(ErrorKind::InvalidArgument, "diagonalize: empty matrix");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > kHermiticityTol)
    throw Error(ErrorKind::NonHermitian, "diagonalize: matrix is not symmetric");
  MatrixXr A = H;
  std::vector<double> w(static_cast<std::size_t>(H.rows()));
  const lapack_int n = static_cast<lapack_int>(H.rows());
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, A.data(), n, w.data()) != 0)
    throw Error(ErrorKind::InvalidArgument, "diagonalize: eigensolver failed");
  return finish(std::move(w));
}

Spectrum diagonalize(const MatrixXc& H) {
  if (H.rows() != H.cols()) throw Error(ErrorKind::DimensionMismatch, "diagonalize: matrix not square");
  if (H.rows() == 0) throw Error(ErrorKind::InvalidArgument, "diagonalize: empty matrix");
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTol)
    throw Error(ErrorKind::NonHermitian, "diagonalize: matrix is not Hermitian");
  if (H.imag().isZero(0.0)) return diagonalize(MatrixXr(H.real()));
  MatrixXc A = H;
  std::vector<double> w(static_cast<std::size_t>(H.rows()));
  const lapack_int n = static_cast<lapack_int>(H.rows());
  if (LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, reinterpret_cast<lapack_complex_double*>(A.data()), n,
                     w.data()) != 0)
    throw Error(ErrorKind::InvalidArgument, "diagonalize: eigensolver failed");
  return finish(std::move(w));
}

// ---------------------------------------------------------------------------

RStats r_statistics(const Spectrum& spectrum, double degeneracy_tol) {
  const auto& e = spectrum.eigenvalues;
  if (e.size() < 3) throw Error(ErrorKind::InsufficientData, "r_statistics: need at least three levels");
  if (!std::is_sorted(e.begin(), e.end())) throw Error(ErrorKind::InvalidArgument, "r_statistics: eigenvalues not sorted");
  const double floor = degeneracy_tol * std::max(1.0, std::max(std::abs(e.front()), std::abs(e.back())));

  RStats out;
  std::vector<double> s(e.size() - 1);
  for (std::size_t i = 0; i + 1 < e.size(); ++i) s[i] = e[i + 1] - e[i];
  for (double x : s)
    if (x <= floor) ++out.dropped_spacings;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] <= floor || s[i - 1] <= floor) continue;
    const double r = s[i] / s[i - 1];
    out.r_values.push_back(r);
    out.r_tilde_values.push_back(std::min(r, 1.0 / r));
  }
  if (out.r_tilde_values.empty()) throw Error(ErrorKind::InsufficientData, "r_statistics: every ratio involves a degenerate spacing");
  out.mean_r_tilde = std::accumulate(out.r_tilde_values.begin(), out.r_tilde_values.end(), 0.0) /
                     static_cast<double>(out.r_tilde_values.size());
  return out;
}

RStats pool(std::span<const RStats> samples) {
  RStats out;
  for (const auto& s : samples) {
    out.r_values.insert(out.r_values.end(), s.r_values.begin(), s.r_values.end());
    out.r_tilde_values.insert(out.r_tilde_values.end(), s.r_tilde_values.begin(), s.r_tilde_values.end());
    out.dropped_spacings += s.dropped_spacings;
  }
  if (out.r_tilde_values.empty()) throw Error(ErrorKind::InsufficientData, "pool: no ratios");
  out.mean_r_tilde = std::accumulate(out.r_tilde_values.begin(), out.r_tilde_values.end(), 0.0) /
                     static_cast<double>(out.r_tilde_values.size());
  return out;
}

std::string_view to_string(LevelEnsemble e) {
  switch (e) {
    case LevelEnsemble::Poisson: return "Poisson";
    case LevelEnsemble::GOE: return "GOE";
    case LevelEnsemble::GUE: return "GUE";
    case LevelEnsemble::GSE: return "GSE";
  }
  return "unknown";
}

double wigner_normalization(int dyson_beta) {
  using std::numbers::pi, std::numbers::sqrt3;
  switch (dyson_beta) {
    case 1: return 8.0 / 27.0;
    case 2: return 4.0 * pi / (81.0 * sqrt3);
    case 4: return 4.0 * pi / (729.0 * sqrt3);
    default: throw Error(ErrorKind::InvalidArgument, "wigner_normalization: Dyson index must be 1, 2 or 4");
  }
}

int dyson_index(LevelEnsemble e) {
  switch (e) {
    case LevelEnsemble::Poisson: return 0;
    case LevelEnsemble::GOE: return 1;
    case LevelEnsemble::GUE: return 2;
    case LevelEnsemble::GSE: return 4;
  }
  return 0;
}

double reference_density(LevelEnsemble e, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::InvalidArgument, "reference_density: r must be positive");
  if (e == LevelEnsemble::Poisson) return 1.0 / ((1.0 + r) * (1.0 + r));
  const int b = dyson_index(e);
  const double db = b;
  return std::pow(r + r * r, db) / (wigner_normalization(b) * std::pow(1.0 + r + r * r, 1.0 + 1.5 * db));
}

double reference_density_tilde(LevelEnsemble e, double r_tilde) {
  if (!(r_tilde > 0.0)) throw Error(ErrorKind::InvalidArgument, "reference_density_tilde: r~ must be positive");
  if (r_tilde > 1.0) return 0.0;
  return 2.0 * reference_density(e, r_tilde);
}

double reference_mean_r_tilde(LevelEnsemble e) {
  using std::numbers::pi, std::numbers::sqrt3, std::numbers::ln2;
  switch (e) {
    case LevelEnsemble::Poisson: return 2.0 * ln2 - 1.0;
    case LevelEnsemble::GOE: return 4.0 - 2.0 * sqrt3;
    case LevelEnsemble::GUE: return 2.0 * sqrt3 / pi - 0.5;
    case LevelEnsemble::GSE: return 32.0 / 15.0 * sqrt3 / pi - 0.5;
  }
  return 0.0;
}

Histogram histogram_r_tilde(std::span<const double> r_tilde, std::size_t bins) {
  if (bins == 0) throw Error(ErrorKind::InvalidArgument, "histogram: need at least one bin");
  if (r_tilde.empty()) throw Error(ErrorKind::InsufficientData, "histogram: no values");
  Histogram h;
  const double width = 1.0 / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double x : r_tilde) {
    if (!(x > 0.0) || x > 1.0) throw Error(ErrorKind::InvalidArgument, "histogram: r~ outside (0, 1]");
    counts[std::min(bins - 1, static_cast<std::size_t>(x / width))]++;
  }
  const double n = static_cast<double>(r_tilde.size());
  for (std::size_t i = 0; i < bins; ++i) {
    h.bin_lo.push_back(static_cast<double>(i) * width);
    h.bin_hi.push_back(static_cast<double>(i + 1) * width);
    h.density.push_back(static_cast<double>(counts[i]) / (n * width));
  }
  return h;
}

// ---------------------------------------------------------------------------

std::string_view to_string(DisorderTarget t) {
  return t == DisorderTarget::LongitudinalField ? "longitudinal_field" : "non_local_coupling";
}

DisorderTarget disorder_target_from_string(std::string_view name) {
  if (name == "longitudinal_field") return DisorderTarget::LongitudinalField;
  if (name == "non_local_coupling") return DisorderTarget::NonLocalCoupling;
  throw Error(ErrorKind::InvalidArgument, "unknown disorder target '" + std::string(name) + "'");
}

void DisorderSpec::validate() const {
  if (n_samples == 0) throw Error(ErrorKind::InvalidArgument, "disorder: n_samples must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::InvalidArgument, "disorder: sigma must be finite and non-negative");
  if (!std::isfinite(mu)) throw Error(ErrorKind::InvalidArgument, "disorder: mu must be finite");
}

double disorder_shift(const DisorderSpec& disorder, std::size_t k) {
  CounterRng rng(CounterRng::child_key(disorder.master_seed, k));
  return rng.normal(disorder.mu, disorder.sigma);
}

ModelSpec perturbed_model(const ModelSpec& base, const DisorderSpec& disorder, std::size_t k) {
  ModelSpec m = base;
  const double eps = disorder_shift(disorder, k);
  if (disorder.target == DisorderTarget::LongitudinalField) {
    if (!uses_transverse_fields(base.family))
      throw Error(ErrorKind::InvalidArgument, "disorder: model family has no longitudinal field");
    m.h += eps;
  } else {
    if (!uses_gamma(base.family))
      throw Error(ErrorKind::InvalidArgument, "disorder: model family has no non-local coupling");
    m.gamma += eps;
  }
  return m;
}

namespace {

Spectrum spectrum_in(const ModelSpec& spec, const SectorBasis& basis) {
  const SparseOperator H = build_hamiltonian(spec);
  Spectrum s = H.is_real() ? diagonalize(project_real(H, basis)) : diagonalize(project(H, basis));
  s.sector = basis.spec();
  s.model = spec;
  return s;
}

}  // namespace

Spectrum sector_spectrum(const ModelSpec& spec, const SectorSpec& sector) {
  spec.validate();
  return spectrum_in(spec, build_sector_basis(sector, spec.L));
}

std::vector<Spectrum> disorder_ensemble(const ModelSpec& spec, const DisorderSpec& disorder,
                                        const SectorSpec& sector) {
  spec.validate();
  disorder.validate();
  (void)perturbed_model(spec, disorder, 0);  // target check before any work
  const SectorBasis basis = build_sector_basis(sector, spec.L);
  const std::size_t D = basis.dim();
  require_memory(3 * D * D * sizeof(double), "sector diagonalization");

  std::vector<Spectrum> out(disorder.n_samples);
  const auto n = static_cast<std::ptrdiff_t>(disorder.n_samples);
  if (static_cast<Eigen::Index>(D) < kSampleParallelDim) {
    std::vector<std::string> errors(disorder.n_samples);
    std::vector<int> kinds(disorder.n_samples, -1);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      try {
        out[uk] = spectrum_in(perturbed_model(spec, disorder, uk), basis);
      } catch (const Error& e) {
        errors[uk] = e.what();
        kinds[uk] = static_cast<int>(e.kind());
      }
    }
    for (std::size_t k = 0; k < disorder.n_samples; ++k)
      if (kinds[k] >= 0) throw Error(static_cast<ErrorKind>(kinds[k]), errors[k]);
  } else {
    for (std::size_t k = 0; k < disorder.n_samples; ++k) out[k] = spectrum_in(perturbed_model(spec, disorder, k), basis);
  }
  return out;
}

// ---------------------------------------------------------------------------

SFFCurve sff(std::span<const Spectrum> ensemble, const Spectrum& reference, double beta,
             std::span<const double> times, SffKind kind) {
  if (ensemble.empty()) throw Error(ErrorKind::InvalidArgument, "sff: empty ensemble");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::InvalidArgument, "sff: beta must be non-negative");
  const std::size_t levels = ensemble.front().eigenvalues.size();
  if (levels == 0) throw Error(ErrorKind::InvalidArgument, "sff: empty spectrum");
  double e_min = reference.eigenvalues.empty() ? 0.0 : reference.eigenvalues.front();
  for (const auto& s : ensemble) {
    if (s.eigenvalues.size() != levels) throw Error(ErrorKind::InvalidArgument, "sff: samples differ in length");
    for (double x : s.eigenvalues)
      if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "sff: non-finite eigenvalue");
    e_min = std::min(e_min, s.eigenvalues.front());
  }
  for (double t : times)
    if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "sff: non-finite time");

  // Boltzmann weights with one shift for every sample, so annealed ratios are unchanged.
  std::vector<double> energies, weights;
  energies.reserve(levels * ensemble.size());
  weights.reserve(levels * ensemble.size());
  double z0_sum = 0.0;
  for (const auto& s : ensemble) {
    double z = 0.0;
    const std::size_t first = weights.size();
    for (double x : s.eigenvalues) {
      energies.push_back(x);
      weights.push_back(std::exp(-beta * (x - e_min)));
      z += weights.back();
    }
    if (kind == SffKind::Quenched)
      for (std::size_t i = first; i < weights.size(); ++i) weights[i] /= z;
    else
      z0_sum += z * z;
  }

  SFFCurve c;
  c.times.assign(times.begin(), times.end());
  c.beta = beta;
  c.n_samples = ensemble.size();
  c.kind = kind;
  c.g_values = kernels::parallel::sff_numerator(energies, weights, levels, times);
  const double denom = kind == SffKind::Quenched ? static_cast<double>(ensemble.size()) : z0_sum;
  for (double& g : c.g_values) g /= denom;

  const auto& ref = reference.eigenvalues;
  if (ref.empty()) throw Error(ErrorKind::InvalidArgument, "sff: empty reference spectrum");
  double z1 = 0.0, z2 = 0.0;
  for (double x : ref) {
    const double w = std::exp(-beta * (x - ref.front()));
    z1 += w;
    z2 += w * w;
  }
  c.plateau_prediction = z2 / (z1 * z1);
  c.plateau_reliable = !has_degeneracy(ref, 1e-12);
  return c;
}

LinearFit ramp_fit(const SFFCurve& curve, double t_lo, double t_hi) {
  std::vector<double> x, y;
  for (std::size_t j = 0; j < curve.times.size(); ++j) {
    if (curve.times[j] >= t_lo && curve.times[j] <= t_hi) {
      x.push_back(curve.times[j]);
      y.push_back(curve.g_values[j]);
    }
  }
  if (x.size() < 10) throw Error(ErrorKind::InsufficientData, "ramp_fit: fewer than ten points in the window");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::InsufficientData, "ramp_fit: degenerate window");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = x.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

double late_time_average(const SFFCurve& curve, double decades) {
  if (curve.times.empty()) throw Error(ErrorKind::InsufficientData, "late_time_average: empty curve");
  if (!(decades > 0.0)) throw Error(ErrorKind::InvalidArgument, "late_time_average: decades must be positive");
  const double t_cut = curve.times.back() / std::pow(10.0, decades);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < curve.times.size(); ++j) {
    if (curve.times[j] >= t_cut) {
      sum += curve.g_values[j];
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

std::optional<std::pair<double, double>> ramp_window(const SFFCurve& curve, double fraction) {
  if (curve.g_values.empty()) return std::nullopt;
  const auto dip = static_cast<std::size_t>(
      std::min_element(curve.g_values.begin(), curve.g_values.end()) - curve.g_values.begin());
  const double target = fraction * curve.plateau_prediction;
  for (std::size_t j = dip + 1; j < curve.g_values.size(); ++j)
    if (curve.g_values[j] >= target) return std::pair{curve.times[dip], curve.times[j]};
  return std::nullopt;
}

void write_csv(std::ostream& os, const Spectrum& s) {
  os << "index,energy\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) os << i << ',' << format_double(s.eigenvalues[i]) << '\n';
}

void write_r_tilde_csv(std::ostream& os, const RStats& r) {
  os << "r_tilde\n";
  for (double x : r.r_tilde_values) os << format_double(x) << '\n';
}

void write_csv(std::ostream& os, const Histogram& h) {
  os << "bin_lo,bin_hi,density\n";
  for (std::size_t i = 0; i < h.density.size(); ++i)
    os << format_double(h.bin_lo[i]) << ',' << format_double(h.bin_hi[i]) << ',' << format_double(h.density[i]) << '\n';
}

void write_csv(std::ostream& os, const SFFCurve& c) {
  os << "t,g\n";
  for (std::size_t j = 0; j < c.times.size(); ++j) os << format_double(c.times[j]) << ',' << format_double(c.g_values[j]) << '\n';
}

}  // namespace krylovlab
