#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "krylovlab/spin_models.hpp"
#include "krylovlab/symmetry.hpp"
#include "krylovlab/types.hpp"

namespace krylovlab {

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  SectorSpec sector;
  std::optional<ModelSpec> model;
};

// Full eigenvalue set of a sector Hamiltonian. Throws NonHermitian when
// max|H - H^dagger| exceeds 1e-10.
Spectrum diagonalize(const MatrixXc& H);
Spectrum diagonalize(const MatrixXr& H);

struct RStats {
  std::vector<double> r_values;
  std::vector<double> r_tilde_values;
  double mean_r_tilde = 0.0;
  std::size_t dropped_spacings = 0;
};

// Spacings at or below degeneracy_tol * max(1, max|e|) count as degenerate:
// they are dropped along with every ratio that involves them. Throws
// InsufficientData for fewer than three levels or no surviving ratio.
RStats r_statistics(const Spectrum& spectrum, double degeneracy_tol = 1e-12);

// Concatenates per-sample statistics; the pooled mean weights every ratio
// equally.
RStats pool(std::span<const RStats> samples);

enum class LevelEnsemble { Poisson, GOE, GUE, GSE };

std::string_view to_string(LevelEnsemble e);

// Z_beta of the Wigner-like surmise for beta = 1, 2, 4.
double wigner_normalization(int dyson_beta);
int dyson_index(LevelEnsemble e);

// P(r) on r > 0; throws InvalidArgument for r <= 0.
double reference_density(LevelEnsemble e, double r);
// P(r~) = 2 P(r~) on (0, 1], zero above 1.
double reference_density_tilde(LevelEnsemble e, double r_tilde);
// Closed-form <r~> of each ensemble.
double reference_mean_r_tilde(LevelEnsemble e);

struct Histogram {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<double> density;
};

// Uniform bins on (0, 1], normalized so sum(density * width) = 1.
Histogram histogram_r_tilde(std::span<const double> r_tilde, std::size_t bins = 25);

enum class DisorderTarget { LongitudinalField, NonLocalCoupling };

std::string_view to_string(DisorderTarget t);
DisorderTarget disorder_target_from_string(std::string_view name);

struct DisorderSpec {
  std::size_t n_samples = 1;
  double sigma = 0.0;
  double mu = 0.0;
  std::uint64_t master_seed = 0;
  DisorderTarget target = DisorderTarget::LongitudinalField;

  void validate() const;
  bool operator==(const DisorderSpec&) const = default;
};

// Model of sample k: the target coupling shifted by eps_k ~ Normal(mu, sigma)
// drawn from the child stream (master_seed, k).
ModelSpec perturbed_model(const ModelSpec& base, const DisorderSpec& disorder, std::size_t k);
double disorder_shift(const DisorderSpec& disorder, std::size_t k);

// One spectrum per sample, in sample order; samples run in parallel. Throws
// InvalidArgument when the target coupling is absent from the family and
// SymmetryViolation when a perturbed Hamiltonian leaves the sector.
std::vector<Spectrum> disorder_ensemble(const ModelSpec& spec, const DisorderSpec& disorder,
                                        const SectorSpec& sector);

// Build, project and diagonalize a single model in a sector.
Spectrum sector_spectrum(const ModelSpec& spec, const SectorSpec& sector);

enum class SffKind { Annealed, Quenched };

struct SFFCurve {
  std::vector<double> times;
  std::vector<double> g_values;
  double beta = 0.0;
  double plateau_prediction = 0.0;  // Z(2 beta) / Z(beta)^2 of the reference
  bool plateau_reliable = true;     // false when the reference is degenerate
  std::size_t n_samples = 0;
  SffKind kind = SffKind::Annealed;
};

// Throws InvalidArgument for an empty ensemble, beta < 0, non-finite
// eigenvalues or samples of different length.
SFFCurve sff(std::span<const Spectrum> ensemble, const Spectrum& reference, double beta,
             std::span<const double> times, SffKind kind = SffKind::Annealed);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square deviation
  std::size_t points = 0;
};

// Least-squares g = slope * t + intercept over t in [t_lo, t_hi]. Throws
// InsufficientData for fewer than ten points in the window.
LinearFit ramp_fit(const SFFCurve& curve, double t_lo, double t_hi);

// Time average of g over the trailing `decades` of the time grid.
double late_time_average(const SFFCurve& curve, double decades = 2.0);

// Window from the dip (global minimum of g) to the first time g reaches
// `fraction` of the plateau prediction.
std::optional<std::pair<double, double>> ramp_window(const SFFCurve& curve, double fraction = 0.8);

void write_csv(std::ostream& os, const Spectrum& s);     // index,energy
void write_r_tilde_csv(std::ostream& os, const RStats& r);  // r_tilde
void write_csv(std::ostream& os, const Histogram& h);    // bin_lo,bin_hi,density
void write_csv(std::ostream& os, const SFFCurve& c);     // t,g

}  // namespace krylovlab
