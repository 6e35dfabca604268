#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "krylovlab/chaos.hpp"
#include "krylovlab/krylov.hpp"
#include "krylovlab/pipeline.hpp"
#include "krylovlab/time_grid.hpp"

namespace krylovlab {

// b_n = delta * n / ln(n) + c.
struct GrowthFit {
  double delta = 0.0;
  double c = 0.0;
  int n_min = 2;
  int n_max = 25;
  double residual = 0.0;      // RMS deviation
  double delta_stderr = 0.0;  // zero for an exact fit or two-parameter-sized data
};

// `b` holds b_1, b_2, ... (b[0] is b_1). Fits n in [n_min, n_max]. Throws
// InvalidArgument for n_min < 2 and InsufficientData when fewer than three
// points are available.
GrowthFit fit_growth_rate(std::span<const double> b, int n_min = 2, int n_max = 25);

struct Saturation {
  double value = 0.0;
  double stddev = 0.0;
  std::size_t points = 0;
  bool plateaued = false;  // stddev <= plateau_rel_std * value
};

// Mean C_K over the trailing `window_fraction` of the log-time span of the
// grid (the final decade of a 1e-2..1e7 grid for the default 0.1).
Saturation saturation_value(const ComplexityCurve& curve, double window_fraction = 0.1,
                            double plateau_rel_std = 0.1);

enum class SweepMetric { GrowthRate, Saturation, MeanRTilde };

std::string_view to_string(SweepMetric m);
SweepMetric sweep_metric_from_string(std::string_view name);

struct SweepPlan {
  ModelSpec base;
  SectorSpec sector;
  SweepMetric metric = SweepMetric::GrowthRate;
  SeedSpec seed;
  LanczosOptions lanczos;
  TimeGrid grid;
  int fit_n_min = 2;
  int fit_n_max = 25;
  double window_fraction = 0.1;
  std::optional<DisorderSpec> disorder;  // MeanRTilde only
};

struct SweepRow {
  double alpha = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

// One row per alpha, in input order. Points run one after another (the
// kernels inside are parallel); a failing point records its error and the
// rest still run.
std::vector<SweepRow> sweep_alpha(const SweepPlan& plan, std::span<const double> alphas);

// Single-point evaluation used by the sweep.
SweepRow evaluate_sweep_point(const SweepPlan& plan, double alpha);

// Columns `alpha,metric,value,stderr`.
void write_csv(std::ostream& os, std::span<const SweepRow> rows, SweepMetric metric);

}  // namespace krylovlab
