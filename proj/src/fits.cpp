#include "krylovlab/fits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "krylovlab/csv.hpp"
#include "krylovlab/error.hpp"

namespace krylovlab {

GrowthFit fit_growth_rate(std::span<const double> b, int n_min, int n_max) {
  if (n_min < 2) throw Error(ErrorKind::InvalidArgument, "growth fit: n_min must be at least 2 (ln 1 = 0)");
  if (n_max < n_min) throw Error(ErrorKind::InvalidArgument, "growth fit: n_max below n_min");
  const int last = std::min<int>(n_max, static_cast<int>(b.size()));
  if (last - n_min + 1 < 3) throw Error(ErrorKind::InsufficientData, "growth fit: fewer than three coefficients in range");

  std::vector<double> x, y;
  for (int n = n_min; n <= last; ++n) {
    x.push_back(n / std::log(static_cast<double>(n)));
    y.push_back(b[static_cast<std::size_t>(n - 1)]);
  }
  const double m = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  GrowthFit f;
  f.n_min = n_min;
  f.n_max = last;
  f.delta = sxy / sxx;
  f.c = my - f.delta * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.delta * x[i] + f.c);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / m);
  f.delta_stderr = std::sqrt(ss / (m - 2.0) / sxx);
  return f;
}

Saturation saturation_value(const ComplexityCurve& curve, double window_fraction, double plateau_rel_std) {
  if (curve.times.size() < 2 || curve.c_k.size() != curve.times.size())
    throw Error(ErrorKind::InsufficientData, "saturation: curve too short");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "saturation: window fraction must lie in (0, 1]");
  if (!(curve.times.front() > 0.0)) throw Error(ErrorKind::InvalidArgument, "saturation: needs positive times");
  const double lo = std::log(curve.times.front()), hi = std::log(curve.times.back());
  const double t_cut = std::exp(hi - window_fraction * (hi - lo));
  std::vector<double> v;
  for (std::size_t j = 0; j < curve.times.size(); ++j)
    if (curve.times[j] >= t_cut) v.push_back(curve.c_k[j]);
  if (v.empty()) throw Error(ErrorKind::InsufficientData, "saturation: empty window");
  Saturation s;
  s.points = v.size();
  s.value = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - s.value) * (x - s.value);
  s.stddev = std::sqrt(var / static_cast<double>(v.size()));
  s.plateaued = s.stddev <= plateau_rel_std * s.value;
  return s;
}

std::string_view to_string(SweepMetric m) {
  switch (m) {
    case SweepMetric::GrowthRate: return "growth_rate";
    case SweepMetric::Saturation: return "saturation";
    case SweepMetric::MeanRTilde: return "mean_r_tilde";
  }
  return "unknown";
}

SweepMetric sweep_metric_from_string(std::string_view name) {
  if (name == "growth_rate") return SweepMetric::GrowthRate;
  if (name == "saturation") return SweepMetric::Saturation;
  if (name == "mean_r_tilde") return SweepMetric::MeanRTilde;
  throw Error(ErrorKind::InvalidArgument, "unknown sweep metric '" + std::string(name) + "'");
}

SweepRow evaluate_sweep_point(const SweepPlan& plan, double alpha) {
  if (!uses_power_law(plan.base.family))
    throw Error(ErrorKind::InvalidArgument, "alpha sweep needs a power-law model family");
  ModelSpec model = plan.base;
  model.alpha = alpha;
  SweepRow row;
  row.alpha = alpha;
  switch (plan.metric) {
    case SweepMetric::GrowthRate: {
      const auto run = sector_lanczos(model, plan.sector, plan.seed, plan.lanczos);
      const GrowthFit f = fit_growth_rate(run.lanczos.b, plan.fit_n_min, plan.fit_n_max);
      row.value = f.delta;
      row.std_error = f.delta_stderr;
      break;
    }
    case SweepMetric::Saturation: {
      const auto run = sector_lanczos(model, plan.sector, plan.seed, plan.lanczos);
      const auto curve = complexity_curve(run.lanczos.b, plan.grid.values());
      const Saturation s = saturation_value(curve, plan.window_fraction);
      row.value = s.value;
      row.std_error = s.stddev;
      break;
    }
    case SweepMetric::MeanRTilde: {
      std::vector<RStats> stats;
      if (plan.disorder) {
        for (const auto& s : disorder_ensemble(model, *plan.disorder, plan.sector)) stats.push_back(r_statistics(s));
      } else {
        stats.push_back(r_statistics(sector_spectrum(model, plan.sector)));
      }
      const RStats p = pool(stats);
      row.value = p.mean_r_tilde;
      double var = 0.0;
      for (double x : p.r_tilde_values) var += (x - p.mean_r_tilde) * (x - p.mean_r_tilde);
      const double n = static_cast<double>(p.r_tilde_values.size());
      row.std_error = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
      break;
    }
  }
  return row;
}

std::vector<SweepRow> sweep_alpha(const SweepPlan& plan, std::span<const double> alphas) {
  if (alphas.empty()) throw Error(ErrorKind::InvalidArgument, "alpha sweep: no alpha values");
  std::vector<SweepRow> rows;
  for (double a : alphas) {
    try {
      rows.push_back(evaluate_sweep_point(plan, a));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ResourceExhausted) throw;
      SweepRow row;
      row.alpha = a;
      row.value = std::nan("");
      row.std_error = std::nan("");
      row.error = std::string(to_string(e.kind())) + ": " + e.what();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_csv(std::ostream& os, std::span<const SweepRow> rows, SweepMetric metric) {
  os << "alpha,metric,value,stderr\n";
  for (const auto& r : rows)
    os << format_double(r.alpha) << ',' << to_string(metric) << ',' << format_double(r.value) << ','
       << format_double(r.std_error) << '\n';
}

}  // namespace krylovlab
