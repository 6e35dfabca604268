#include "krylovlab/runner.hpp"

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include "krylovlab/chaos.hpp"
#include "krylovlab/fits.hpp"
#include "krylovlab/pipeline.hpp"

#ifndef KRYLOVLAB_VERSION
#define KRYLOVLAB_VERSION "unknown"
#endif

namespace krylovlab {

using nlohmann::json;

namespace {

class Artifacts {
 public:
  explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + (dir_ / name).string());
    names_.push_back(name);
    return f;
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

json lanczos_metrics(const SectorKrylov& r) {
  return {{"sector_dim", r.sector_dim},
          {"K", r.lanczos.K},
          {"krylov_bound", krylov_dimension_bound(r.sector_dim)},
          {"termination", to_string(r.lanczos.termination)},
          {"backend", to_string(r.lanczos.backend)}};
}

json growth_metrics(const std::vector<double>& b, const RunConfig& c) {
  const int last = std::min<int>(c.fit_n_max, static_cast<int>(b.size()));
  if (last - c.fit_n_min + 1 < 3) return nullptr;
  const GrowthFit f = fit_growth_rate(b, c.fit_n_min, c.fit_n_max);
  return {{"delta", f.delta}, {"c", f.c}, {"n_min", f.n_min}, {"n_max", f.n_max},
          {"residual", f.residual}, {"delta_stderr", f.delta_stderr}};
}

std::vector<Spectrum> spectra_for(const RunConfig& c) {
  if (c.disorder) return disorder_ensemble(c.model, *c.disorder, c.sector);
  return {sector_spectrum(c.model, c.sector)};
}

json run_krylov(const RunConfig& c, Artifacts& out) {
  const SectorKrylov r = sector_lanczos(c.model, c.sector, c.seed, c.lanczos);
  {
    auto f = out.open("bn.csv");
    write_csv(f, r.lanczos);
  }
  json m = lanczos_metrics(r);
  m["growth_fit"] = growth_metrics(r.lanczos.b, c);
  if (c.probe == Probe::Complexity) {
    const auto curve = complexity_curve(r.lanczos.b, c.grid.values(), c.write_phi);
    auto f = out.open("ck.csv");
    write_csv(f, curve, c.write_phi);
    const Saturation s = saturation_value(curve, c.saturation_window);
    m["saturation"] = {{"value", s.value}, {"stddev", s.stddev}, {"points", s.points}, {"plateaued", s.plateaued}};
  }
  return m;
}

json run_rstats(const RunConfig& c, Artifacts& out) {
  const Spectrum reference = sector_spectrum(c.model, c.sector);
  const auto spectra = spectra_for(c);
  std::vector<RStats> stats;
  stats.reserve(spectra.size());
  for (const auto& s : spectra) stats.push_back(r_statistics(s));
  const RStats pooled = pool(stats);
  {
    auto f = out.open("rstats.csv");
    write_r_tilde_csv(f, pooled);
  }
  {
    auto f = out.open("rstats_hist.csv");
    write_csv(f, histogram_r_tilde(pooled.r_tilde_values, c.rstats_bins));
  }
  {
    auto f = out.open("spectrum.csv");
    write_csv(f, reference);
  }
  return {{"sector_dim", reference.eigenvalues.size()},
          {"n_samples", spectra.size()},
          {"mean_r_tilde", pooled.mean_r_tilde},
          {"ratios", pooled.r_tilde_values.size()},
          {"dropped_spacings", pooled.dropped_spacings},
          {"reference_mean_r_tilde",
           {{"Poisson", reference_mean_r_tilde(LevelEnsemble::Poisson)},
            {"GOE", reference_mean_r_tilde(LevelEnsemble::GOE)}}}};
}

json run_sff(const RunConfig& c, Artifacts& out) {
  const Spectrum reference = sector_spectrum(c.model, c.sector);
  const auto spectra = spectra_for(c);
  const SFFCurve curve = sff(spectra, reference, c.sff.beta, c.grid.values(), c.sff.kind);
  {
    auto f = out.open("sff.csv");
    write_csv(f, curve);
  }
  {
    auto f = out.open("spectrum.csv");
    write_csv(f, reference);
  }
  json m = {{"sector_dim", reference.eigenvalues.size()},
            {"n_samples", curve.n_samples},
            {"plateau_prediction", curve.plateau_prediction},
            {"plateau_reliable", curve.plateau_reliable},
            {"late_time_average", late_time_average(curve, c.sff.late_time_decades)},
            {"ramp", nullptr}};
  if (const auto w = ramp_window(curve, c.sff.ramp_fraction)) {
    json ramp = {{"t_lo", w->first}, {"t_hi", w->second}};
    try {
      const LinearFit f = ramp_fit(curve, w->first, w->second);
      ramp["slope"] = f.slope;
      ramp["intercept"] = f.intercept;
      ramp["points"] = f.points;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientData) throw;
      ramp["fit_error"] = e.what();
    }
    m["ramp"] = ramp;
  }
  return m;
}

json run_sweep(const RunConfig& c, Artifacts& out) {
  SweepPlan plan;
  plan.base = c.model;
  plan.sector = c.sector;
  plan.metric = c.sweep_metric;
  plan.seed = c.seed;
  plan.lanczos = c.lanczos;
  plan.grid = c.grid;
  plan.fit_n_min = c.fit_n_min;
  plan.fit_n_max = c.fit_n_max;
  plan.window_fraction = c.saturation_window;
  plan.disorder = c.disorder;
  const auto rows = sweep_alpha(plan, c.sweep_alphas);
  {
    auto f = out.open("sweep.csv");
    write_csv(f, rows, c.sweep_metric);
  }
  json table = json::array();
  for (const auto& r : rows) {
    json row = {{"alpha", r.alpha}};
    if (r.ok()) {
      row["value"] = r.value;
      row["stderr"] = r.std_error;
    } else {
      row["error"] = r.error;
    }
    table.push_back(row);
  }
  return {{"metric", to_string(c.sweep_metric)}, {"rows", table}};
}

}  // namespace

std::string version() { return KRYLOVLAB_VERSION; }

RunOutcome run(const RunConfig& config, const std::filesystem::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  Artifacts out(out_dir);
  json metrics;
  switch (config.probe) {
    case Probe::Lanczos:
    case Probe::Complexity: metrics = run_krylov(config, out); break;
    case Probe::RStats: metrics = run_rstats(config, out); break;
    case Probe::SFF: metrics = run_sff(config, out); break;
    case Probe::SweepAlpha: metrics = run_sweep(config, out); break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunOutcome outcome;
  outcome.artifacts = out.names();
  outcome.summary = {{"version", version()},
                     {"config", to_json(config)},
                     {"wall_time_s", wall},
                     {"threads", omp_get_max_threads()},
                     {"metrics", metrics},
                     {"artifacts", outcome.artifacts}};
  std::ofstream f(out_dir / "summary.json");
  f << outcome.summary.dump(2) << '\n';
  return outcome;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Schema: return 2;
    case ErrorKind::SymmetryViolation: return 3;
    case ErrorKind::ResourceExhausted: return 4;
    default: return 1;
  }
}

json error_record(const Error& e) {
  json j = {{"error", to_string(e.kind())}, {"message", e.what()}, {"exit_code", exit_code(e.kind())}};
  if (e.kind() == ErrorKind::Schema) j["pointer"] = e.detail();
  if (e.kind() == ErrorKind::SymmetryViolation) j["symmetry"] = e.detail();
  return j;
}

int physical_cores() {
  std::ifstream in("/proc/cpuinfo");
  std::set<std::pair<int, int>> cores;
  std::string line;
  int phys = 0;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = line.substr(0, line.find_last_not_of(" \t", colon - 1) + 1);
    const std::string val = line.substr(colon + 1);
    if (key == "physical id") phys = std::atoi(val.c_str());
    if (key == "core id") cores.emplace(phys, std::atoi(val.c_str()));
  }
  if (!cores.empty()) return static_cast<int>(cores.size());
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

int resolve_threads(std::optional<int> cli, const RunConfig& config) {
  if (cli) return *cli;
  if (config.threads) return *config.threads;
  if (const char* env = std::getenv("KRYLOVLAB_THREADS")) {
    const std::string s(env);
    if (!s.empty() && s != "auto") {
      char* end = nullptr;
      const long n = std::strtol(env, &end, 10);
      if (*end != '\0' || n < 1 || n > 4096)
        throw Error(ErrorKind::Schema, "KRYLOVLAB_THREADS must be a positive integer or \"auto\"", "/threads");
      return static_cast<int>(n);
    }
  }
  return physical_cores();
}

}  // namespace krylovlab
