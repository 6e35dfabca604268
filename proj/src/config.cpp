#include "krylovlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "krylovlab/error.hpp"

namespace krylovlab {

namespace detail {
const std::vector<std::pair<std::string, std::string>>& preset_table();  // generated
}

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& ptr, const std::string& msg) {
  throw Error(ErrorKind::Schema, (ptr.empty() ? std::string("config") : ptr) + ": " + msg, ptr);
}

// Object reader that remembers which keys were consumed so leftovers can be
// rejected.
class Reader {
 public:
  Reader(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) schema(ptr_, "expected an object");
  }

  std::string at(const std::string& key) const { return ptr_ + "/" + key; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

  std::optional<double> number(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) schema(at(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) schema(at(key), "expected a finite number");
    return x;
  }

  std::optional<std::int64_t> integer(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) schema(at(key), "expected an integer");
    return v->get<std::int64_t>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) schema(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::optional<bool> boolean(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) schema(at(key), "expected true or false");
    return v->get<bool>();
  }

  // Rejects `key` if present; used for couplings the family does not read.
  void forbid(const std::string& key, const std::string& why) {
    seen_.insert(key);
    if (j_.contains(key)) schema(at(key), why);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) schema(at(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string ptr_;
  std::set<std::string> seen_;
};

template <class F>
auto enum_field(Reader& r, const std::string& key, F parse) -> std::optional<decltype(parse(std::string_view{}))> {
  const auto s = r.string(key);
  if (!s) return std::nullopt;
  try {
    return parse(*s);
  } catch (const Error& e) {
    schema(r.at(key), e.what());
  }
}

int to_int(std::int64_t v, const std::string& ptr) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) schema(ptr, "integer out of range");
  return static_cast<int>(v);
}

std::size_t to_size(std::int64_t v, const std::string& ptr, std::int64_t min = 0) {
  if (v < min) schema(ptr, "must be at least " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

ModelSpec parse_model(const json& j) {
  Reader r(j, "/model");
  ModelSpec m;
  const auto fam = enum_field(r, "family", model_family_from_string);
  if (!fam) schema("/model/family", "required");
  m.family = *fam;
  const auto L = r.integer("L");
  if (!L) schema("/model/L", "required");
  m.L = to_int(*L, "/model/L");
  const std::string not_used = "not a coupling of family " + std::string(to_string(m.family));

  auto coupling = [&](const char* key, bool used, double& field) {
    if (!used) return r.forbid(key, not_used);
    if (auto v = r.number(key)) field = *v;
  };
  coupling("g", uses_transverse_fields(m.family), m.g);
  coupling("h", uses_transverse_fields(m.family), m.h);
  coupling("gamma", uses_gamma(m.family), m.gamma);
  coupling("alpha", uses_power_law(m.family), m.alpha);
  coupling("kappa", uses_power_law(m.family), m.kappa);
  coupling("J", uses_J(m.family), m.J);
  coupling("J_zz", uses_xxz_couplings(m.family), m.J_zz);
  coupling("eps_d", uses_xxz_couplings(m.family), m.eps_d);
  if (uses_xxz_couplings(m.family)) {
    if (auto v = r.integer("defect_site")) m.defect_site = to_int(*v, "/model/defect_site");
    else m.defect_site = (m.L + 1) / 2;
  } else {
    r.forbid("defect_site", not_used);
  }
  r.finish();
  try {
    m.validate();
  } catch (const Error& e) {
    schema("/model", e.what());
  }
  return m;
}

SectorSpec parse_sector(const json& j) {
  Reader r(j, "/sector");
  SectorSpec s;
  auto qn = [&](const char* key) -> std::optional<int> {
    const auto v = r.integer(key);
    if (!v) return std::nullopt;
    if (*v != 1 && *v != -1) schema(r.at(key), "must be +1 or -1");
    return static_cast<int>(*v);
  };
  s.parity = qn("parity");
  s.z_reflection = qn("z_reflection");
  if (auto m = r.number("magnetization")) {
    const double twice = 2.0 * *m;
    if (twice != std::round(twice) || std::abs(twice) > 64) schema("/sector/magnetization", "must be an integer or half-integer");
    s.twice_sz = static_cast<int>(twice);
  }
  r.finish();
  return s;
}

SeedSpec parse_seed(const json& j, int L) {
  Reader r(j, "/seed_operator");
  SeedSpec s;
  if (auto k = enum_field(r, "kind", seed_kind_from_string)) s.kind = *k;
  const auto site = r.integer("site");
  if (!site) schema("/seed_operator/site", "required");
  if (*site < 1 || *site > L) schema("/seed_operator/site", "outside 1..L");
  s.site = static_cast<int>(*site);
  r.finish();
  return s;
}

DisorderSpec parse_disorder(const json& j) {
  Reader r(j, "/disorder");
  DisorderSpec d;
  if (auto n = r.integer("n_samples")) d.n_samples = to_size(*n, "/disorder/n_samples", 1);
  if (auto v = r.number("sigma")) {
    if (*v < 0) schema("/disorder/sigma", "must be non-negative");
    d.sigma = *v;
  }
  if (auto v = r.number("mu")) d.mu = *v;
  if (auto t = enum_field(r, "target", disorder_target_from_string)) d.target = *t;
  r.finish();
  return d;
}

TimeGrid parse_grid(const json& j) {
  Reader r(j, "/time_grid");
  TimeGrid g;
  if (auto v = r.number("t_min")) g.t_min = *v;
  if (auto v = r.number("t_max")) g.t_max = *v;
  if (auto v = r.integer("points")) g.points = to_size(*v, "/time_grid/points", 2);
  if (auto s = enum_field(r, "spacing", spacing_from_string)) g.spacing = *s;
  r.finish();
  try {
    g.validate();
  } catch (const Error& e) {
    schema("/time_grid", e.what());
  }
  return g;
}

SffKind sff_kind_from_string(std::string_view s) {
  if (s == "annealed") return SffKind::Annealed;
  if (s == "quenched") return SffKind::Quenched;
  throw Error(ErrorKind::InvalidArgument, "unknown SFF kind '" + std::string(s) + "'");
}

std::string_view sff_kind_name(SffKind k) { return k == SffKind::Annealed ? "annealed" : "quenched"; }

}  // namespace

std::string_view to_string(Probe p) {
  switch (p) {
    case Probe::Lanczos: return "Lanczos";
    case Probe::Complexity: return "Complexity";
    case Probe::RStats: return "RStats";
    case Probe::SFF: return "SFF";
    case Probe::SweepAlpha: return "SweepAlpha";
  }
  return "unknown";
}

Probe probe_from_string(std::string_view name) {
  for (auto p : {Probe::Lanczos, Probe::Complexity, Probe::RStats, Probe::SFF, Probe::SweepAlpha})
    if (name == to_string(p)) return p;
  throw Error(ErrorKind::InvalidArgument, "unknown probe '" + std::string(name) + "'");
}

RunConfig parse_config(const json& j) {
  Reader r(j, "");
  RunConfig c;
  const auto probe = enum_field(r, "probe", probe_from_string);
  if (!probe) schema("/probe", "required");
  c.probe = *probe;

  const json* model = r.raw("model");
  if (!model) schema("/model", "required");
  c.model = parse_model(*model);

  if (const json* s = r.raw("sector")) c.sector = parse_sector(*s);

  const bool krylov = c.probe == Probe::Lanczos || c.probe == Probe::Complexity ||
                      (c.probe == Probe::SweepAlpha);
  if (const json* s = r.raw("seed_operator")) {
    c.seed = parse_seed(*s, c.model.L);
  } else if (krylov) {
    c.seed.site = (c.model.L + 1) / 2;
  }

  if (const json* d = r.raw("disorder")) c.disorder = parse_disorder(*d);
  if (const json* g = r.raw("time_grid")) c.grid = parse_grid(*g);

  if (const json* f = r.raw("fit")) {
    Reader fr(*f, "/fit");
    if (auto v = fr.integer("n_min")) c.fit_n_min = to_int(*v, "/fit/n_min");
    if (auto v = fr.integer("n_max")) c.fit_n_max = to_int(*v, "/fit/n_max");
    if (auto v = fr.number("saturation_window")) c.saturation_window = *v;
    fr.finish();
    if (c.fit_n_min < 2) schema("/fit/n_min", "must be at least 2");
    if (c.fit_n_max < c.fit_n_min + 2) schema("/fit/n_max", "range needs at least three points");
    if (!(c.saturation_window > 0.0 && c.saturation_window < 1.0))
      schema("/fit/saturation_window", "must lie in (0, 1)");
  }

  if (const json* l = r.raw("lanczos")) {
    Reader lr(*l, "/lanczos");
    if (auto v = lr.number("tol_rel")) {
      if (!(*v > 0.0)) schema("/lanczos/tol_rel", "must be positive");
      c.lanczos.tol_rel = *v;
    }
    if (auto v = lr.integer("max_steps")) c.lanczos.max_steps = to_size(*v, "/lanczos/max_steps", 1);
    if (auto b = enum_field(lr, "backend", lanczos_backend_from_string)) c.lanczos.backend = *b;
    if (auto v = lr.number("merge_tol")) {
      if (!(*v > 0.0)) schema("/lanczos/merge_tol", "must be positive");
      c.lanczos.merge_tol = *v;
    }
    lr.finish();
  }

  if (const json* s = r.raw("sff")) {
    Reader sr(*s, "/sff");
    if (auto v = sr.number("beta")) {
      if (*v < 0.0) schema("/sff/beta", "must be non-negative");
      c.sff.beta = *v;
    }
    if (auto k = enum_field(sr, "kind", sff_kind_from_string)) c.sff.kind = *k;
    if (auto v = sr.number("ramp_fraction")) {
      if (!(*v > 0.0 && *v <= 1.0)) schema("/sff/ramp_fraction", "must lie in (0, 1]");
      c.sff.ramp_fraction = *v;
    }
    if (auto v = sr.number("late_time_decades")) {
      if (!(*v > 0.0)) schema("/sff/late_time_decades", "must be positive");
      c.sff.late_time_decades = *v;
    }
    sr.finish();
  }

  if (const json* s = r.raw("rstats")) {
    Reader rr(*s, "/rstats");
    if (auto v = rr.integer("bins")) c.rstats_bins = to_size(*v, "/rstats/bins", 1);
    rr.finish();
  }

  if (const json* s = r.raw("sweep")) {
    Reader sr(*s, "/sweep");
    if (const json* a = sr.raw("alphas")) {
      if (!a->is_array()) schema("/sweep/alphas", "expected an array");
      for (std::size_t i = 0; i < a->size(); ++i) {
        const auto& v = (*a)[i];
        if (!v.is_number() || v.get<double>() < 0.0) schema("/sweep/alphas/" + std::to_string(i), "expected a non-negative number");
        c.sweep_alphas.push_back(v.get<double>());
      }
    }
    if (auto m = enum_field(sr, "metric", sweep_metric_from_string)) c.sweep_metric = *m;
    sr.finish();
  }

  if (const json* s = r.raw("complexity")) {
    Reader cr(*s, "/complexity");
    if (auto v = cr.boolean("write_phi")) c.write_phi = *v;
    cr.finish();
  }

  if (auto v = r.string("output_dir")) c.output_dir = *v;
  if (const json* v = r.raw("master_seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
      schema("/master_seed", "expected a non-negative integer");
    c.master_seed = v->get<std::uint64_t>();
  }
  if (const json* v = r.raw("threads")) {
    if (v->is_string() && v->get<std::string>() == "auto") {
      c.threads.reset();
    } else if (v->is_number_integer() && v->get<std::int64_t>() >= 1 && v->get<std::int64_t>() <= 4096) {
      c.threads = static_cast<int>(v->get<std::int64_t>());
    } else {
      schema("/threads", "expected a positive integer or \"auto\"");
    }
  }
  if (const json* v = r.raw("meta")) {
    if (!v->is_object()) schema("/meta", "expected an object");
    c.meta = *v;
  }
  r.finish();

  // probe-specific requirements
  if (c.disorder) c.disorder->master_seed = c.master_seed;
  if (c.probe == Probe::SweepAlpha) {
    if (c.sweep_alphas.empty()) schema("/sweep/alphas", "required for the SweepAlpha probe");
    if (!uses_power_law(c.model.family)) schema("/model/family", "SweepAlpha needs a power-law family");
    if (c.sweep_metric == SweepMetric::MeanRTilde && j.contains("seed_operator"))
      schema("/seed_operator", "not used by the mean_r_tilde sweep");
  }
  if ((c.probe == Probe::Lanczos || c.probe == Probe::Complexity) && c.disorder)
    schema("/disorder", "not used by Krylov probes");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot open config file " + path.string(), "");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("malformed JSON: ") + e.what(), "");
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["probe"] = to_string(c.probe);

  json m;
  const ModelSpec& s = c.model;
  m["family"] = to_string(s.family);
  m["L"] = s.L;
  if (uses_transverse_fields(s.family)) {
    m["g"] = s.g;
    m["h"] = s.h;
  }
  if (uses_gamma(s.family)) m["gamma"] = s.gamma;
  if (uses_power_law(s.family)) {
    m["alpha"] = s.alpha;
    m["kappa"] = s.kappa;
  }
  if (uses_J(s.family)) m["J"] = s.J;
  if (uses_xxz_couplings(s.family)) {
    m["J_zz"] = s.J_zz;
    m["eps_d"] = s.eps_d;
    m["defect_site"] = s.resolved_defect_site();
  }
  j["model"] = m;

  json sec = json::object();
  if (c.sector.parity) sec["parity"] = *c.sector.parity;
  if (c.sector.z_reflection) sec["z_reflection"] = *c.sector.z_reflection;
  if (c.sector.twice_sz) sec["magnetization"] = 0.5 * *c.sector.twice_sz;
  j["sector"] = sec;

  const bool uses_seed = c.probe == Probe::Lanczos || c.probe == Probe::Complexity ||
                         (c.probe == Probe::SweepAlpha && c.sweep_metric != SweepMetric::MeanRTilde);
  if (uses_seed) j["seed_operator"] = {{"kind", to_string(c.seed.kind)}, {"site", c.seed.site}};
  if (c.disorder)
    j["disorder"] = {{"n_samples", c.disorder->n_samples},
                     {"sigma", c.disorder->sigma},
                     {"mu", c.disorder->mu},
                     {"target", to_string(c.disorder->target)}};
  j["time_grid"] = {{"t_min", c.grid.t_min},
                    {"t_max", c.grid.t_max},
                    {"points", c.grid.points},
                    {"spacing", to_string(c.grid.spacing)}};
  j["fit"] = {{"n_min", c.fit_n_min}, {"n_max", c.fit_n_max}, {"saturation_window", c.saturation_window}};
  json l = {{"tol_rel", c.lanczos.tol_rel},
            {"backend", to_string(c.lanczos.backend)},
            {"merge_tol", c.lanczos.merge_tol}};
  if (c.lanczos.max_steps) l["max_steps"] = *c.lanczos.max_steps;
  j["lanczos"] = l;
  j["sff"] = {{"beta", c.sff.beta},
              {"kind", sff_kind_name(c.sff.kind)},
              {"ramp_fraction", c.sff.ramp_fraction},
              {"late_time_decades", c.sff.late_time_decades}};
  j["rstats"] = {{"bins", c.rstats_bins}};
  if (!c.sweep_alphas.empty()) j["sweep"] = {{"alphas", c.sweep_alphas}, {"metric", to_string(c.sweep_metric)}};
  j["complexity"] = {{"write_phi", c.write_phi}};
  j["output_dir"] = c.output_dir;
  j["master_seed"] = c.master_seed;
  if (c.threads)
    j["threads"] = *c.threads;
  else
    j["threads"] = "auto";
  j["meta"] = c.meta;
  return j;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::preset_table()) names.push_back(name);
  return names;
}

const std::string& preset_text(std::string_view name) {
  for (const auto& [n, text] : detail::preset_table())
    if (n == name) return text;
  throw Error(ErrorKind::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

}  // namespace krylovlab
