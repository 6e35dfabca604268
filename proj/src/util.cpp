#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <algorithm>
#include <string>

#include "krylovlab/csv.hpp"
#include "krylovlab/error.hpp"
#include "krylovlab/resources.hpp"
#include "krylovlab/rng.hpp"
#include "krylovlab/time_grid.hpp"

namespace krylovlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::SymmetryViolation: return "symmetry_violation";
    case ErrorKind::EmptySector: return "empty_sector";
    case ErrorKind::NonHermitian: return "non_hermitian";
    case ErrorKind::InsufficientData: return "insufficient_data";
    case ErrorKind::ResourceExhausted: return "resource_exhausted";
  }
  return "unknown";
}

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw Error(ErrorKind::InvalidArgument, "format_double: conversion failed");
  return std::string(buf, end);
}

void write_number(std::ostream& os, double x) { os << format_double(x); }

// ---------------------------------------------------------------------------

std::string_view to_string(Spacing s) { return s == Spacing::Log ? "log" : "linear"; }

Spacing spacing_from_string(std::string_view name) {
  if (name == "log") return Spacing::Log;
  if (name == "linear") return Spacing::Linear;
  throw Error(ErrorKind::InvalidArgument, "unknown time-grid spacing '" + std::string(name) + "'");
}

void TimeGrid::validate() const {
  if (points < 2) throw Error(ErrorKind::InvalidArgument, "time grid needs at least two points");
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_max > t_min))
    throw Error(ErrorKind::InvalidArgument, "time grid needs finite t_min < t_max");
  if (spacing == Spacing::Log && !(t_min > 0.0))
    throw Error(ErrorKind::InvalidArgument, "log-spaced time grid needs t_min > 0");
}

std::vector<double> TimeGrid::values() const {
  validate();
  std::vector<double> t(points);
  const double last = static_cast<double>(points - 1);
  if (spacing == Spacing::Log) {
    const double a = std::log10(t_min), b = std::log10(t_max);
    for (std::size_t i = 0; i < points; ++i) t[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / last);
  } else {
    for (std::size_t i = 0; i < points; ++i) t[i] = t_min + (t_max - t_min) * static_cast<double>(i) / last;
  }
  // Endpoints exactly as configured.
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t CounterRng::at(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGolden); }

double CounterRng::uniform() {
  // 53 random bits mapped to (0, 1).
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(double mu, double sigma) {
  const double u1 = uniform();
  const double u2 = uniform();
  return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t CounterRng::child_key(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(mix64(master_seed) ^ (index * kGolden + 0x632BE59BD9B4E019ull));
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> available_memory() {
  std::optional<std::size_t> avail;
  std::ifstream in("/proc/meminfo");
  std::string key;
  std::size_t kb = 0;
  std::string unit;
  while (in >> key >> kb >> unit) {
    if (key == "MemAvailable:") {
      avail = kb * 1024;
      break;
    }
  }
  if (const char* env = std::getenv("KRYLOVLAB_MEMORY_LIMIT_MB")) {
    char* end = nullptr;
    const unsigned long long mb = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') {
      const std::size_t cap = static_cast<std::size_t>(mb) * 1024 * 1024;
      avail = avail ? std::min(*avail, cap) : cap;
    }
  }
  return avail;
}

void require_memory(std::size_t bytes, const char* what) {
  const auto avail = available_memory();
  if (avail && bytes > *avail)
    throw Error(ErrorKind::ResourceExhausted, std::string(what) + " needs " + std::to_string(bytes >> 20) +
                                                  " MiB but only " + std::to_string(*avail >> 20) +
                                                  " MiB are available");
}

}  // namespace krylovlab
