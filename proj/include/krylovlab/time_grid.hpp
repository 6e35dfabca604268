#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace krylovlab {

enum class Spacing { Log, Linear };

std::string_view to_string(Spacing s);
Spacing spacing_from_string(std::string_view name);

struct TimeGrid {
  double t_min = 1e-2;
  double t_max = 1e7;
  std::size_t points = 400;
  Spacing spacing = Spacing::Log;

  // Throws InvalidArgument for points < 2, t_max <= t_min or a log grid
  // with t_min <= 0.
  void validate() const;
  std::vector<double> values() const;

  bool operator==(const TimeGrid&) const = default;
};

}  // namespace krylovlab
