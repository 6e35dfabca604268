#pragma once

#include <iosfwd>
#include <string>

namespace krylovlab {

// Shortest decimal string that round-trips to the same binary64 value.
std::string format_double(double x);

// Writes `x` with format_double; integers go through the stream unchanged.
void write_number(std::ostream& os, double x);

}  // namespace krylovlab
