#pragma once

#include <cstddef>
#include <optional>

namespace krylovlab {

// Bytes the process may still allocate: MemAvailable from /proc/meminfo,
// capped by KRYLOVLAB_MEMORY_LIMIT_MB when that is set. Empty if neither is
// known.
std::optional<std::size_t> available_memory();

// Throws ResourceExhausted when `bytes` exceeds available_memory().
void require_memory(std::size_t bytes, const char* what);

}  // namespace krylovlab
