#pragma once

#include <optional>

#include "krylovlab/krylov.hpp"
#include "krylovlab/spin_models.hpp"
#include "krylovlab/symmetry.hpp"

namespace krylovlab {

struct SeedSpec {
  SeedKind kind = SeedKind::SingleSz;
  int site = 1;

  bool operator==(const SeedSpec&) const = default;
};

struct SectorKrylov {
  std::size_t sector_dim = 0;
  LanczosResult lanczos;
};

// Builds H and the seed, projects both into the sector (real path when
// possible) and runs Lanczos.
SectorKrylov sector_lanczos(const ModelSpec& model, const SectorSpec& sector, const SeedSpec& seed,
                            const LanczosOptions& opts);

}  // namespace krylovlab
