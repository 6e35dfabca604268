#include "krylovlab/pipeline.hpp"

namespace krylovlab {

SectorKrylov sector_lanczos(const ModelSpec& model, const SectorSpec& sector, const SeedSpec& seed,
                            const LanczosOptions& opts) {
  model.validate();
  const SparseOperator H = build_hamiltonian(model);
  const SparseOperator O = seed_operator(seed.kind, seed.site, model.L);
  const SectorBasis basis = build_sector_basis(sector, model.L);

  SectorKrylov out;
  out.sector_dim = basis.dim();
  if (H.is_real() && O.is_real())
    out.lanczos = lanczos(project_real(H, basis), project_real(O, basis), opts);
  else
    out.lanczos = lanczos(project(H, basis), OperatorVector(project(O, basis)), opts);
  return out;
}

}  // namespace krylovlab
