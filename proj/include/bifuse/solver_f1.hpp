#pragma once

#include "bifuse/prox.hpp"
#include "bifuse/types.hpp"

namespace bifuse {

/// Formulation 1 by proximal decomposition over the three objective terms:
/// ridge prox of the loss, soft-threshold prox of the l1 term, and the
/// convex bi-clustering prox of the fusion term, combined by averaging and
/// reflection. Stops when the relative change of the averaged iterate falls
/// below hp.tol. The auxiliary vectors start at `init` (all three), or at
/// the pilot Lasso estimate when absent.
FitResult fit_formulation1(const TaskDataset& data, const EdgeWeights& edges,
                           const Hyperparameters& hp, const ProxConfig& cfg = {},
                           const std::optional<CoefficientMatrix>& init = {});

}  // namespace bifuse
