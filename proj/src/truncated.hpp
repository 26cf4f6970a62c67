#pragma once

// (2m+1)-dimensional truncations with wrap-around coupling, and the maps
// between them and the full computational window.

#include "integrators.hpp"
#include "model.hpp"

namespace cgl {

/// Half-width m of a truncation; state dimension 2m+1.
struct TruncationDim {
  int m = 1;

  explicit TruncationDim(int m_);
  int dimension() const noexcept { return 2 * m + 1; }
};

/// Circulant Lambda_m z, indices taken mod 2m+1.
LatticeState apply_laplacian_truncated(const LatticeState& z);

/// Periodic forward difference (D_m^+ z)_j = z_{j+1} - z_j, indices mod 2m+1.
LatticeState forward_difference_truncated(const LatticeState& z);

/// Fixed point of z = z_prev + eps F_m z.
LatticeState truncated_ies_step(const LatticeState& z_prev, const ModelParams& params,
                                const IESConfig& cfg, StepReport* report = nullptr);

/// n truncated implicit steps from z0.
Trajectory iterate_truncated_ies(const LatticeState& z0, int n, const ModelParams& params,
                                 const IESConfig& cfg);

/// Zero-pads a Truncated(m) state into a full window of half-width J >= m.
LatticeState null_expansion(const LatticeState& z, int J);

/// Keeps the entries |j| <= m of a full-window state.
LatticeState restrict_to(const LatticeState& u, TruncationDim dim);

/// RK4 integration of du^m/dt = F_m u^m.
LatticeState truncated_reference_solve(const LatticeState& z0, double t_end,
                                       const ModelParams& params, int substeps);

}  // namespace cgl
