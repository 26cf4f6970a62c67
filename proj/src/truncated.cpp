#include "truncated.hpp"

#include <string>

#include "errors.hpp"

namespace cgl {

TruncationDim::TruncationDim(int m_) : m(m_) {
  if (m_ < 1) throw DimensionError("truncation needs m >= 1, got " + std::to_string(m_));
}

namespace {

void require_truncated(const LatticeState& z, const char* op) {
  if (z.kind() != LatticeKind::Truncated)
    throw DimensionError(std::string(op) + " expects a truncated state");
  if (z.size() != static_cast<std::size_t>(2 * z.half_width() + 1))
    throw DimensionError(std::string(op) + ": length does not match 2m+1");
}

}  // namespace

LatticeState apply_laplacian_truncated(const LatticeState& z) {
  require_truncated(z, "apply_laplacian_truncated");
  const auto v = z.values();
  const std::size_t n = v.size();
  LatticeState out(z.kind(), z.half_width());
  auto o = out.values();
  for (std::size_t i = 0; i < n; ++i)
    o[i] = -v[(i + n - 1) % n] + 2.0 * v[i] - v[(i + 1) % n];
  return out;
}

LatticeState forward_difference_truncated(const LatticeState& z) {
  require_truncated(z, "forward_difference_truncated");
  const auto v = z.values();
  const std::size_t n = v.size();
  LatticeState out(z.kind(), z.half_width());
  auto o = out.values();
  for (std::size_t i = 0; i < n; ++i) o[i] = v[(i + 1) % n] - v[i];
  return out;
}

LatticeState truncated_ies_step(const LatticeState& z_prev, const ModelParams& params,
                                const IESConfig& cfg, StepReport* report) {
  require_truncated(z_prev, "truncated_ies_step");
  const auto constants = compute_constants(params);
  detail::check_step_preconditions(z_prev, params, cfg, constants);
  PicardSolver solver(params, cfg, z_prev.kind(), z_prev.half_width());
  LatticeState next(z_prev.kind(), z_prev.half_width());
  solver.solve(z_prev.values(), detail::deterministic_coefficients(params), next.values(), report);
  return next;
}

Trajectory iterate_truncated_ies(const LatticeState& z0, int n, const ModelParams& params,
                                 const IESConfig& cfg) {
  require_truncated(z0, "iterate_truncated_ies");
  return iterate_ies(z0, n, params, cfg);
}

LatticeState null_expansion(const LatticeState& z, int J) {
  require_truncated(z, "null_expansion");
  if (J < z.half_width())
    throw DimensionError("null_expansion needs J >= m (J = " + std::to_string(J) +
                         ", m = " + std::to_string(z.half_width()) + ")");
  LatticeState out(LatticeKind::FullWindow, J);
  const int m = z.half_width();
  for (int j = -m; j <= m; ++j) out.set(j, z.at(j));
  return out;
}

LatticeState restrict_to(const LatticeState& u, TruncationDim dim) {
  if (u.kind() != LatticeKind::FullWindow)
    throw DimensionError("restrict expects a full-window state");
  if (u.half_width() < dim.m)
    throw DimensionError("cannot restrict a window of half-width " +
                         std::to_string(u.half_width()) + " to m = " + std::to_string(dim.m));
  LatticeState out(LatticeKind::Truncated, dim.m);
  for (int j = -dim.m; j <= dim.m; ++j) out.set(j, u.at(j));
  return out;
}

LatticeState truncated_reference_solve(const LatticeState& z0, double t_end,
                                       const ModelParams& params, int substeps) {
  require_truncated(z0, "truncated_reference_solve");
  return reference_solve(z0, t_end, params, substeps);
}

}  // namespace cgl
