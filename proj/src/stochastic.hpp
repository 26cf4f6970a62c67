#pragma once

// Ornstein-Uhlenbeck paths and the random-coefficient lattice system obtained
// from the multiplicative Stratonovich equation by the conjugacy u = e^{az} U.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "integrators.hpp"
#include "model.hpp"

namespace cgl {

struct NoiseConfig {
  double a = 0.0;
  double a_star = 1.0;
  std::uint64_t seed = 0;
  double dt = 1e-2;

  /// 0 <= a <= a_star and dt > 0. a = 0 is accepted: it is the deterministic limit.
  void validate() const;
};

/// Stationary OU process z(theta_t omega) on the grid t_i = (first_index + i) dt.
///
/// One seed fixes one omega on the whole line: z(0) is drawn first, the grid is
/// then extended forward with the exact transition and backward with the exact
/// reversed transition (the stationary OU process is time-reversible). Windows
/// that overlap therefore agree on their common grid points.
struct OUPath {
  double dt = 0.0;
  long first_index = 0;
  /// Local index from which the recursion radiates (t = 0 clamped into the window).
  std::size_t anchor = 0;
  std::vector<double> times;
  std::vector<double> z;
  /// Standard normal innovation of each grid cell [t_i, t_{i+1}].
  std::vector<double> innovations;

  std::size_t size() const noexcept { return z.size(); }
  double start_time() const noexcept { return times.front(); }
  double end_time() const noexcept { return times.back(); }
  /// Local index of the grid point nearest to t; throws if t is off the grid window.
  std::size_t index_of(double t) const;
  /// The path of -omega: z and innovations negated.
  OUPath antithetic() const;
};

OUPath sample_ou_path(double t_begin, double t_end, const NoiseConfig& cfg);

/// Rebuilds z from z[anchor] and the stored innovations.
std::vector<double> reconstruct_ou(const OUPath& path);

/// One-step decay factor e^{-dt} and innovation scale sqrt((1 - e^{-2dt})/2).
struct OUTransition {
  double decay;
  double scale;
};
OUTransition ou_transition(double dt);

/// (lambda+i mu) Lambda U - (gamma+i beta) U - (k+i nu)|U|^p U e^{paz}
///   + e^{-az} g + a z U, with Lambda_m and g^m for truncated states.
LatticeState random_vector_field(const LatticeState& U, double z_val, const ModelParams& params,
                                 double a);

/// Implicit Euler along the path with z frozen at the right end of each cell.
/// The path step must equal cfg.eps.
Trajectory random_ies_trajectory(const LatticeState& U0, const OUPath& path,
                                 const ModelParams& params, const IESConfig& cfg, double a);

enum class ConjugateDirection { ToU, ToOriginal };

/// U = e^{-az} u (ToU) or u = e^{az} U (ToOriginal).
LatticeState conjugate(const LatticeState& state, double z_val, double a,
                       ConjugateDirection direction);

/// Starts from U0 at -T_back on a freshly sampled path (step cfg.eps) and
/// returns the state at time 0. With m set the truncated random system is used
/// (a full-window U0 is restricted first).
LatticeState pullback_solve(const LatticeState& U0, double T_back, const NoiseConfig& noise,
                            const ModelParams& params, const IESConfig& cfg,
                            std::optional<int> m = std::nullopt);

/// Same, along an existing path that covers [-T_back, 0].
LatticeState pullback_along(const LatticeState& U0, double T_back, const OUPath& path,
                            const ModelParams& params, const IESConfig& cfg, double a);

/// Truncation length S of the improper integral in the absorbing radius.
double absorbing_horizon(const ModelParams& params);

/// R(a, omega) by trapezoid quadrature on the path grid over [-S, 0].
/// Throws QuadratureError if the path does not reach back to -S.
double absorbing_radius(double a, const OUPath& path, const ModelParams& params);

namespace detail {

FieldCoefficients random_coefficients(const ModelParams& params, double a, double z_val);

/// Integrates `state` in place along path cells from local index `from` to the end.
void integrate_random(std::span<Complex> state, const OUPath& path, std::size_t from,
                      PicardSolver& solver, const ModelParams& params, double a,
                      std::span<Complex> scratch);

}  // namespace detail

double sample_variance(std::span<const double> xs);
/// Sample autocorrelation at a lag measured in grid cells.
double autocorrelation(std::span<const double> xs, std::size_t lag);

}  // namespace cgl
