#pragma once

// Implicit Euler scheme solved by Picard iteration, a classical fourth-order
// reference integrator, and the discretization-error measurements built on them.

#include <span>
#include <vector>

#include "model.hpp"

namespace cgl {

struct IESConfig {
  double eps = 0.0;
  double fp_tol = 1e-12;
  int fp_max_iter = 200;
  bool enforce_eps_star = true;

  void validate() const;
};

struct Trajectory {
  std::vector<LatticeState> states;
  std::vector<double> times;
  double step = 0.0;
};

/// Optional diagnostics of one implicit step.
struct StepReport {
  int iterations = 0;
  /// ||y_{k+1} - y_k|| for every Picard sweep, in order.
  std::vector<double> increments;
};

/// Reusable solver for y = prev + eps * F_c(y) on a fixed lattice shape. Owns
/// its scratch buffers, so one instance must not be shared across threads.
class PicardSolver {
 public:
  PicardSolver(const ModelParams& params, const IESConfig& cfg, LatticeKind kind, int half_width);

  /// Writes the fixed point into `next` (may not alias `prev`). Throws NoConvergence.
  void solve(std::span<const Complex> prev, const detail::FieldCoefficients& coeffs,
             std::span<Complex> next, StepReport* report = nullptr);

  const std::vector<Complex>& force() const noexcept { return g_; }
  detail::Boundary boundary() const noexcept { return boundary_; }
  const IESConfig& config() const noexcept { return cfg_; }

 private:
  IESConfig cfg_;
  detail::Boundary boundary_;
  std::vector<Complex> g_;
  std::vector<Complex> field_;
  std::vector<Complex> iterate_;
};

/// One implicit Euler step u_n = u_{n-1} + eps F(u_n) on the full window.
LatticeState implicit_euler_step(const LatticeState& u_prev, const ModelParams& params,
                                 const IESConfig& cfg, StepReport* report = nullptr);

/// n implicit steps from u0; states[0] = u0. NoConvergence carries the failing step.
Trajectory iterate_ies(const LatticeState& u0, int n, const ModelParams& params,
                       const IESConfig& cfg);

/// Classical RK4 for du/dt = F(u) with step t_end/substeps. Works for both
/// full-window and truncated states.
LatticeState reference_solve(const LatticeState& u0, double t_end, const ModelParams& params,
                             int substeps);

/// reference_solve with substeps doubled from `initial_substeps` until two
/// successive results differ by less than tol.
LatticeState reference_solve_converged(const LatticeState& u0, double t_end,
                                       const ModelParams& params, double tol = 1e-11,
                                       int initial_substeps = 128);

/// ||u(eps, y) - u_1^eps(y)||: RK4 with `substeps` per step against one implicit step.
double one_step_defect(const LatticeState& y, double eps, const ModelParams& params,
                       int substeps = 100, double fp_tol = 1e-13);

/// ||u(T, y) - u_n^eps(y)|| with n = T/eps, which must be an integer.
double global_error(const LatticeState& y, double T, double eps, const ModelParams& params,
                    double fp_tol = 1e-13);

/// Least-squares slope of log(err) against log(eps).
double loglog_slope(std::span<const double> eps, std::span<const double> err);

namespace detail {

void check_step_preconditions(const LatticeState& u_prev, const ModelParams& params,
                              const IESConfig& cfg, const DerivedConstants& constants);

/// One RK4 step of size h for the field with coefficients c. Scratch buffers
/// must each have u.size() entries.
void rk4_step(std::span<Complex> u, double h, std::span<const Complex> g,
              const FieldCoefficients& c, Boundary boundary, std::span<Complex> k1,
              std::span<Complex> k2, std::span<Complex> k3, std::span<Complex> k4,
              std::span<Complex> tmp);

}  // namespace detail

}  // namespace cgl
