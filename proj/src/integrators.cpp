#include "integrators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace cgl {

void IESConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("time step eps must be positive");
  if (!(fp_tol > 0.0)) throw ParameterError("fp_tol must be positive");
  if (fp_max_iter < 1) throw ParameterError("fp_max_iter must be >= 1");
}

PicardSolver::PicardSolver(const ModelParams& params, const IESConfig& cfg, LatticeKind kind,
                           int half_width)
    : cfg_(cfg),
      boundary_(detail::boundary_of(kind)),
      g_(detail::force_on(params, half_width)),
      field_(g_.size()),
      iterate_(g_.size()) {
  cfg_.validate();
}

void PicardSolver::solve(std::span<const Complex> prev, const detail::FieldCoefficients& coeffs,
                         std::span<Complex> next, StepReport* report) {
  const std::size_t n = prev.size();
  if (n != g_.size() || next.size() != n)
    throw DimensionError("Picard solver used with a state of the wrong size");
  const double eps = cfg_.eps;
  std::copy(prev.begin(), prev.end(), iterate_.begin());
  if (report) {
    report->iterations = 0;
    report->increments.clear();
  }
  for (int it = 1; it <= cfg_.fp_max_iter; ++it) {
    detail::evaluate_field(iterate_, g_, coeffs, boundary_, field_);
    double diff2 = 0.0;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double yr = prev[i].real() + eps * field_[i].real();
      const double yi = prev[i].imag() + eps * field_[i].imag();
      const double dr = yr - iterate_[i].real();
      const double di = yi - iterate_[i].imag();
      diff2 += dr * dr + di * di;
      norm2 += std::norm(iterate_[i]);
      next[i] = Complex(yr, yi);
    }
    const double increment = std::sqrt(diff2);
    if (report) {
      report->iterations = it;
      report->increments.push_back(increment);
    }
    if (!std::isfinite(increment)) break;
    if (increment <= cfg_.fp_tol * std::max(1.0, std::sqrt(norm2))) return;
    std::copy(next.begin(), next.end(), iterate_.begin());
  }
  throw NoConvergence("Picard iteration did not converge in " +
                      std::to_string(cfg_.fp_max_iter) + " iterations (eps = " +
                      std::to_string(eps) + "); reduce the step or check the initial state");
}

namespace detail {

void check_step_preconditions(const LatticeState& u_prev, const ModelParams& params,
                              const IESConfig& cfg, const DerivedConstants& constants) {
  cfg.validate();
  check_shape(u_prev, params);
  if (!cfg.enforce_eps_star) return;
  if (cfg.eps > constants.eps_star * (1.0 + 1e-12))
    throw ParameterError("eps = " + std::to_string(cfg.eps) + " exceeds eps* = " +
                         std::to_string(constants.eps_star));
  if (u_prev.norm() > constants.r_star * (1.0 + 1e-9) + 1e-300)
    throw ParameterError("initial state lies outside the absorbing ball B_{r*}");
}

void rk4_step(std::span<Complex> u, double h, std::span<const Complex> g,
              const FieldCoefficients& c, Boundary boundary, std::span<Complex> k1,
              std::span<Complex> k2, std::span<Complex> k3, std::span<Complex> k4,
              std::span<Complex> tmp) {
  const std::size_t n = u.size();
  evaluate_field(u, g, c, boundary, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + (0.5 * h) * k1[i];
  evaluate_field(tmp, g, c, boundary, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + (0.5 * h) * k2[i];
  evaluate_field(tmp, g, c, boundary, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * k3[i];
  evaluate_field(tmp, g, c, boundary, k4);
  const double w = h / 6.0;
  for (std::size_t i = 0; i < n; ++i) u[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace detail

LatticeState implicit_euler_step(const LatticeState& u_prev, const ModelParams& params,
                                 const IESConfig& cfg, StepReport* report) {
  if (u_prev.kind() != LatticeKind::FullWindow)
    throw DimensionError("implicit_euler_step expects a full-window state");
  const auto constants = compute_constants(params);
  detail::check_step_preconditions(u_prev, params, cfg, constants);
  PicardSolver solver(params, cfg, u_prev.kind(), u_prev.half_width());
  LatticeState next(u_prev.kind(), u_prev.half_width());
  solver.solve(u_prev.values(), detail::deterministic_coefficients(params), next.values(), report);
  return next;
}

Trajectory iterate_ies(const LatticeState& u0, int n, const ModelParams& params,
                       const IESConfig& cfg) {
  if (n < 0) throw ParameterError("number of steps must be nonnegative");
  const auto constants = compute_constants(params);
  detail::check_step_preconditions(u0, params, cfg, constants);
  PicardSolver solver(params, cfg, u0.kind(), u0.half_width());
  const auto coeffs = detail::deterministic_coefficients(params);

  Trajectory traj;
  traj.step = cfg.eps;
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.times.reserve(static_cast<std::size_t>(n) + 1);
  traj.states.push_back(u0);
  traj.times.push_back(0.0);
  for (int step = 1; step <= n; ++step) {
    LatticeState next(u0.kind(), u0.half_width());
    try {
      solver.solve(traj.states.back().values(), coeffs, next.values());
    } catch (const NoConvergence& e) {
      throw NoConvergence(std::string(e.what()) + " at step " + std::to_string(step), step);
    }
    traj.states.push_back(std::move(next));
    traj.times.push_back(step * cfg.eps);
  }
  return traj;
}

LatticeState reference_solve(const LatticeState& u0, double t_end, const ModelParams& params,
                             int substeps) {
  detail::check_shape(u0, params);
  if (substeps < 1) throw ParameterError("substeps must be >= 1");
  if (!(t_end >= 0.0)) throw ParameterError("t_end must be nonnegative");
  LatticeState u = u0;
  const std::size_t n = u.size();
  std::vector<Complex> k1(n), k2(n), k3(n), k4(n), tmp(n);
  const auto g = detail::force_on(params, u.half_width());
  const auto coeffs = detail::deterministic_coefficients(params);
  const auto boundary = detail::boundary_of(u.kind());
  const double h = t_end / substeps;
  for (int s = 0; s < substeps; ++s)
    detail::rk4_step(u.values(), h, g, coeffs, boundary, k1, k2, k3, k4, tmp);
  if (!std::isfinite(u.norm_squared())) throw Error("reference integration overflowed");
  return u;
}

LatticeState reference_solve_converged(const LatticeState& u0, double t_end,
                                       const ModelParams& params, double tol,
                                       int initial_substeps) {
  int substeps = std::max(1, initial_substeps);
  LatticeState coarse = reference_solve(u0, t_end, params, substeps);
  for (int attempt = 0; attempt < 16; ++attempt) {
    substeps *= 2;
    LatticeState fine = reference_solve(u0, t_end, params, substeps);
    if (distance(fine, coarse) < tol) return fine;
    coarse = std::move(fine);
  }
  throw NoConvergence("reference integration did not settle under step halving");
}

double one_step_defect(const LatticeState& y, double eps, const ModelParams& params,
                       int substeps, double fp_tol) {
  const LatticeState exact = reference_solve(y, eps, params, substeps);
  IESConfig cfg{eps, fp_tol, 200, false};
  PicardSolver solver(params, cfg, y.kind(), y.half_width());
  LatticeState implicit(y.kind(), y.half_width());
  solver.solve(y.values(), detail::deterministic_coefficients(params), implicit.values());
  return distance(exact, implicit);
}

double global_error(const LatticeState& y, double T, double eps, const ModelParams& params,
                    double fp_tol) {
  if (!(T > 0.0) || !(eps > 0.0)) throw ParameterError("T and eps must be positive");
  const double ratio = T / eps;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    throw ParameterError("eps must divide T");
  const LatticeState exact = reference_solve_converged(y, T, params, 1e-12);

  IESConfig cfg{eps, fp_tol, 200, false};
  PicardSolver solver(params, cfg, y.kind(), y.half_width());
  const auto coeffs = detail::deterministic_coefficients(params);
  LatticeState a = y;
  LatticeState b(y.kind(), y.half_width());
  for (long s = 0; s < n; ++s) {
    solver.solve(a.values(), coeffs, b.values());
    std::swap(a, b);
  }
  return distance(exact, a);
}

double loglog_slope(std::span<const double> eps, std::span<const double> err) {
  if (eps.size() != err.size() || eps.size() < 2)
    throw ParameterError("slope fit needs at least two matching points");
  const std::size_t n = eps.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(eps[i] > 0.0) || !(err[i] > 0.0)) throw ParameterError("slope fit needs positive data");
    mx += std::log(eps[i]);
    my += std::log(err[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(eps[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace cgl
