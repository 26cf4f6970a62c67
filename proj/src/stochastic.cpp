#include "stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "rng.hpp"

namespace cgl {

void NoiseConfig::validate() const {
  if (!(a >= 0.0) || !(a <= a_star))
    throw ParameterError("noise intensity must satisfy 0 <= a <= a_star");
  if (!(dt > 0.0)) throw ParameterError("path step dt must be positive");
}

std::size_t OUPath::index_of(double t) const {
  const double pos = t / dt - static_cast<double>(first_index);
  const long i = std::lround(pos);
  if (i < 0 || static_cast<std::size_t>(i) >= z.size() || std::abs(pos - i) > 1e-6)
    throw ParameterError("time " + std::to_string(t) + " is not a grid point of the path");
  return static_cast<std::size_t>(i);
}

OUPath OUPath::antithetic() const {
  OUPath out = *this;
  for (auto& v : out.z) v = -v;
  for (auto& v : out.innovations) v = -v;
  return out;
}

OUTransition ou_transition(double dt) {
  return {std::exp(-dt), std::sqrt(-std::expm1(-2.0 * dt) / 2.0)};
}

OUPath sample_ou_path(double t_begin, double t_end, const NoiseConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ParameterError("path step dt must be positive");
  const long i_begin = std::lround(t_begin / cfg.dt);
  const long i_end = std::lround(t_end / cfg.dt);
  if (!(i_begin < i_end)) throw ParameterError("path window must satisfy t_begin < t_end");

  const auto [decay, scale] = ou_transition(cfg.dt);
  const long anchor = std::clamp(0L, i_begin, i_end);
  const std::size_t n = static_cast<std::size_t>(i_end - i_begin);

  OUPath path;
  path.dt = cfg.dt;
  path.first_index = i_begin;
  path.anchor = static_cast<std::size_t>(anchor - i_begin);
  path.z.assign(n + 1, 0.0);
  path.innovations.assign(n, 0.0);
  path.times.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    path.times[i] = static_cast<double>(i_begin + static_cast<long>(i)) * cfg.dt;

  // One distribution per stream: libstdc++ caches the second variate of a pair.
  auto anchor_rng = make_rng(cfg.seed, streams::ou_anchor);
  double z0 = std::normal_distribution<double>(0.0, 1.0)(anchor_rng) * std::sqrt(0.5);

  auto store = [&](long global, double value) {
    if (global >= i_begin && global <= i_end)
      path.z[static_cast<std::size_t>(global - i_begin)] = value;
  };
  auto store_innovation = [&](long cell, double xi) {
    if (cell >= i_begin && cell < i_end)
      path.innovations[static_cast<std::size_t>(cell - i_begin)] = xi;
  };

  store(0, z0);
  if (i_end > 0) {
    auto rng = make_rng(cfg.seed, streams::ou_forward);
    std::normal_distribution<double> normal(0.0, 1.0);
    double z = z0;
    for (long i = 0; i < i_end; ++i) {
      const double xi = normal(rng);
      z = z * decay + scale * xi;
      store_innovation(i, xi);
      store(i + 1, z);
    }
  }
  if (i_begin < 0) {
    auto rng = make_rng(cfg.seed, streams::ou_backward);
    std::normal_distribution<double> normal(0.0, 1.0);
    double z = z0;
    for (long i = 0; i > i_begin; --i) {
      const double xi = normal(rng);
      z = z * decay + scale * xi;
      store_innovation(i - 1, xi);
      store(i - 1, z);
    }
  }
  return path;
}

std::vector<double> reconstruct_ou(const OUPath& path) {
  const auto [decay, scale] = ou_transition(path.dt);
  std::vector<double> z(path.z.size(), 0.0);
  z[path.anchor] = path.z[path.anchor];
  for (std::size_t i = path.anchor; i + 1 < z.size(); ++i)
    z[i + 1] = z[i] * decay + scale * path.innovations[i];
  for (std::size_t i = path.anchor; i > 0; --i)
    z[i - 1] = z[i] * decay + scale * path.innovations[i - 1];
  return z;
}

namespace detail {

FieldCoefficients random_coefficients(const ModelParams& params, double a, double z_val) {
  auto c = deterministic_coefficients(params);
  const double az = a * z_val;
  c.linear += Complex(az, 0.0);
  c.nonlinear *= std::exp(params.p * az);
  c.forcing_scale = std::exp(-az);
  return c;
}

void integrate_random(std::span<Complex> state, const OUPath& path, std::size_t from,
                      PicardSolver& solver, const ModelParams& params, double a,
                      std::span<Complex> scratch) {
  for (std::size_t i = from; i + 1 < path.size(); ++i) {
    const auto coeffs = random_coefficients(params, a, path.z[i + 1]);
    solver.solve(state, coeffs, scratch);
    std::copy(scratch.begin(), scratch.end(), state.begin());
  }
}

}  // namespace detail

LatticeState random_vector_field(const LatticeState& U, double z_val, const ModelParams& params,
                                 double a) {
  detail::check_shape(U, params);
  LatticeState out(U.kind(), U.half_width());
  const auto g = detail::force_on(params, U.half_width());
  detail::evaluate_field(U.values(), g, detail::random_coefficients(params, a, z_val),
                         detail::boundary_of(U.kind()), out.values());
  return out;
}

namespace {

void check_path_step(const OUPath& path, const IESConfig& cfg) {
  if (std::abs(path.dt - cfg.eps) > 1e-12 * cfg.eps)
    throw ParameterError("path grid step must equal the implicit Euler step");
}

void check_random_preconditions(const LatticeState& U0, const ModelParams& params,
                                const IESConfig& cfg) {
  cfg.validate();
  detail::check_shape(U0, params);
  if (cfg.enforce_eps_star) {
    const double eps_star = compute_constants(params).eps_star;
    if (cfg.eps > eps_star * (1.0 + 1e-12))
      throw ParameterError("eps exceeds eps*; reduce the step");
  }
}

}  // namespace

Trajectory random_ies_trajectory(const LatticeState& U0, const OUPath& path,
                                 const ModelParams& params, const IESConfig& cfg, double a) {
  check_random_preconditions(U0, params, cfg);
  check_path_step(path, cfg);
  PicardSolver solver(params, cfg, U0.kind(), U0.half_width());
  Trajectory traj;
  traj.step = cfg.eps;
  traj.times = path.times;
  traj.states.reserve(path.size());
  traj.states.push_back(U0);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    LatticeState next(U0.kind(), U0.half_width());
    try {
      solver.solve(traj.states.back().values(), detail::random_coefficients(params, a, path.z[i + 1]),
                   next.values());
    } catch (const NoConvergence& e) {
      throw NoConvergence(std::string(e.what()) + " at step " + std::to_string(i + 1) +
                              "; reduce eps or a",
                          static_cast<long>(i + 1));
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

LatticeState conjugate(const LatticeState& state, double z_val, double a,
                       ConjugateDirection direction) {
  const double factor =
      std::exp(direction == ConjugateDirection::ToU ? -a * z_val : a * z_val);
  LatticeState out = state;
  for (auto& v : out.values()) v *= factor;
  return out;
}

LatticeState pullback_along(const LatticeState& U0, double T_back, const OUPath& path,
                            const ModelParams& params, const IESConfig& cfg, double a) {
  check_random_preconditions(U0, params, cfg);
  check_path_step(path, cfg);
  if (!(T_back > 0.0)) throw ParameterError("pullback time must be positive");
  const std::size_t from = path.index_of(-T_back);
  const std::size_t zero = path.index_of(0.0);
  if (zero + 1 != path.size()) throw ParameterError("pullback path must end at time 0");
  PicardSolver solver(params, cfg, U0.kind(), U0.half_width());
  LatticeState state = U0;
  std::vector<Complex> scratch(state.size());
  detail::integrate_random(state.values(), path, from, solver, params, a, scratch);
  return state;
}

LatticeState pullback_solve(const LatticeState& U0, double T_back, const NoiseConfig& noise,
                            const ModelParams& params, const IESConfig& cfg,
                            std::optional<int> m) {
  noise.validate();
  if (!(T_back > 0.0)) throw ParameterError("pullback time must be positive");
  const double steps = T_back / cfg.eps;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
    throw ParameterError("pullback time must be a multiple of eps");
  LatticeState start = U0;
  if (m) {
    if (U0.kind() == LatticeKind::FullWindow) {
      if (U0.half_width() < *m) throw DimensionError("window smaller than truncation m");
      LatticeState z(LatticeKind::Truncated, *m);
      for (int j = -*m; j <= *m; ++j) z.set(j, U0.at(j));
      start = std::move(z);
    } else if (U0.half_width() != *m) {
      throw DimensionError("truncated initial state does not match m");
    }
  }
  NoiseConfig path_cfg = noise;
  path_cfg.dt = cfg.eps;
  const OUPath path = sample_ou_path(-T_back, 0.0, path_cfg);
  return pullback_along(start, T_back, path, params, cfg, noise.a);
}

double absorbing_horizon(const ModelParams& params) {
  const double rate = 2.0 * params.gamma - 8.0 * params.lambda;
  return std::max(10.0 / rate * std::log(1e8), 50.0);
}

double absorbing_radius(double a, const OUPath& path, const ModelParams& params) {
  const auto constants = compute_constants(params);
  const double S = absorbing_horizon(params);
  const double dt = path.dt;
  if (path.start_time() > -S + 0.5 * dt || path.end_time() < -0.5 * dt)
    throw QuadratureError("path must cover [-S, 0] with S = " + std::to_string(S) +
                          " for the absorbing radius");
  const std::size_t zero = path.index_of(0.0);
  const std::size_t cells = static_cast<std::size_t>(std::ceil(S / dt - 1e-9));
  if (cells > zero) throw QuadratureError("path does not reach back to -S");

  const double rate = 8.0 * params.lambda - 2.0 * params.gamma;
  auto integrand = [&](std::size_t i, double inner) {
    const double s = path.times[i];
    return std::exp(-a * path.z[i] - 2.0 * a * inner - rate * s);
  };
  // inner(s) = int_0^s z dh, accumulated backward from 0 by the trapezoid rule.
  double inner = 0.0;
  double prev = integrand(zero, inner);
  double integral = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t i = zero - c - 1;
    inner -= 0.5 * dt * (path.z[i] + path.z[i + 1]);
    const double cur = integrand(i, inner);
    integral += 0.5 * dt * (prev + cur);
    prev = cur;
  }
  if (!std::isfinite(integral)) throw QuadratureError("absorbing-radius integral diverged");
  return params.eta + 2.0 * constants.c3 * force_dual_mass(params) * integral;
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ParameterError("variance needs at least two samples");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s / static_cast<double>(xs.size() - 1);
}

double autocorrelation(std::span<const double> xs, std::size_t lag) {
  if (xs.size() <= lag + 1) throw ParameterError("series too short for the requested lag");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    den += (xs[i] - mean) * (xs[i] - mean);
    if (i + lag < xs.size()) num += (xs[i] - mean) * (xs[i + lag] - mean);
  }
  return num / den;
}

}  // namespace cgl
