#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace cgl {

LatticeState::LatticeState(LatticeKind kind, int half_width)
    : kind_(kind), half_width_(half_width) {
  if (half_width < 0) throw DimensionError("lattice half-width must be nonnegative");
  if (kind == LatticeKind::Truncated && half_width < 1)
    throw DimensionError("truncated states need m >= 1");
  values_.assign(static_cast<std::size_t>(2 * half_width + 1), Complex{});
}

LatticeState::LatticeState(LatticeKind kind, int half_width, std::vector<Complex> values)
    : LatticeState(kind, half_width) {
  if (values.size() != values_.size())
    throw DimensionError("expected " + std::to_string(values_.size()) + " entries, got " +
                         std::to_string(values.size()));
  values_ = std::move(values);
}

LatticeState LatticeState::delta(LatticeKind kind, int half_width, int site, Complex value) {
  LatticeState u(kind, half_width);
  u.set(site, value);
  return u;
}

Complex LatticeState::at(int site) const noexcept {
  if (site < -half_width_ || site > half_width_) return {};
  return values_[static_cast<std::size_t>(site + half_width_)];
}

void LatticeState::set(int site, Complex value) {
  if (site < -half_width_ || site > half_width_)
    throw DimensionError("site " + std::to_string(site) + " outside window of half-width " +
                         std::to_string(half_width_));
  values_[static_cast<std::size_t>(site + half_width_)] = value;
}

double LatticeState::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s;
}

double LatticeState::norm() const noexcept { return std::sqrt(norm_squared()); }

double distance(const LatticeState& a, const LatticeState& b) {
  if (!a.same_shape(b)) throw DimensionError("distance between states of different shape");
  double s = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

Complex inner(const LatticeState& a, const LatticeState& b) {
  if (!a.same_shape(b)) throw DimensionError("inner product of states of different shape");
  Complex s{};
  auto x = a.values();
  auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

// ---------------------------------------------------------------------------

ModelParams ModelParams::reference(int window) {
  ModelParams params;
  params.window = window;
  params.g.assign(static_cast<std::size_t>(2 * window + 1), Complex{});
  params.g[static_cast<std::size_t>(window)] = 1.0;
  return params;
}

Complex ModelParams::force(int site) const noexcept {
  if (site < -window || site > window || g.empty()) return {};
  return g[static_cast<std::size_t>(site + window)];
}

void ModelParams::set_force(int site, Complex value) {
  if (site < -window || site > window)
    throw ParameterError("force entry g." + std::to_string(site) + " outside window " +
                         std::to_string(window));
  if (g.size() != static_cast<std::size_t>(2 * window + 1))
    g.assign(static_cast<std::size_t>(2 * window + 1), Complex{});
  g[static_cast<std::size_t>(site + window)] = value;
}

void ModelParams::resize_window(int new_window) {
  if (new_window < 1) throw ParameterError("window must be >= 1");
  std::vector<Complex> resized(static_cast<std::size_t>(2 * new_window + 1), Complex{});
  for (int j = -new_window; j <= new_window; ++j)
    resized[static_cast<std::size_t>(j + new_window)] = force(j);
  window = new_window;
  g = std::move(resized);
}

void ModelParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!(finite(lambda) && finite(mu) && finite(gamma) && finite(beta) && finite(k) &&
        finite(nu) && finite(p) && finite(eta)))
    throw ParameterError("model parameters must be finite");
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
  if (!(k > 0.0)) throw ParameterError("k must be positive");
  if (!(p > 0.0)) throw ParameterError("p must be positive");
  if (!(eta >= 0.0)) throw ParameterError("eta must be nonnegative");
  if (!(gamma > 4.0 * lambda)) throw ParameterError("gamma must exceed 4*lambda");
  if (window < 1) throw ParameterError("window must be >= 1");
  if (g.size() != static_cast<std::size_t>(2 * window + 1))
    throw ParameterError("force g must have 2*window+1 entries");
  for (const auto& v : g)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ParameterError("force g must be finite");
}

double force_l2_norm(const ModelParams& params, int half_width) {
  const int w = half_width < 0 ? params.window : std::min(half_width, params.window);
  double s = 0.0;
  for (int j = -w; j <= w; ++j) s += std::norm(params.force(j));
  return std::sqrt(s);
}

double force_dual_mass(const ModelParams& params, int half_width) {
  const int w = half_width < 0 ? params.window : std::min(half_width, params.window);
  const double q = (params.p + 2.0) / (params.p + 1.0);
  double s = 0.0;
  for (int j = -w; j <= w; ++j) s += std::pow(std::abs(params.force(j)), q);
  return s;
}

double DerivedConstants::bound_m(double r) const noexcept {
  return linear_coeff * r + nonlinear_coeff * std::pow(r, p + 1.0) + g_norm;
}

double DerivedConstants::bound_l(double r) const noexcept {
  return linear_coeff + cp * std::pow(r, p) * nonlinear_coeff;
}

namespace {

DerivedConstants constants_for(const ModelParams& params, int half_width) {
  params.validate();
  DerivedConstants c;
  c.p = params.p;
  c.linear_coeff = 4.0 * params.lambda + 4.0 * std::abs(params.mu) + params.gamma +
                   std::abs(params.beta);
  c.nonlinear_coeff = params.k + std::abs(params.nu);
  // Mean-value bound ||u|^p u - |v|^p v| <= (p+1) max(|u|,|v|)^p |u-v| gives C_0(p) = p+1.
  c.cp = 2.0 * (params.p + 1.0);
  c.c2 = CutoffProfile::lipschitz;
  c.c3 = (params.p + 1.0) / (params.p + 2.0) *
         std::pow(params.k * (params.p + 2.0), -1.0 / (params.p + 1.0));
  c.c1 = c.c3 * force_dual_mass(params, half_width);
  c.r_star = std::sqrt(params.eta + c.c1 / params.dissipation_gap());
  c.g_norm = force_l2_norm(params, -1);
  const double r1 = c.r_star + 1.0;
  c.eps_star = std::min(1.0 / c.bound_m(r1), 1.0 / (1.0 + c.bound_l(r1)));
  return c;
}

}  // namespace

DerivedConstants compute_constants(const ModelParams& params) { return constants_for(params, -1); }

DerivedConstants compute_constants_truncated(const ModelParams& params, int m) {
  if (m < 1) throw DimensionError("truncation needs m >= 1");
  auto c = constants_for(params, m);
  c.eps_star = compute_constants(params).eps_star;
  return c;
}

double CutoffProfile::xi(double s) noexcept {
  if (s <= 1.0) return 0.0;
  if (s >= 2.0) return 1.0;
  const double t = s - 1.0;
  return t * t * (3.0 - 2.0 * t);
}

double CutoffProfile::weight(int site) const noexcept {
  return xi(std::abs(static_cast<double>(site)) / static_cast<double>(l));
}

// ---------------------------------------------------------------------------

namespace detail {

FieldCoefficients deterministic_coefficients(const ModelParams& params) {
  return {Complex(params.lambda, params.mu), -Complex(params.gamma, params.beta),
          -Complex(params.k, params.nu), 1.0, params.p};
}

Boundary boundary_of(LatticeKind kind) noexcept {
  return kind == LatticeKind::Truncated ? Boundary::Periodic : Boundary::ZeroPadded;
}

std::vector<Complex> force_on(const ModelParams& params, int half_width) {
  std::vector<Complex> out(static_cast<std::size_t>(2 * half_width + 1));
  for (int j = -half_width; j <= half_width; ++j)
    out[static_cast<std::size_t>(j + half_width)] = params.force(j);
  return out;
}

void check_shape(const LatticeState& u, const ModelParams& params) {
  if (u.kind() == LatticeKind::FullWindow && u.half_width() != params.window)
    throw DimensionError("full-window state has half-width " + std::to_string(u.half_width()) +
                         " but the model window is " + std::to_string(params.window));
  if (u.kind() == LatticeKind::Truncated && u.half_width() > params.window)
    throw DimensionError("truncation m exceeds the model window");
}

void evaluate_field(std::span<const Complex> u, std::span<const Complex> g,
                    const FieldCoefficients& c, Boundary boundary, std::span<Complex> out) {
  const std::size_t n = u.size();
  const double dr = c.diffusion.real(), di = c.diffusion.imag();
  const double lr = c.linear.real(), li = c.linear.imag();
  const double nr = c.nonlinear.real(), ni = c.nonlinear.imag();
  const double fs = c.forcing_scale;
  const bool quadratic = c.p == 2.0;
  const double half_p = 0.5 * c.p;
  const bool periodic = boundary == Boundary::Periodic;

  // Written with explicit real arithmetic: std::complex products go through
  // the NaN-recovering slow path and dominate the Picard loop otherwise.
  auto site = [&](std::size_t i, Complex left, Complex right) {
    const double ur = u[i].real(), ui = u[i].imag();
    const double lapr = 2.0 * ur - left.real() - right.real();
    const double lapi = 2.0 * ui - left.imag() - right.imag();
    const double mod2 = ur * ur + ui * ui;
    const double w = quadratic ? mod2 : (mod2 > 0.0 ? std::pow(mod2, half_p) : 0.0);
    const double cr = nr * w + lr, ci = ni * w + li;
    out[i] = Complex(dr * lapr - di * lapi + cr * ur - ci * ui + fs * g[i].real(),
                     dr * lapi + di * lapr + cr * ui + ci * ur + fs * g[i].imag());
  };

  if (n == 1) {
    const Complex edge = periodic ? u[0] : Complex{};
    site(0, edge, edge);
    return;
  }
  site(0, periodic ? u[n - 1] : Complex{}, u[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) site(i, u[i - 1], u[i + 1]);
  site(n - 1, u[n - 2], periodic ? u[0] : Complex{});
}

}  // namespace detail

LatticeState apply_laplacian(const LatticeState& u) {
  if (u.kind() != LatticeKind::FullWindow)
    throw DimensionError("apply_laplacian expects a full-window state");
  LatticeState out(u.kind(), u.half_width());
  const int w = u.half_width();
  for (int j = -w; j <= w; ++j) out.set(j, -u.at(j - 1) + 2.0 * u.at(j) - u.at(j + 1));
  return out;
}

LatticeState forward_difference(const LatticeState& u) {
  if (u.kind() != LatticeKind::FullWindow)
    throw DimensionError("forward_difference expects a full-window state");
  const int w = u.half_width() + 1;
  LatticeState out(LatticeKind::FullWindow, w);
  for (int j = -w; j <= w; ++j) out.set(j, u.at(j + 1) - u.at(j));
  return out;
}

LatticeState vector_field(const LatticeState& u, const ModelParams& params) {
  detail::check_shape(u, params);
  LatticeState out(u.kind(), u.half_width());
  const auto g = detail::force_on(params, u.half_width());
  detail::evaluate_field(u.values(), g, detail::deterministic_coefficients(params),
                         detail::boundary_of(u.kind()), out.values());
  return out;
}

double lipschitz_gap(const LatticeState& u, const LatticeState& v, const ModelParams& params) {
  return distance(vector_field(u, params), vector_field(v, params));
}

double tail_mass(const LatticeState& u, const CutoffProfile& cutoff) {
  const int w = u.half_width();
  double s = 0.0;
  for (int j = -w; j <= w; ++j) s += cutoff.weight(j) * std::norm(u.at(j));
  return s;
}

double sharp_tail(const LatticeState& u, int from) {
  const int w = u.half_width();
  double s = 0.0;
  for (int j = -w; j <= w; ++j)
    if (std::abs(j) >= from) s += std::norm(u.at(j));
  return s;
}

}  // namespace cgl
