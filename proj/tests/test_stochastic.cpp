#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "integrators.hpp"
#include "stochastic.hpp"
#include "support.hpp"
#include "truncated.hpp"

using namespace cgl;
using testing::plain_params;

namespace {

NoiseConfig noise(double a, std::uint64_t seed, double dt) {
  NoiseConfig n;
  n.a = a;
  n.seed = seed;
  n.dt = dt;
  return n;
}

}  // namespace

TEST_SUITE("stochastic") {

TEST_CASE("paths are reproducible and follow the exact recursion") {
  const auto cfg = noise(0.0, 99, 0.05);
  const auto a = sample_ou_path(-20.0, 15.0, cfg);
  const auto b = sample_ou_path(-20.0, 15.0, cfg);
  CHECK(a.z == b.z);
  CHECK(a.innovations == b.innovations);
  CHECK(reconstruct_ou(a) == a.z);
  CHECK(a.size() == 701);
  CHECK(a.start_time() == doctest::Approx(-20.0));
  CHECK(a.end_time() == doctest::Approx(15.0));

  const auto [decay, scale] = ou_transition(0.05);
  const std::size_t k = a.index_of(3.0);
  CHECK(a.z[k + 1] == a.z[k] * decay + scale * a.innovations[k]);
  CHECK(scale * scale == doctest::Approx((1 - std::exp(-0.1)) / 2).epsilon(1e-14));
}

TEST_CASE("sub-windows of one seed see the same path") {
  const auto cfg = noise(0.0, 7, 0.1);
  const auto wide = sample_ou_path(-10.0, 10.0, cfg);
  const auto right = sample_ou_path(2.0, 6.0, cfg);
  const auto left = sample_ou_path(-8.0, -3.0, cfg);
  for (std::size_t i = 0; i < right.size(); ++i) CHECK(right.z[i] == wide.z[wide.index_of(right.times[i])]);
  for (std::size_t i = 0; i < left.size(); ++i) CHECK(left.z[i] == wide.z[wide.index_of(left.times[i])]);
  CHECK(sample_ou_path(-10.0, 10.0, noise(0.0, 8, 0.1)).z != wide.z);
}

TEST_CASE("stationary moments on a moderate sample") {
  const auto path = sample_ou_path(0.0, 200000.0, noise(0.0, 5, 1.0));
  CHECK(sample_variance(path.z) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(autocorrelation(path.z, 1) == doctest::Approx(std::exp(-1.0)).epsilon(0.03));
  CHECK(autocorrelation(path.z, 2) == doctest::Approx(std::exp(-2.0)).epsilon(0.1));
  CHECK_THROWS_AS(sample_ou_path(1.0, 1.0, noise(0.0, 5, 1.0)), ParameterError);
}

TEST_CASE("random field degenerates to the deterministic one") {
  auto p = ModelParams::reference(8);
  std::mt19937_64 rng(79);
  const auto U = testing::random_state(rng, LatticeKind::FullWindow, 8, 1.0);
  CHECK(random_vector_field(U, 0.7, p, 0.0) == vector_field(U, p));
  CHECK(random_vector_field(U, 0.0, p, 0.4) == vector_field(U, p));

  const LatticeState zero(LatticeKind::FullWindow, 8);
  const auto f = random_vector_field(zero, 0.3, p, 0.5);
  for (int j = -8; j <= 8; ++j) CHECK(std::abs(f.at(j) - std::exp(-0.15) * p.force(j)) < 1e-15);

  // Direct evaluation of every term.
  const double a = 0.3, z = -0.8;
  const auto g = random_vector_field(U, z, p, a);
  for (int j = -8; j <= 8; ++j) {
    const Complex lap = -U.at(j - 1) + 2.0 * U.at(j) - U.at(j + 1);
    const Complex expected = Complex(p.lambda, p.mu) * lap - Complex(p.gamma, p.beta) * U.at(j) -
                             Complex(p.k, p.nu) * std::norm(U.at(j)) * U.at(j) * std::exp(p.p * a * z) +
                             std::exp(-a * z) * p.force(j) + a * z * U.at(j);
    CHECK(std::abs(g.at(j) - expected) < 1e-14);
  }
}

TEST_CASE("conjugacy") {
  std::mt19937_64 rng(83);
  const auto u = testing::random_state(rng, LatticeKind::FullWindow, 6, 2.0);
  CHECK(conjugate(u, 1.3, 0.0, ConjugateDirection::ToU) == u);
  const auto U = conjugate(u, 1.3, 0.4, ConjugateDirection::ToU);
  CHECK(U.norm() == doctest::Approx(std::exp(-0.52) * u.norm()).epsilon(1e-15));
  const auto back = conjugate(U, 1.3, 0.4, ConjugateDirection::ToOriginal);
  CHECK(distance(back, u) <= 1e-15 * u.norm() * 4);
}

TEST_CASE("random scheme at zero intensity reproduces the deterministic scheme") {
  const auto p = ModelParams::reference(16);
  const auto c = compute_constants(p);
  IESConfig cfg{c.eps_star};
  std::mt19937_64 rng(89);
  const auto u0 = testing::random_in_ball(rng, LatticeKind::FullWindow, 16, c.r_star);
  const auto path = sample_ou_path(0.0, 100 * c.eps_star, noise(0.0, 3, c.eps_star));
  const auto random = random_ies_trajectory(u0, path, p, cfg, 0.0);
  const auto det = iterate_ies(u0, 100, p, cfg);
  REQUIRE(random.states.size() == det.states.size());
  for (std::size_t i = 0; i < det.states.size(); ++i) CHECK(distance(random.states[i], det.states[i]) <= 1e-12);

  const auto p0 = plain_params(16);
  const LatticeState zero(LatticeKind::FullWindow, 16);
  for (const auto& s : random_ies_trajectory(zero, path, p0, IESConfig{c.eps_star}, 0.5).states) CHECK(s.norm() == 0.0);

  CHECK_THROWS_AS(random_ies_trajectory(u0, sample_ou_path(0.0, 1.0, noise(0.0, 3, 0.5 * c.eps_star)), p, cfg, 0.1),
                  ParameterError);
}

TEST_CASE("discrete energy inequality along random trajectories") {
  // (1 + 2 eps (gamma - 4 lambda - a z_n)) |U_n|^2 <= |U_{n-1}|^2 + 2 eps c3 |g|_q^q e^{-2 a z_n};
  // Young's inequality against k e^{p a z} |U|^{p+2} yields the factor e^{-2 a z}.
  const auto p = ModelParams::reference(16);
  const auto c = compute_constants(p);
  const double eps = c.eps_star, a = 0.5;
  const auto path = sample_ou_path(0.0, 400 * eps, noise(a, 13, eps));
  std::mt19937_64 rng(97);
  const auto traj = random_ies_trajectory(testing::random_in_ball(rng, LatticeKind::FullWindow, 16, c.r_star), path, p,
                                          IESConfig{eps}, a);
  const double mass = force_dual_mass(p);
  for (std::size_t n = 1; n < traj.states.size(); ++n) {
    const double az = a * path.z[n];
    const double lhs = (1 + 2 * eps * (p.dissipation_gap() - az)) * traj.states[n].norm_squared();
    const double rhs = traj.states[n - 1].norm_squared() + 2 * eps * c.c3 * mass * std::exp(-2 * az);
    CHECK(lhs <= rhs + 1e-10);
  }
}

TEST_CASE("pullback solves") {
  const auto p = ModelParams::reference(16);
  const auto c = compute_constants(p);
  IESConfig cfg{c.eps_star};
  std::mt19937_64 rng(101);
  const auto U0 = testing::random_in_ball(rng, LatticeKind::FullWindow, 16, c.r_star);
  const double T = 200 * c.eps_star;
  const auto det = iterate_ies(U0, 200, p, cfg).states.back();

  double prev = std::numeric_limits<double>::infinity();
  for (double a : {0.1, 0.01, 0.001}) {
    const double gap = distance(pullback_solve(U0, T, noise(a, 21, c.eps_star), p, cfg), det);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
  CHECK(pullback_solve(U0, T, noise(0.2, 21, c.eps_star), p, cfg) == pullback_solve(U0, T, noise(0.2, 21, c.eps_star), p, cfg));

  const LatticeState zero(LatticeKind::FullWindow, 16);
  CHECK(pullback_solve(zero, T, noise(0.3, 4, c.eps_star), plain_params(16), cfg).norm() == 0.0);
  const auto truncated = pullback_solve(U0, T, noise(0.0, 4, c.eps_star), p, cfg, 4);
  CHECK(truncated.kind() == LatticeKind::Truncated);
  CHECK(distance(truncated, iterate_truncated_ies(restrict_to(U0, TruncationDim(4)), 200, p, cfg).states.back()) <= 1e-12);
  CHECK_THROWS_AS(pullback_solve(U0, 1.5 * c.eps_star, noise(0.1, 4, c.eps_star), p, cfg), ParameterError);
}

TEST_CASE("absorbing radius") {
  const auto p = ModelParams::reference(8);
  const auto c = compute_constants(p);
  const double S = absorbing_horizon(p);
  CHECK(S == doctest::Approx(10.0 / 1.2 * std::log(1e8)));
  const auto path = sample_ou_path(-S - 1e-3, 0.0, noise(0.0, 1, 1e-3));
  CHECK(absorbing_radius(0.0, path, p) == doctest::Approx(p.eta + c.c1 / p.dissipation_gap()).epsilon(1e-6));

  auto p0 = plain_params(8);
  CHECK(absorbing_radius(0.3, path, p0) == p0.eta);

  const auto short_path = sample_ou_path(-10.0, 0.0, noise(0.0, 1, 1e-2));
  CHECK_THROWS_AS(absorbing_radius(0.1, short_path, p), QuadratureError);
}

TEST_CASE("pullback states of tempered families are absorbed") {
  const auto p = ModelParams::reference(16);
  const auto c = compute_constants(p);
  const double eps = c.eps_star, a = 0.1;
  IESConfig cfg{eps};
  cfg.enforce_eps_star = false;
  const double S = absorbing_horizon(p);
  const long cells = static_cast<long>(std::ceil((S + 1.0) / eps));
  int violations = 0;
  double worst_tail = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto path = sample_ou_path(-cells * eps, 0.0, noise(a, seed, eps));
    const double R = absorbing_radius(a, path, p);
    std::mt19937_64 rng(seed);
    for (long steps : {1500L, 3000L}) {
      const double T = steps * eps;
      // Initial norm grows polynomially with the pullback time.
      const auto U0 = testing::random_state(rng, LatticeKind::FullWindow, 16, c.r_star * std::sqrt(1.0 + 0.01 * T));
      const auto U = pullback_along(U0, T, path, p, cfg, a);
      if (U.norm_squared() > R * (1 + 1e-3)) ++violations;
      worst_tail = std::max(worst_tail, sharp_tail(U, 12));
    }
  }
  CHECK(violations == 0);
  CHECK(worst_tail <= 1e-8);
}

}  // TEST_SUITE
