#pragma once

#include <cmath>
#include <random>

#include "model.hpp"

namespace testing {

// Gaussian direction scaled to the requested norm.
inline cgl::LatticeState random_state(std::mt19937_64& rng, cgl::LatticeKind kind, int half_width,
                                      double norm) {
  std::normal_distribution<double> normal(0.0, 1.0);
  cgl::LatticeState u(kind, half_width);
  for (auto& v : u.values()) {
    const double re = normal(rng);
    v = cgl::Complex(re, normal(rng));
  }
  const double n = u.norm();
  for (auto& v : u.values()) v *= norm / n;
  return u;
}

inline cgl::LatticeState random_in_ball(std::mt19937_64& rng, cgl::LatticeKind kind, int half_width,
                                        double radius) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  return random_state(rng, kind, half_width, radius * uniform(rng));
}

// Parameters of the hand-worked examples: real coefficients, no force.
inline cgl::ModelParams plain_params(int window) {
  cgl::ModelParams p = cgl::ModelParams::reference(window);
  p.mu = 0.0;
  p.beta = 0.0;
  p.nu = 0.0;
  std::fill(p.g.begin(), p.g.end(), cgl::Complex{});
  return p;
}

// Root of a x^3 + b x = c (a, b > 0) by bisection in long double.
inline double cubic_root(long double a, long double b, long double c) {
  long double lo = 0.0L, hi = c / b + 1.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (a * mid * mid * mid + b * mid < c)
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

}  // namespace testing
