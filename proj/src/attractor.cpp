#include "attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stochastic.hpp"
#include "truncated.hpp"

namespace cgl {

std::string to_string(SystemVariant variant) {
  switch (variant) {
    case SystemVariant::ContinuousRef: return "continuous-ref";
    case SystemVariant::IES: return "ies";
    case SystemVariant::TruncatedIES: return "truncated-ies";
    case SystemVariant::TruncatedRef: return "truncated-ref";
    case SystemVariant::RandomPullback: return "random-pullback";
    case SystemVariant::TruncatedRandomPullback: return "truncated-random-pullback";
  }
  return "unknown";
}

bool is_truncated(SystemVariant v) noexcept {
  return v == SystemVariant::TruncatedIES || v == SystemVariant::TruncatedRef ||
         v == SystemVariant::TruncatedRandomPullback;
}

bool is_random(SystemVariant v) noexcept {
  return v == SystemVariant::RandomPullback || v == SystemVariant::TruncatedRandomPullback;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Epsilon: return "epsilon";
    case SweepAxis::Dimension: return "dimension";
    case SweepAxis::Noise: return "noise";
    case SweepAxis::NoiseToNoise: return "noise-to-noise";
    case SweepAxis::EpsToEps: return "eps-to-eps";
  }
  return "unknown";
}

void CloudRecipe::validate() const {
  if (n_init < 1) throw ConfigError("recipe n_init must be >= 1");
  if (collect < 1) throw ConfigError("recipe collect must be >= 1");
  if (stride < 1) throw ConfigError("recipe stride must be >= 1");
  if (burn_in && *burn_in < 0) throw ConfigError("recipe burn_in must be >= 0");
  if (!(burn_target > 0.0 && burn_target < 1.0))
    throw ConfigError("recipe burn_target must lie in (0, 1)");
}

int default_burn_in(const ModelParams& params, double eps, double target) {
  const double rate = std::log1p(2.0 * eps * params.dissipation_gap());
  return static_cast<int>(std::ceil(std::log(1.0 / target) / rate));
}

LatticeState sample_in_ball(std::uint64_t seed, std::uint64_t member, int window, double radius) {
  auto rng = make_rng(seed, streams::initial_states, member);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  LatticeState u(LatticeKind::FullWindow, window);
  for (auto& v : u.values()) {
    const double re = normal(rng);
    v = Complex(re, normal(rng));
  }
  const double n = u.norm();
  const double r = radius * std::sqrt(uniform(rng));
  if (n > 0.0)
    for (auto& v : u.values()) v *= r / n;
  return u;
}

namespace {

void check_knobs(SystemVariant variant, const ModelParams& params, const CloudKnobs& knobs) {
  if (!(knobs.eps > 0.0)) throw ConfigError("cloud knob eps must be positive");
  if (is_truncated(variant)) {
    if (!knobs.m) throw ConfigError(to_string(variant) + " needs the truncation m");
    if (*knobs.m < 1 || *knobs.m > params.window)
      throw ConfigError("truncation m must satisfy 1 <= m <= window");
  } else if (knobs.m) {
    throw ConfigError(to_string(variant) + " does not take a truncation m");
  }
  if (!is_random(variant) && knobs.a != 0.0)
    throw ConfigError(to_string(variant) + " is deterministic; noise intensity must be 0");
  if (knobs.a < 0.0) throw ConfigError("noise intensity must be nonnegative");
  if (knobs.substeps < 1) throw ConfigError("substeps must be >= 1");
}

LatticeState initial_member(SystemVariant variant, const ModelParams& params,
                            const CloudKnobs& knobs, double radius, std::size_t member) {
  LatticeState u = sample_in_ball(knobs.seed, member, params.window, radius);
  if (is_truncated(variant)) return restrict_to(u, TruncationDim(*knobs.m));
  return u;
}

// Forward orbit of one member for the deterministic variants.
void forward_member(SystemVariant variant, const ModelParams& params, const CloudKnobs& knobs,
                    int burn_in, int collect, int stride, LatticeState state,
                    std::span<LatticeState> out) {
  const std::size_t n = state.size();
  const bool continuous =
      variant == SystemVariant::ContinuousRef || variant == SystemVariant::TruncatedRef;
  const auto coeffs = detail::deterministic_coefficients(params);
  const auto boundary = detail::boundary_of(state.kind());
  const auto g = detail::force_on(params, state.half_width());
  std::vector<Complex> scratch(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
  IESConfig cfg{knobs.eps, knobs.fp_tol, knobs.fp_max_iter, false};
  std::optional<PicardSolver> solver;
  if (!continuous) solver.emplace(params, cfg, state.kind(), state.half_width());
  const double h = knobs.eps / knobs.substeps;

  auto advance = [&](int steps) {
    for (int s = 0; s < steps; ++s) {
      if (continuous) {
        for (int sub = 0; sub < knobs.substeps; ++sub)
          detail::rk4_step(state.values(), h, g, coeffs, boundary, k1, k2, k3, k4, tmp);
      } else {
        solver->solve(state.values(), coeffs, scratch);
        std::copy(scratch.begin(), scratch.end(), state.values().begin());
      }
    }
  };

  advance(burn_in);
  for (int c = 0; c < collect; ++c) {
    if (c > 0) advance(stride);
    out[static_cast<std::size_t>(c)] = state;
  }
  if (continuous && !std::isfinite(state.norm_squared()))
    throw Error("reference integration overflowed while building a cloud");
}

}  // namespace

PointCloud build_attractor_cloud(SystemVariant variant, const ModelParams& params,
                                 const CloudRecipe& recipe, const CloudKnobs& knobs) {
  params.validate();
  recipe.validate();
  check_knobs(variant, params, knobs);
  const auto constants = compute_constants(params);
  const int burn_in = recipe.burn_in.value_or(default_burn_in(params, knobs.eps, recipe.burn_target));

  PointCloud cloud;
  cloud.meta = {variant,        knobs.eps,      knobs.m,        knobs.a,      knobs.seed,
                recipe.n_init,  burn_in,        recipe.collect, recipe.stride};
  const auto members = static_cast<std::size_t>(recipe.n_init);
  const auto collect = static_cast<std::size_t>(recipe.collect);
  cloud.points.resize(members * collect);

  if (!is_random(variant)) {
    parallel_for(members, [&](std::size_t i) {
      forward_member(variant, params, knobs, burn_in, recipe.collect, recipe.stride,
                     initial_member(variant, params, knobs, constants.r_star, i),
                     std::span(cloud.points).subspan(i * collect, collect));
    });
    return cloud;
  }

  // Pullback: one omega for the whole cloud; the c-th kept point of a member
  // starts (burn_in + c * stride) steps before time 0.
  const long longest = burn_in + static_cast<long>(recipe.collect - 1) * recipe.stride;
  NoiseConfig noise{knobs.a, std::max(1.0, knobs.a), knobs.seed, knobs.eps};
  const OUPath path = longest > 0 ? sample_ou_path(-static_cast<double>(longest) * knobs.eps,
                                                   0.0, noise)
                                  : sample_ou_path(-knobs.eps, 0.0, noise);
  const std::size_t zero = path.size() - 1;
  IESConfig cfg{knobs.eps, knobs.fp_tol, knobs.fp_max_iter, false};

  parallel_for(members, [&](std::size_t i) {
    const LatticeState start = initial_member(variant, params, knobs, constants.r_star, i);
    PicardSolver solver(params, cfg, start.kind(), start.half_width());
    std::vector<Complex> scratch(start.size());
    for (std::size_t c = 0; c < collect; ++c) {
      const std::size_t back = static_cast<std::size_t>(burn_in) + c * static_cast<std::size_t>(recipe.stride);
      LatticeState state = start;
      detail::integrate_random(state.values(), path, zero - back, solver, params, knobs.a, scratch);
      cloud.points[i * collect + c] = std::move(state);
    }
  });
  return cloud;
}

double hausdorff_semi(const PointCloud& A, const PointCloud& B) {
  if (A.points.empty() || B.points.empty()) throw DimensionError("Hausdorff distance of an empty cloud");
  const auto& shape = A.points.front();
  for (const auto* cloud : {&A, &B})
    for (const auto& p : cloud->points)
      if (!p.same_shape(shape))
        throw DimensionError("clouds must share one dimension; null-expand truncated clouds first");

  std::vector<double> row_min(A.points.size());
  parallel_for(A.points.size(), [&](std::size_t i) {
    const auto a = A.points[i].values();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : B.points) {
      const auto b = q.values();
      double s = 0.0;
      std::size_t j = 0;
      for (; j < a.size(); ++j) {
        s += std::norm(a[j] - b[j]);
        if (s >= best) break;
      }
      if (j == a.size() && s < best) best = s;
    }
    row_min[i] = best;
  });
  return std::sqrt(*std::max_element(row_min.begin(), row_min.end()));
}

double hausdorff_full(const PointCloud& A, const PointCloud& B) {
  return std::max(hausdorff_semi(A, B), hausdorff_semi(B, A));
}

double cloud_norm(const PointCloud& A) {
  if (A.points.empty()) throw DimensionError("norm of an empty cloud");
  double best = 0.0;
  for (const auto& p : A.points) best = std::max(best, p.norm());
  return best;
}

double cloud_diameter(const PointCloud& A) {
  double best = 0.0;
  for (std::size_t i = 0; i < A.points.size(); ++i)
    for (std::size_t j = i + 1; j < A.points.size(); ++j)
      best = std::max(best, distance(A.points[i], A.points[j]));
  return best;
}

PointCloud null_expanded(const PointCloud& cloud, int J) {
  PointCloud out;
  out.meta = cloud.meta;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points)
    out.points.push_back(p.kind() == LatticeKind::Truncated ? null_expansion(p, J) : p);
  return out;
}

PointCloud advance_cloud(const PointCloud& cloud, const ModelParams& params, const IESConfig& cfg) {
  PointCloud out = cloud;
  parallel_for(cloud.points.size(), [&](std::size_t i) {
    const auto& p = cloud.points[i];
    PicardSolver solver(params, cfg, p.kind(), p.half_width());
    solver.solve(p.values(), detail::deterministic_coefficients(params), out.points[i].values());
  });
  return out;
}

double collection_spacing(const PointCloud& cloud) {
  const std::size_t collect = static_cast<std::size_t>(std::max(1, cloud.meta.collect));
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < cloud.points.size(); ++i)
    if ((i + 1) % collect != 0) best = std::max(best, distance(cloud.points[i], cloud.points[i + 1]));
  return best;
}

bool nonincreasing_within(std::span<const double> values, double slack) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (values[i + 1] > (1.0 + slack) * values[i]) return false;
  return true;
}

namespace {

long integer_ratio(double big, double small) {
  const double q = big / small;
  const long n = std::lround(q);
  if (n < 1 || std::abs(q - static_cast<double>(n)) > 1e-9 * q)
    throw ConfigError("epsilon grid values must divide the coarsest step");
  return n;
}

}  // namespace

std::vector<SweepRow> convergence_sweep(const ModelParams& params, const SweepSpec& spec,
                                        const CloudRecipe& recipe) {
  if (spec.grid.empty()) throw ConfigError("sweep grid must be nonempty");
  recipe.validate();
  const auto& fixed = spec.fixed;
  const int J = params.window;
  std::vector<SweepRow> rows;

  auto distance_to = [&](const PointCloud& moving, const PointCloud& reference) {
    return hausdorff_semi(null_expanded(moving, J), null_expanded(reference, J));
  };

  switch (spec.axis) {
    case SweepAxis::Epsilon: {
      const double eps_ref = spec.grid.front();
      CloudKnobs ref_knobs = fixed;
      ref_knobs.eps = eps_ref;
      CloudRecipe ref_recipe = recipe;
      ref_recipe.burn_in = recipe.burn_in.value_or(default_burn_in(params, eps_ref, recipe.burn_target));
      const auto reference = build_attractor_cloud(
          fixed.m ? SystemVariant::TruncatedRef : SystemVariant::ContinuousRef, params, ref_recipe,
          ref_knobs);
      for (double eps : spec.grid) {
        const long q = integer_ratio(eps_ref, eps);
        CloudKnobs knobs = fixed;
        knobs.eps = eps;
        CloudRecipe r = ref_recipe;
        r.burn_in = static_cast<int>(*ref_recipe.burn_in * q);
        r.stride = static_cast<int>(ref_recipe.stride * q);
        const auto moving = build_attractor_cloud(
            fixed.m ? SystemVariant::TruncatedIES : SystemVariant::IES, params, r, knobs);
        rows.push_back({eps, distance_to(moving, reference)});
      }
      break;
    }
    case SweepAxis::EpsToEps: {
      const double eps0 = spec.anchor;
      if (!(eps0 > 0.0)) throw ConfigError("eps-to-eps sweep needs a positive anchor eps_0");
      CloudKnobs ref_knobs = fixed;
      ref_knobs.eps = eps0;
      CloudRecipe ref_recipe = recipe;
      ref_recipe.burn_in = recipe.burn_in.value_or(default_burn_in(params, eps0, recipe.burn_target));
      const auto variant = fixed.m ? SystemVariant::TruncatedIES : SystemVariant::IES;
      const auto reference = build_attractor_cloud(variant, params, ref_recipe, ref_knobs);
      for (double eps : spec.grid) {
        CloudKnobs knobs = fixed;
        knobs.eps = eps;
        CloudRecipe r = ref_recipe;
        r.burn_in = static_cast<int>(std::lround(*ref_recipe.burn_in * eps0 / eps));
        r.stride = std::max(1, static_cast<int>(std::lround(ref_recipe.stride * eps0 / eps)));
        rows.push_back({eps, distance_to(build_attractor_cloud(variant, params, r, knobs), reference)});
      }
      break;
    }
    case SweepAxis::Dimension: {
      const bool random = fixed.a != 0.0;
      CloudKnobs ref_knobs = fixed;
      ref_knobs.m.reset();
      const auto reference = build_attractor_cloud(
          random ? SystemVariant::RandomPullback : SystemVariant::IES, params, recipe, ref_knobs);
      for (double mv : spec.grid) {
        CloudKnobs knobs = fixed;
        knobs.m = static_cast<int>(std::lround(mv));
        const auto moving = build_attractor_cloud(
            random ? SystemVariant::TruncatedRandomPullback : SystemVariant::TruncatedIES, params,
            recipe, knobs);
        rows.push_back({mv, distance_to(moving, reference)});
      }
      break;
    }
    case SweepAxis::Noise:
    case SweepAxis::NoiseToNoise: {
      const auto random_variant =
          fixed.m ? SystemVariant::TruncatedRandomPullback : SystemVariant::RandomPullback;
      CloudKnobs ref_knobs = fixed;
      PointCloud reference;
      if (spec.axis == SweepAxis::Noise) {
        ref_knobs.a = 0.0;
        reference = build_attractor_cloud(
            fixed.m ? SystemVariant::TruncatedIES : SystemVariant::IES, params, recipe, ref_knobs);
      } else {
        ref_knobs.a = spec.anchor;
        reference = build_attractor_cloud(random_variant, params, recipe, ref_knobs);
      }
      for (double a : spec.grid) {
        CloudKnobs knobs = fixed;
        knobs.a = a;
        rows.push_back({a, distance_to(build_attractor_cloud(random_variant, params, recipe, knobs),
                                       reference)});
      }
      break;
    }
  }
  return rows;
}

}  // namespace cgl
