#pragma once

// Finite point-cloud stand-ins for the global, numerical, truncated and random
// attractors, Hausdorff distances between them, and convergence sweeps.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "integrators.hpp"
#include "model.hpp"

namespace cgl {

enum class SystemVariant {
  ContinuousRef,
  IES,
  TruncatedIES,
  TruncatedRef,
  RandomPullback,
  TruncatedRandomPullback,
};

std::string to_string(SystemVariant variant);
bool is_truncated(SystemVariant variant) noexcept;
bool is_random(SystemVariant variant) noexcept;

struct CloudMeta {
  SystemVariant variant = SystemVariant::IES;
  double eps = 0.0;
  std::optional<int> m;
  double a = 0.0;
  std::uint64_t seed = 0;
  int n_init = 0;
  int burn_in = 0;
  int collect = 0;
  int stride = 1;
};

struct PointCloud {
  /// Member-major: points[member * collect + c].
  std::vector<LatticeState> points;
  CloudMeta meta;
};

struct CloudRecipe {
  int n_init = 64;
  /// Steps discarded; derived from burn_target when unset.
  std::optional<int> burn_in;
  int collect = 16;
  /// Steps between two kept iterates.
  int stride = 1;
  /// Squared-norm contraction the derived burn-in must achieve.
  double burn_target = 1e-6;

  void validate() const;
};

struct CloudKnobs {
  double eps = 0.0;
  std::optional<int> m;
  double a = 0.0;
  std::uint64_t seed = 0;
  /// RK4 substeps per eps for the continuous variants.
  int substeps = 100;
  double fp_tol = 1e-12;
  int fp_max_iter = 200;
};

/// ceil(ln(1/target) / ln(1 + 2 eps (gamma - 4 lambda))): steps after which the
/// discrete energy estimate has contracted squared norms by `target`.
int default_burn_in(const ModelParams& params, double eps, double target = 1e-6);

/// Gaussian direction, radius radius * sqrt(v) with v uniform on [0, 1).
LatticeState sample_in_ball(std::uint64_t seed, std::uint64_t member, int window, double radius);

PointCloud build_attractor_cloud(SystemVariant variant, const ModelParams& params,
                                 const CloudRecipe& recipe, const CloudKnobs& knobs);

/// d(A, B) = max over a in A of min over b in B of ||a - b||.
double hausdorff_semi(const PointCloud& A, const PointCloud& B);
/// max(d(A, B), d(B, A)).
double hausdorff_full(const PointCloud& A, const PointCloud& B);
/// max point norm, i.e. the full distance to {0}.
double cloud_norm(const PointCloud& A);
double cloud_diameter(const PointCloud& A);

/// Null-expands every point of a truncated cloud into the window J.
PointCloud null_expanded(const PointCloud& cloud, int J);

/// Applies one deterministic implicit step to every point (S_eps A).
PointCloud advance_cloud(const PointCloud& cloud, const ModelParams& params, const IESConfig& cfg);

/// Largest distance between two consecutive kept iterates of one member.
double collection_spacing(const PointCloud& cloud);

enum class SweepAxis { Epsilon, Dimension, Noise, NoiseToNoise, EpsToEps };

std::string to_string(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Epsilon;
  /// Sorted toward the limit: eps decreasing, m increasing, a decreasing.
  std::vector<double> grid;
  /// eps, seed and solver settings; m selects truncated variants where the
  /// axis allows it; a > 0 on the Dimension axis compares random clouds.
  CloudKnobs fixed;
  /// eps_0 for EpsToEps, a_0 for NoiseToNoise.
  double anchor = 0.0;
};

struct SweepRow {
  double knob = 0.0;
  double distance = 0.0;
};

/// For every grid value builds the moving cloud and reports its semi-distance
/// to the axis' reference cloud. All clouds share seed and initial ensemble;
/// on the Epsilon and EpsToEps axes burn-in and stride are rescaled so every
/// cloud is sampled at the same physical times.
std::vector<SweepRow> convergence_sweep(const ModelParams& params, const SweepSpec& spec,
                                        const CloudRecipe& recipe);

/// values[i+1] <= (1 + slack) * values[i] for every i.
bool nonincreasing_within(std::span<const double> values, double slack);

}  // namespace cgl
