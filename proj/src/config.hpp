#pragma once

// Flat `key = value` run configuration shared by the CLI and the C API.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "model.hpp"

namespace cgl {

struct RecipeKnobs {
  int n_init = 64;
  int collect = 16;
  int stride = 1;
  std::optional<int> burn_in;
  double burn_target = 1e-6;

  friend bool operator==(const RecipeKnobs&, const RecipeKnobs&) = default;
};

struct RunConfig {
  ModelParams model = ModelParams::reference();

  std::uint64_t seed = 1;
  /// Absolute step; when unset eps = eps_fraction * eps*.
  std::optional<double> eps;
  double eps_fraction = 1.0;
  double fp_tol = 1e-12;
  int fp_max_iter = 200;
  int substeps = 100;

  // error-order
  double T = 1.0;
  std::string u0 = "random";
  std::vector<int> error_k{4, 5, 6, 7, 8, 9};
  int error_samples = 3;

  // attractor
  int invariance_samples = 1000;
  int invariance_steps = 1000;
  RecipeKnobs attractor{64, 16, 1, std::nullopt, 1e-12};
  double attractor_slack = 0.01;
  double zero_tol = 1e-6;
  int tail_from = 32;
  double tail_bound = 1e-8;

  // sweeps
  RecipeKnobs sweep{16, 4, 1, std::nullopt, 1e-6};
  double sweep_m_burn_target = 1e-30;
  std::vector<int> sweep_eps_k{2, 3, 4, 5, 6};
  std::vector<int> sweep_m{4, 8, 16, 32};
  std::vector<double> sweep_a{0.4, 0.2, 0.1, 0.05};
  double slack = 0.10;
  double m_final_bound = 1e-3;
  int noise_m = 16;
  double a_star = 1.0;
  double a_zero_tol = 1e-9;

  // ou-stats
  long ou_samples = 1000000;
  double ou_dt = 1.0;
  std::vector<double> ou_horizons{1e2, 1e3, 1e4};
  double ou_tol = 0.02;

  // radius
  int radius_paths = 100;
  std::vector<double> radius_a{0.01, 0.05, 0.1, 0.2};
  double radius_dt = 1e-4;
  /// Grid step of the Monte Carlo paths.
  double radius_mc_dt = 1e-3;
  double radius_rel_tol = 0.05;
  double radius_exact_tol = 1e-8;

  // output
  std::string output_prefix = "cgl";
  std::string output_format = "csv";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses config text. Relative `g.file` paths resolve against base_dir.
/// Throws ConfigError carrying the line number and key.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Throws ConfigError on invalid parameters or unsorted / empty grids.
void validate_config(const RunConfig& config);

/// Time step selected by the config.
double resolved_eps(const RunConfig& config);

/// `re+imi` / `re-imi` / plain real.
Complex parse_complex(std::string_view text);
std::string format_complex(Complex value);
std::string format_double(double value);

}  // namespace cgl
