#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stochastic.hpp"
#include "truncated.hpp"

namespace cgl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string kv(std::string_view name, double value) {
  return std::string(name) + "=" + format_double(value);
}

std::string at_most(double bound) { return "<=" + format_double(bound); }

class Recorder {
 public:
  explicit Recorder(ExperimentResult& result) : result_(result) {}

  void add(std::string knob, double value, std::string measure, std::string bound, bool pass) {
    result_.records.push_back({result_.experiment, std::move(knob), value, std::move(measure),
                               std::move(bound), pass, seconds_since(t0_)});
    t0_ = Clock::now();
  }

  void restart() { t0_ = Clock::now(); }

 private:
  ExperimentResult& result_;
  Clock::time_point t0_ = Clock::now();
};

IESConfig ies_config(const RunConfig& c, double eps) {
  return IESConfig{eps, c.fp_tol, c.fp_max_iter, true};
}

CloudRecipe recipe_of(const RecipeKnobs& k) {
  CloudRecipe r;
  r.n_init = k.n_init;
  r.collect = k.collect;
  r.stride = k.stride;
  r.burn_in = k.burn_in;
  r.burn_target = k.burn_target;
  return r;
}

CloudKnobs knobs_of(const RunConfig& c, double eps) {
  CloudKnobs k;
  k.eps = eps;
  k.seed = c.seed;
  k.substeps = c.substeps;
  k.fp_tol = c.fp_tol;
  k.fp_max_iter = c.fp_max_iter;
  return k;
}

// Independent long-double evaluation of the absorbing-ball constants.
struct Recomputed {
  long double c1, c3, r_star, eps_star, m_next, l_next;
};

Recomputed recompute(const ModelParams& P) {
  const long double p = P.p;
  const long double q = (p + 2) / (p + 1);
  long double mass = 0, norm2 = 0;
  for (const auto& v : P.g) {
    const long double m = std::hypot(static_cast<long double>(v.real()), static_cast<long double>(v.imag()));
    mass += std::pow(m, q);
    norm2 += m * m;
  }
  const long double c3 = (p + 1) / (p + 2) * std::pow(static_cast<long double>(P.k) * (p + 2), -1 / (p + 1));
  const long double c1 = c3 * mass;
  const long double gap = static_cast<long double>(P.gamma) - 4 * static_cast<long double>(P.lambda);
  const long double r = std::sqrt(static_cast<long double>(P.eta) + c1 / gap);
  const long double lin = 4 * static_cast<long double>(P.lambda) + 4 * std::fabs(static_cast<long double>(P.mu)) +
                          P.gamma + std::fabs(static_cast<long double>(P.beta));
  const long double nl = static_cast<long double>(P.k) + std::fabs(static_cast<long double>(P.nu));
  const long double rr = r + 1;
  const long double m_next = lin * rr + nl * std::pow(rr, p + 1) + std::sqrt(norm2);
  const long double l_next = lin + 2 * (p + 1) * std::pow(rr, p) * nl;
  const long double eps = std::min(1 / m_next, 1 / (1 + l_next));
  return {c1, c3, r, eps, m_next, l_next};
}

bool rel_close(double x, long double ref, double tol) {
  const long double scale = std::max<long double>(std::fabs(ref), 1e-300L);
  return std::fabs(static_cast<long double>(x) - ref) <= tol * scale || (x == 0.0 && ref == 0.0L);
}

void run_constants(const RunConfig& cfg, ExperimentResult& out) {
  Recorder rec(out);
  const auto c = compute_constants(cfg.model);
  const auto ref = recompute(cfg.model);
  const double tol = 1e-10;
  const double r_next = c.r_star + 1.0;
  struct Row {
    const char* name;
    double value;
    long double oracle;
  };
  const Row rows[] = {
      {"c1", c.c1, ref.c1},
      {"c3", c.c3, ref.c3},
      {"r_star", c.r_star, ref.r_star},
      {"eps_star", c.eps_star, ref.eps_star},
      {"M_r_star_plus_1", c.bound_m(r_next), ref.m_next},
      {"L_r_star_plus_1", c.bound_l(r_next), ref.l_next},
  };
  for (const auto& row : rows)
    rec.add("rel_tol=1e-10", row.value, row.name, format_double(static_cast<double>(row.oracle)),
            rel_close(row.value, row.oracle, tol));
  rec.add("", c.eps_star, "eps_star_positive", ">0", c.eps_star > 0.0);
  rec.add("", c.c1 / cfg.model.dissipation_gap(), "attractor_radius_squared",
          format_double(static_cast<double>(ref.c1 / (cfg.model.gamma - 4.0L * cfg.model.lambda))),
          rel_close(c.c1 / cfg.model.dissipation_gap(),
                    ref.c1 / (cfg.model.gamma - 4.0L * cfg.model.lambda), tol));
}

std::vector<LatticeState> error_samples(const RunConfig& cfg, double radius) {
  std::vector<LatticeState> ys;
  for (int i = 0; i < cfg.error_samples; ++i) {
    if (cfg.u0 == "zero")
      ys.emplace_back(LatticeKind::FullWindow, cfg.model.window);
    else
      ys.push_back(sample_in_ball(mix64(cfg.seed ^ streams::test_states), static_cast<std::uint64_t>(i),
                                  cfg.model.window, radius));
  }
  return ys;
}

// Slope record, or a zero-error record when the scheme is exact for this sample.
void slope_record(Recorder& rec, const std::string& knob, const std::vector<double>& eps,
                  const std::vector<double>& err, const char* measure, double target) {
  const double worst = *std::max_element(err.begin(), err.end());
  if (worst == 0.0) {
    rec.add(knob, 0.0, std::string(measure) + "_all_zero", "0", true);
    return;
  }
  const bool positive = std::all_of(err.begin(), err.end(), [](double e) { return e > 0.0; });
  const double slope = positive ? loglog_slope(eps, err) : std::nan("");
  const std::string range = format_double(target - 0.2) + ".." + format_double(target + 0.2);
  rec.add(knob, slope, measure, range, positive && std::abs(slope - target) <= 0.2);
}

void run_error_order(const RunConfig& cfg, ExperimentResult& out) {
  Recorder rec(out);
  const auto& P = cfg.model;
  const auto c = compute_constants(P);
  const double M = c.bound_m(c.r_star);
  const double L = c.bound_l(c.r_star);
  const auto ys = error_samples(cfg, c.r_star);

  // One-step defect against (L M / 2) eps^2 with 5% slack.
  std::vector<std::vector<double>> defects(ys.size());
  std::vector<double> eps_grid;
  for (int k : cfg.error_k) eps_grid.push_back(c.eps_star * std::ldexp(1.0, -k));
  for (std::size_t s = 0; s < ys.size(); ++s) defects[s].resize(eps_grid.size());
  parallel_for(ys.size() * eps_grid.size(), [&](std::size_t t) {
    const std::size_t s = t / eps_grid.size(), i = t % eps_grid.size();
    defects[s][i] = one_step_defect(ys[s], eps_grid[i], P, cfg.substeps, 1e-13);
  });
  for (std::size_t s = 0; s < ys.size(); ++s) {
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      const double bound = 1.05 * 0.5 * L * M * eps_grid[i] * eps_grid[i];
      rec.add("sample=" + std::to_string(s) + ";k=" + std::to_string(cfg.error_k[i]) + ";" +
                  kv("eps", eps_grid[i]),
              defects[s][i], "one_step_defect", at_most(bound), defects[s][i] <= bound);
    }
    slope_record(rec, "sample=" + std::to_string(s), eps_grid, defects[s], "one_step_slope", 2.0);
  }

  // Global error at T: eps = T / ceil(T / (eps* 2^-k)) so that eps divides T.
  std::vector<double> global_eps;
  for (int k : cfg.error_k) {
    const double n = std::ceil(cfg.T / (c.eps_star * std::ldexp(1.0, -k)));
    global_eps.push_back(cfg.T / n);
  }
  std::vector<std::vector<double>> errors(ys.size(), std::vector<double>(global_eps.size()));
  parallel_for(ys.size() * global_eps.size(), [&](std::size_t t) {
    const std::size_t s = t / global_eps.size(), i = t % global_eps.size();
    errors[s][i] = global_error(ys[s], cfg.T, global_eps[i], P, 1e-13);
  });
  for (std::size_t s = 0; s < ys.size(); ++s) {
    for (std::size_t i = 0; i < global_eps.size(); ++i) {
      const double bound = 0.5 * M * std::exp(L * cfg.T) * global_eps[i];
      rec.add("sample=" + std::to_string(s) + ";k=" + std::to_string(cfg.error_k[i]) + ";" +
                  kv("eps", global_eps[i]) + ";" + kv("T", cfg.T),
              errors[s][i], "global_error", at_most(bound), errors[s][i] <= bound);
    }
    slope_record(rec, "sample=" + std::to_string(s) + ";" + kv("T", cfg.T), global_eps, errors[s],
                 "global_slope", 1.0);
  }
}

void run_attractor(const RunConfig& cfg, ExperimentResult& out) {
  if (cfg.noise_m > cfg.model.window) throw ConfigError("noise.m must not exceed window");
  Recorder rec(out);
  const auto& P = cfg.model;
  const auto c = compute_constants(P);
  const double eps = resolved_eps(cfg);
  const double gap = P.dissipation_gap();

  // Positive invariance of the absorbing ball under the implicit map.
  {
    const double limit = c.r_star * (1.0 + 1e-10);
    const auto samples = static_cast<std::size_t>(cfg.invariance_samples);
    std::vector<long> escapes(samples, 0);
    std::vector<double> peak(samples, 0.0);
    const auto seed = mix64(cfg.seed ^ streams::test_states) + 1;
    parallel_for(samples, [&](std::size_t i) {
      LatticeState u = sample_in_ball(seed, i, P.window, c.r_star);
      PicardSolver solver(P, ies_config(cfg, eps), LatticeKind::FullWindow, P.window);
      const auto coeffs = detail::deterministic_coefficients(P);
      std::vector<Complex> next(u.size());
      for (int s = 0; s < cfg.invariance_steps; ++s) {
        solver.solve(u.values(), coeffs, next);
        std::copy(next.begin(), next.end(), u.values().begin());
        const double n = u.norm();
        peak[i] = std::max(peak[i], n);
        if (n > limit) ++escapes[i];
      }
    });
    long total = 0;
    for (long e : escapes) total += e;
    const std::string knob = "samples=" + std::to_string(cfg.invariance_samples) +
                             ";steps=" + std::to_string(cfg.invariance_steps) + ";" + kv("eps", eps);
    rec.add(knob, static_cast<double>(total), "iterates_outside_ball", "0", total == 0);
    const double worst = *std::max_element(peak.begin(), peak.end());
    rec.add(knob, worst / c.r_star, "max_norm_over_r_star", at_most(1.0 + 1e-10), worst <= limit);
  }

  // Converged implicit-scheme cloud.
  const auto recipe = recipe_of(cfg.attractor);
  const auto knobs = knobs_of(cfg, eps);
  rec.restart();
  const auto cloud = build_attractor_cloud(SystemVariant::IES, P, recipe, knobs);
  const std::string knob = kv("eps", eps) + ";burn_in=" + std::to_string(cloud.meta.burn_in) +
                           ";points=" + std::to_string(cloud.points.size());
  const double norm = cloud_norm(cloud);
  const double radius2 = c.c1 / gap + cfg.attractor_slack;
  rec.add(knob, norm * norm, "cloud_norm_squared", at_most(radius2), norm * norm <= radius2);
  rec.add(knob, norm, "cloud_norm_in_ball", at_most(c.r_star * (1.0 + 1e-10)),
          norm <= c.r_star * (1.0 + 1e-10));

  double tail = 0.0;
  for (const auto& p : cloud.points) tail = std::max(tail, sharp_tail(p, cfg.tail_from));
  rec.add(knob + ";from=" + std::to_string(cfg.tail_from), tail, "max_tail_mass",
          "<" + format_double(cfg.tail_bound), tail < cfg.tail_bound);

  const double spacing = collection_spacing(cloud);
  const auto moved = advance_cloud(cloud, P, ies_config(cfg, eps));
  const double shift = hausdorff_full(moved, cloud);
  const double shift_bound = 2.0 * spacing + 100.0 * cfg.fp_tol;
  rec.add(knob, shift, "invariance_shift", at_most(shift_bound), shift <= shift_bound);
  out.clouds.emplace_back("ies", cloud);

  // Truncated cloud against the bound built from g^m.
  if (cfg.noise_m > 0) {
    rec.restart();
    auto tknobs = knobs;
    tknobs.m = cfg.noise_m;
    const auto tcloud = build_attractor_cloud(SystemVariant::TruncatedIES, P, recipe, tknobs);
    const double tn = cloud_norm(tcloud);
    const double tb = compute_constants_truncated(P, cfg.noise_m).c1 / gap + cfg.attractor_slack;
    rec.add(kv("eps", eps) + ";m=" + std::to_string(cfg.noise_m), tn * tn,
            "truncated_cloud_norm_squared", at_most(tb), tn * tn <= tb);
    out.clouds.emplace_back("truncated", tcloud);
  }

  // Zero force: the attractor is {0}.
  {
    rec.restart();
    ModelParams P0 = P;
    std::fill(P0.g.begin(), P0.g.end(), Complex{});
    const auto c0 = compute_constants(P0);
    auto zrecipe = recipe;
    if (!zrecipe.burn_in) {
      const double target = c0.r_star > 0.0 ? std::min(0.5, std::pow(cfg.zero_tol / c0.r_star, 2)) : 0.5;
      zrecipe.burn_in = default_burn_in(P0, eps, target);
    }
    const auto zcloud = build_attractor_cloud(SystemVariant::IES, P0, zrecipe, knobs);
    const int n = *zrecipe.burn_in;
    const std::string zknob = "g=0;" + kv("eps", eps) + ";burn_in=" + std::to_string(n);
    const double zn = cloud_norm(zcloud);
    rec.add(zknob, zn, "zero_force_cloud_norm", at_most(cfg.zero_tol), zn <= cfg.zero_tol);
    const double diam = cloud_diameter(zcloud);
    const double decay = 2.0 * c0.r_star * std::pow(1.0 + 2.0 * eps * gap, -0.5 * n) + 100.0 * cfg.fp_tol;
    rec.add(zknob, diam, "zero_force_diameter", at_most(decay), diam <= decay);
    out.clouds.emplace_back("zero_force", zcloud);
  }
}

// Rows of a sweep: each distance is bounded by (1 + slack) times the previous one.
void trend_records(Recorder& rec, const std::string& prefix, const char* knob_name,
                   const std::vector<SweepRow>& rows, double slack, const char* measure) {
  std::vector<double> d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string bound = i == 0 ? "inf" : at_most((1.0 + slack) * rows[i - 1].distance);
    const bool pass = i == 0 || rows[i].distance <= (1.0 + slack) * rows[i - 1].distance;
    rec.add(prefix + kv(knob_name, rows[i].knob), rows[i].distance, measure, bound,
            pass && std::isfinite(rows[i].distance));
    d.push_back(rows[i].distance);
  }
  long violations = 0;
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    if (!(d[i + 1] <= (1.0 + slack) * d[i])) ++violations;
  rec.add(prefix + kv("slack", slack), static_cast<double>(violations), std::string(measure) + "_trend_violations",
          "0", violations == 0);
}

void run_sweep_eps(const RunConfig& cfg, ExperimentResult& out) {
  Recorder rec(out);
  const auto c = compute_constants(cfg.model);
  SweepSpec spec;
  spec.axis = SweepAxis::Epsilon;
  for (int k : cfg.sweep_eps_k) spec.grid.push_back(c.eps_star * std::ldexp(1.0, -k));
  spec.fixed = knobs_of(cfg, spec.grid.front());
  const auto rows = convergence_sweep(cfg.model, spec, recipe_of(cfg.sweep));
  trend_records(rec, "", "eps", rows, cfg.slack, "distance_to_continuous");
}

void run_sweep_m(const RunConfig& cfg, ExperimentResult& out) {
  if (cfg.sweep_m.back() > cfg.model.window) throw ConfigError("sweep.m: entries must not exceed window");
  Recorder rec(out);
  SweepSpec spec;
  spec.axis = SweepAxis::Dimension;
  for (int m : cfg.sweep_m) spec.grid.push_back(m);
  const double eps = resolved_eps(cfg);
  spec.fixed = knobs_of(cfg, eps);
  auto recipe = recipe_of(cfg.sweep);
  recipe.burn_target = cfg.sweep_m_burn_target;
  const auto rows = convergence_sweep(cfg.model, spec, recipe);
  const std::string prefix = kv("eps", eps) + ";J=" + std::to_string(cfg.model.window) + ";";
  trend_records(rec, prefix, "m", rows, cfg.slack, "distance_to_full_window");
  rec.add(prefix + kv("m", rows.back().knob), rows.back().distance, "final_distance",
          "<" + format_double(cfg.m_final_bound), rows.back().distance < cfg.m_final_bound);
}

void run_sweep_noise(const RunConfig& cfg, ExperimentResult& out) {
  if (cfg.noise_m > cfg.model.window) throw ConfigError("noise.m must not exceed window");
  Recorder rec(out);
  const double eps = resolved_eps(cfg);
  const auto recipe = recipe_of(cfg.sweep);
  for (bool truncated : {false, true}) {
    if (truncated && cfg.noise_m == 0) continue;
    SweepSpec spec;
    spec.axis = SweepAxis::Noise;
    spec.grid = cfg.sweep_a;
    spec.fixed = knobs_of(cfg, eps);
    if (truncated) spec.fixed.m = cfg.noise_m;
    const std::string prefix =
        kv("eps", eps) + ";" + (truncated ? "m=" + std::to_string(cfg.noise_m) : std::string("m=none")) + ";";
    rec.restart();
    const auto rows = convergence_sweep(cfg.model, spec, recipe);
    trend_records(rec, prefix, "a", rows, cfg.slack, "distance_to_deterministic");

    // a = 0 must reproduce the deterministic cloud.
    rec.restart();
    auto k0 = spec.fixed;
    k0.a = 0.0;
    const auto random0 = build_attractor_cloud(
        truncated ? SystemVariant::TruncatedRandomPullback : SystemVariant::RandomPullback, cfg.model,
        recipe, k0);
    const auto det = build_attractor_cloud(
        truncated ? SystemVariant::TruncatedIES : SystemVariant::IES, cfg.model, recipe, k0);
    const double d0 = hausdorff_full(random0, det);
    rec.add(prefix + "a=0", d0, "zero_noise_reproduction", "<" + format_double(cfg.a_zero_tol),
            d0 < cfg.a_zero_tol);
  }
}

void run_ou_stats(const RunConfig& cfg, ExperimentResult& out) {
  Recorder rec(out);
  NoiseConfig noise;
  noise.a = 0.0;
  noise.seed = cfg.seed;
  noise.dt = cfg.ou_dt;
  const double horizon = std::max(static_cast<double>(cfg.ou_samples - 1) * cfg.ou_dt, cfg.ou_horizons.back());
  const OUPath path = sample_ou_path(0.0, horizon, noise);
  const std::span<const double> z(path.z.data(), static_cast<std::size_t>(cfg.ou_samples));
  const std::string knob = "samples=" + std::to_string(cfg.ou_samples) + ";" + kv("dt", cfg.ou_dt);

  const double var = sample_variance(z);
  rec.add(knob, var, "stationary_variance", "0.5+-" + format_double(cfg.ou_tol),
          std::abs(var - 0.5) <= cfg.ou_tol);
  const double acf = autocorrelation(z, 1);
  const double expected = std::exp(-cfg.ou_dt);
  rec.add(knob, acf, "lag1_autocorrelation", format_double(expected) + "+-" + format_double(cfg.ou_tol),
          std::abs(acf - expected) <= cfg.ou_tol);

  // max_{0 <= s <= t} |z(s)| / t must decrease along the horizons.
  double prev = std::numeric_limits<double>::infinity();
  double running = 0.0;
  std::size_t i = 0;
  for (double t : cfg.ou_horizons) {
    const std::size_t last = path.index_of(t);
    for (; i <= last; ++i) running = std::max(running, std::abs(path.z[i]));
    const double ratio = running / t;
    rec.add(kv("t", t), ratio, "max_abs_z_over_t",
            std::isinf(prev) ? std::string("inf") : "<" + format_double(prev), ratio < prev);
    prev = ratio;
  }
}

void run_radius(const RunConfig& cfg, ExperimentResult& out) {
  Recorder rec(out);
  const auto& P = cfg.model;
  const auto c = compute_constants(P);
  const double limit = P.eta + c.c1 / P.dissipation_gap();
  const double S = absorbing_horizon(P);

  NoiseConfig exact_noise;
  exact_noise.seed = cfg.seed;
  exact_noise.dt = cfg.radius_dt;
  const OUPath exact_path = sample_ou_path(-S - cfg.radius_dt, 0.0, exact_noise);
  const double r0 = absorbing_radius(0.0, exact_path, P);
  rec.add("a=0;" + kv("dt", cfg.radius_dt), r0, "absorbing_radius",
          format_double(limit) + "+-" + format_double(cfg.radius_exact_tol),
          std::abs(r0 - limit) <= cfg.radius_exact_tol);

  // Antithetic pairs (z, -z); every a-value sees the same paths.
  const std::size_t pairs = static_cast<std::size_t>(cfg.radius_paths / 2);
  std::vector<std::vector<double>> values(pairs, std::vector<double>(cfg.radius_a.size()));
  parallel_for(pairs, [&](std::size_t i) {
    NoiseConfig noise;
    noise.seed = mix64(cfg.seed + 0x5bd1e995ULL * (i + 1));
    noise.dt = cfg.radius_mc_dt;
    const OUPath path = sample_ou_path(-S - cfg.radius_mc_dt, 0.0, noise);
    const OUPath mirror = path.antithetic();
    for (std::size_t j = 0; j < cfg.radius_a.size(); ++j)
      values[i][j] = 0.5 * (absorbing_radius(cfg.radius_a[j], path, P) +
                            absorbing_radius(cfg.radius_a[j], mirror, P));
  });
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cfg.radius_a.size(); ++j) {
    double mean = 0.0;
    for (const auto& v : values) mean += v[j];
    mean /= static_cast<double>(pairs);
    const std::string knob = kv("a", cfg.radius_a[j]) + ";paths=" + std::to_string(cfg.radius_paths) +
                             ";" + kv("dt", cfg.radius_mc_dt);
    if (j == 0) {
      const double rel = std::abs(mean - limit) / limit;
      rec.add(knob, mean, "mean_absorbing_radius",
              format_double(limit) + "+-" + format_double(100.0 * cfg.radius_rel_tol) + "%",
              rel <= cfg.radius_rel_tol);
    }
    rec.add(knob, mean, "mean_absorbing_radius_increasing",
            j == 0 ? std::string("-inf") : ">" + format_double(prev), mean > prev);
    prev = mean;
  }
}

using Runner = void (*)(const RunConfig&, ExperimentResult&);

const std::vector<std::pair<std::string, Runner>>& runners() {
  static const std::vector<std::pair<std::string, Runner>> table{
      {"constants", run_constants},     {"error-order", run_error_order},
      {"attractor", run_attractor},     {"sweep-eps", run_sweep_eps},
      {"sweep-m", run_sweep_m},         {"sweep-noise", run_sweep_noise},
      {"ou-stats", run_ou_stats},       {"radius", run_radius},
  };
  return table;
}

}  // namespace

int ExperimentResult::failures() const noexcept {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.pass; }));
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : runners()) n.push_back(name);
    return n;
  }();
  return names;
}

ExperimentResult run_experiment(std::string_view name, const RunConfig& config) {
  validate_config(config);
  for (const auto& [id, fn] : runners()) {
    if (id != name) continue;
    ExperimentResult result;
    result.experiment = id;
    try {
      fn(config, result);
    } catch (const NoConvergence& e) {
      throw NoConvergence(id + ": " + e.what(), e.step());
    } catch (const ParameterError& e) {
      throw ParameterError(id + ": " + e.what());
    } catch (const DimensionError& e) {
      throw DimensionError(id + ": " + e.what());
    } catch (const QuadratureError& e) {
      throw QuadratureError(id + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(id + ": " + e.what());
    } catch (const Error& e) {
      throw Error(id + ": " + e.what());
    }
    return result;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

void write_csv(std::ostream& out, const ExperimentResult& result, bool timing) {
  out << csv_header << '\n';
  for (const auto& r : result.records) {
    out << r.experiment << ',' << r.knob << ',' << format_double(r.value) << ',' << r.measure << ','
        << r.bound << ',' << (r.pass ? "true" : "false") << ','
        << (timing ? format_double(r.seconds) : std::string("0")) << '\n';
  }
}

void write_cloud(std::ostream& out, const PointCloud& cloud) {
  out << "member,site,re,im\n";
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    const int hw = p.half_width();
    for (int j = -hw; j <= hw; ++j) {
      const Complex v = p.at(j);
      out << i << ',' << j << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

}  // namespace cgl
