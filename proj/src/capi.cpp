#include "cgl/cgl.h"

#include <algorithm>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "attractor.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "integrators.hpp"
#include "model.hpp"
#include "stochastic.hpp"

struct cgl_params {
  cgl::ModelParams value;
};

struct cgl_state {
  cgl::LatticeState value;
};

struct cgl_cloud {
  cgl::PointCloud value;
};

struct cgl_config {
  cgl::RunConfig value;
  std::string text;
};

struct cgl_results {
  cgl::ExperimentResult value;
  std::string csv;
};

namespace {

thread_local std::string last_error;

struct InvalidArgument : std::exception {
  std::string msg;
  explicit InvalidArgument(std::string m) : msg(std::move(m)) {}
  const char* what() const noexcept override { return msg.c_str(); }
};

template <class Fn>
cgl_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    last_error.clear();
    return CGL_OK;
  } catch (const cgl::ParameterError& e) {
    last_error = e.what();
    return CGL_ERR_PARAMETER;
  } catch (const cgl::NoConvergence& e) {
    last_error = e.what();
    return CGL_ERR_NO_CONVERGENCE;
  } catch (const cgl::DimensionError& e) {
    last_error = e.what();
    return CGL_ERR_DIMENSION;
  } catch (const cgl::QuadratureError& e) {
    last_error = e.what();
    return CGL_ERR_QUADRATURE;
  } catch (const cgl::ConfigError& e) {
    last_error = e.what();
    return CGL_ERR_CONFIG;
  } catch (const InvalidArgument& e) {
    last_error = e.what();
    return CGL_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CGL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CGL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CGL_ERR_INTERNAL;
  }
}

cgl_status invalid(const char* what) {
  last_error = what;
  return CGL_ERR_INVALID_ARGUMENT;
}

cgl::SystemVariant to_variant(cgl_variant v) {
  switch (v) {
    case CGL_CONTINUOUS_REF: return cgl::SystemVariant::ContinuousRef;
    case CGL_IES: return cgl::SystemVariant::IES;
    case CGL_TRUNCATED_IES: return cgl::SystemVariant::TruncatedIES;
    case CGL_TRUNCATED_REF: return cgl::SystemVariant::TruncatedRef;
    case CGL_RANDOM_PULLBACK: return cgl::SystemVariant::RandomPullback;
    case CGL_TRUNCATED_RANDOM_PULLBACK: return cgl::SystemVariant::TruncatedRandomPullback;
  }
  throw cgl::ConfigError("unknown system variant");
}

}  // namespace

extern "C" {

const char* cgl_last_error(void) { return last_error.c_str(); }

const char* cgl_status_string(cgl_status status) {
  switch (status) {
    case CGL_OK: return "ok";
    case CGL_ERR_PARAMETER: return "parameter error";
    case CGL_ERR_NO_CONVERGENCE: return "no convergence";
    case CGL_ERR_DIMENSION: return "dimension error";
    case CGL_ERR_QUADRATURE: return "quadrature error";
    case CGL_ERR_CONFIG: return "config error";
    case CGL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CGL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cgl_version(void) { return "1.0.0"; }

void cgl_params_reference_desc(cgl_params_desc* desc) {
  if (!desc) return;
  const auto p = cgl::ModelParams::reference();
  *desc = {p.lambda, p.mu, p.gamma, p.beta, p.k, p.nu, p.p, p.eta, p.window};
}

cgl_status cgl_params_create(const cgl_params_desc* desc, cgl_params** out) {
  if (!desc || !out) return invalid("null argument");
  return guarded([&] {
    if (desc->window < 1) throw cgl::ParameterError("window must be >= 1");
    auto h = std::make_unique<cgl_params>();
    auto& p = h->value;
    p.lambda = desc->lambda;
    p.mu = desc->mu;
    p.gamma = desc->gamma;
    p.beta = desc->beta;
    p.k = desc->k;
    p.nu = desc->nu;
    p.p = desc->p;
    p.eta = desc->eta;
    p.window = desc->window;
    p.g.assign(2 * static_cast<std::size_t>(desc->window) + 1, cgl::Complex{});
    p.validate();
    *out = h.release();
  });
}

cgl_status cgl_params_reference(int window, cgl_params** out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    if (window < 1) throw cgl::ParameterError("window must be >= 1");
    *out = new cgl_params{cgl::ModelParams::reference(window)};
  });
}

void cgl_params_destroy(cgl_params* params) { delete params; }

cgl_status cgl_params_set_force(cgl_params* params, int site, double re, double im) {
  if (!params) return invalid("null params");
  return guarded([&] { params->value.set_force(site, {re, im}); });
}

cgl_status cgl_params_validate(const cgl_params* params) {
  if (!params) return invalid("null params");
  return guarded([&] { params->value.validate(); });
}

cgl_status cgl_params_constants(const cgl_params* params, cgl_constants* out) {
  if (!params || !out) return invalid("null argument");
  return guarded([&] {
    const auto c = cgl::compute_constants(params->value);
    *out = {c.c1, c.c2, c.c3, c.cp, c.r_star, c.eps_star};
  });
}

cgl_status cgl_params_bounds(const cgl_params* params, double r, double* m_r, double* l_r) {
  if (!params) return invalid("null params");
  if (!(r >= 0.0)) return invalid("radius must be nonnegative");
  return guarded([&] {
    const auto c = cgl::compute_constants(params->value);
    if (m_r) *m_r = c.bound_m(r);
    if (l_r) *l_r = c.bound_l(r);
  });
}

cgl_status cgl_state_create(int half_width, int truncated, const double* values, cgl_state** out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    const auto kind = truncated ? cgl::LatticeKind::Truncated : cgl::LatticeKind::FullWindow;
    cgl::LatticeState s(kind, half_width);
    if (values) {
      auto v = s.values();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = {values[2 * i], values[2 * i + 1]};
    }
    *out = new cgl_state{std::move(s)};
  });
}

void cgl_state_destroy(cgl_state* state) { delete state; }

size_t cgl_state_sites(const cgl_state* state) { return state ? state->value.size() : 0; }

cgl_status cgl_state_values(const cgl_state* state, double* out, size_t capacity) {
  if (!state || !out) return invalid("null argument");
  const auto v = state->value.values();
  if (capacity < 2 * v.size()) return invalid("output buffer too small");
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  last_error.clear();
  return CGL_OK;
}

double cgl_state_norm(const cgl_state* state) { return state ? state->value.norm() : 0.0; }

cgl_status cgl_state_distance(const cgl_state* a, const cgl_state* b, double* out) {
  if (!a || !b || !out) return invalid("null argument");
  return guarded([&] { *out = cgl::distance(a->value, b->value); });
}

cgl_status cgl_vector_field(const cgl_state* u, const cgl_params* params, cgl_state** out) {
  if (!u || !params || !out) return invalid("null argument");
  return guarded([&] { *out = new cgl_state{cgl::vector_field(u->value, params->value)}; });
}

cgl_status cgl_ies_step(const cgl_state* u, const cgl_params* params, double eps, double fp_tol,
                        int fp_max_iter, cgl_state** out, int* iterations) {
  if (!u || !params || !out) return invalid("null argument");
  return guarded([&] {
    cgl::IESConfig cfg{eps, fp_tol, fp_max_iter, true};
    cgl::StepReport report;
    auto next = cgl::implicit_euler_step(u->value, params->value, cfg, &report);
    if (iterations) *iterations = report.iterations;
    *out = new cgl_state{std::move(next)};
  });
}

cgl_status cgl_reference_solve(const cgl_state* u, const cgl_params* params, double t_end,
                               int substeps, cgl_state** out) {
  if (!u || !params || !out) return invalid("null argument");
  return guarded([&] {
    *out = new cgl_state{cgl::reference_solve(u->value, t_end, params->value, substeps)};
  });
}

cgl_status cgl_one_step_defect(const cgl_state* y, const cgl_params* params, double eps, double* out) {
  if (!y || !params || !out) return invalid("null argument");
  return guarded([&] { *out = cgl::one_step_defect(y->value, eps, params->value); });
}

cgl_status cgl_ou_sample(uint64_t seed, double t_begin, double t_end, double dt, double* z,
                         size_t capacity, size_t* count) {
  return guarded([&] {
    cgl::NoiseConfig noise;
    noise.seed = seed;
    noise.dt = dt;
    const auto path = cgl::sample_ou_path(t_begin, t_end, noise);
    if (count) *count = path.size();
    if (z)
      for (std::size_t i = 0; i < std::min(capacity, path.size()); ++i) z[i] = path.z[i];
  });
}

cgl_status cgl_absorbing_radius(const cgl_params* params, double a, uint64_t seed, double dt, double* out) {
  if (!params || !out) return invalid("null argument");
  return guarded([&] {
    cgl::NoiseConfig noise;
    noise.a = a;
    noise.seed = seed;
    noise.dt = dt;
    noise.validate();
    const double S = cgl::absorbing_horizon(params->value);
    const auto path = cgl::sample_ou_path(-S - dt, 0.0, noise);
    *out = cgl::absorbing_radius(a, path, params->value);
  });
}

void cgl_cloud_spec_default(cgl_cloud_spec* spec) {
  if (!spec) return;
  const cgl::CloudRecipe r;
  *spec = {CGL_IES, 0.0, 0, 0.0, 0, r.n_init, -1, r.collect, r.stride, r.burn_target};
}

cgl_status cgl_cloud_build(const cgl_params* params, const cgl_cloud_spec* spec, cgl_cloud** out) {
  if (!params || !spec || !out) return invalid("null argument");
  return guarded([&] {
    const auto variant = to_variant(spec->variant);
    cgl::CloudRecipe recipe;
    recipe.n_init = spec->n_init;
    if (spec->burn_in >= 0) recipe.burn_in = spec->burn_in;
    recipe.collect = spec->collect;
    recipe.stride = spec->stride;
    recipe.burn_target = spec->burn_target;
    cgl::CloudKnobs knobs;
    knobs.eps = spec->eps;
    if (cgl::is_truncated(variant)) knobs.m = spec->m;
    knobs.a = spec->a;
    knobs.seed = spec->seed;
    *out = new cgl_cloud{cgl::build_attractor_cloud(variant, params->value, recipe, knobs)};
  });
}

cgl_status cgl_cloud_from_states(const cgl_state* const* states, size_t count, cgl_cloud** out) {
  if (!states || !out || count == 0) return invalid("need at least one state");
  return guarded([&] {
    cgl::PointCloud cloud;
    for (std::size_t i = 0; i < count; ++i) {
      if (!states[i]) throw InvalidArgument("null state in cloud");
      if (!states[i]->value.same_shape(states[0]->value))
        throw cgl::DimensionError("cloud points must share one shape");
      cloud.points.push_back(states[i]->value);
    }
    cloud.meta.collect = 1;
    cloud.meta.n_init = static_cast<int>(count);
    *out = new cgl_cloud{std::move(cloud)};
  });
}

void cgl_cloud_destroy(cgl_cloud* cloud) { delete cloud; }

size_t cgl_cloud_size(const cgl_cloud* cloud) { return cloud ? cloud->value.points.size() : 0; }

cgl_status cgl_cloud_point(const cgl_cloud* cloud, size_t index, cgl_state** out) {
  if (!cloud || !out) return invalid("null argument");
  if (index >= cloud->value.points.size()) return invalid("point index out of range");
  return guarded([&] { *out = new cgl_state{cloud->value.points[index]}; });
}

cgl_status cgl_cloud_norm(const cgl_cloud* cloud, double* out) {
  if (!cloud || !out) return invalid("null argument");
  return guarded([&] { *out = cgl::cloud_norm(cloud->value); });
}

cgl_status cgl_hausdorff_semi(const cgl_cloud* a, const cgl_cloud* b, double* out) {
  if (!a || !b || !out) return invalid("null argument");
  return guarded([&] { *out = cgl::hausdorff_semi(a->value, b->value); });
}

cgl_status cgl_hausdorff_full(const cgl_cloud* a, const cgl_cloud* b, double* out) {
  if (!a || !b || !out) return invalid("null argument");
  return guarded([&] { *out = cgl::hausdorff_full(a->value, b->value); });
}

cgl_status cgl_config_default(cgl_config** out) {
  if (!out) return invalid("null argument");
  return guarded([&] { *out = new cgl_config{}; });
}

cgl_status cgl_config_load(const char* path, cgl_config** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new cgl_config{cgl::load_config(path), {}}; });
}

cgl_status cgl_config_parse(const char* text, const char* base_dir, cgl_config** out) {
  if (!text || !out) return invalid("null argument");
  return guarded([&] {
    *out = new cgl_config{cgl::parse_config(text, base_dir ? base_dir : ""), {}};
  });
}

void cgl_config_destroy(cgl_config* config) { delete config; }

cgl_status cgl_config_set_seed(cgl_config* config, uint64_t seed) {
  if (!config) return invalid("null config");
  config->value.seed = seed;
  last_error.clear();
  return CGL_OK;
}

cgl_status cgl_config_set_output_prefix(cgl_config* config, const char* prefix) {
  if (!config || !prefix) return invalid("null argument");
  config->value.output_prefix = prefix;
  last_error.clear();
  return CGL_OK;
}

cgl_status cgl_config_set_output_format(cgl_config* config, const char* format) {
  if (!config || !format) return invalid("null argument");
  return guarded([&] {
    if (std::string(format) != "csv") throw cgl::ConfigError("unsupported output format '" + std::string(format) + "'");
    config->value.output_format = format;
  });
}

const char* cgl_config_output_prefix(const cgl_config* config) {
  return config ? config->value.output_prefix.c_str() : "";
}

const char* cgl_config_serialize(cgl_config* config) {
  if (!config) return "";
  config->text = cgl::serialize_config(config->value);
  return config->text.c_str();
}

size_t cgl_experiment_count(void) { return cgl::experiment_names().size(); }

const char* cgl_experiment_name(size_t index) {
  const auto& names = cgl::experiment_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

cgl_status cgl_run_experiment(const char* name, const cgl_config* config, cgl_results** out) {
  if (!name || !config || !out) return invalid("null argument");
  return guarded([&] { *out = new cgl_results{cgl::run_experiment(name, config->value), {}}; });
}

void cgl_results_destroy(cgl_results* results) { delete results; }

size_t cgl_results_count(const cgl_results* results) { return results ? results->value.records.size() : 0; }

int cgl_results_failures(const cgl_results* results) { return results ? results->value.failures() : 0; }

const char* cgl_results_csv(cgl_results* results, int timing) {
  if (!results) return "";
  std::ostringstream out;
  cgl::write_csv(out, results->value, timing != 0);
  results->csv = out.str();
  return results->csv.c_str();
}

cgl_status cgl_results_write_csv(const cgl_results* results, const char* path, int timing) {
  if (!results || !path) return invalid("null argument");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument(std::string("cannot open '") + path + "' for writing");
    cgl::write_csv(out, results->value, timing != 0);
    if (!out) throw InvalidArgument(std::string("write to '") + path + "' failed");
  });
}

cgl_status cgl_results_write_clouds(const cgl_results* results, const char* prefix) {
  if (!results || !prefix) return invalid("null argument");
  return guarded([&] {
    for (const auto& [name, cloud] : results->value.clouds) {
      const std::string path = std::string(prefix) + "_" + results->value.experiment + "_" + name + "_cloud.txt";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
      cgl::write_cloud(out, cloud);
    }
  });
}

}  // extern "C"
