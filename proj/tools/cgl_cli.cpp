// Command-line front end. Talks to the library only through the C interface.

#include <cgl/cgl.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kErrorExit = 255;
constexpr int kMaxFailureExit = 254;

struct ConfigDeleter {
  void operator()(cgl_config* c) const { cgl_config_destroy(c); }
};
struct ResultsDeleter {
  void operator()(cgl_results* r) const { cgl_results_destroy(r); }
};

int report(cgl_status status, const std::string& context) {
  std::fprintf(stderr, "cgl-run: %s: %s: %s\n", context.c_str(), cgl_status_string(status), cgl_last_error());
  return kErrorExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice Ginzburg-Landau experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_prefix;
  std::string format = "csv";
  bool timing = false;
  bool dump_clouds = false;

  std::vector<std::string> names;
  for (std::size_t i = 0; i < cgl_experiment_count(); ++i) names.emplace_back(cgl_experiment_name(i));

  std::vector<CLI::App*> subs;
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out_prefix, "output path prefix (default from config)");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}));
    sub->add_flag("--timing", timing, "fill the seconds column with wall-clock times");
    sub->add_flag("--dump-clouds", dump_clouds, "write collected point clouds as text");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  std::string experiment;
  CLI::App* chosen = nullptr;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) {
      experiment = names[i];
      chosen = subs[i];
    }

  cgl_config* raw_config = nullptr;
  cgl_status status = config_path.empty() ? cgl_config_default(&raw_config)
                                          : cgl_config_load(config_path.c_str(), &raw_config);
  if (status != CGL_OK) return report(status, config_path.empty() ? "default config" : config_path);
  std::unique_ptr<cgl_config, ConfigDeleter> config(raw_config);

  if (chosen->count("--seed")) cgl_config_set_seed(config.get(), seed);
  if (!out_prefix.empty()) cgl_config_set_output_prefix(config.get(), out_prefix.c_str());
  if ((status = cgl_config_set_output_format(config.get(), format.c_str())) != CGL_OK)
    return report(status, "--format");

  cgl_results* raw_results = nullptr;
  if ((status = cgl_run_experiment(experiment.c_str(), config.get(), &raw_results)) != CGL_OK)
    return report(status, experiment);
  std::unique_ptr<cgl_results, ResultsDeleter> results(raw_results);

  const std::string prefix = cgl_config_output_prefix(config.get());
  const std::string csv_path = prefix + "_" + experiment + ".csv";
  if ((status = cgl_results_write_csv(results.get(), csv_path.c_str(), timing ? 1 : 0)) != CGL_OK)
    return report(status, csv_path);
  if (dump_clouds && (status = cgl_results_write_clouds(results.get(), prefix.c_str())) != CGL_OK)
    return report(status, "cloud dump");

  const int failures = cgl_results_failures(results.get());
  std::printf("%s: %zu records, %d failed -> %s\n", experiment.c_str(), cgl_results_count(results.get()),
              failures, csv_path.c_str());
  return std::min(failures, kMaxFailureExit);
}
