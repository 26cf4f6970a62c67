#pragma once

// Experiment runners behind the CLI subcommands. Each run produces
// self-describing records (measured value next to its bound) and, where
// clouds are built, the clouds themselves for optional dumping.

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attractor.hpp"
#include "config.hpp"

namespace cgl {

struct ResultRecord {
  std::string experiment;
  /// `name=value` pairs joined by ';'.
  std::string knob;
  double value = 0.0;
  std::string measure;
  /// Bound or reference value, e.g. `0.5`, `<=1e-8`, `1.8..2.2`.
  std::string bound;
  bool pass = false;
  double seconds = 0.0;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<ResultRecord> records;
  std::vector<std::pair<std::string, PointCloud>> clouds;

  int failures() const noexcept;
};

const std::vector<std::string>& experiment_names();

/// Runs one subcommand. Throws ConfigError for an unknown name; solver errors
/// are rethrown with the experiment id prepended.
ExperimentResult run_experiment(std::string_view name, const RunConfig& config);

inline constexpr std::string_view csv_header = "experiment,knob,value,measure,bound,pass,seconds";

/// Header plus one line per record. The seconds column is 0 unless `timing`
/// is set, so that repeated runs are byte-identical.
void write_csv(std::ostream& out, const ExperimentResult& result, bool timing);

/// `member,site,re,im` lines, one per (point, site); member is the point index.
void write_cloud(std::ostream& out, const PointCloud& cloud);

}  // namespace cgl
