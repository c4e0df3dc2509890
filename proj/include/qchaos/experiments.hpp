#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qchaos/models.hpp"
#include "qchaos/types.hpp"

namespace qchaos {

enum class ExperimentKind {
  spectrum,
  eigencoherence,
  majorization,
  dynamics,
  rmt,
  shorttime
};

const char* experiment_name(ExperimentKind kind);
const std::vector<std::string>& experiment_names();

/// Uniform grid from 0 to t_max with spacing ~dt (stretched slightly so the
/// final point lands exactly on t_max).
struct TimeBlock {
  double t_max = 1.0;
  double dt = 0.1;

  int num_points() const;
  TimeGrid grid() const;
};

struct EnsembleBlock {
  EnsembleKind kind = EnsembleKind::GUE;
  int dimension = 2;
  long samples = 1;
  std::uint64_t seed = 0;

  EnsembleSpec spec() const { return {kind, dimension, samples, seed}; }
};

struct BasisChoice {
  enum class Kind { site, mean_field, computational, custom_file };
  Kind kind = Kind::site;
  std::string file;  // set when kind == custom_file
};

struct OutputBlock {
  std::string directory;  // empty: QCHAOS_OUTPUT_DIR, then the working dir
  std::string format = "csv";
};

/// One experiment, parsed and validated from a JSON config document.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::spectrum;
  std::optional<XxzDefectParams> xxz;
  std::optional<TfimParams> tfim;
  BasisChoice basis;
  std::optional<int> delta_integrable;  // majorization
  std::optional<int> delta_chaotic;
  std::vector<double> windows{1.0};
  int v_site = 1;   // dynamics; sigma_z operator positions
  int w_site = -1;  // -1 selects the last site
  std::optional<TimeBlock> time;
  std::optional<EnsembleBlock> ensemble;
  std::string task;          // rmt: sff | cgp_bound; shorttime: curvature | klocal
  std::vector<int> l_range;  // shorttime klocal
  int k = 1;
  OutputBlock output;
  std::string source_text;  // exact config bytes; hashed into the manifest
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

struct ValidationResult {
  std::optional<ExperimentConfig> config;
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty() && config.has_value(); }
};

/// Full structural validation reporting every problem at once. On success
/// the returned config is ready for run().
ValidationResult validate(const std::string& config_text);

/// Canonical JSON for a config; validate(serialize(c)) reproduces c.
std::string serialize(const ExperimentConfig& config);

struct OutputFile {
  std::string file;  // name relative to the output directory
  long rows = 0;     // data rows, excluding the header
};

struct RunManifest {
  std::string config_hash;
  std::string library_version;
  double wall_time_seconds = 0.0;
  std::vector<OutputFile> outputs;
};

/// Executes a validated config, writing CSV outputs plus manifest.json into
/// the resolved output directory. Identical config text (and hence seeds)
/// yields byte-identical CSVs.
RunManifest run(const ExperimentConfig& config);

/// FNV-1a 64-bit hash of a text, as a fixed-width hex string.
std::string fnv1a_hex(const std::string& text);

}  // namespace qchaos
