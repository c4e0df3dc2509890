#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qchaos/errors.hpp"
#include "qchaos/experiments.hpp"
#include "qchaos/version.hpp"

namespace {

/// Exit codes: 0 success, 1 runtime failure, 2 invalid config or unreadable
/// input.
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

void print_issues(const qchaos::ValidationResult& result) {
  for (const qchaos::ValidationIssue& issue : result.issues) {
    if (issue.field.empty())
      std::cerr << issue.message << '\n';
    else
      std::cerr << issue.field << ": " << issue.message << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral and scrambling diagnostics for quantum chaos"};
  app.set_version_flag("--version", std::string(qchaos::version()));
  app.require_subcommand(1);

  std::string run_config;
  std::string validate_config;
  std::string output_dir;

  CLI::App* cmd_run =
      app.add_subcommand("run", "Execute an experiment config and write CSV "
                                "outputs plus manifest.json");
  cmd_run->add_option("config", run_config, "path to a JSON experiment config")
      ->required();
  cmd_run->add_option("-o,--output-dir", output_dir,
                      "override the output directory");

  CLI::App* cmd_validate = app.add_subcommand(
      "validate", "Check a config and print its canonical form");
  cmd_validate
      ->add_option("config", validate_config, "path to a JSON experiment config")
      ->required();

  CLI::App* cmd_list =
      app.add_subcommand("list-experiments", "List available experiment kinds");

  CLI11_PARSE(app, argc, argv);

  if (cmd_list->parsed()) {
    for (const std::string& name : qchaos::experiment_names())
      std::cout << name << '\n';
    return 0;
  }

  if (cmd_validate->parsed()) {
    std::string text;
    if (!read_file(validate_config, text)) {
      std::cerr << "cannot read config file: " << validate_config << '\n';
      return kExitInvalid;
    }
    const qchaos::ValidationResult result = qchaos::validate(text);
    if (!result.ok()) {
      print_issues(result);
      return kExitInvalid;
    }
    std::cout << qchaos::serialize(*result.config);
    return 0;
  }

  // run
  std::string text;
  if (!read_file(run_config, text)) {
    std::cerr << "cannot read config file: " << run_config << '\n';
    return kExitInvalid;
  }
  qchaos::ValidationResult result = qchaos::validate(text);
  if (!result.ok()) {
    print_issues(result);
    return kExitInvalid;
  }
  qchaos::ExperimentConfig config = std::move(*result.config);
  if (!output_dir.empty()) config.output.directory = output_dir;

  try {
    const qchaos::RunManifest manifest = qchaos::run(config);
    std::cout << "config_hash " << manifest.config_hash << '\n';
    std::cout << "wall_time_seconds " << manifest.wall_time_seconds << '\n';
    for (const qchaos::OutputFile& f : manifest.outputs)
      std::cout << "wrote " << f.file << " (" << f.rows << " rows)\n";
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
