// Copyright 2026 The vczsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file vcz_main.cpp
/// The `vcz` command-line tool.  It is a thin shell over the shared-library
/// C API (vczsim.h): it parses flags into a configuration handle, dispatches
/// one subcommand, prints the returned report to stdout and wall-clock time
/// to stderr, and exits with the command's status code.  Keeping the CLI on
/// the C side of the boundary means every feature reachable from the shell
/// is also reachable from any language that can load a shared library.

#include <vczsim/vczsim.h>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace {

/// Prints the failure to stderr and converts the status into an exit code.
int fail(vcz_status status) {
  std::fprintf(stderr, "error (%s): %s\n", vcz_status_name(status),
               vcz_last_error());
  return static_cast<int>(status);
}

struct Options {
  std::string config_path;
  std::string noise;
  long long shots = 0;
  long long repetitions = 0;
  unsigned long long seed = 0;
  std::string mode;
  std::string mitigation;
  int workers = 0;
  std::string out_dir;
  bool dump_shots = false;

  std::string calibration;  // qpt, virtual-cz-qpt
  std::string circuit;      // expectation
  bool quasiprob = false;   // expectation
  std::vector<std::string> report_files;  // report
};

/// Builds the configuration handle: the config file first (if any), then the
/// command-line overrides on top.  Returns VCZ_OK and a handle the caller
/// must free, or the first failing status.
vcz_status build_config(const CLI::App& app, const Options& opt,
                        vcz_config** out_config) {
  vcz_status status =
      opt.config_path.empty()
          ? vcz_config_create(out_config)
          : vcz_config_load_file(opt.config_path.c_str(), out_config);
  if (status != VCZ_OK) return status;
  vcz_config* config = *out_config;

  const auto set_int = [&](const char* flag, const char* key,
                           long long value) {
    if (status == VCZ_OK && app.count(flag) > 0) {
      status = vcz_config_set_int(config, key, value);
    }
  };
  const auto set_string = [&](const char* flag, const char* key,
                              const std::string& value) {
    if (status == VCZ_OK && app.count(flag) > 0) {
      status = vcz_config_set_string(config, key, value.c_str());
    }
  };

  set_string("--noise", "noise", opt.noise);
  set_int("--shots", "shots", opt.shots);
  set_int("--repetitions", "repetitions", opt.repetitions);
  if (status == VCZ_OK && app.count("--seed") > 0) {
    status = vcz_config_set_uint(config, "seed", opt.seed);
  }
  set_string("--mode", "mode", opt.mode);
  set_string("--mitigation", "mitigation", opt.mitigation);
  set_int("--workers", "workers", opt.workers);
  set_string("--out", "outputs", opt.out_dir);
  set_int("--dump-shots", "dump_shots", opt.dump_shots ? 1 : 0);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual two-qubit CZ gate: simulation, tomography and "
               "error mitigation"};
  app.set_version_flag("--version", vcz_version());
  app.require_subcommand(1);
  Options opt;

  app.add_option("--config", opt.config_path,
                 "Configuration JSON file (flags below override it)");
  app.add_option("--noise", opt.noise, "Noise preset: ideal or paper-device");
  app.add_option("--shots", opt.shots, "Shots per circuit (shot mode)");
  app.add_option("--repetitions", opt.repetitions,
                 "Independent repetitions of every circuit");
  app.add_option("--seed", opt.seed, "Base seed of the counter RNG");
  app.add_option("--mode", opt.mode, "Run mode: exact or shots");
  app.add_option("--mitigation", opt.mitigation,
                 "Mitigation: none, measurement or full-pec");
  app.add_option("--workers", opt.workers,
                 "Worker threads (0 = all cores); never affects results");
  app.add_option("--out", opt.out_dir, "Output directory for artifacts");
  app.add_flag("--dump-shots", opt.dump_shots,
               "Also write per-shot CSV records for repetition 0");

  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Measure the calibration bundle (calibration.json)");
  CLI::App* qpt = app.add_subcommand(
      "qpt", "Process tomography of one side's five decomposition variants");
  CLI::App* virtual_cz = app.add_subcommand(
      "virtual-cz-qpt",
      "Assemble the virtual CZ from both sides and report its fidelity");
  CLI::App* expectation = app.add_subcommand(
      "expectation", "Expectation value of a two-qubit circuit with one CZ");
  CLI::App* report = app.add_subcommand(
      "report", "Summarize saved reports into text and CSV tables");

  for (CLI::App* sub : {calibrate, qpt, virtual_cz, expectation, report}) {
    sub->fallthrough();
  }
  qpt->add_option("--calibration", opt.calibration,
                  "Reuse a saved calibration.json instead of recalibrating");
  virtual_cz->add_option("--calibration", opt.calibration,
                         "Reuse a saved calibration.json");
  expectation->add_option("--circuit", opt.circuit, "Circuit JSON file")
      ->required();
  expectation->add_flag(
      "--quasiprob", opt.quasiprob,
      "Sample the quasi-probability plan instead of measuring all ten terms");
  report->add_option("files", opt.report_files, "Report JSON files")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  vcz_config* config = nullptr;
  vcz_status status = build_config(app, opt, &config);
  if (status != VCZ_OK) {
    vcz_config_free(config);
    return fail(status);
  }

  const char* calibration =
      opt.calibration.empty() ? nullptr : opt.calibration.c_str();
  char* output = nullptr;
  const auto started = std::chrono::steady_clock::now();

  if (calibrate->parsed()) {
    status = vcz_calibrate(config, &output);
  } else if (qpt->parsed()) {
    status = vcz_qpt(config, calibration, &output);
  } else if (virtual_cz->parsed()) {
    status = vcz_virtual_cz_qpt(config, calibration, &output);
  } else if (expectation->parsed()) {
    status = vcz_expectation(config, opt.circuit.c_str(),
                             opt.quasiprob ? 1 : 0, &output);
  } else {
    std::vector<const char*> paths;
    paths.reserve(opt.report_files.size());
    for (const std::string& file : opt.report_files) {
      paths.push_back(file.c_str());
    }
    status = vcz_report(config, paths.data(), paths.size(), &output);
  }

  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - started;
  int exit_code = 0;
  if (status == VCZ_OK) {
    std::printf("%s\n", output);
    std::fprintf(stderr, "elapsed %.3f s\n", elapsed.count());
  } else {
    exit_code = fail(status);
  }

  vcz_string_free(output);
  vcz_config_free(config);
  return exit_code;
}
