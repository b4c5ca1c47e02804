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

/// @file capi.cpp
/// Implementation of the C API declared in <vczsim/vczsim.h>: opaque handles
/// around the C++ core, exception-to-status translation, and C-owned string
/// returns.

#include <vczsim/vczsim.h>

#include "config.hpp"
#include "harness.hpp"
#include "io.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

struct vcz_config {
  vcz::ExperimentConfig cfg;
};

namespace {

thread_local std::string t_last_error;

vcz_status fail(vcz_status status, const std::string& message) {
  t_last_error = message;
  return status;
}

/// Runs `body` and translates the C++ error taxonomy into status codes.
/// Clears the thread-local error on success so vcz_last_error() never shows
/// a stale message after VCZ_OK.
template <typename Fn>
vcz_status guarded(Fn&& body) {
  try {
    body();
  } catch (const vcz::SchemaError& e) {
    return fail(VCZ_ERROR_SCHEMA, e.what());
  } catch (const vcz::IoError& e) {
    return fail(VCZ_ERROR_IO, e.what());
  } catch (const vcz::NumericalError& e) {
    return fail(VCZ_ERROR_NUMERICAL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(VCZ_ERROR_INTERNAL, e.what());
  }
  t_last_error.clear();
  return VCZ_OK;
}

/// malloc (not new) so the string can be released by plain free() in
/// vcz_string_free, the conventional contract for a C API.
char* copy_to_c(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<std::filesystem::path> optional_path(const char* path) {
  if (path == nullptr) return std::nullopt;
  return std::filesystem::path(path);
}

}  // namespace

extern "C" {

const char* vcz_version(void) { return "1.0.0"; }

const char* vcz_status_name(vcz_status status) {
  switch (status) {
    case VCZ_OK:
      return "VCZ_OK";
    case VCZ_ERROR_INVALID_ARGUMENT:
      return "VCZ_ERROR_INVALID_ARGUMENT";
    case VCZ_ERROR_IO:
      return "VCZ_ERROR_IO";
    case VCZ_ERROR_SCHEMA:
      return "VCZ_ERROR_SCHEMA";
    case VCZ_ERROR_NUMERICAL:
      return "VCZ_ERROR_NUMERICAL";
    case VCZ_ERROR_INTERNAL:
      return "VCZ_ERROR_INTERNAL";
  }
  return "VCZ_STATUS_UNKNOWN";
}

const char* vcz_last_error(void) { return t_last_error.c_str(); }

vcz_status vcz_config_create(vcz_config** out_config) {
  if (out_config == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, "out_config is NULL");
  }
  return guarded([&] {
    auto handle = std::make_unique<vcz_config>();
    handle->cfg.noise = vcz::NoiseModel::ideal();
    handle->cfg.noise_preset_name = "ideal";
    *out_config = handle.release();
  });
}

vcz_status vcz_config_load_file(const char* path, vcz_config** out_config) {
  if (path == nullptr || out_config == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, "path or out_config is NULL");
  }
  return guarded([&] {
    auto handle = std::make_unique<vcz_config>();
    handle->cfg = vcz::load_config_file(path);
    *out_config = handle.release();
  });
}

void vcz_config_free(vcz_config* config) { delete config; }

vcz_status vcz_config_set_int(vcz_config* config, const char* key,
                              long long value) {
  if (config == nullptr || key == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, "config or key is NULL");
  }
  return guarded([&] {
    const std::string k = key;
    if (k == "shots") {
      config->cfg.shots = value;
    } else if (k == "repetitions") {
      config->cfg.repetitions = value;
    } else if (k == "workers") {
      if (value < 0 || value > std::numeric_limits<int>::max()) {
        throw std::invalid_argument("workers out of range");
      }
      config->cfg.workers = static_cast<int>(value);
    } else if (k == "dump_shots") {
      if (value != 0 && value != 1) {
        throw std::invalid_argument("dump_shots must be 0 or 1");
      }
      config->cfg.dump_shots = value != 0;
    } else {
      throw std::invalid_argument("unknown integer config key \"" + k + "\"");
    }
  });
}

vcz_status vcz_config_set_uint(vcz_config* config, const char* key,
                               unsigned long long value) {
  if (config == nullptr || key == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, "config or key is NULL");
  }
  return guarded([&] {
    const std::string k = key;
    if (k == "seed") {
      config->cfg.seed = static_cast<std::uint64_t>(value);
    } else {
      throw std::invalid_argument("unknown unsigned config key \"" + k + "\"");
    }
  });
}

vcz_status vcz_config_set_string(vcz_config* config, const char* key,
                                 const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, "config, key or value is NULL");
  }
  return guarded([&] {
    const std::string k = key;
    if (k == "noise") {
      config->cfg.noise = vcz::noise_preset(value);
      config->cfg.noise_preset_name = value;
    } else if (k == "mode") {
      config->cfg.mode = vcz::parse_run_mode(value);
    } else if (k == "mitigation") {
      config->cfg.mitigation = vcz::parse_mitigation(value);
    } else if (k == "outputs") {
      config->cfg.outputs = value;
    } else {
      throw std::invalid_argument("unknown string config key \"" + k + "\"");
    }
  });
}

vcz_status vcz_calibrate(const vcz_config* config, char** out_json) {
  if (config == nullptr || out_json == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, "config or out_json is NULL");
  }
  return guarded([&] {
    const vcz::Json report = vcz::cmd_calibrate(config->cfg);
    *out_json = copy_to_c(vcz::dump_json_17(report));
  });
}

vcz_status vcz_qpt(const vcz_config* config, const char* calibration_path,
                   char** out_json) {
  if (config == nullptr || out_json == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, "config or out_json is NULL");
  }
  return guarded([&] {
    const vcz::Json report =
        vcz::cmd_qpt(config->cfg, optional_path(calibration_path));
    *out_json = copy_to_c(vcz::dump_json_17(report));
  });
}

vcz_status vcz_virtual_cz_qpt(const vcz_config* config,
                              const char* calibration_path, char** out_json) {
  if (config == nullptr || out_json == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT, "config or out_json is NULL");
  }
  return guarded([&] {
    const vcz::Json report =
        vcz::cmd_virtual_cz_qpt(config->cfg, optional_path(calibration_path));
    *out_json = copy_to_c(vcz::dump_json_17(report));
  });
}

vcz_status vcz_expectation(const vcz_config* config, const char* circuit_path,
                           int quasiprob_sampling, char** out_json) {
  if (config == nullptr || circuit_path == nullptr || out_json == nullptr) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT,
                "config, circuit_path or out_json is NULL");
  }
  return guarded([&] {
    const vcz::Json report = vcz::cmd_expectation(
        config->cfg, circuit_path, quasiprob_sampling != 0);
    *out_json = copy_to_c(vcz::dump_json_17(report));
  });
}

vcz_status vcz_report(const vcz_config* config,
                      const char* const* report_paths, size_t n_paths,
                      char** out_text) {
  if (config == nullptr || out_text == nullptr ||
      (report_paths == nullptr && n_paths > 0)) {
    return fail(VCZ_ERROR_INVALID_ARGUMENT,
                "config, report_paths or out_text is NULL");
  }
  return guarded([&] {
    std::vector<std::filesystem::path> paths;
    paths.reserve(n_paths);
    for (size_t i = 0; i < n_paths; ++i) {
      if (report_paths[i] == nullptr) {
        throw std::invalid_argument("report path " + std::to_string(i) +
                                    " is NULL");
      }
      paths.emplace_back(report_paths[i]);
    }
    *out_text = copy_to_c(vcz::cmd_report(config->cfg, paths));
  });
}

void vcz_string_free(char* s) { std::free(s); }

}  // extern "C"
