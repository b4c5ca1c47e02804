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

#include "config.hpp"

#include <set>
#include <stdexcept>

namespace vcz {

RunMode parse_run_mode(const std::string& name) {
  if (name == "exact") return RunMode::Exact;
  if (name == "shots") return RunMode::Shots;
  throw std::invalid_argument("unknown mode \"" + name + "\" (exact|shots)");
}

Mitigation parse_mitigation(const std::string& name) {
  if (name == "none") return Mitigation::None;
  if (name == "measurement") return Mitigation::Measurement;
  if (name == "full-pec") return Mitigation::FullPec;
  throw std::invalid_argument("unknown mitigation \"" + name +
                              "\" (none|measurement|full-pec)");
}

const char* run_mode_name(RunMode mode) {
  return mode == RunMode::Exact ? "exact" : "shots";
}

const char* mitigation_name(Mitigation mitigation) {
  switch (mitigation) {
    case Mitigation::None: return "none";
    case Mitigation::Measurement: return "measurement";
    case Mitigation::FullPec: return "full-pec";
  }
  return "none";
}

NoiseModel noise_preset(const std::string& name) {
  if (name == "ideal") return NoiseModel::ideal();
  if (name == "paper-device") return NoiseModel::device_preset();
  throw std::invalid_argument("unknown noise preset \"" + name +
                              "\" (ideal|paper-device)");
}

Json noise_to_json(const NoiseModel& noise) {
  Json j;
  j["p_gg"] = noise.p_gg;
  j["p_ee"] = noise.p_ee;
  j["f_init"] = noise.f_init;
  j["t1"] = noise.t1;
  j["t2"] = noise.t2;
  j["op_duration"] = noise.op_duration;
  j["single_qubit_depolarizing"] = noise.single_qubit_depolarizing;
  return j;
}

NoiseModel noise_from_json(const Json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("noise must be a preset name or an object");
  }
  NoiseModel noise = NoiseModel::ideal();
  const std::set<std::string> known = {"p_gg", "p_ee", "f_init", "t1", "t2",
                                       "op_duration", "single_qubit_depolarizing"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw std::invalid_argument("unknown noise field \"" + key + "\"");
    }
    const double v = value.get<double>();
    if (key == "p_gg") noise.p_gg = v;
    else if (key == "p_ee") noise.p_ee = v;
    else if (key == "f_init") noise.f_init = v;
    else if (key == "t1") noise.t1 = v;
    else if (key == "t2") noise.t2 = v;
    else if (key == "op_duration") noise.op_duration = v;
    else noise.single_qubit_depolarizing = v;
  }
  noise.validate();
  return noise;
}

void ExperimentConfig::validate() const {
  noise.validate();
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
}

Json ExperimentConfig::canonical_echo() const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  if (!noise_preset_name.empty()) {
    j["noise"] = noise_preset_name;
  } else {
    j["noise"] = noise_to_json(noise);
  }
  j["shots"] = shots;
  j["repetitions"] = repetitions;
  j["seed"] = seed;
  j["mode"] = run_mode_name(mode);
  j["mitigation"] = mitigation_name(mitigation);
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  const std::set<std::string> known = {"schema_version", "noise",  "shots",
                                       "repetitions",    "seed",   "mode",
                                       "mitigation",     "outputs", "workers"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) {
      throw std::invalid_argument("unknown config field \"" + key + "\"");
    }
  }
  if (!j.contains("schema_version")) {
    throw SchemaError("config is missing \"schema_version\"");
  }
  if (j["schema_version"].get<int>() != kSchemaVersion) {
    throw SchemaError("unsupported config schema_version");
  }
  ExperimentConfig cfg;
  cfg.noise = NoiseModel::ideal();
  cfg.noise_preset_name = "ideal";
  if (j.contains("noise")) {
    if (j["noise"].is_string()) {
      cfg.noise_preset_name = j["noise"].get<std::string>();
      cfg.noise = noise_preset(cfg.noise_preset_name);
    } else {
      cfg.noise_preset_name.clear();
      cfg.noise = noise_from_json(j["noise"]);
    }
  }
  if (j.contains("shots")) cfg.shots = j["shots"].get<long long>();
  if (j.contains("repetitions")) cfg.repetitions = j["repetitions"].get<long long>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("mode")) cfg.mode = parse_run_mode(j["mode"].get<std::string>());
  if (j.contains("mitigation")) {
    cfg.mitigation = parse_mitigation(j["mitigation"].get<std::string>());
  }
  if (j.contains("outputs")) cfg.outputs = j["outputs"].get<std::string>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path));
}

}  // namespace vcz
