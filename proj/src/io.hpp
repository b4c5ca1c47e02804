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

/// @file io.hpp
/// Deterministic serialization helpers.  All floating-point values are
/// written with 17 significant digits ("%.17g"), which round-trips IEEE
/// doubles exactly, and JSON objects keep insertion order, so a report
/// produced from the same inputs is byte-identical across runs.

#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace vcz {

using Json = nlohmann::ordered_json;

/// Error taxonomy surfaced through the C API's status codes.  Everything
/// else signals caller mistakes via std::invalid_argument.

/// File-system failure: missing, unreadable or unwritable path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file was readable but its content is unusable: malformed JSON, an
/// unsupported schema_version, or the wrong artifact kind.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Calibration data too degenerate to invert (singular matrices).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "%.17g" rendering of a finite double.  Throws std::invalid_argument on
/// NaN or infinity (reports must not contain them).
std::string format_double_17(double value);

/// Serializes with 2-space indentation, insertion-ordered keys and
/// format_double_17 for every floating-point scalar.  The trailing newline
/// is included.
std::string dump_json_17(const Json& value);

/// Matrix <-> JSON array-of-row-arrays.
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

/// Whole-file helpers; throw IoError with the path on failure, and
/// read_json_file throws SchemaError when the file is not valid JSON.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);

/// Row-major CSV with "%.17g" cells; reload is lossless.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace vcz
