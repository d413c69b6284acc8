// Copyright 2026 The eprbec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace eprbec {

/// Argument outside the documented domain of an operation.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The exact four-mode engine was asked to handle more atoms than its limit.
struct SizeLimitError : std::length_error {
    using std::length_error::length_error;
};

/// A quantity that is mathematically undefined for the given input (zero mean spin, zero atoms).
struct UndefinedValue : std::domain_error {
    using std::domain_error::domain_error;
};

/// Moments that do not describe a valid Gaussian model (non-PSD covariance).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A dataset lacks one of the measurement settings an estimator needs.
struct IncompleteDataset : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Calibration data does not constrain the requested parameters.
struct Unidentifiable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line` is 1-based, 0 when not tied to a line.
struct FormatError : std::runtime_error {
    FormatError(const std::string &what, size_t line_number = 0)
        : std::runtime_error(what), line(line_number) {
    }
    size_t line;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace eprbec
