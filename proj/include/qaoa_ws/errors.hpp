/*
 * Copyright 2026 The qaoa-warmstart Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qaoa_ws {

/// Invalid argument shape or value (length mismatch, probability outside [0,1], ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Request exceeds a configured resource limit (qubit count).
class ResourceError : public std::length_error {
 public:
  explicit ResourceError(const std::string& what) : std::length_error(what) {}
};

/// Objective returned NaN/inf; the optimizer aborts.
class ObjectiveError : public std::runtime_error {
 public:
  explicit ObjectiveError(const std::string& what) : std::runtime_error(what) {}
};

/// Model fitting failed (kernel factorization, empty training set).
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qaoa_ws
