// Copyright 2026 The WaaS Simulator Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace waas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Workflow documents.
class SchemaError : public Error {
 public:
  using Error::Error;
};
class CycleError : public Error {
 public:
  using Error::Error;
};
class DanglingRefError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};
class IllegalStateError : public Error {
 public:
  using Error::Error;
};
class UnknownKindError : public Error {
 public:
  using Error::Error;
};

/// Raised when the event queue can no longer make progress while tasks remain.
class StallError : public Error {
 public:
  using Error::Error;
};

class ManifestMismatchError : public Error {
 public:
  using Error::Error;
};

/// Configuration problem tied to a field path such as `templates[2].budgets`.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace waas
