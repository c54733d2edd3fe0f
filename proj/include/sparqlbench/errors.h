// Copyright 2026 The sparqlbench Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace sparqlbench {

// Base of every error the library raises on purpose. Callers that run the
// evaluation grid catch this type and record the failure per trial.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// dataset
class SchemaError : public Error {
 public:
  using Error::Error;
};
class MissingLanguageError : public Error {
 public:
  using Error::Error;
};

// gold_analysis
class ParseError : public Error {
 public:
  using Error::Error;
};
class LabelNotFound : public Error {
 public:
  using Error::Error;
};
class EndpointError : public Error {
 public:
  using Error::Error;
};

// prompting
class EmptyBindings : public Error {
 public:
  using Error::Error;
};

// llm_client
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};
class ModelRefusal : public Error {
 public:
  ModelRefusal(const std::string& what, int status)
      : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};
class FormatError : public Error {
 public:
  using Error::Error;
};

// run store / cli
class ManifestMismatch : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparqlbench
