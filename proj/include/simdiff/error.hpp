/*
Copyright 2026 The simdiff Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef SIMDIFF_ERROR_HPP_
#define SIMDIFF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace simdiff {

// Error categories map one-to-one onto the CLI exit codes and the C API
// status values.
enum class ErrorKind {
  kUsage = 2,     // bad arguments, violated preconditions
  kData = 3,      // malformed or inconsistent input data
  kProtocol = 4,  // fatal denoiser protocol violation
  kTransport = 5  // retriable transport failure (connection lost)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::kUsage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what)
      : Error(ErrorKind::kProtocol, what) {}
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what)
      : Error(ErrorKind::kTransport, what) {}
};

}  // namespace simdiff

#endif  // SIMDIFF_ERROR_HPP_
