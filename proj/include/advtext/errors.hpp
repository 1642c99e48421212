//
// Copyright 2026 The advtext Authors
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
//

#ifndef ADVTEXT_ERRORS_HPP_
#define ADVTEXT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace advtext {

// Every failure surfaced by the library carries one of these kinds. The CLI
// maps each kind to a distinct process exit code.
enum class ErrorKind {
  kConfiguration = 2,
  kFileNotFound = 3,
  kParse = 4,
  kPrecondition = 5,
  kEmptyInput = 6,
  kPosition = 7,
  kUndefined = 8,
  kBudget = 9,
  kMismatch = 10,
  kIo = 11,
};

inline const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfiguration: return "configuration error";
    case ErrorKind::kFileNotFound: return "file not found";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kPrecondition: return "precondition violation";
    case ErrorKind::kEmptyInput: return "empty input";
    case ErrorKind::kPosition: return "position out of range";
    case ErrorKind::kUndefined: return "undefined result";
    case ErrorKind::kBudget: return "insufficient attack budget";
    case ErrorKind::kMismatch: return "artifact mismatch";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  // The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace advtext

#endif  // ADVTEXT_ERRORS_HPP_
