// Copyright 2026 The Flowcore Authors
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

#ifndef FLOWCORE_ERROR_H_
#define FLOWCORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace flowcore {

enum class ErrorKind {
  kStructural,           // malformed instance, flow or argument
  kUnsupportedTopology,  // operation needs unique paths / a path / a spider
  kInvalidOrder,         // incorporation order breaks connectivity or root rule
  kInvalidCertificate,   // certificate is structurally unusable
  kBudgetExceeded,       // enumeration cap hit
  kSolver,               // internal LP failure
  kIo,                   // unreadable file or unparsable document
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flowcore

#endif  // FLOWCORE_ERROR_H_
