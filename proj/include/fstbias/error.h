// Copyright 2026 The FstBias Authors.
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

#ifndef FSTBIAS_ERROR_H_
#define FSTBIAS_ERROR_H_

#include <stdexcept>
#include <string>

namespace fstbias {

// Malformed or inconsistent data: bad file contents, invalid weights,
// empty machines. The CLI maps these to exit code 1.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Wiring problems: mismatched alphabets, incompatible flags, vocabulary
// gaps. The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A word has no path through the pronunciation mapping transducer.
// Callers keep the original word.
class NoPronunciationMatch : public DataError {
 public:
  explicit NoPronunciationMatch(const std::string& word)
      : DataError("no pronunciation match for \"" + word + "\"") {}
};

}  // namespace fstbias

#endif  // FSTBIAS_ERROR_H_
