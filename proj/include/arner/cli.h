// Copyright 2026 The arner Authors.
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

#ifndef ARNER_CLI_H_
#define ARNER_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace arner::cli {

// Process exit statuses, one per failure class.
enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,  // `validate` found problems in the corpus
  kUsage = 2,             // bad flags or invalid configuration values
  kIoError = 3,           // unreadable or unwritable file
  kFormatError = 4,       // malformed corpus, checkpoint or UTF-8 input
  kConfigMismatch = 5,    // checkpoint incompatible with the request
  kNumericError = 6,      // training hit a non-finite loss or gradient
};

// Runs one invocation. `args` excludes the program name. Standard input is
// read from `in` when no --input file is given.
int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace arner::cli

#endif  // ARNER_CLI_H_
