// Copyright 2026 The evperf Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVPERF_ERRORS_H_
#define EVPERF_ERRORS_H_

#include <stdexcept>
#include <string>

namespace evperf {

// Raised for bad user input: malformed files, missing columns, invalid
// configuration values. The CLI maps it to exit code 2; anything else that
// escapes is treated as an internal error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evperf

#endif  // EVPERF_ERRORS_H_
