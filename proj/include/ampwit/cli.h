// Copyright 2026 The ampwit Authors
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

#ifndef AMPWIT_CLI_H
#define AMPWIT_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace ampwit {

inline constexpr const char *kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitInternal = 1;

/// Runs one command line (args excludes the program name). Primary output
/// goes to `out`, a single diagnostic line to `err` on failure.
int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace ampwit

#endif
