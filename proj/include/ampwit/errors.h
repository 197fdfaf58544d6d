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

#ifndef AMPWIT_ERRORS_H
#define AMPWIT_ERRORS_H

#include <stdexcept>
#include <string>

namespace ampwit {

/// Input failed a structural check (bad normalization, length mismatch,
/// malformed file). The CLI maps this to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input is well formed but outside the domain where an operation is defined
/// (mu_rel < 1, zero herald probability, degenerate sample). Exit code 3.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace ampwit

#endif
