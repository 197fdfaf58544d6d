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

#ifndef AMPWIT_PARALLEL_H
#define AMPWIT_PARALLEL_H

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ampwit {

/// SplitMix64 finalizer applied to (base, stream). Used to give every
/// resample / pulse block its own reproducible generator seed, so results do
/// not depend on how work is split across threads.
uint64_t derive_seed(uint64_t base, uint64_t stream);

/// Runs fn(i) for i in [0, count) on up to hardware_concurrency threads.
/// fn must only write to state owned by index i.
void parallel_for(size_t count, const std::function<void(size_t)> &fn);

}  // namespace ampwit

#endif
