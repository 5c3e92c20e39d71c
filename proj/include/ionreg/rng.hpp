// Copyright 2026 The ionreg Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ionreg {

using Rng = std::mt19937_64;

/// Name recorded in output manifests so that runs can be reproduced.
constexpr std::string_view kRngAlgorithm = "mt19937_64 seeded by std::seed_seq{master_lo, master_hi, task_lo, task_hi}";

/// Per-task generator derived deterministically from (master seed, task index).
inline Rng derive_rng(std::uint64_t master, std::uint64_t task) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32)};
    return Rng(seq);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task) { return derive_rng(master, task)(); }

}  // namespace ionreg
