// Copyright 2026 The Shorjit Authors
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

#pragma once

#include <cstdint>

namespace shorjit {

/// Counter-based SplitMix64 generator.
///
/// Draw i of a stream is mix64(key + (i + 1) * 0x9E3779B97F4A7C15), where key
/// is derived from (seed, stream) by the same finalizer. The sequence depends
/// only on integer arithmetic, so it is identical on every platform. split()
/// derives an independent child stream without advancing the parent.
class Rng {
   public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [lo, hi] (inclusive), by rejection.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

    Rng split(std::uint64_t stream) const;

    std::uint64_t key() const {
        return key_;
    }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace shorjit
