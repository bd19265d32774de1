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

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "shorjit/ir.h"
#include "shorjit/number_theory.h"
#include "shorjit/optimizer.h"
#include "shorjit/simulator.h"

namespace shorjit {

/// Built QPE programs keyed by (bit width, rounds). Programs are immutable
/// once inserted; lookups take a shared lock and only a miss takes the
/// exclusive one.
class ProgramCache {
   public:
    struct Entry {
        std::shared_ptr<const ir::HybridProgram> program;
        std::chrono::duration<double> construction_time{};
    };

    /// Returns the cached entry, building it on a miss. hit reports which.
    Entry get(std::uint32_t n, std::uint32_t t, bool *hit = nullptr);

    /// Number of programs built so far.
    std::size_t builds() const;
    std::size_t size() const;

   private:
    mutable std::shared_mutex mutex_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Entry> entries_;
    std::size_t builds_ = 0;
};

struct CandidateResult {
    std::optional<u64> order;
    u64 j = 0;
    bool cache_hit = false;
    /// Zero on a cache hit.
    double construction_time_s = 0.0;
};

/// One order-finding shot: binds (N, a) into the cached n-bit program, runs a
/// single sampled simulation and reads a candidate order off j.
CandidateResult find_candidate_order(u64 N, u64 a, unsigned t, OptimizationFlags flags,
                                     std::uint64_t seed, ProgramCache &cache,
                                     const SimulatorConfig &config = {});

struct AttemptTrace {
    enum class Outcome {
        GcdShortcut,
        NoCandidate,  // j gave no order
        OddOrder,
        TrivialRoot,  // a^(r/2) = +-1 mod N
        Factored,
    };
    u64 a = 0;
    bool shortcut = false;
    std::optional<u64> j;
    std::optional<u64> order;
    Outcome outcome = Outcome::NoCandidate;
};

std::string to_string(AttemptTrace::Outcome outcome);

struct FactoringResult {
    bool success = false;
    u64 p = 0;
    u64 q = 0;
    std::vector<AttemptTrace> attempts;
};

struct ShorOptions {
    std::uint64_t seed = 0;
    /// Rounds of phase estimation; 0 means 2n.
    unsigned t = 0;
    OptimizationFlags flags = OptimizationFlags::all();
    unsigned max_attempts = 32;
    /// Use this a on the first attempt instead of drawing one.
    std::optional<u64> forced_a;
    SimulatorConfig simulator;
};

/// Classical Shor loop around find_candidate_order. Throws PreconditionError
/// for even N, prime powers, or N < 15. A run that exhausts its attempts
/// returns success = false with the full trace.
FactoringResult shors_algorithm(u64 N, const ShorOptions &options, ProgramCache &cache);

/// Convenience overload with a private cache.
FactoringResult shors_algorithm(u64 N, const ShorOptions &options = {});

void to_json(nlohmann::json &j, const AttemptTrace &trace);
void to_json(nlohmann::json &j, const FactoringResult &result);

}  // namespace shorjit
