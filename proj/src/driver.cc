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

#include "shorjit/driver.h"

#include <mutex>

#include "shorjit/circuits.h"
#include "shorjit/errors.h"
#include "shorjit/rng.h"

namespace shorjit {

ProgramCache::Entry ProgramCache::get(std::uint32_t n, std::uint32_t t, bool *hit) {
    const auto key = std::make_pair(n, t);
    {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
            if (hit) {
                *hit = true;
            }
            return it->second;
        }
    }
    std::unique_lock lock(mutex_);
    // Somebody may have inserted it between the two locks.
    auto it = entries_.find(key);
    if (it != entries_.end()) {
        if (hit) {
            *hit = true;
        }
        return it->second;
    }
    auto start = std::chrono::steady_clock::now();
    auto program = std::make_shared<const ir::HybridProgram>(circuits::build_qpe_program(n, t));
    Entry entry{std::move(program), std::chrono::steady_clock::now() - start};
    entries_.emplace(key, entry);
    ++builds_;
    if (hit) {
        *hit = false;
    }
    return entry;
}

std::size_t ProgramCache::builds() const {
    std::shared_lock lock(mutex_);
    return builds_;
}

std::size_t ProgramCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

CandidateResult find_candidate_order(u64 N, u64 a, unsigned t, OptimizationFlags flags,
                                     std::uint64_t seed, ProgramCache &cache,
                                     const SimulatorConfig &config) {
    if (a < 2 || a + 1 >= N) {
        throw PreconditionError("find_candidate_order: a must lie in [2, N-2]");
    }
    if (gcd(a, N) != 1) {
        throw PreconditionError("find_candidate_order: gcd(a, N) must be 1");
    }
    const unsigned n = bit_width(N);
    CandidateResult result;
    ProgramCache::Entry entry = cache.get(n, t, &result.cache_hit);
    if (!result.cache_hit) {
        result.construction_time_s = entry.construction_time.count();
    }
    ElisionPlan plan = build_plan(a, N, n, t, flags);
    ir::ParamValues params = circuits::bind_qpe_params(*entry.program, plan);
    RunOutcome run = run_sampled(*entry.program, params, seed, config);
    result.j = run.j;
    result.order = candidate_order(run.j, t, N, a);
    return result;
}

std::string to_string(AttemptTrace::Outcome outcome) {
    switch (outcome) {
        case AttemptTrace::Outcome::GcdShortcut:
            return "gcd-shortcut";
        case AttemptTrace::Outcome::NoCandidate:
            return "no-candidate";
        case AttemptTrace::Outcome::OddOrder:
            return "odd-order";
        case AttemptTrace::Outcome::TrivialRoot:
            return "trivial-root";
        case AttemptTrace::Outcome::Factored:
            return "factored";
    }
    return "unknown";
}

namespace {

void check_modulus(u64 N) {
    if (N < 15) {
        throw PreconditionError("N must be at least 15");
    }
    if (N % 2 == 0) {
        throw PreconditionError("N must be odd");
    }
    if (is_prime_power(N)) {
        throw PreconditionError("N must not be a prime power");
    }
}

void finish(FactoringResult &result, u64 x, u64 y) {
    if (x > y) {
        std::swap(x, y);
    }
    result.success = true;
    result.p = x;
    result.q = y;
}

}  // namespace

FactoringResult shors_algorithm(u64 N, const ShorOptions &options, ProgramCache &cache) {
    check_modulus(N);
    const unsigned n = bit_width(N);
    const unsigned t = options.t ? options.t : 2 * n;
    // Fail up front so the outcome does not depend on whether a gcd shortcut
    // happens to fire before the first simulation.
    if (2 * n + 3 > options.simulator.max_qubits) {
        throw CapacityError("N needs " + std::to_string(2 * n + 3) + " qubits; the simulator allows " +
                            std::to_string(options.simulator.max_qubits));
    }
    Rng rng(options.seed);
    FactoringResult result;

    for (unsigned attempt = 0; attempt < options.max_attempts; ++attempt) {
        AttemptTrace trace;
        trace.a = (attempt == 0 && options.forced_a) ? *options.forced_a
                                                     : rng.uniform_int(2, N - 2);
        u64 g = gcd(N, trace.a);
        if (g > 1) {
            trace.shortcut = true;
            trace.outcome = AttemptTrace::Outcome::GcdShortcut;
            result.attempts.push_back(trace);
            finish(result, g, N / g);
            return result;
        }
        CandidateResult shot = find_candidate_order(N, trace.a, t, options.flags,
                                                    rng.split(attempt).next_u64(), cache,
                                                    options.simulator);
        trace.j = shot.j;
        trace.order = shot.order;
        // The order test guards against a candidate that is not an order.
        if (!shot.order || mod_exp(trace.a, *shot.order, N) != 1) {
            trace.outcome = AttemptTrace::Outcome::NoCandidate;
        } else if (*shot.order % 2 != 0) {
            trace.outcome = AttemptTrace::Outcome::OddOrder;
        } else {
            u64 root = mod_exp(trace.a, *shot.order / 2, N);
            if (root == 1 || root == N - 1) {
                trace.outcome = AttemptTrace::Outcome::TrivialRoot;
            } else {
                // root^2 = 1 with root != +-1, so both gcds are proper factors.
                u64 x = gcd(N, root - 1);
                u64 y = gcd(N, root + 1);
                if (x <= 1 || y <= 1 || x * y != N) {
                    throw InternalConsistencyError("nontrivial root " + std::to_string(root) +
                                                   " did not split " + std::to_string(N));
                }
                trace.outcome = AttemptTrace::Outcome::Factored;
                result.attempts.push_back(trace);
                finish(result, x, y);
                return result;
            }
        }
        result.attempts.push_back(trace);
    }
    return result;
}

FactoringResult shors_algorithm(u64 N, const ShorOptions &options) {
    ProgramCache cache;
    return shors_algorithm(N, options, cache);
}

void to_json(nlohmann::json &j, const AttemptTrace &trace) {
    j = nlohmann::json{{"a", trace.a},
                       {"shortcut", trace.shortcut},
                       {"outcome", to_string(trace.outcome)}};
    j["j"] = trace.j ? nlohmann::json(*trace.j) : nlohmann::json(nullptr);
    j["order"] = trace.order ? nlohmann::json(*trace.order) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json &j, const FactoringResult &result) {
    j = nlohmann::json{{"success", result.success}, {"attempts", result.attempts}};
    if (result.success) {
        j["p"] = result.p;
        j["q"] = result.q;
    }
}

}  // namespace shorjit
