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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "shorjit/number_theory.h"

namespace shorjit {

/// Instance-specific optimizations, each independently switchable.
///
/// All-false is the literal textbook circuit, where iteration k applies the
/// controlled U_a 2^p times. beauregard() is the standard baseline circuit
/// that applies U_{a^{2^p}} once from a classically computed power, and is
/// what "unoptimized" means in counts and comparisons.
struct OptimizationFlags {
    bool use_precomputed_powers = false;
    bool first_iteration_as_addition = false;
    bool elide_adders_by_or_mask = false;
    bool elide_overflow_checks = false;

    static OptimizationFlags all() {
        return {true, true, true, true};
    }
    static OptimizationFlags beauregard() {
        return {true, false, false, false};
    }

    /// Accepts "all", "none" (the Beauregard baseline), "naive" (every flag
    /// off) or a subset of powers,first-add,or-mask,overflow separated by ','
    /// or '+'.
    /// Throws InvalidArgument on anything else.
    static OptimizationFlags parse(std::string_view text);

    /// Canonical '+'-joined flag list (safe inside a CSV field); "naive" when
    /// every flag is off.
    std::string to_string() const;

    bool operator==(const OptimizationFlags &) const = default;
};

/// Sorted, duplicate-free residues that may be present in a register.
using ReachableSet = std::vector<u64>;

struct PowerTables {
    std::vector<u64> powers;          // a^{2^k} mod N, k = 0..t-1
    std::vector<u64> inverse_powers;  // (a^{2^k})^{-1} mod N
};

/// Throws InvalidArgument unless gcd(a, N) = 1 and t >= 1.
PowerTables precompute_powers(u64 a, u64 N, unsigned t);

/// {a^j mod N : 0 <= j < 2^k}, grown one squaring at a time and stopping once
/// it saturates at the order of a.
ReachableSet reachable_values(u64 a, u64 N, unsigned k);

/// Bitwise OR of every value in the set. Throws InvalidArgument if a value
/// does not fit in n bits.
u64 or_mask(const ReachableSet &values, unsigned n);

/// Decisions for one controlled multiplier: keep[j] runs adder j at all,
/// overflow[j] keeps its overflow detection and correction. Indexed by adder
/// (bit position j of the control register).
struct MultiplierPlan {
    std::vector<bool> keep;
    std::vector<bool> overflow;

    bool operator==(const MultiplierPlan &) const = default;
};

/// QPE iteration k applies the multiplier for power p = t-1-k (highest power
/// first). reachable_size is the size of the target-register set before the
/// iteration, or 0 once tracking has been abandoned at the cap.
struct IterationPlan {
    u64 multiplier = 1;
    u64 inverse = 1;
    u64 or_mask = 0;
    u64 inverse_or_mask = 0;
    std::size_t reachable_size = 0;
    MultiplierPlan forward;
    MultiplierPlan inverse_plan;

    bool operator==(const IterationPlan &) const = default;
};

struct ElisionPlan {
    u64 N = 0;
    u64 a = 0;
    unsigned n = 0;
    unsigned t = 0;
    OptimizationFlags flags;
    std::vector<u64> powers;
    std::vector<u64> inverse_powers;
    std::vector<IterationPlan> iterations;

    bool operator==(const ElisionPlan &) const = default;
};

struct PlannerOptions {
    /// Largest reachable set tracked exactly. Past it every later decision
    /// falls back to "keep everything".
    std::size_t set_cap = std::size_t{1} << 16;
};

/// Runtime elision plan for one (a, N).
///
/// The target register's reachable set is tracked exactly through the QPE
/// iterations. Forward multipliers start from an empty accumulator; inverse
/// multipliers start from the known product and are followed subtraction by
/// subtraction. An overflow check is dropped only when no reachable branch in
/// which the adder fires can leave [0, N).
ElisionPlan build_plan(u64 a, u64 N, unsigned n, unsigned t, OptimizationFlags flags,
                       PlannerOptions options = {});

void to_json(nlohmann::json &j, const OptimizationFlags &flags);
void from_json(const nlohmann::json &j, OptimizationFlags &flags);
void to_json(nlohmann::json &j, const ElisionPlan &plan);
void from_json(const nlohmann::json &j, ElisionPlan &plan);

}  // namespace shorjit
