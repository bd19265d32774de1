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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "shorjit/ir.h"
#include "shorjit/number_theory.h"
#include "shorjit/optimizer.h"

namespace shorjit {

/// Gate tallies of one unrolled program. Measurements and resets are kept
/// apart and never enter total().
struct GateCounts {
    std::uint64_t one_qubit = 0;
    std::uint64_t two_qubit = 0;
    std::uint64_t three_qubit = 0;
    std::uint64_t measurements = 0;
    std::uint64_t resets = 0;
    bool count_zero_angle = true;

    std::uint64_t total() const {
        return one_qubit + two_qubit + three_qubit;
    }
    bool operator==(const GateCounts &) const = default;
};

struct CountOptions {
    /// Expand 3-qubit gates into 1- and 2-qubit gates before counting:
    ///   CCPhase(x) -> CPhase(x/2) CNOT CPhase(-x/2) CNOT CPhase(x/2)
    ///   CSwap      -> CNOT, H, CCPhase(pi) expanded as above, H, CNOT
    bool lowered = false;
    /// When false, phase gates whose angle reduces to exactly 0 are skipped.
    bool count_zero_angle = true;
};

/// Streams a bound program through a counting visitor. Every measurement
/// reads 0; gate counts do not depend on that choice because outcomes only
/// feed angles.
GateCounts count_gates(const ir::HybridProgram &program, const ir::ParamValues &params,
                       const CountOptions &options = {});

/// Builds, plans and binds the (N, a) instance, then counts it. t = 0 means 2n.
GateCounts count_gates(u64 N, u64 a, unsigned t, OptimizationFlags flags,
                       const CountOptions &options = {});

/// Odd semiprime p*q (p < q distinct odd primes) of exactly n bits with q/p
/// as close to 1 as possible; ties go to the larger product. Throws
/// InvalidArgument when no such number exists (n < 4).
u64 balanced_semiprime(unsigned n);

struct BenchRecord {
    unsigned n = 0;
    std::optional<u64> N;
    std::optional<u64> a;
    OptimizationFlags flags = OptimizationFlags::beauregard();
    double construction_time_s = 0.0;
    std::size_t node_count = 0;
    std::optional<GateCounts> counts;
    std::optional<double> reduction_ratio;

    bool operator==(const BenchRecord &) const = default;
};

/// Free-text context stored next to the records.
struct BenchMetadata {
    std::string host;
    std::string build_profile;
    unsigned repetitions = 0;
    std::uint64_t seed = 0;
    unsigned samples = 0;
};

BenchMetadata current_metadata();

/// Mean cold construction time of the QPE program per bit width. One
/// untimed warm-up build precedes the measurements. Each repetition times a
/// batch of back-to-back builds lasting at least min_batch_s and records the
/// per-build mean, so the clock's resolution never dominates. t = 0 means 2n.
std::vector<BenchRecord> bench_construction(const std::vector<unsigned> &bit_widths,
                                            unsigned repetitions, unsigned t = 0,
                                            double min_batch_s = 0.01);

struct RatioOptions {
    unsigned samples = 10;
    std::uint64_t seed = 0;
    unsigned t = 0;  // 0 means 2n
    unsigned threads = 1;
    OptimizationFlags baseline = OptimizationFlags::beauregard();
    OptimizationFlags optimized = OptimizationFlags::all();
    CountOptions counting;
};

/// For each n: N = balanced_semiprime(n), the fixed a = 2 row, then
/// `samples` random a drawn from [3, N-2] coprime to N (distinct while
/// enough candidates exist). Each a yields a baseline record and an
/// optimized record whose reduction_ratio is 1 - optimized/baseline total.
std::vector<BenchRecord> bench_ratio(const std::vector<unsigned> &bit_widths,
                                     const RatioOptions &options = {});

struct RatioSummary {
    unsigned n = 0;
    u64 N = 0;
    double fixed_a2 = 0.0;
    double random_mean = 0.0;
    std::size_t random_samples = 0;
};

/// Per-n reduction of the a = 2 row and mean over the random rows, read from
/// the optimized records of bench_ratio.
std::vector<RatioSummary> summarize_ratio(const std::vector<BenchRecord> &records,
                                          const OptimizationFlags &optimized =
                                              OptimizationFlags::all());

/// CSV with header n,N,a,flags,construction_time_s,node_count,g1,g2,g3,total,
/// reduction_ratio. Absent optional fields are empty. Metadata, when given,
/// goes on a leading '#' line.
void write_csv(std::ostream &out, const std::vector<BenchRecord> &records,
               const BenchMetadata *metadata = nullptr);
/// Inverse of write_csv. '#' lines are skipped. Throws InvalidArgument on a
/// bad header or field.
std::vector<BenchRecord> parse_csv(std::istream &in);

void to_json(nlohmann::json &j, const GateCounts &counts);
void to_json(nlohmann::json &j, const BenchRecord &record);
void to_json(nlohmann::json &j, const BenchMetadata &metadata);

}  // namespace shorjit
