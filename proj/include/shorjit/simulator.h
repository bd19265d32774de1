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

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "shorjit/ir.h"
#include "shorjit/rng.h"
#include "shorjit/unroll.h"

namespace shorjit {

using amplitude = std::complex<double>;

/// Dense state of q qubits. Basis index bit i is qubit i.
class StateVector {
   public:
    explicit StateVector(std::uint32_t num_qubits);

    static StateVector basis_state(std::uint32_t num_qubits, std::uint64_t index);

    std::uint32_t num_qubits() const {
        return num_qubits_;
    }
    std::vector<amplitude> &amplitudes() {
        return amps_;
    }
    const std::vector<amplitude> &amplitudes() const {
        return amps_;
    }

    double norm_squared() const;
    /// Born probability of reading 1, relative to the current norm.
    double probability_one(std::uint32_t qubit) const;

    /// Unnormalized squared weights of the 0 and 1 halves.
    std::pair<double, double> outcome_weights(std::uint32_t qubit) const;

    /// Projects qubit onto outcome and renormalizes the kept half to 1.
    void collapse(std::uint32_t qubit, int outcome);

    /// Pauli X on qubit.
    void flip(std::uint32_t qubit);

   private:
    std::uint32_t num_qubits_;
    std::vector<amplitude> amps_;
};

/// Applies one gate event in place. Throws MalformedProgram on a qubit index
/// outside the state.
void apply_gate(StateVector &state, const ir::Event &event);

/// Measurement outcomes in the order they happened.
struct MeasurementRecord {
    std::vector<std::uint8_t> theta;

    /// sum_k theta_k 2^k.
    std::uint64_t j() const;

    bool operator==(const MeasurementRecord &) const = default;
};

struct RunOutcome {
    MeasurementRecord record;
    std::uint64_t j = 0;
    std::optional<double> probability;  // enumeration only
};

struct SimulatorConfig {
    std::uint32_t max_qubits = 20;
};

/// Runs the program from |0...0> on state-owned storage, sampling every
/// measurement from rng. The outcome is (u < p1) for a fresh uniform u.
MeasurementRecord execute(StateVector &state, const ir::HybridProgram &program,
                          const ir::ParamValues &params, Rng &rng);

/// One sampled run. Identical (program, params, seed) give identical records.
RunOutcome run_sampled(const ir::HybridProgram &program, const ir::ParamValues &params,
                       std::uint64_t seed, const SimulatorConfig &config = {});

/// Called once per surviving branch with its outcome and final state.
using LeafVisitor = std::function<void(const RunOutcome &, const StateVector &)>;

/// Exact outcome distribution by depth-first exploration of both results of
/// every measurement. Branches below 1e-15 probability are dropped. Throws
/// CapacityError once more than max_branches leaves would be produced.
std::vector<RunOutcome> enumerate_branches(const ir::HybridProgram &program,
                                           const ir::ParamValues &params,
                                           std::size_t max_branches,
                                           const SimulatorConfig &config = {},
                                           const LeafVisitor &visit_leaf = {});

}  // namespace shorjit
