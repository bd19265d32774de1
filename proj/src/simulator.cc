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

#include "shorjit/simulator.h"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "shorjit/errors.h"

namespace shorjit {

namespace {

constexpr double kPruneProbability = 1e-15;
constexpr double kNormTolerance = 1e-6;
// A qubit this close to a definite value is treated as definite by reset.
constexpr double kDefinite = 1e-12;

// Calls f(i) for every index whose bits under fixed_mask equal set_mask.
// Free bits are counted through by carrying over the fixed positions.
template <class F>
inline void for_each_fixed(std::uint64_t size, std::uint64_t fixed_mask, std::uint64_t set_mask,
                           F &&f) {
    const std::uint64_t count = size >> std::popcount(fixed_mask);
    std::uint64_t i = set_mask;
    for (std::uint64_t c = 0; c < count; ++c) {
        f(i);
        i = (((i | fixed_mask) + 1) & ~fixed_mask) | set_mask;
    }
}

void check_qubits(const StateVector &state, const ir::Event &event) {
    for (int k = 0; k < event.arity; ++k) {
        if (event.qubits[k] >= state.num_qubits()) {
            throw MalformedProgram("qubit " + std::to_string(event.qubits[k]) +
                                   " outside a state of " + std::to_string(state.num_qubits()) +
                                   " qubits");
        }
    }
}

void check_capacity(const ir::HybridProgram &program, const SimulatorConfig &config) {
    if (program.num_qubits() > config.max_qubits) {
        throw CapacityError("program needs " + std::to_string(program.num_qubits()) +
                            " qubits, simulator limit is " + std::to_string(config.max_qubits));
    }
}

void check_norm(const StateVector &state) {
    double norm = state.norm_squared();
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw InternalConsistencyError("state norm drifted to " + std::to_string(norm));
    }
}

std::uint64_t assemble(const std::vector<std::uint8_t> &bits) {
    std::uint64_t j = 0;
    for (std::size_t k = 0; k < bits.size() && k < 64; ++k) {
        j |= std::uint64_t{bits[k]} << k;
    }
    return j;
}

}  // namespace

StateVector::StateVector(std::uint32_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits > 40) {
        throw CapacityError("refusing to allocate " + std::to_string(num_qubits) + " qubits");
    }
    amps_.assign(std::size_t{1} << num_qubits, amplitude{});
    amps_[0] = 1.0;
}

StateVector StateVector::basis_state(std::uint32_t num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.amps_.size()) {
        throw InvalidArgument("basis index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm_squared() const {
    double sum = 0.0;
    for (const amplitude &a : amps_) {
        sum += std::norm(a);
    }
    return sum;
}

double StateVector::probability_one(std::uint32_t qubit) const {
    auto [p0, p1] = outcome_weights(qubit);
    return p1 / (p0 + p1);
}

std::pair<double, double> StateVector::outcome_weights(std::uint32_t qubit) const {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double p0 = 0.0;
    double p1 = 0.0;
    for_each_fixed(amps_.size(), bit, 0, [&](std::uint64_t i) {
        p0 += std::norm(amps_[i]);
        p1 += std::norm(amps_[i | bit]);
    });
    return {p0, p1};
}

void StateVector::collapse(std::uint32_t qubit, int outcome) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    auto [p0, p1] = outcome_weights(qubit);
    const double kept = outcome ? p1 : p0;
    if (kept <= 0.0) {
        throw InternalConsistencyError("collapse onto an outcome of zero weight");
    }
    const double scale = 1.0 / std::sqrt(kept);
    const std::uint64_t keep = outcome ? bit : 0;
    for_each_fixed(amps_.size(), bit, keep, [&](std::uint64_t i) { amps_[i] *= scale; });
    for_each_fixed(amps_.size(), bit, keep ^ bit, [&](std::uint64_t i) { amps_[i] = 0.0; });
}

void StateVector::flip(std::uint32_t qubit) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    for_each_fixed(amps_.size(), bit, 0,
                   [&](std::uint64_t i) { std::swap(amps_[i], amps_[i | bit]); });
}

void apply_gate(StateVector &state, const ir::Event &event) {
    check_qubits(state, event);
    auto &amps = state.amplitudes();
    const std::uint64_t size = amps.size();
    const auto &q = event.qubits;
    auto mask = [](std::uint32_t qubit) { return std::uint64_t{1} << qubit; };

    switch (event.gate) {
        case ir::GateKind::H: {
            const std::uint64_t b = mask(q[0]);
            const double r = 0.70710678118654752440;
            for_each_fixed(size, b, 0, [&](std::uint64_t i) {
                amplitude x = amps[i];
                amplitude y = amps[i | b];
                amps[i] = r * (x + y);
                amps[i | b] = r * (x - y);
            });
            break;
        }
        case ir::GateKind::X:
            state.flip(q[0]);
            break;
        case ir::GateKind::Phase:
        case ir::GateKind::CPhase:
        case ir::GateKind::CCPhase: {
            if (event.zero_angle) {
                break;
            }
            std::uint64_t all = 0;
            for (int k = 0; k < event.arity; ++k) {
                all |= mask(q[k]);
            }
            const amplitude phase = std::polar(1.0, event.angle);
            for_each_fixed(size, all, all, [&](std::uint64_t i) { amps[i] *= phase; });
            break;
        }
        case ir::GateKind::CNOT: {
            const std::uint64_t c = mask(q[0]);
            const std::uint64_t t = mask(q[1]);
            for_each_fixed(size, c | t, c, [&](std::uint64_t i) { std::swap(amps[i], amps[i | t]); });
            break;
        }
        case ir::GateKind::CSwap: {
            const std::uint64_t c = mask(q[0]);
            const std::uint64_t x = mask(q[1]);
            const std::uint64_t y = mask(q[2]);
            for_each_fixed(size, c | x | y, c | x,
                           [&](std::uint64_t i) { std::swap(amps[i], amps[(i ^ x) | y]); });
            break;
        }
    }
}

std::uint64_t MeasurementRecord::j() const {
    return assemble(theta);
}

MeasurementRecord execute(StateVector &state, const ir::HybridProgram &program,
                          const ir::ParamValues &params, Rng &rng) {
    if (state.num_qubits() != program.num_qubits()) {
        throw InvalidArgument("state has " + std::to_string(state.num_qubits()) +
                              " qubits, program needs " + std::to_string(program.num_qubits()));
    }
    struct Runner {
        StateVector &state;
        Rng &rng;

        void gate(const ir::Event &e) {
            apply_gate(state, e);
        }
        int measure(const ir::Event &e) {
            check_qubits(state, e);
            check_norm(state);
            double p1 = state.probability_one(e.qubits[0]);
            int outcome = rng.uniform() < p1 ? 1 : 0;
            state.collapse(e.qubits[0], outcome);
            return outcome;
        }
        void reset(const ir::Event &e) {
            check_qubits(state, e);
            double p1 = state.probability_one(e.qubits[0]);
            if (p1 < kDefinite) {
                return;
            }
            if (p1 <= 1.0 - kDefinite) {
                int outcome = rng.uniform() < p1 ? 1 : 0;
                state.collapse(e.qubits[0], outcome);
                if (!outcome) {
                    return;
                }
            }
            state.flip(e.qubits[0]);
        }
    };
    ir::Unroller cursor(program, params);
    Runner runner{state, rng};
    while (const ir::Event *e = cursor.next()) {
        switch (e->kind) {
            case ir::Event::Kind::Gate:
                runner.gate(*e);
                break;
            case ir::Event::Kind::Measure:
                cursor.resolve_measurement(runner.measure(*e));
                break;
            case ir::Event::Kind::Reset:
                runner.reset(*e);
                break;
        }
    }
    check_norm(state);
    return MeasurementRecord{cursor.outcomes()};
}

RunOutcome run_sampled(const ir::HybridProgram &program, const ir::ParamValues &params,
                       std::uint64_t seed, const SimulatorConfig &config) {
    check_capacity(program, config);
    params.check_complete();
    StateVector state(program.num_qubits());
    Rng rng(seed);
    RunOutcome out;
    out.record = execute(state, program, params, rng);
    out.j = out.record.j();
    return out;
}

namespace {

class Enumerator {
   public:
    Enumerator(std::size_t max_branches, const LeafVisitor &visit)
        : max_branches_(max_branches), visit_(visit) {}

    // Runs the cursor forward until the next split or the end of the program.
    void explore(ir::Unroller cursor, StateVector state, double probability) {
        while (const ir::Event *e = cursor.next()) {
            if (e->kind == ir::Event::Kind::Gate) {
                apply_gate(state, *e);
                continue;
            }
            check_qubits(state, *e);
            const std::uint32_t qubit = e->qubits[0];
            const double p1 = state.probability_one(qubit);
            if (e->kind == ir::Event::Kind::Reset) {
                if (p1 < kDefinite) {
                    continue;
                }
                if (p1 > 1.0 - kDefinite) {
                    state.flip(qubit);
                    continue;
                }
                // A reset of a superposed qubit is a mixture; explore both parts.
                split(std::move(cursor), std::move(state), probability, qubit, p1, false,
                      /*is_reset=*/true);
                return;
            }
            check_norm(state);
            split(std::move(cursor), std::move(state), probability, qubit, p1, true, false);
            return;
        }
        check_norm(state);
        if (leaves_.size() >= max_branches_) {
            throw CapacityError("branch budget of " + std::to_string(max_branches_) +
                                " exceeded");
        }
        RunOutcome leaf;
        leaf.record.theta = cursor.outcomes();
        leaf.j = leaf.record.j();
        leaf.probability = probability;
        if (visit_) {
            visit_(leaf, state);
        }
        leaves_.push_back(std::move(leaf));
    }

    std::vector<RunOutcome> take() {
        return std::move(leaves_);
    }

   private:
    void split(ir::Unroller cursor, StateVector state, double probability, std::uint32_t qubit,
               double p1, bool is_measure, bool is_reset) {
        const double p[2] = {1.0 - p1, p1};
        const bool live[2] = {probability * p[0] >= kPruneProbability,
                              probability * p[1] >= kPruneProbability};
        for (int outcome = 0; outcome < 2; ++outcome) {
            if (!live[outcome]) {
                continue;
            }
            const bool last = outcome == 1 || !live[1];
            ir::Unroller c = last ? std::move(cursor) : cursor;
            StateVector s = last ? std::move(state) : state;
            s.collapse(qubit, outcome);
            if (is_measure) {
                c.resolve_measurement(outcome);
            }
            if (is_reset && outcome == 1) {
                s.flip(qubit);
            }
            explore(std::move(c), std::move(s), probability * p[outcome]);
        }
    }

    std::size_t max_branches_;
    const LeafVisitor &visit_;
    std::vector<RunOutcome> leaves_;
};

}  // namespace

std::vector<RunOutcome> enumerate_branches(const ir::HybridProgram &program,
                                           const ir::ParamValues &params,
                                           std::size_t max_branches,
                                           const SimulatorConfig &config,
                                           const LeafVisitor &visit_leaf) {
    check_capacity(program, config);
    params.check_complete();
    Enumerator walk(max_branches, visit_leaf);
    walk.explore(ir::Unroller(program, params), StateVector(program.num_qubits()), 1.0);
    return walk.take();
}

}  // namespace shorjit
