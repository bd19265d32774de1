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

#include <array>
#include <cstdint>
#include <vector>

#include "shorjit/ir.h"

namespace shorjit::ir {

/// One concrete operation produced while unrolling a program.
struct Event {
    enum class Kind : std::uint8_t { Gate, Measure, Reset };
    Kind kind = Kind::Gate;
    GateKind gate = GateKind::H;
    std::uint8_t arity = 0;
    std::array<std::uint32_t, 3> qubits{};
    double angle = 0.0;
    bool zero_angle = true;
};

/// Resumable cursor over the concrete event stream of a bound program.
///
/// Memory is proportional to nesting depth plus classical state, never to the
/// number of events. The cursor is a plain value: copying it forks the
/// execution, which is how branch enumeration explores both outcomes of a
/// measurement. After next() yields a Measure event the caller must supply
/// the outcome with resolve_measurement() before asking for the next event.
class Unroller {
   public:
    /// Throws MissingParameter if any slot of the program is unbound.
    Unroller(const HybridProgram &program, const ParamValues &params);

    /// Next event, or nullptr at the end of the program. The pointer stays
    /// valid until the following call.
    const Event *next();

    void resolve_measurement(int outcome);

    /// Outcomes in the order the measurements happened.
    const std::vector<std::uint8_t> &outcomes() const {
        return outcomes_;
    }

    const HybridProgram &program() const {
        return *program_;
    }

   private:
    struct Frame {
        const Block *block = nullptr;
        std::size_t pc = 0;
        const ForOp *loop = nullptr;
        Value iter = 0;
        Value count = 0;
    };

    Value eval(ExprId id) const;
    std::uint32_t eval_qubit(ExprId id) const;

    const HybridProgram *program_;
    const ParamValues *params_;
    const ExprPool *exprs_;
    std::vector<Frame> stack_;
    std::vector<Value> loop_vars_;
    std::vector<Value> vars_;
    std::vector<std::vector<std::uint8_t>> bits_;
    std::vector<std::uint8_t> outcomes_;
    Event event_;
    bool pending_measure_ = false;
    std::uint32_t pending_register_ = 0;
    std::size_t pending_index_ = 0;
};

/// Streams every concrete event of the program through the visitor in
/// program order. The visitor provides
///   void gate(const Event&);
///   int measure(const Event&);   // returns the outcome bit
///   void reset(const Event&);
template <class Visitor>
void stream_unroll(const HybridProgram &program, const ParamValues &params, Visitor &&visitor) {
    Unroller cursor(program, params);
    while (const Event *e = cursor.next()) {
        switch (e->kind) {
            case Event::Kind::Gate:
                visitor.gate(*e);
                break;
            case Event::Kind::Measure:
                cursor.resolve_measurement(visitor.measure(*e));
                break;
            case Event::Kind::Reset:
                visitor.reset(*e);
                break;
        }
    }
}

}  // namespace shorjit::ir
