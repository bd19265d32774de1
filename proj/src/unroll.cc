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

#include "shorjit/unroll.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "shorjit/errors.h"

namespace shorjit::ir {

Unroller::Unroller(const HybridProgram &program, const ParamValues &params)
    : program_(&program),
      params_(&params),
      exprs_(&program.exprs()),
      loop_vars_(program.loop_var_names().size(), 0),
      vars_(program.vars().size(), 0) {
    params.check_complete();
    for (const BitRegisterDecl &reg : program.bit_registers()) {
        bits_.emplace_back(reg.size, 0);
    }
    stack_.push_back(Frame{&program.body(), 0, nullptr, 0, 0});
}

Value Unroller::eval(ExprId id) const {
    const ExprNode &e = (*exprs_)[id];
    switch (e.op) {
        case ExprOp::Const:
            return e.value;
        case ExprOp::LoopVar:
            return loop_vars_[e.slot];
        case ExprOp::Param:
            return params_->values(e.slot)[0];
        case ExprOp::ParamAt: {
            Value i = eval(e.args[0]);
            const auto &values = params_->values(e.slot);
            if (i < 0 || static_cast<std::size_t>(i) >= values.size()) {
                throw MalformedProgram("index " + std::to_string(i) + " out of range for parameter '" +
                                       program_->params()[e.slot].name + "'");
            }
            return values[static_cast<std::size_t>(i)];
        }
        case ExprOp::Bit: {
            Value i = eval(e.args[0]);
            const auto &reg = bits_[e.slot];
            if (i < 0 || static_cast<std::size_t>(i) >= reg.size()) {
                throw MalformedProgram("index " + std::to_string(i) + " out of range for bits '" +
                                       program_->bit_registers()[e.slot].name + "'");
            }
            return reg[static_cast<std::size_t>(i)];
        }
        case ExprOp::Var:
            return vars_[e.slot];
        case ExprOp::Add:
            return eval(e.args[0]) + eval(e.args[1]);
        case ExprOp::Sub:
            return eval(e.args[0]) - eval(e.args[1]);
        case ExprOp::Mul:
            return eval(e.args[0]) * eval(e.args[1]);
        case ExprOp::Shl: {
            Value x = eval(e.args[0]);
            Value s = eval(e.args[1]);
            // Shifting into the sign bit wraps like the unsigned shift it is.
            if (s < 0 || s > 63) {
                throw MalformedProgram("shift amount " + std::to_string(s) + " out of range");
            }
            return static_cast<Value>(static_cast<std::uint64_t>(x) << s);
        }
        case ExprOp::Shr: {
            Value x = eval(e.args[0]);
            Value s = eval(e.args[1]);
            if (s < 0 || s > 63) {
                throw MalformedProgram("shift amount " + std::to_string(s) + " out of range");
            }
            return x >> s;
        }
        case ExprOp::Mod: {
            Value x = eval(e.args[0]);
            Value m = eval(e.args[1]);
            if (m <= 0) {
                throw MalformedProgram("modulus must be positive");
            }
            Value r = x % m;
            return r < 0 ? r + m : r;
        }
        case ExprOp::MulMod: {
            __int128 x = eval(e.args[0]);
            __int128 y = eval(e.args[1]);
            Value m = eval(e.args[2]);
            if (m <= 0) {
                throw MalformedProgram("modulus must be positive");
            }
            __int128 r = (x * y) % m;
            return static_cast<Value>(r < 0 ? r + m : r);
        }
        case ExprOp::BitOf: {
            Value x = eval(e.args[0]);
            Value i = eval(e.args[1]);
            if (i < 0 || i > 63) {
                throw MalformedProgram("bit index out of range");
            }
            return (static_cast<std::uint64_t>(x) >> i) & 1;
        }
        case ExprOp::Eq:
            return eval(e.args[0]) == eval(e.args[1]);
        case ExprOp::Lt:
            return eval(e.args[0]) < eval(e.args[1]);
        case ExprOp::Not:
            return eval(e.args[0]) == 0;
        case ExprOp::And:
            return eval(e.args[0]) != 0 && eval(e.args[1]) != 0;
        case ExprOp::Or:
            return eval(e.args[0]) != 0 || eval(e.args[1]) != 0;
        case ExprOp::Select:
            return eval(e.args[0]) != 0 ? eval(e.args[1]) : eval(e.args[2]);
    }
    throw MalformedProgram("unknown expression op");
}

std::uint32_t Unroller::eval_qubit(ExprId id) const {
    Value q = eval(id);
    if (q < 0 || q >= static_cast<Value>(program_->num_qubits())) {
        throw MalformedProgram("qubit index " + std::to_string(q) + " outside a " +
                               std::to_string(program_->num_qubits()) + "-qubit program");
    }
    return static_cast<std::uint32_t>(q);
}

const Event *Unroller::next() {
    if (pending_measure_) {
        throw std::logic_error("Unroller::next: measurement outcome not resolved");
    }
    while (!stack_.empty()) {
        Frame &f = stack_.back();
        if (f.loop != nullptr) {
            if (f.iter < f.count) {
                const ForOp *loop = f.loop;
                loop_vars_[loop->var] = loop->reverse ? f.count - 1 - f.iter : f.iter;
                ++f.iter;
                stack_.push_back(Frame{&loop->body, 0, nullptr, 0, 0});
            } else {
                stack_.pop_back();
            }
            continue;
        }
        if (f.pc >= f.block->size()) {
            stack_.pop_back();
            continue;
        }
        const Node &node = (*f.block)[f.pc++];
        switch (node.op.index()) {
            case 0: {
                const GateOp &g = std::get<GateOp>(node.op);
                int arity = gate_arity(g.kind);
                if (static_cast<int>(g.qubits.size()) != arity) {
                    throw MalformedProgram("gate arity mismatch for " +
                                           std::string(gate_name(g.kind)));
                }
                event_.kind = Event::Kind::Gate;
                event_.gate = g.kind;
                event_.arity = static_cast<std::uint8_t>(arity);
                for (int i = 0; i < arity; ++i) {
                    event_.qubits[static_cast<std::size_t>(i)] = eval_qubit(g.qubits[static_cast<std::size_t>(i)]);
                }
                for (int i = 0; i < arity; ++i) {
                    for (int k = i + 1; k < arity; ++k) {
                        if (event_.qubits[static_cast<std::size_t>(i)] == event_.qubits[static_cast<std::size_t>(k)]) {
                            throw MalformedProgram("gate " + std::string(gate_name(g.kind)) +
                                                   " repeats a qubit");
                        }
                    }
                }
                if (gate_has_angle(g.kind)) {
                    Value num = eval(g.angle.numerator);
                    Value den = eval(g.angle.log2_denominator);
                    if (den < 0 || den > 120) {
                        throw MalformedProgram("angle denominator exponent out of range");
                    }
                    __int128 modulus = static_cast<__int128>(1) << den;
                    __int128 r = static_cast<__int128>(num) % modulus;
                    if (r < 0) {
                        r += modulus;
                    }
                    event_.zero_angle = (r == 0);
                    event_.angle = g.angle.sign * 2.0 * std::numbers::pi *
                                   std::ldexp(static_cast<double>(r), -static_cast<int>(den));
                } else {
                    event_.zero_angle = true;
                    event_.angle = 0.0;
                }
                return &event_;
            }
            case 1: {
                const MeasureOp &m = std::get<MeasureOp>(node.op);
                event_.kind = Event::Kind::Measure;
                event_.arity = 1;
                event_.qubits[0] = eval_qubit(m.qubit);
                Value index = eval(m.index);
                if (index < 0 || static_cast<std::size_t>(index) >= bits_[m.bits].size()) {
                    throw MalformedProgram("measurement index out of range for bits '" +
                                           program_->bit_registers()[m.bits].name + "'");
                }
                pending_measure_ = true;
                pending_register_ = m.bits;
                pending_index_ = static_cast<std::size_t>(index);
                return &event_;
            }
            case 2: {
                event_.kind = Event::Kind::Reset;
                event_.arity = 1;
                event_.qubits[0] = eval_qubit(std::get<ResetOp>(node.op).qubit);
                return &event_;
            }
            case 3: {
                const AssignOp &a = std::get<AssignOp>(node.op);
                vars_[a.var] = eval(a.value);
                break;
            }
            case 4: {
                const ForOp &loop = std::get<ForOp>(node.op);
                Value count = eval(loop.bound);
                if (count < 0) {
                    throw MalformedProgram("negative loop bound");
                }
                stack_.push_back(Frame{nullptr, 0, &loop, 0, count});
                break;
            }
            case 5: {
                const IfOp &branch = std::get<IfOp>(node.op);
                const Block &arm = eval(branch.cond) != 0 ? branch.then_body : branch.else_body;
                if (!arm.empty()) {
                    stack_.push_back(Frame{&arm, 0, nullptr, 0, 0});
                }
                break;
            }
        }
    }
    return nullptr;
}

void Unroller::resolve_measurement(int outcome) {
    if (!pending_measure_) {
        throw std::logic_error("Unroller::resolve_measurement: no measurement pending");
    }
    auto bit = static_cast<std::uint8_t>(outcome != 0);
    bits_[pending_register_][pending_index_] = bit;
    outcomes_.push_back(bit);
    pending_measure_ = false;
}

}  // namespace shorjit::ir
