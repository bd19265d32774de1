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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace shorjit::ir {

/// Classical value type of the IR. Every integer expression evaluates to this.
using Value = std::int64_t;
using ExprId = std::uint32_t;

enum class ExprOp : std::uint8_t {
    Const,
    LoopVar,  // slot = loop variable id
    Param,    // slot = param id, scalar
    ParamAt,  // slot = param id, args[0] = index
    Bit,      // slot = bit register id, args[0] = index
    Var,      // slot = classical variable id
    Add,
    Sub,
    Mul,
    Shl,
    Shr,
    Mod,     // non-negative remainder
    MulMod,  // args[0] * args[1] mod args[2] with a 128-bit product
    BitOf,   // (args[0] >> args[1]) & 1
    Eq,
    Lt,
    Not,
    And,
    Or,
    Select,  // args[0] ? args[1] : args[2]
};

struct ExprNode {
    ExprOp op = ExprOp::Const;
    std::uint32_t slot = 0;
    Value value = 0;
    std::array<ExprId, 3> args{};
};

class ExprPool {
   public:
    ExprId add(ExprNode node) {
        nodes_.push_back(node);
        return static_cast<ExprId>(nodes_.size() - 1);
    }
    const ExprNode &operator[](ExprId id) const {
        return nodes_[id];
    }
    std::size_t size() const {
        return nodes_.size();
    }

   private:
    std::vector<ExprNode> nodes_;
};

/// Expression handle used while building. Carries its pool so the usual
/// operators can be written inline; only the id is stored in nodes.
struct Expr {
    ExprPool *pool = nullptr;
    ExprId id = 0;

    Expr mulmod(Expr y, Expr modulus) const;
    Expr bit(Expr index) const;
    Expr select(Expr if_true, Expr if_false) const;
};

Expr operator+(Expr x, Expr y);
Expr operator-(Expr x, Expr y);
Expr operator*(Expr x, Expr y);
Expr operator<<(Expr x, Expr y);
Expr operator>>(Expr x, Expr y);
Expr operator%(Expr x, Expr y);
Expr operator==(Expr x, Expr y);
Expr operator<(Expr x, Expr y);
Expr operator!(Expr x);
Expr operator&&(Expr x, Expr y);
Expr operator||(Expr x, Expr y);
Expr operator+(Expr x, Value y);
Expr operator-(Expr x, Value y);
Expr operator-(Value x, Expr y);
Expr operator*(Expr x, Value y);
Expr operator==(Expr x, Value y);

enum class GateKind : std::uint8_t { H, X, Phase, CPhase, CCPhase, CNOT, CSwap };

/// Number of qubits a gate kind acts on (controls included).
int gate_arity(GateKind kind);
bool gate_has_angle(GateKind kind);
std::string_view gate_name(GateKind kind);

/// sign * 2*pi * (numerator mod 2^log2_denominator) / 2^log2_denominator.
///
/// The reduction is done in exact integer arithmetic before converting to
/// double, so the angle is exact up to the final rounding and "zero" is
/// decided without tolerance.
struct Angle {
    ExprId numerator = 0;
    ExprId log2_denominator = 0;
    int sign = 1;
};

struct Node;
using Block = std::vector<Node>;

/// Qubit order: controls first, target last. CSwap is (control, a, b).
struct GateOp {
    GateKind kind = GateKind::H;
    std::vector<ExprId> qubits;
    Angle angle{};
};

struct MeasureOp {
    ExprId qubit = 0;
    std::uint32_t bits = 0;
    ExprId index = 0;
};

struct ResetOp {
    ExprId qubit = 0;
};

struct AssignOp {
    std::uint32_t var = 0;
    ExprId value = 0;
};

/// Runs body for var = 0 .. bound-1, or bound-1 .. 0 when reverse is set.
/// The bound is evaluated once on entry.
struct ForOp {
    ExprId bound = 0;
    std::uint32_t var = 0;
    bool reverse = false;
    Block body;
};

struct IfOp {
    ExprId cond = 0;
    Block then_body;
    Block else_body;
};

struct Node {
    std::variant<GateOp, MeasureOp, ResetOp, AssignOp, ForOp, IfOp> op;
};

/// Fixed qubit split of a Shor program of bit width n: target register
/// [0, n), accumulator [n, 2n] (n+1 qubits, top qubit is the overflow bit),
/// modular-adder ancilla 2n+1, estimation qubit 2n+2. Qubit 0 of a register
/// is its least significant bit.
struct RegisterLayout {
    std::uint32_t n = 0;

    static RegisterLayout for_bit_width(std::uint32_t n) {
        return RegisterLayout{n};
    }
    std::uint32_t target_start() const {
        return 0;
    }
    std::uint32_t target_size() const {
        return n;
    }
    std::uint32_t accumulator_start() const {
        return n;
    }
    std::uint32_t accumulator_size() const {
        return n + 1;
    }
    std::uint32_t ancilla() const {
        return 2 * n + 1;
    }
    std::uint32_t estimation() const {
        return 2 * n + 2;
    }
    std::uint32_t auxiliary_size() const {
        return n + 2;
    }
    std::uint32_t total() const {
        return 2 * n + 3;
    }
};

struct ParamDecl {
    std::string name;
    std::size_t size = 1;
    bool is_array = false;
};

struct BitRegisterDecl {
    std::string name;
    std::size_t size = 0;
};

struct VarDecl {
    std::string name;
};

class HybridProgram {
   public:
    std::uint32_t bit_width() const {
        return layout_.n;
    }
    std::uint32_t num_qubits() const {
        return layout_.total();
    }
    const RegisterLayout &layout() const {
        return layout_;
    }
    const Block &body() const {
        return body_;
    }
    const ExprPool &exprs() const {
        return *exprs_;
    }
    const std::vector<ParamDecl> &params() const {
        return params_;
    }
    const std::vector<BitRegisterDecl> &bit_registers() const {
        return bit_registers_;
    }
    const std::vector<VarDecl> &vars() const {
        return vars_;
    }
    std::vector<std::string> const &loop_var_names() const {
        return loop_vars_;
    }
    std::optional<std::uint32_t> find_param(std::string_view name) const;

   private:
    friend class ProgramBuilder;
    RegisterLayout layout_;
    std::shared_ptr<const ExprPool> exprs_;
    std::vector<ParamDecl> params_;
    std::vector<BitRegisterDecl> bit_registers_;
    std::vector<VarDecl> vars_;
    std::vector<std::string> loop_vars_;
    Block body_;
};

struct ParamSlot {
    std::uint32_t id = 0;
};
struct BitRegister {
    std::uint32_t id = 0;
};
struct VarSlot {
    std::uint32_t id = 0;
};

/// Creates expressions and declarations for one program. Fragments built
/// against a builder may only be placed into that builder's program.
class ProgramBuilder {
   public:
    explicit ProgramBuilder(std::uint32_t bit_width);

    const RegisterLayout &layout() const {
        return layout_;
    }

    Expr constant(Value v);
    Expr loop_var(std::uint32_t var);
    ParamSlot declare_param(std::string name);
    ParamSlot declare_param_array(std::string name, std::size_t size);
    BitRegister declare_bits(std::string name, std::size_t size);
    VarSlot declare_var(std::string name);

    Expr param(ParamSlot slot);
    Expr param_at(ParamSlot slot, Expr index);
    Expr bit(BitRegister reg, Expr index);
    Expr var(VarSlot slot);

    /// Allocates a fresh loop variable. The body callback receives its value.
    template <class F>
    Node loop(Expr bound, std::string name, F &&body, bool reverse = false) {
        std::uint32_t v = new_loop_var(std::move(name));
        ForOp op{bound.id, v, reverse, {}};
        op.body = body(loop_var(v));
        return Node{std::move(op)};
    }

    Node gate(GateKind kind, std::vector<Expr> qubits);
    Node gate(GateKind kind, std::vector<Expr> qubits, Expr numerator, Expr log2_denominator,
              int sign = 1);
    Node measure(Expr qubit, BitRegister reg, Expr index);
    Node reset(Expr qubit);
    Node assign(VarSlot var, Expr value);
    Node if_then(Expr cond, Block then_body, Block else_body = {});

    HybridProgram finish(Block body) &&;

   private:
    std::uint32_t new_loop_var(std::string name);

    RegisterLayout layout_;
    std::shared_ptr<ExprPool> exprs_;
    HybridProgram program_;
};

/// Appends the nodes of tail to head.
void append(Block &head, Block tail);

/// Gate-reversed, angle-negated inverse of a unitary fragment. Loops run in
/// the opposite direction; branch conditions are kept as they are. Throws
/// MalformedProgram if the fragment measures, resets, or assigns.
Block adjoint(const Block &block);

/// Structural node count: a loop counts once plus its body, a branch once
/// plus both arms. Nothing is unrolled.
std::size_t node_count(const Block &block);
std::size_t node_count(const HybridProgram &program);

struct Diagnostic {
    enum class Kind { Arity, QubitRange, UndeclaredSlot, UseBeforeDef };
    Kind kind;
    std::string message;
};

/// Static checks: gate arity, qubit ranges that can be bounded from loop
/// ranges, declared slots, classical values defined before they are read.
std::vector<Diagnostic> validate(const HybridProgram &program);

/// Text form, one node per line, two spaces of indent per nesting level.
std::string dump(const HybridProgram &program);
std::string expr_to_string(const HybridProgram &program, ExprId id);

/// Concrete values for a program's parameter slots.
class ParamValues {
   public:
    explicit ParamValues(const HybridProgram &program);

    void set(std::string_view name, Value value);
    void set(std::string_view name, std::vector<Value> values);

    bool is_bound(std::uint32_t slot) const {
        return values_[slot].has_value();
    }
    const std::vector<Value> &values(std::uint32_t slot) const {
        return *values_[slot];
    }
    /// Throws MissingParameter naming the first unbound slot.
    void check_complete() const;

   private:
    std::uint32_t slot_of(std::string_view name) const;

    const HybridProgram *program_;
    std::vector<std::optional<std::vector<Value>>> values_;
};

}  // namespace shorjit::ir
