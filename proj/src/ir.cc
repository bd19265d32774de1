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

#include "shorjit/ir.h"

#include <algorithm>
#include <sstream>

#include "shorjit/errors.h"

namespace shorjit::ir {

namespace {

Expr make(ExprPool *pool, ExprOp op, std::initializer_list<ExprId> args) {
    ExprNode node;
    node.op = op;
    std::size_t i = 0;
    for (ExprId a : args) {
        node.args[i++] = a;
    }
    return Expr{pool, pool->add(node)};
}

Expr binary(ExprOp op, Expr x, Expr y) {
    return make(x.pool, op, {x.id, y.id});
}

Expr lift(Expr like, Value v) {
    ExprNode node;
    node.op = ExprOp::Const;
    node.value = v;
    return Expr{like.pool, like.pool->add(node)};
}

}  // namespace

Expr Expr::mulmod(Expr y, Expr modulus) const {
    return make(pool, ExprOp::MulMod, {id, y.id, modulus.id});
}
Expr Expr::bit(Expr index) const {
    return binary(ExprOp::BitOf, *this, index);
}
Expr Expr::select(Expr if_true, Expr if_false) const {
    return make(pool, ExprOp::Select, {id, if_true.id, if_false.id});
}

Expr operator+(Expr x, Expr y) {
    return binary(ExprOp::Add, x, y);
}
Expr operator-(Expr x, Expr y) {
    return binary(ExprOp::Sub, x, y);
}
Expr operator*(Expr x, Expr y) {
    return binary(ExprOp::Mul, x, y);
}
Expr operator<<(Expr x, Expr y) {
    return binary(ExprOp::Shl, x, y);
}
Expr operator>>(Expr x, Expr y) {
    return binary(ExprOp::Shr, x, y);
}
Expr operator%(Expr x, Expr y) {
    return binary(ExprOp::Mod, x, y);
}
Expr operator==(Expr x, Expr y) {
    return binary(ExprOp::Eq, x, y);
}
Expr operator<(Expr x, Expr y) {
    return binary(ExprOp::Lt, x, y);
}
Expr operator!(Expr x) {
    return make(x.pool, ExprOp::Not, {x.id});
}
Expr operator&&(Expr x, Expr y) {
    return binary(ExprOp::And, x, y);
}
Expr operator||(Expr x, Expr y) {
    return binary(ExprOp::Or, x, y);
}
Expr operator+(Expr x, Value y) {
    return x + lift(x, y);
}
Expr operator-(Expr x, Value y) {
    return x - lift(x, y);
}
Expr operator-(Value x, Expr y) {
    return lift(y, x) - y;
}
Expr operator*(Expr x, Value y) {
    return x * lift(x, y);
}
Expr operator==(Expr x, Value y) {
    return x == lift(x, y);
}

int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Phase:
            return 1;
        case GateKind::CPhase:
        case GateKind::CNOT:
            return 2;
        case GateKind::CCPhase:
        case GateKind::CSwap:
            return 3;
    }
    return 0;
}

bool gate_has_angle(GateKind kind) {
    return kind == GateKind::Phase || kind == GateKind::CPhase || kind == GateKind::CCPhase;
}

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H:
            return "h";
        case GateKind::X:
            return "x";
        case GateKind::Phase:
            return "phase";
        case GateKind::CPhase:
            return "cphase";
        case GateKind::CCPhase:
            return "ccphase";
        case GateKind::CNOT:
            return "cnot";
        case GateKind::CSwap:
            return "cswap";
    }
    return "?";
}

std::optional<std::uint32_t> HybridProgram::find_param(std::string_view name) const {
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i].name == name) {
            return static_cast<std::uint32_t>(i);
        }
    }
    return std::nullopt;
}

ProgramBuilder::ProgramBuilder(std::uint32_t bit_width)
    : layout_(RegisterLayout::for_bit_width(bit_width)), exprs_(std::make_shared<ExprPool>()) {
    program_.layout_ = layout_;
}

Expr ProgramBuilder::constant(Value v) {
    ExprNode node;
    node.op = ExprOp::Const;
    node.value = v;
    return Expr{exprs_.get(), exprs_->add(node)};
}

Expr ProgramBuilder::loop_var(std::uint32_t var) {
    ExprNode node;
    node.op = ExprOp::LoopVar;
    node.slot = var;
    return Expr{exprs_.get(), exprs_->add(node)};
}

ParamSlot ProgramBuilder::declare_param(std::string name) {
    program_.params_.push_back({std::move(name), 1, false});
    return {static_cast<std::uint32_t>(program_.params_.size() - 1)};
}

ParamSlot ProgramBuilder::declare_param_array(std::string name, std::size_t size) {
    program_.params_.push_back({std::move(name), size, true});
    return {static_cast<std::uint32_t>(program_.params_.size() - 1)};
}

BitRegister ProgramBuilder::declare_bits(std::string name, std::size_t size) {
    program_.bit_registers_.push_back({std::move(name), size});
    return {static_cast<std::uint32_t>(program_.bit_registers_.size() - 1)};
}

VarSlot ProgramBuilder::declare_var(std::string name) {
    program_.vars_.push_back({std::move(name)});
    return {static_cast<std::uint32_t>(program_.vars_.size() - 1)};
}

Expr ProgramBuilder::param(ParamSlot slot) {
    ExprNode node;
    node.op = ExprOp::Param;
    node.slot = slot.id;
    return Expr{exprs_.get(), exprs_->add(node)};
}

Expr ProgramBuilder::param_at(ParamSlot slot, Expr index) {
    ExprNode node;
    node.op = ExprOp::ParamAt;
    node.slot = slot.id;
    node.args[0] = index.id;
    return Expr{exprs_.get(), exprs_->add(node)};
}

Expr ProgramBuilder::bit(BitRegister reg, Expr index) {
    ExprNode node;
    node.op = ExprOp::Bit;
    node.slot = reg.id;
    node.args[0] = index.id;
    return Expr{exprs_.get(), exprs_->add(node)};
}

Expr ProgramBuilder::var(VarSlot slot) {
    ExprNode node;
    node.op = ExprOp::Var;
    node.slot = slot.id;
    return Expr{exprs_.get(), exprs_->add(node)};
}

std::uint32_t ProgramBuilder::new_loop_var(std::string name) {
    program_.loop_vars_.push_back(std::move(name));
    return static_cast<std::uint32_t>(program_.loop_vars_.size() - 1);
}

Node ProgramBuilder::gate(GateKind kind, std::vector<Expr> qubits) {
    GateOp op;
    op.kind = kind;
    for (Expr q : qubits) {
        op.qubits.push_back(q.id);
    }
    if (gate_has_angle(kind)) {
        Expr zero = constant(0);
        op.angle = Angle{zero.id, zero.id, 1};
    }
    return Node{std::move(op)};
}

Node ProgramBuilder::gate(GateKind kind, std::vector<Expr> qubits, Expr numerator,
                          Expr log2_denominator, int sign) {
    GateOp op;
    op.kind = kind;
    for (Expr q : qubits) {
        op.qubits.push_back(q.id);
    }
    op.angle = Angle{numerator.id, log2_denominator.id, sign};
    return Node{std::move(op)};
}

Node ProgramBuilder::measure(Expr qubit, BitRegister reg, Expr index) {
    return Node{MeasureOp{qubit.id, reg.id, index.id}};
}

Node ProgramBuilder::reset(Expr qubit) {
    return Node{ResetOp{qubit.id}};
}

Node ProgramBuilder::assign(VarSlot var, Expr value) {
    return Node{AssignOp{var.id, value.id}};
}

Node ProgramBuilder::if_then(Expr cond, Block then_body, Block else_body) {
    return Node{IfOp{cond.id, std::move(then_body), std::move(else_body)}};
}

HybridProgram ProgramBuilder::finish(Block body) && {
    program_.body_ = std::move(body);
    program_.exprs_ = std::move(exprs_);
    return std::move(program_);
}

void append(Block &head, Block tail) {
    head.insert(head.end(), std::make_move_iterator(tail.begin()),
                std::make_move_iterator(tail.end()));
}

Block adjoint(const Block &block) {
    Block out;
    out.reserve(block.size());
    for (auto it = block.rbegin(); it != block.rend(); ++it) {
        std::visit(
            [&](const auto &op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, GateOp>) {
                    GateOp g = op;
                    g.angle.sign = -g.angle.sign;
                    out.push_back(Node{std::move(g)});
                } else if constexpr (std::is_same_v<T, ForOp>) {
                    out.push_back(Node{ForOp{op.bound, op.var, !op.reverse, adjoint(op.body)}});
                } else if constexpr (std::is_same_v<T, IfOp>) {
                    out.push_back(
                        Node{IfOp{op.cond, adjoint(op.then_body), adjoint(op.else_body)}});
                } else {
                    throw MalformedProgram("adjoint: fragment contains a non-unitary operation");
                }
            },
            it->op);
    }
    return out;
}

std::size_t node_count(const Block &block) {
    std::size_t count = 0;
    for (const Node &node : block) {
        ++count;
        if (const auto *f = std::get_if<ForOp>(&node.op)) {
            count += node_count(f->body);
        } else if (const auto *b = std::get_if<IfOp>(&node.op)) {
            count += node_count(b->then_body) + node_count(b->else_body);
        }
    }
    return count;
}

std::size_t node_count(const HybridProgram &program) {
    return node_count(program.body());
}

// ---------------------------------------------------------------------------
// Validation.

namespace {

struct Interval {
    Value lo;
    Value hi;
};

class Validator {
   public:
    explicit Validator(const HybridProgram &p)
        : program_(p),
          exprs_(p.exprs()),
          loop_range_(p.loop_var_names().size()),
          var_defined_(p.vars().size(), false),
          bits_defined_(p.bit_registers().size(), false) {
    }

    std::vector<Diagnostic> run() {
        walk(program_.body());
        return std::move(out_);
    }

   private:
    void report(Diagnostic::Kind kind, std::string msg) {
        out_.push_back({kind, std::move(msg)});
    }

    // Checks slot references and definitions, and returns a bounding interval
    // if one is known.
    std::optional<Interval> check(ExprId id) {
        if (id >= exprs_.size()) {
            report(Diagnostic::Kind::UndeclaredSlot, "expression id out of range");
            return std::nullopt;
        }
        const ExprNode &e = exprs_[id];
        auto arg = [&](int i) { return check(e.args[i]); };
        switch (e.op) {
            case ExprOp::Const:
                return Interval{e.value, e.value};
            case ExprOp::LoopVar:
                if (e.slot >= loop_range_.size()) {
                    report(Diagnostic::Kind::UndeclaredSlot, "undeclared loop variable");
                    return std::nullopt;
                }
                if (!loop_range_[e.slot].active) {
                    report(Diagnostic::Kind::UseBeforeDef,
                           "loop variable '" + program_.loop_var_names()[e.slot] +
                               "' used outside its loop");
                    return std::nullopt;
                }
                return loop_range_[e.slot].range;
            case ExprOp::Param:
            case ExprOp::ParamAt:
                if (e.slot >= program_.params().size()) {
                    report(Diagnostic::Kind::UndeclaredSlot, "undeclared parameter slot");
                }
                if (e.op == ExprOp::ParamAt) {
                    arg(0);
                }
                return std::nullopt;
            case ExprOp::Bit:
                arg(0);
                if (e.slot >= program_.bit_registers().size()) {
                    report(Diagnostic::Kind::UndeclaredSlot, "undeclared classical bit register");
                } else if (!bits_defined_[e.slot]) {
                    report(Diagnostic::Kind::UseBeforeDef,
                           "classical bits '" + program_.bit_registers()[e.slot].name +
                               "' read before any measurement writes them");
                }
                return Interval{0, 1};
            case ExprOp::Var:
                if (e.slot >= program_.vars().size()) {
                    report(Diagnostic::Kind::UndeclaredSlot, "undeclared classical variable");
                } else if (!var_defined_[e.slot]) {
                    report(Diagnostic::Kind::UseBeforeDef,
                           "classical variable '" + program_.vars()[e.slot].name +
                               "' read before assignment");
                }
                return std::nullopt;
            case ExprOp::Add:
            case ExprOp::Sub:
            case ExprOp::Mul:
            case ExprOp::Shl: {
                auto x = arg(0), y = arg(1);
                if (!x || !y) {
                    return std::nullopt;
                }
                if (e.op == ExprOp::Add) {
                    return Interval{x->lo + y->lo, x->hi + y->hi};
                }
                if (e.op == ExprOp::Sub) {
                    return Interval{x->lo - y->hi, x->hi - y->lo};
                }
                if (e.op == ExprOp::Mul) {
                    Value c[4] = {x->lo * y->lo, x->lo * y->hi, x->hi * y->lo, x->hi * y->hi};
                    return Interval{*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
                }
                if (x->lo >= 0 && y->lo >= 0 && y->hi < 32 && x->hi < (Value{1} << 30)) {
                    return Interval{x->lo << y->lo, x->hi << y->hi};
                }
                return std::nullopt;
            }
            case ExprOp::Mod: {
                arg(0);
                auto m = arg(1);
                if (m && m->lo == m->hi && m->lo > 0) {
                    return Interval{0, m->lo - 1};
                }
                return std::nullopt;
            }
            case ExprOp::Select: {
                arg(0);
                auto x = arg(1), y = arg(2);
                if (x && y) {
                    return Interval{std::min(x->lo, y->lo), std::max(x->hi, y->hi)};
                }
                return std::nullopt;
            }
            case ExprOp::MulMod:
                arg(0);
                arg(1);
                arg(2);
                return std::nullopt;
            case ExprOp::Not:
                arg(0);
                return Interval{0, 1};
            case ExprOp::BitOf:
            case ExprOp::Eq:
            case ExprOp::Lt:
            case ExprOp::And:
            case ExprOp::Or:
                arg(0);
                arg(1);
                return Interval{0, 1};
            case ExprOp::Shr:
                arg(0);
                arg(1);
                return std::nullopt;
        }
        return std::nullopt;
    }

    void check_qubit(ExprId id) {
        auto range = check(id);
        if (range && (range->lo < 0 || range->hi >= static_cast<Value>(program_.num_qubits()))) {
            report(Diagnostic::Kind::QubitRange,
                   "qubit index may reach [" + std::to_string(range->lo) + ", " +
                       std::to_string(range->hi) + "] outside a " +
                       std::to_string(program_.num_qubits()) + "-qubit program");
        }
    }

    void walk(const Block &block) {
        for (const Node &node : block) {
            std::visit([&](const auto &op) { visit(op); }, node.op);
        }
    }

    void visit(const GateOp &op) {
        int arity = gate_arity(op.kind);
        if (static_cast<int>(op.qubits.size()) != arity) {
            report(Diagnostic::Kind::Arity, std::string(gate_name(op.kind)) + " expects " +
                                                 std::to_string(arity) + " qubits, got " +
                                                 std::to_string(op.qubits.size()));
        }
        if (op.qubits.size() > 3) {
            return;
        }
        for (ExprId q : op.qubits) {
            check_qubit(q);
        }
        if (gate_has_angle(op.kind)) {
            check(op.angle.numerator);
            check(op.angle.log2_denominator);
        }
    }

    void visit(const MeasureOp &op) {
        check_qubit(op.qubit);
        check(op.index);
        if (op.bits >= bits_defined_.size()) {
            report(Diagnostic::Kind::UndeclaredSlot, "measurement into undeclared bit register");
            return;
        }
        bits_defined_[op.bits] = true;
    }

    void visit(const ResetOp &op) {
        check_qubit(op.qubit);
    }

    void visit(const AssignOp &op) {
        check(op.value);
        if (op.var >= var_defined_.size()) {
            report(Diagnostic::Kind::UndeclaredSlot, "assignment to undeclared variable");
            return;
        }
        var_defined_[op.var] = true;
    }

    void visit(const ForOp &op) {
        auto bound = check(op.bound);
        if (op.var >= loop_range_.size()) {
            report(Diagnostic::Kind::UndeclaredSlot, "undeclared loop variable");
            walk(op.body);
            return;
        }
        LoopState saved = loop_range_[op.var];
        loop_range_[op.var].active = true;
        if (bound && bound->hi >= 1) {
            loop_range_[op.var].range = Interval{0, bound->hi - 1};
        } else {
            loop_range_[op.var].range = std::nullopt;
        }
        walk(op.body);
        loop_range_[op.var] = saved;
    }

    void visit(const IfOp &op) {
        check(op.cond);
        walk(op.then_body);
        walk(op.else_body);
    }

    struct LoopState {
        bool active = false;
        std::optional<Interval> range;
    };

    const HybridProgram &program_;
    const ExprPool &exprs_;
    std::vector<LoopState> loop_range_;
    std::vector<bool> var_defined_;
    std::vector<bool> bits_defined_;
    std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const HybridProgram &program) {
    return Validator(program).run();
}

// ---------------------------------------------------------------------------
// Text dump.

namespace {

std::string op_symbol(ExprOp op) {
    switch (op) {
        case ExprOp::Add:
            return "+";
        case ExprOp::Sub:
            return "-";
        case ExprOp::Mul:
            return "*";
        case ExprOp::Shl:
            return "<<";
        case ExprOp::Shr:
            return ">>";
        case ExprOp::Mod:
            return "%";
        case ExprOp::Eq:
            return "==";
        case ExprOp::Lt:
            return "<";
        case ExprOp::And:
            return "&&";
        case ExprOp::Or:
            return "||";
        default:
            return "?";
    }
}

std::string loop_var_label(const HybridProgram &p, std::uint32_t v) {
    return p.loop_var_names()[v] + "_" + std::to_string(v);
}

void dump_block(const HybridProgram &p, const Block &block, int depth, std::ostringstream &out);

void dump_node(const HybridProgram &p, const Node &node, int depth, std::ostringstream &out) {
    std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    auto ex = [&](ExprId id) { return expr_to_string(p, id); };
    std::visit(
        [&](const auto &op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                out << indent << gate_name(op.kind);
                if (gate_has_angle(op.kind)) {
                    out << "(" << (op.angle.sign < 0 ? "-" : "") << "2pi*" << ex(op.angle.numerator)
                        << "/2^" << ex(op.angle.log2_denominator) << ")";
                }
                for (std::size_t i = 0; i < op.qubits.size(); ++i) {
                    out << (i == 0 ? " " : ", ") << "q[" << ex(op.qubits[i]) << "]";
                }
                out << "\n";
            } else if constexpr (std::is_same_v<T, MeasureOp>) {
                out << indent << "measure q[" << ex(op.qubit) << "] -> "
                    << p.bit_registers()[op.bits].name << "[" << ex(op.index) << "]\n";
            } else if constexpr (std::is_same_v<T, ResetOp>) {
                out << indent << "reset q[" << ex(op.qubit) << "]\n";
            } else if constexpr (std::is_same_v<T, AssignOp>) {
                out << indent << p.vars()[op.var].name << " = " << ex(op.value) << "\n";
            } else if constexpr (std::is_same_v<T, ForOp>) {
                out << indent << "for " << loop_var_label(p, op.var) << " < " << ex(op.bound)
                    << (op.reverse ? " reversed" : "") << ":\n";
                dump_block(p, op.body, depth + 1, out);
            } else if constexpr (std::is_same_v<T, IfOp>) {
                out << indent << "if " << ex(op.cond) << ":\n";
                dump_block(p, op.then_body, depth + 1, out);
                if (!op.else_body.empty()) {
                    out << indent << "else:\n";
                    dump_block(p, op.else_body, depth + 1, out);
                }
            }
        },
        node.op);
}

void dump_block(const HybridProgram &p, const Block &block, int depth, std::ostringstream &out) {
    for (const Node &node : block) {
        dump_node(p, node, depth, out);
    }
}

}  // namespace

std::string expr_to_string(const HybridProgram &p, ExprId id) {
    const ExprNode &e = p.exprs()[id];
    auto sub = [&](int i) { return expr_to_string(p, e.args[i]); };
    switch (e.op) {
        case ExprOp::Const:
            return std::to_string(e.value);
        case ExprOp::LoopVar:
            return loop_var_label(p, e.slot);
        case ExprOp::Param:
            return p.params()[e.slot].name;
        case ExprOp::ParamAt:
            return p.params()[e.slot].name + "[" + sub(0) + "]";
        case ExprOp::Bit:
            return p.bit_registers()[e.slot].name + "[" + sub(0) + "]";
        case ExprOp::Var:
            return p.vars()[e.slot].name;
        case ExprOp::MulMod:
            return "mulmod(" + sub(0) + ", " + sub(1) + ", " + sub(2) + ")";
        case ExprOp::BitOf:
            return "bit(" + sub(0) + ", " + sub(1) + ")";
        case ExprOp::Not:
            return "!" + sub(0);
        case ExprOp::Select:
            return "(" + sub(0) + " ? " + sub(1) + " : " + sub(2) + ")";
        default:
            return "(" + sub(0) + " " + op_symbol(e.op) + " " + sub(1) + ")";
    }
}

std::string dump(const HybridProgram &program) {
    std::ostringstream out;
    out << "program bit_width=" << program.bit_width() << " qubits=" << program.num_qubits()
        << "\n";
    for (const ParamDecl &d : program.params()) {
        out << "param " << d.name;
        if (d.is_array) {
            out << "[" << d.size << "]";
        }
        out << "\n";
    }
    for (const BitRegisterDecl &d : program.bit_registers()) {
        out << "bits " << d.name << "[" << d.size << "]\n";
    }
    for (const VarDecl &d : program.vars()) {
        out << "var " << d.name << "\n";
    }
    dump_block(program, program.body(), 0, out);
    return out.str();
}

// ---------------------------------------------------------------------------
// Parameter binding.

ParamValues::ParamValues(const HybridProgram &program)
    : program_(&program), values_(program.params().size()) {
}

std::uint32_t ParamValues::slot_of(std::string_view name) const {
    auto slot = program_->find_param(name);
    if (!slot) {
        throw InvalidArgument("no parameter named '" + std::string(name) + "'");
    }
    return *slot;
}

void ParamValues::set(std::string_view name, Value value) {
    std::uint32_t slot = slot_of(name);
    if (program_->params()[slot].is_array) {
        throw InvalidArgument("parameter '" + std::string(name) + "' is an array");
    }
    values_[slot] = std::vector<Value>{value};
}

void ParamValues::set(std::string_view name, std::vector<Value> values) {
    std::uint32_t slot = slot_of(name);
    const ParamDecl &decl = program_->params()[slot];
    if (values.size() != decl.size) {
        throw InvalidArgument("parameter '" + std::string(name) + "' expects " +
                              std::to_string(decl.size) + " values, got " +
                              std::to_string(values.size()));
    }
    values_[slot] = std::move(values);
}

void ParamValues::check_complete() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!values_[i]) {
            throw MissingParameter("parameter '" + program_->params()[i].name + "' is unbound");
        }
    }
}

}  // namespace shorjit::ir
