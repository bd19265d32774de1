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

#include "shorjit/circuits.h"

#include <vector>

#include "shorjit/errors.h"

namespace shorjit::circuits {

using ir::Block;
using ir::Expr;
using ir::GateKind;

namespace {

Expr qubit_of(ir::ProgramBuilder &b, const FourierRegister &reg, Expr index) {
    return b.constant(reg.start) + index;
}

void require_basis(const FourierRegister &reg, Basis basis, const char *who) {
    if (reg.basis != basis) {
        throw InvalidArgument(std::string(who) + ": register is in the wrong basis");
    }
    if (reg.size == 0) {
        throw InvalidArgument(std::string(who) + ": empty register");
    }
}

Block concat(std::initializer_list<Block *> parts) {
    Block out;
    for (Block *p : parts) {
        ir::append(out, std::move(*p));
    }
    return out;
}

}  // namespace

Block build_qft(ir::ProgramBuilder &b, FourierRegister &reg, bool include_swaps) {
    require_basis(reg, Basis::Computational, "build_qft");
    Expr m = b.constant(reg.size);
    Block out;
    // The top qubit goes first so that its controls are still unrotated.
    out.push_back(b.loop(
        m, "i",
        [&](Expr i) {
            Block body;
            body.push_back(b.gate(GateKind::H, {qubit_of(b, reg, i)}));
            body.push_back(b.loop(i, "j", [&](Expr j) {
                Block inner;
                inner.push_back(b.gate(GateKind::CPhase, {qubit_of(b, reg, j), qubit_of(b, reg, i)},
                                       b.constant(1), i - j + 1));
                return inner;
            }));
            return body;
        },
        /*reverse=*/true));
    if (include_swaps) {
        Expr last = b.constant(reg.start + reg.size - 1);
        out.push_back(b.loop(b.constant(reg.size / 2), "s", [&](Expr s) {
            Expr lo = qubit_of(b, reg, s);
            Expr hi = last - s;
            Block body;
            body.push_back(b.gate(GateKind::CNOT, {lo, hi}));
            body.push_back(b.gate(GateKind::CNOT, {hi, lo}));
            body.push_back(b.gate(GateKind::CNOT, {lo, hi}));
            return body;
        }));
    }
    reg.basis = Basis::Fourier;
    return out;
}

Block build_inverse_qft(ir::ProgramBuilder &b, FourierRegister &reg) {
    require_basis(reg, Basis::Fourier, "build_inverse_qft");
    FourierRegister scratch{reg.start, reg.size, Basis::Computational};
    Block out = ir::adjoint(build_qft(b, scratch));
    reg.basis = Basis::Computational;
    return out;
}

Block build_fourier_add_const(ir::ProgramBuilder &b, const FourierRegister &reg, Expr value,
                              std::span<const Expr> controls, Sign sign) {
    require_basis(reg, Basis::Fourier, "build_fourier_add_const");
    if (controls.size() > 2) {
        throw InvalidArgument("build_fourier_add_const: at most two controls");
    }
    static constexpr GateKind kinds[] = {GateKind::Phase, GateKind::CPhase, GateKind::CCPhase};
    GateKind kind = kinds[controls.size()];
    Block out;
    out.push_back(b.loop(b.constant(reg.size), "i", [&](Expr i) {
        std::vector<Expr> qubits(controls.begin(), controls.end());
        qubits.push_back(qubit_of(b, reg, i));
        Block body;
        body.push_back(b.gate(kind, std::move(qubits), value, i + 1, sign == Sign::Plus ? 1 : -1));
        return body;
    }));
    return out;
}

Block build_fourier_add_mod(ir::ProgramBuilder &b, const FourierRegister &reg, Expr value,
                            Expr modulus, Expr ancilla, std::span<const Expr> controls,
                            Expr elide_overflow) {
    require_basis(reg, Basis::Fourier, "build_fourier_add_mod");
    FourierRegister r = reg;
    Expr top = b.constant(reg.start + reg.size - 1);
    std::vector<Expr> by_ancilla{ancilla};

    Block plain = build_fourier_add_const(b, r, value, controls, Sign::Plus);

    Block add_value = build_fourier_add_const(b, r, value, controls, Sign::Plus);
    Block sub_modulus = build_fourier_add_const(b, r, modulus, {}, Sign::Minus);
    Block to_basis = build_inverse_qft(b, r);
    Block copy_sign;
    copy_sign.push_back(b.gate(GateKind::CNOT, {top, ancilla}));
    Block to_fourier = build_qft(b, r);
    Block add_back = build_fourier_add_const(b, r, modulus, by_ancilla, Sign::Plus);
    Block sub_value = build_fourier_add_const(b, r, value, controls, Sign::Minus);
    Block to_basis2 = build_inverse_qft(b, r);
    Block clear_ancilla;
    clear_ancilla.push_back(b.gate(GateKind::X, {top}));
    clear_ancilla.push_back(b.gate(GateKind::CNOT, {top, ancilla}));
    clear_ancilla.push_back(b.gate(GateKind::X, {top}));
    Block to_fourier2 = build_qft(b, r);
    Block add_value2 = build_fourier_add_const(b, r, value, controls, Sign::Plus);

    Block full = concat({&add_value, &sub_modulus, &to_basis, &copy_sign, &to_fourier, &add_back,
                         &sub_value, &to_basis2, &clear_ancilla, &to_fourier2, &add_value2});
    Block out;
    out.push_back(b.if_then(elide_overflow, std::move(plain), std::move(full)));
    return out;
}

AdderSchedule AdderSchedule::full(ir::ProgramBuilder &b) {
    Expr one = b.constant(1);
    Expr zero = b.constant(0);
    return AdderSchedule{[one](Expr) { return one; }, [zero](Expr) { return zero; }};
}

Block build_controlled_mult_mod(ir::ProgramBuilder &b, Expr control, std::uint32_t x_start,
                                std::uint32_t x_size, FourierRegister &accumulator, Expr ancilla,
                                Expr multiplier, Expr modulus, const AdderSchedule &schedule) {
    if (accumulator.size != x_size + 1) {
        throw InvalidArgument("build_controlled_mult_mod: accumulator needs x_size + 1 qubits");
    }
    Block out = build_qft(b, accumulator);
    Expr one = b.constant(1);
    out.push_back(b.loop(b.constant(x_size), "j", [&](Expr j) {
        Expr addend = (one << j).mulmod(multiplier, modulus);
        std::vector<Expr> controls{control, b.constant(x_start) + j};
        Block adder = build_fourier_add_mod(b, accumulator, addend, modulus, ancilla, controls,
                                            schedule.elide_overflow(j));
        Block body;
        body.push_back(b.if_then(schedule.keep(j), std::move(adder)));
        return body;
    }));
    ir::append(out, build_inverse_qft(b, accumulator));
    return out;
}

Block build_controlled_ua(ir::ProgramBuilder &b, Expr control, std::uint32_t target_start,
                          std::uint32_t target_size, FourierRegister &accumulator, Expr ancilla,
                          Expr multiplier, Expr inverse, Expr modulus,
                          const AdderSchedule &forward, const AdderSchedule &inverse_schedule) {
    Block out = build_controlled_mult_mod(b, control, target_start, target_size, accumulator,
                                          ancilla, multiplier, modulus, forward);
    out.push_back(b.loop(b.constant(target_size), "w", [&](Expr w) {
        Block body;
        body.push_back(b.gate(GateKind::CSwap, {control, b.constant(target_start) + w,
                                                b.constant(accumulator.start) + w}));
        return body;
    }));
    Block undo = build_controlled_mult_mod(b, control, target_start, target_size, accumulator,
                                           ancilla, inverse, modulus, inverse_schedule);
    ir::append(out, ir::adjoint(undo));
    return out;
}

ir::HybridProgram build_qpe_program(std::uint32_t n, std::uint32_t t) {
    if (n < 1 || t < 1) {
        throw InvalidArgument("build_qpe_program: n and t must be positive");
    }
    ir::ProgramBuilder b(n);
    const ir::RegisterLayout &layout = b.layout();

    auto N = b.param(b.declare_param("N"));
    b.declare_param("a");
    auto use_powers = b.param(b.declare_param("use_powers"));
    auto first_add = b.param(b.declare_param("first_add"));
    auto powers = b.declare_param_array("powers", t);
    auto inverse_powers = b.declare_param_array("inverse_powers", t);
    auto keep_forward = b.declare_param_array("keep_forward", std::size_t{t} * n);
    auto keep_inverse = b.declare_param_array("keep_inverse", std::size_t{t} * n);
    auto overflow_forward = b.declare_param_array("overflow_forward", std::size_t{t} * n);
    auto overflow_inverse = b.declare_param_array("overflow_inverse", std::size_t{t} * n);
    auto theta = b.declare_bits("theta", t);
    auto acc = b.declare_var("acc");

    Expr est = b.constant(layout.estimation());
    Expr ancilla = b.constant(layout.ancilla());
    Expr zero = b.constant(0);
    Expr one = b.constant(1);

    Block body;
    body.push_back(b.gate(GateKind::X, {b.constant(layout.target_start())}));
    body.push_back(b.assign(acc, zero));
    body.push_back(b.loop(b.constant(t), "k", [&](Expr k) {
        Expr p = b.constant(t - 1) - k;
        Expr row = k * static_cast<ir::Value>(n);
        Block round;
        round.push_back(b.gate(GateKind::H, {est}));

        // Round 0 acts on |1>, so the multiplication by c is the addition of c - 1.
        FourierRegister target{layout.target_start(), layout.target_size()};
        Block first = build_qft(b, target);
        Expr controls[] = {est};
        ir::append(first, build_fourier_add_const(
                              b, target, b.param_at(powers, b.constant(t - 1)) - 1, controls));
        ir::append(first, build_inverse_qft(b, target));

        Expr multiplier = use_powers.select(b.param_at(powers, p), b.param_at(powers, zero));
        Expr inverse =
            use_powers.select(b.param_at(inverse_powers, p), b.param_at(inverse_powers, zero));
        Expr repetitions = use_powers.select(one, one << p);
        AdderSchedule forward{
            [&](Expr j) { return b.param_at(keep_forward, row + j); },
            [&](Expr j) { return !b.param_at(overflow_forward, row + j); },
        };
        AdderSchedule backward{
            [&](Expr j) { return b.param_at(keep_inverse, row + j); },
            [&](Expr j) { return !b.param_at(overflow_inverse, row + j); },
        };
        FourierRegister accumulator{layout.accumulator_start(), layout.accumulator_size()};
        Block multiply;
        multiply.push_back(b.loop(repetitions, "r", [&](Expr) {
            return build_controlled_ua(b, est, layout.target_start(), layout.target_size(),
                                       accumulator, ancilla, multiplier, inverse, N, forward,
                                       backward);
        }));
        round.push_back(b.if_then(first_add && (k == 0), std::move(first), std::move(multiply)));

        round.push_back(b.gate(GateKind::Phase, {est}, b.var(acc), k + 1, -1));
        round.push_back(b.gate(GateKind::H, {est}));
        round.push_back(b.measure(est, theta, k));
        round.push_back(b.reset(est));
        round.push_back(b.assign(acc, b.var(acc) + (b.bit(theta, k) << k)));
        return round;
    }));
    return std::move(b).finish(std::move(body));
}

std::uint32_t qpe_rounds(const ir::HybridProgram &program) {
    for (const auto &reg : program.bit_registers()) {
        if (reg.name == "theta") {
            return static_cast<std::uint32_t>(reg.size);
        }
    }
    throw InvalidArgument("qpe_rounds: not a QPE program");
}

ir::ParamValues bind_qpe_params(const ir::HybridProgram &program, const ElisionPlan &plan) {
    const std::uint32_t n = program.bit_width();
    const std::uint32_t t = qpe_rounds(program);
    if (plan.n != n || plan.t != t) {
        throw InvalidArgument("bind_qpe_params: plan built for n=" + std::to_string(plan.n) +
                              ", t=" + std::to_string(plan.t) + " but program has n=" +
                              std::to_string(n) + ", t=" + std::to_string(t));
    }
    auto as_values = [](const std::vector<u64> &v) {
        return std::vector<ir::Value>(v.begin(), v.end());
    };
    auto flatten = [&](auto pick) {
        std::vector<ir::Value> out;
        out.reserve(std::size_t{t} * n);
        for (const IterationPlan &it : plan.iterations) {
            const std::vector<bool> &flags = pick(it);
            for (std::uint32_t j = 0; j < n; ++j) {
                out.push_back(flags[j] ? 1 : 0);
            }
        }
        return out;
    };
    ir::ParamValues params(program);
    params.set("N", static_cast<ir::Value>(plan.N));
    params.set("a", static_cast<ir::Value>(plan.a));
    params.set("use_powers", plan.flags.use_precomputed_powers ? 1 : 0);
    params.set("first_add", plan.flags.first_iteration_as_addition ? 1 : 0);
    params.set("powers", as_values(plan.powers));
    params.set("inverse_powers", as_values(plan.inverse_powers));
    params.set("keep_forward", flatten([](const IterationPlan &it) -> const std::vector<bool> & {
                   return it.forward.keep;
               }));
    params.set("keep_inverse", flatten([](const IterationPlan &it) -> const std::vector<bool> & {
                   return it.inverse_plan.keep;
               }));
    params.set("overflow_forward",
               flatten([](const IterationPlan &it) -> const std::vector<bool> & {
                   return it.forward.overflow;
               }));
    params.set("overflow_inverse",
               flatten([](const IterationPlan &it) -> const std::vector<bool> & {
                   return it.inverse_plan.overflow;
               }));
    return params;
}

}  // namespace shorjit::circuits
