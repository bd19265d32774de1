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
#include <functional>
#include <span>

#include "shorjit/ir.h"
#include "shorjit/optimizer.h"

namespace shorjit::circuits {

enum class Basis { Computational, Fourier };

/// Contiguous qubits [start, start + size), least significant first.
struct FourierRegister {
    std::uint32_t start = 0;
    std::uint32_t size = 0;
    Basis basis = Basis::Computational;
};

enum class Sign { Plus, Minus };

/// Swap-free QFT. Afterwards qubit i of the register carries the phase
/// exp(2 pi i b / 2^(i+1)) for input |b>, which is the convention every
/// Fourier-basis adder below relies on. Moves reg into the Fourier basis.
ir::Block build_qft(ir::ProgramBuilder &b, FourierRegister &reg, bool include_swaps = false);

/// Exact adjoint of build_qft without swaps. Moves reg back.
ir::Block build_inverse_qft(ir::ProgramBuilder &b, FourierRegister &reg);

/// Adds (or subtracts) value modulo 2^size to a register in the Fourier basis:
/// one phase gate per qubit, angle 2 pi (value mod 2^(i+1)) / 2^(i+1) on
/// qubit i, controlled on 0 to 2 qubits.
ir::Block build_fourier_add_const(ir::ProgramBuilder &b, const FourierRegister &reg,
                                  ir::Expr value, std::span<const ir::Expr> controls,
                                  Sign sign = Sign::Plus);

/// Controlled modular addition on an (n+1)-qubit Fourier register whose top
/// qubit is the overflow bit. Requires b < N on entry and ancilla in |0>; on
/// exit the register holds (b + value) mod N and the ancilla is |0> again.
/// When elide_overflow evaluates non-zero only the plain controlled addition
/// runs, which is correct exactly when b + value < N on every branch where
/// the controls fire.
ir::Block build_fourier_add_mod(ir::ProgramBuilder &b, const FourierRegister &reg, ir::Expr value,
                                ir::Expr modulus, ir::Expr ancilla,
                                std::span<const ir::Expr> controls, ir::Expr elide_overflow);

/// Per-adder runtime switches for a multiplier, as functions of the adder
/// index expression j.
struct AdderSchedule {
    std::function<ir::Expr(ir::Expr)> keep;
    std::function<ir::Expr(ir::Expr)> elide_overflow;

    /// Every adder runs with its full overflow handling.
    static AdderSchedule full(ir::ProgramBuilder &b);
};

/// |c>|x>|acc>|0> -> |c>|x>|(acc + c*multiplier*x) mod N>|0>. The accumulator
/// (x_size + 1 qubits) must hold a value below N.
ir::Block build_controlled_mult_mod(ir::ProgramBuilder &b, ir::Expr control,
                                    std::uint32_t x_start, std::uint32_t x_size,
                                    FourierRegister &accumulator, ir::Expr ancilla,
                                    ir::Expr multiplier, ir::Expr modulus,
                                    const AdderSchedule &schedule);

/// Controlled U: |c>|x>|0> -> |c>|x * multiplier^c mod N>|0> for x < N. Built
/// as the forward multiplier, a controlled swap of target and accumulator, and
/// the exact adjoint of the multiplier by the inverse.
ir::Block build_controlled_ua(ir::ProgramBuilder &b, ir::Expr control, std::uint32_t target_start,
                              std::uint32_t target_size, FourierRegister &accumulator,
                              ir::Expr ancilla, ir::Expr multiplier, ir::Expr inverse,
                              ir::Expr modulus, const AdderSchedule &forward,
                              const AdderSchedule &inverse_schedule);

/// Order-finding program for bit width n with t estimation rounds on a
/// single, recycled estimation qubit.
///
/// Round k (k = 0 .. t-1) applies the controlled multiplier for power
/// p = t-1-k, so the highest power goes first. Before its measurement the
/// estimation qubit receives the phase -2 pi acc / 2^(k+1), where
/// acc = sum_{l<k} theta_l 2^l collects the earlier outcomes. With that
/// ordering theta_k is bit k of the phase estimate, so j = sum theta_k 2^k.
///
/// All instance data (N, a, power tables, elision plan) are runtime
/// parameters; the structure depends only on n and t.
ir::HybridProgram build_qpe_program(std::uint32_t n, std::uint32_t t);

/// Number of estimation rounds a QPE program was built with.
std::uint32_t qpe_rounds(const ir::HybridProgram &program);

/// Binds N, a, the power tables and the plan's switches. Throws
/// InvalidArgument if the plan was made for another bit width or round count.
ir::ParamValues bind_qpe_params(const ir::HybridProgram &program, const ElisionPlan &plan);

}  // namespace shorjit::circuits
