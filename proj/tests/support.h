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

// Helpers shared by the unit and acceptance tests. Nothing here reuses the
// library's circuit or simulator code paths for the reference values.

#include <cmath>
#include <complex>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <vector>

#include "shorjit/circuits.h"
#include "shorjit/ir.h"
#include "shorjit/number_theory.h"
#include "shorjit/optimizer.h"
#include "shorjit/rng.h"
#include "shorjit/simulator.h"

namespace shorjit::testing {

/// Runs a program without measurements on one basis state.
inline StateVector run_on_basis(const ir::HybridProgram &program, const ir::ParamValues &params,
                                std::uint64_t index) {
    StateVector state = StateVector::basis_state(program.num_qubits(), index);
    Rng rng(0);
    execute(state, program, params, rng);
    return state;
}

/// Largest amplitude error against the basis state |index>.
inline double basis_deviation(const StateVector &state, std::uint64_t index) {
    double worst = 0.0;
    const auto &amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        std::complex<double> want = i == index ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(amps[i] - want));
    }
    return worst;
}

/// Textbook phase estimation with a full t-qubit counting register, written
/// out directly: the joint state sum_y |y>|a^y mod N> / sqrt(2^t), then the
/// inverse DFT on the counting register computed term by term. Returns
/// P(j) for j < 2^t.
inline std::vector<double> textbook_qpe_distribution(u64 N, u64 a, unsigned t) {
    const std::uint64_t m = std::uint64_t{1} << t;
    // Group counting values by the residue they leave in the work register.
    std::vector<std::vector<std::uint64_t>> by_residue(N);
    u64 power = 1;
    for (std::uint64_t y = 0; y < m; ++y) {
        by_residue[power].push_back(y);
        power = power * a % N;
    }
    std::vector<double> p(m, 0.0);
    for (std::uint64_t j = 0; j < m; ++j) {
        for (const auto &ys : by_residue) {
            if (ys.empty()) {
                continue;
            }
            std::complex<double> amp = 0.0;
            for (std::uint64_t y : ys) {
                // Exact reduction of j*y mod 2^t before the angle is formed.
                std::uint64_t r = (j * y) & (m - 1);
                double angle = -2.0 * std::numbers::pi * static_cast<double>(r) /
                               static_cast<double>(m);
                amp += std::polar(1.0, angle);
            }
            p[j] += std::norm(amp) / static_cast<double>(m) / static_cast<double>(m);
        }
    }
    return p;
}

/// Exact j distribution of the compiled single-qubit QPE program.
inline std::vector<double> compiled_qpe_distribution(u64 N, u64 a, unsigned t,
                                                     OptimizationFlags flags,
                                                     const LeafVisitor &leaf = {}) {
    const unsigned n = bit_width(N);
    ir::HybridProgram program = circuits::build_qpe_program(n, t);
    ElisionPlan plan = build_plan(a, N, n, t, flags);
    ir::ParamValues params = circuits::bind_qpe_params(program, plan);
    std::vector<double> p(std::size_t{1} << t, 0.0);
    for (const RunOutcome &o : enumerate_branches(program, params, std::size_t{1} << t, {}, leaf)) {
        p[o.j] += *o.probability;
    }
    return p;
}

inline double max_abs_difference(const std::vector<double> &x, const std::vector<double> &y) {
    double worst = x.size() == y.size() ? 0.0 : 1.0;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

/// Weight of the final state outside |0> on the accumulator and ancilla.
inline double auxiliary_weight(const StateVector &state, unsigned n) {
    const ir::RegisterLayout layout{n};
    std::uint64_t mask = 0;
    for (std::uint32_t q = layout.accumulator_start(); q <= layout.ancilla(); ++q) {
        mask |= std::uint64_t{1} << q;
    }
    double w = 0.0;
    const auto &amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (i & mask) {
            w += std::norm(amps[i]);
        }
    }
    return w;
}

/// Fragment programs over the standard register layout of bit width n.
/// Parameters: v (addend or multiplier), w (inverse multiplier), N.
struct ArithmeticFixture {
    enum class Kind { FourierAdd, FourierSub, ModAdd, ModAddElided, Multiply, ControlledU };

    static ir::HybridProgram build(unsigned n, Kind kind, unsigned num_controls = 2) {
        using circuits::FourierRegister;
        ir::ProgramBuilder b(n);
        const ir::RegisterLayout &layout = b.layout();
        ir::Expr v = b.param(b.declare_param("v"));
        ir::Expr w = b.param(b.declare_param("w"));
        ir::Expr N = b.param(b.declare_param("N"));
        ir::Expr est = b.constant(layout.estimation());
        ir::Expr x0 = b.constant(layout.target_start());
        ir::Expr anc = b.constant(layout.ancilla());
        std::vector<ir::Expr> controls{est, x0};
        controls.resize(num_controls);
        FourierRegister acc{layout.accumulator_start(), layout.accumulator_size()};
        ir::Block body;
        switch (kind) {
            case Kind::FourierAdd:
            case Kind::FourierSub:
                body = circuits::build_qft(b, acc);
                ir::append(body, circuits::build_fourier_add_const(
                                     b, acc, v, controls,
                                     kind == Kind::FourierAdd ? circuits::Sign::Plus
                                                              : circuits::Sign::Minus));
                ir::append(body, circuits::build_inverse_qft(b, acc));
                break;
            case Kind::ModAdd:
            case Kind::ModAddElided:
                body = circuits::build_qft(b, acc);
                ir::append(body, circuits::build_fourier_add_mod(
                                     b, acc, v, N, anc, controls,
                                     b.constant(kind == Kind::ModAddElided ? 1 : 0)));
                ir::append(body, circuits::build_inverse_qft(b, acc));
                break;
            case Kind::Multiply:
                body = circuits::build_controlled_mult_mod(b, est, layout.target_start(), n, acc,
                                                           anc, v, N,
                                                           circuits::AdderSchedule::full(b));
                break;
            case Kind::ControlledU:
                body = circuits::build_controlled_ua(b, est, layout.target_start(), n, acc, anc,
                                                     v, w, N, circuits::AdderSchedule::full(b),
                                                     circuits::AdderSchedule::full(b));
                break;
        }
        (void)w;
        return std::move(b).finish(std::move(body));
    }

    static ir::ParamValues bind(const ir::HybridProgram &program, u64 v, u64 w, u64 N) {
        ir::ParamValues params(program);
        params.set("v", static_cast<ir::Value>(v));
        params.set("w", static_cast<ir::Value>(w));
        params.set("N", static_cast<ir::Value>(N));
        return params;
    }

    /// Basis index for target x, accumulator b, ancilla, estimation qubit.
    static std::uint64_t index(unsigned n, std::uint64_t x, std::uint64_t b, int control,
                               int ancilla = 0) {
        const ir::RegisterLayout layout{n};
        return x | (b << layout.accumulator_start()) |
               (std::uint64_t(ancilla) << layout.ancilla()) |
               (std::uint64_t(control) << layout.estimation());
    }
};

struct SweepResult {
    double worst = 0.0;
    std::size_t cases = 0;

    void add(double deviation) {
        worst = std::max(worst, deviation);
        ++cases;
    }
};

/// Moduli of exactly n bits, the ones an n-bit program is built for.
inline std::vector<u64> moduli_of_width(unsigned n) {
    std::vector<u64> out;
    for (u64 N = std::max<u64>(3, u64{1} << (n - 1)); N < (u64{1} << n); ++N) {
        out.push_back(N);
    }
    return out;
}

/// Plain Fourier adder on the (n+1)-qubit accumulator, every b and v below
/// 2^(n+1), both signs, 0 to 2 controls in every setting.
inline SweepResult sweep_fourier_adder(unsigned n) {
    using K = ArithmeticFixture::Kind;
    SweepResult r;
    const u64 m = u64{1} << (n + 1);
    for (unsigned nc = 0; nc <= 2; ++nc) {
        for (K kind : {K::FourierAdd, K::FourierSub}) {
            ir::HybridProgram prog = ArithmeticFixture::build(n, kind, nc);
            for (u64 v = 0; v < m; ++v) {
                ir::ParamValues params = ArithmeticFixture::bind(prog, v, 0, 0);
                for (u64 b = 0; b < m; ++b) {
                    for (int c = 0; c < 4; ++c) {
                        const int est = c & 1;
                        const u64 x = (c >> 1) & 1;
                        const bool fires = (nc < 1 || est) && (nc < 2 || x);
                        const u64 want =
                            !fires ? b : kind == K::FourierAdd ? (b + v) % m : (b + m - v) % m;
                        StateVector out =
                            run_on_basis(prog, params, ArithmeticFixture::index(n, x, b, est));
                        r.add(basis_deviation(out, ArithmeticFixture::index(n, x, want, est)));
                    }
                }
            }
        }
    }
    return r;
}

/// Doubly controlled modular adder for every N of n bits, v < N, b < N and
/// all control settings. With elided set, only inputs where the plain adder
/// is valid (b + v < N or the controls are off) are run.
inline SweepResult sweep_mod_adder(unsigned n, bool elided) {
    using K = ArithmeticFixture::Kind;
    SweepResult r;
    ir::HybridProgram prog = ArithmeticFixture::build(n, elided ? K::ModAddElided : K::ModAdd);
    for (u64 N : moduli_of_width(n)) {
        for (u64 v = 0; v < N; ++v) {
            ir::ParamValues params = ArithmeticFixture::bind(prog, v, 0, N);
            for (u64 b = 0; b < N; ++b) {
                for (int c = 0; c < 4; ++c) {
                    const int est = c & 1;
                    const u64 x = (c >> 1) & 1;
                    const bool fires = est && x;
                    if (elided && fires && b + v >= N) {
                        continue;
                    }
                    const u64 want = fires ? (b + v) % N : b;
                    StateVector out =
                        run_on_basis(prog, params, ArithmeticFixture::index(n, x, b, est));
                    r.add(basis_deviation(out, ArithmeticFixture::index(n, x, want, est)));
                }
            }
        }
    }
    return r;
}

/// Controlled M_a: |c>|x>|b> -> |c>|x>|(b + c*a*x) mod N> for every N of n
/// bits, a < N coprime to N, x < 2^n, b < N.
inline SweepResult sweep_multiplier(unsigned n) {
    SweepResult r;
    ir::HybridProgram prog = ArithmeticFixture::build(n, ArithmeticFixture::Kind::Multiply);
    for (u64 N : moduli_of_width(n)) {
        for (u64 a = 1; a < N; ++a) {
            if (gcd(a, N) != 1) {
                continue;
            }
            ir::ParamValues params = ArithmeticFixture::bind(prog, a, 0, N);
            for (u64 x = 0; x < (u64{1} << n); ++x) {
                for (u64 b = 0; b < N; ++b) {
                    for (int c = 0; c < 2; ++c) {
                        const u64 want = c ? (b + a * x) % N : b;
                        StateVector out =
                            run_on_basis(prog, params, ArithmeticFixture::index(n, x, b, c));
                        r.add(basis_deviation(out, ArithmeticFixture::index(n, x, want, c)));
                    }
                }
            }
        }
    }
    return r;
}

/// Controlled U_a: |c>|x>|0> -> |c>|a^c x mod N>|0> for every N of n bits,
/// a coprime to N, x < N.
inline SweepResult sweep_controlled_u(unsigned n) {
    SweepResult r;
    ir::HybridProgram prog = ArithmeticFixture::build(n, ArithmeticFixture::Kind::ControlledU);
    for (u64 N : moduli_of_width(n)) {
        for (u64 a = 1; a < N; ++a) {
            if (gcd(a, N) != 1) {
                continue;
            }
            ir::ParamValues params = ArithmeticFixture::bind(prog, a, mod_inverse(a, N), N);
            for (u64 x = 0; x < N; ++x) {
                for (int c = 0; c < 2; ++c) {
                    const u64 want = c ? a * x % N : x;
                    StateVector out =
                        run_on_basis(prog, params, ArithmeticFixture::index(n, x, 0, c));
                    r.add(basis_deviation(out, ArithmeticFixture::index(n, want, 0, c)));
                }
            }
        }
    }
    return r;
}

}  // namespace shorjit::testing
