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

#include "shorjit/optimizer.h"

#include <algorithm>
#include <sstream>

#include "shorjit/errors.h"

namespace shorjit {

OptimizationFlags OptimizationFlags::parse(std::string_view text) {
    if (text == "all") {
        return all();
    }
    if (text == "none") {
        return beauregard();
    }
    if (text == "naive") {
        return {};
    }
    OptimizationFlags flags;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find_first_of(",+", pos);
        std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        if (item == "powers") {
            flags.use_precomputed_powers = true;
        } else if (item == "first-add") {
            flags.first_iteration_as_addition = true;
        } else if (item == "or-mask") {
            flags.elide_adders_by_or_mask = true;
        } else if (item == "overflow") {
            flags.elide_overflow_checks = true;
        } else {
            throw InvalidArgument("unknown optimization '" + std::string(item) +
                                  "' (expected all, none, naive, or a list of "
                                  "powers,first-add,or-mask,overflow)");
        }
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return flags;
}

std::string OptimizationFlags::to_string() const {
    std::vector<std::string> parts;
    if (use_precomputed_powers) {
        parts.emplace_back("powers");
    }
    if (first_iteration_as_addition) {
        parts.emplace_back("first-add");
    }
    if (elide_adders_by_or_mask) {
        parts.emplace_back("or-mask");
    }
    if (elide_overflow_checks) {
        parts.emplace_back("overflow");
    }
    if (parts.empty()) {
        return "naive";
    }
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        out += "+" + parts[i];
    }
    return out;
}

PowerTables precompute_powers(u64 a, u64 N, unsigned t) {
    if (N < 2 || gcd(a % N, N) != 1) {
        throw InvalidArgument("precompute_powers: a must be a unit modulo N");
    }
    if (t < 1) {
        throw InvalidArgument("precompute_powers: t must be at least 1");
    }
    PowerTables tables;
    u64 power = a % N;
    for (unsigned k = 0; k < t; ++k) {
        tables.powers.push_back(power);
        tables.inverse_powers.push_back(mod_inverse(power, N));
        power = mul_mod(power, power, N);
    }
    return tables;
}

namespace {

// s ∪ s·c (mod N), sorted.
ReachableSet extend(const ReachableSet &s, u64 c, u64 N) {
    ReachableSet scaled;
    scaled.reserve(s.size());
    for (u64 x : s) {
        scaled.push_back(mul_mod(x, c, N));
    }
    std::sort(scaled.begin(), scaled.end());
    ReachableSet out;
    out.reserve(s.size() + scaled.size());
    std::set_union(s.begin(), s.end(), scaled.begin(), scaled.end(), std::back_inserter(out));
    return out;
}

MultiplierPlan keep_everything(unsigned n) {
    return MultiplierPlan{std::vector<bool>(n, true), std::vector<bool>(n, true)};
}

std::vector<bool> keep_from_mask(u64 mask, unsigned n) {
    std::vector<bool> keep(n);
    for (unsigned j = 0; j < n; ++j) {
        keep[j] = j == 0 || ((mask >> j) & 1) != 0;
    }
    return keep;
}

// Accumulator starts at 0; adder j adds 2^j c mod N when bit j of x is set.
std::vector<bool> forward_overflow(const ReachableSet &controls, u64 c, u64 N, unsigned n) {
    std::vector<u64> addend(n);
    for (unsigned j = 0; j < n; ++j) {
        addend[j] = mul_mod(mod_exp(2, j, N), c, N);
    }
    std::vector<bool> needed(n, false);
    for (u64 x : controls) {
        u64 acc = 0;
        for (unsigned j = 0; j < n; ++j) {
            if (((x >> j) & 1) == 0) {
                continue;
            }
            u64 sum = acc + addend[j];
            if (sum >= N) {
                needed[j] = true;
                sum -= N;
            }
            acc = sum;
        }
    }
    return needed;
}

// Inverse multiplier: the accumulator holds x and the control register holds
// y = c x; adders run from j = n-1 down to 0, each subtracting 2^j c^{-1}.
std::vector<bool> inverse_overflow(const ReachableSet &targets, u64 c, u64 c_inv, u64 N,
                                   unsigned n) {
    std::vector<u64> addend(n);
    for (unsigned j = 0; j < n; ++j) {
        addend[j] = mul_mod(mod_exp(2, j, N), c_inv, N);
    }
    std::vector<bool> needed(n, false);
    for (u64 x : targets) {
        u64 y = mul_mod(x, c, N);
        u64 acc = x;
        for (unsigned jj = n; jj-- > 0;) {
            if (((y >> jj) & 1) == 0) {
                continue;
            }
            if (acc < addend[jj]) {
                needed[jj] = true;
                acc = acc + N - addend[jj];
            } else {
                acc -= addend[jj];
            }
        }
        if (acc != 0) {
            throw InternalConsistencyError("inverse multiplier bookkeeping did not return to 0");
        }
    }
    return needed;
}

}  // namespace

ReachableSet reachable_values(u64 a, u64 N, unsigned k) {
    ReachableSet s{1 % N};
    u64 power = a % N;
    for (unsigned i = 0; i < k; ++i) {
        ReachableSet next = extend(s, power, N);
        if (next.size() == s.size()) {
            break;
        }
        s = std::move(next);
        power = mul_mod(power, power, N);
    }
    return s;
}

u64 or_mask(const ReachableSet &values, unsigned n) {
    u64 mask = 0;
    for (u64 v : values) {
        if (n < 64 && (v >> n) != 0) {
            throw InvalidArgument("or_mask: value does not fit in the register");
        }
        mask |= v;
    }
    return mask;
}

ElisionPlan build_plan(u64 a, u64 N, unsigned n, unsigned t, OptimizationFlags flags,
                       PlannerOptions options) {
    if (N < 2 || gcd(a % N, N) != 1) {
        throw InvalidArgument("build_plan: a must be a unit modulo N");
    }
    if (n < bit_width(N)) {
        throw InvalidArgument("build_plan: N does not fit in the bit width");
    }
    PowerTables tables = precompute_powers(a, N, t);

    ElisionPlan plan;
    plan.N = N;
    plan.a = a;
    plan.n = n;
    plan.t = t;
    plan.flags = flags;
    plan.powers = tables.powers;
    plan.inverse_powers = tables.inverse_powers;

    ReachableSet reachable{1};
    bool tracked = true;
    for (unsigned k = 0; k < t; ++k) {
        unsigned p = t - 1 - k;
        IterationPlan it;
        it.multiplier = tables.powers[p];
        it.inverse = tables.inverse_powers[p];
        it.reachable_size = tracked ? reachable.size() : 0;
        it.forward = keep_everything(n);
        it.inverse_plan = keep_everything(n);

        bool substituted = k == 0 && flags.first_iteration_as_addition;
        // Repeated U_a blocks see a moving control set; those keep everything.
        bool analysable = tracked && flags.use_precomputed_powers && !substituted;
        if (tracked) {
            it.or_mask = or_mask(reachable, n);
            ReachableSet products;
            products.reserve(reachable.size());
            for (u64 x : reachable) {
                products.push_back(mul_mod(x, it.multiplier, N));
            }
            std::sort(products.begin(), products.end());
            it.inverse_or_mask = or_mask(products, n);
        } else {
            it.or_mask = (n >= 64) ? ~u64{0} : ((u64{1} << n) - 1);
            it.inverse_or_mask = it.or_mask;
        }
        if (analysable) {
            if (flags.elide_adders_by_or_mask) {
                it.forward.keep = keep_from_mask(it.or_mask, n);
                it.inverse_plan.keep = keep_from_mask(it.inverse_or_mask, n);
            }
            if (flags.elide_overflow_checks) {
                it.forward.overflow = forward_overflow(reachable, it.multiplier, N, n);
                it.inverse_plan.overflow =
                    inverse_overflow(reachable, it.multiplier, it.inverse, N, n);
            }
        }
        plan.iterations.push_back(std::move(it));

        if (tracked) {
            reachable = extend(reachable, tables.powers[p], N);
            if (reachable.size() > options.set_cap) {
                tracked = false;
                reachable.clear();
                reachable.shrink_to_fit();
            }
        }
    }
    return plan;
}

void to_json(nlohmann::json &j, const OptimizationFlags &flags) {
    j = nlohmann::json{{"use_precomputed_powers", flags.use_precomputed_powers},
                       {"first_iteration_as_addition", flags.first_iteration_as_addition},
                       {"elide_adders_by_or_mask", flags.elide_adders_by_or_mask},
                       {"elide_overflow_checks", flags.elide_overflow_checks}};
}

void from_json(const nlohmann::json &j, OptimizationFlags &flags) {
    j.at("use_precomputed_powers").get_to(flags.use_precomputed_powers);
    j.at("first_iteration_as_addition").get_to(flags.first_iteration_as_addition);
    j.at("elide_adders_by_or_mask").get_to(flags.elide_adders_by_or_mask);
    j.at("elide_overflow_checks").get_to(flags.elide_overflow_checks);
}

void to_json(nlohmann::json &j, const ElisionPlan &plan) {
    nlohmann::json iterations = nlohmann::json::array();
    for (std::size_t k = 0; k < plan.iterations.size(); ++k) {
        const IterationPlan &it = plan.iterations[k];
        iterations.push_back({{"k", k},
                              {"multiplier", it.multiplier},
                              {"inverse", it.inverse},
                              {"or_mask", it.or_mask},
                              {"inverse_or_mask", it.inverse_or_mask},
                              {"reachable_size", it.reachable_size},
                              {"forward_keep", it.forward.keep},
                              {"forward_overflow", it.forward.overflow},
                              {"inverse_keep", it.inverse_plan.keep},
                              {"inverse_overflow", it.inverse_plan.overflow}});
    }
    j = nlohmann::json{{"N", plan.N},
                       {"a", plan.a},
                       {"n", plan.n},
                       {"t", plan.t},
                       {"flags", plan.flags},
                       {"powers", plan.powers},
                       {"inverse_powers", plan.inverse_powers},
                       {"iterations", iterations}};
}

void from_json(const nlohmann::json &j, ElisionPlan &plan) {
    j.at("N").get_to(plan.N);
    j.at("a").get_to(plan.a);
    j.at("n").get_to(plan.n);
    j.at("t").get_to(plan.t);
    j.at("flags").get_to(plan.flags);
    j.at("powers").get_to(plan.powers);
    j.at("inverse_powers").get_to(plan.inverse_powers);
    plan.iterations.clear();
    for (const auto &item : j.at("iterations")) {
        IterationPlan it;
        item.at("multiplier").get_to(it.multiplier);
        item.at("inverse").get_to(it.inverse);
        item.at("or_mask").get_to(it.or_mask);
        item.at("inverse_or_mask").get_to(it.inverse_or_mask);
        item.at("reachable_size").get_to(it.reachable_size);
        it.forward.keep = item.at("forward_keep").get<std::vector<bool>>();
        it.forward.overflow = item.at("forward_overflow").get<std::vector<bool>>();
        it.inverse_plan.keep = item.at("inverse_keep").get<std::vector<bool>>();
        it.inverse_plan.overflow = item.at("inverse_overflow").get<std::vector<bool>>();
        plan.iterations.push_back(std::move(it));
    }
}

}  // namespace shorjit
