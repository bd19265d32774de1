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

#include "shorjit/number_theory.h"

#include <array>
#include <bit>
#include <cmath>

#include "shorjit/errors.h"

namespace shorjit {

u64 gcd(u64 x, u64 y) {
    while (y != 0) {
        u64 r = x % y;
        x = y;
        y = r;
    }
    return x;
}

unsigned bit_width(u64 x) {
    return static_cast<unsigned>(std::bit_width(x));
}

u64 mul_mod(u64 x, u64 y, u64 modulus) {
    return static_cast<u64>((static_cast<u128>(x) * y) % modulus);
}

u64 mod_exp(u64 base, u64 exponent, u64 modulus) {
    if (modulus < 2) {
        throw InvalidArgument("mod_exp: modulus must be at least 2");
    }
    u64 result = 1;
    base %= modulus;
    while (exponent != 0) {
        if (exponent & 1) {
            result = mul_mod(result, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exponent >>= 1;
    }
    return result;
}

u64 mod_inverse(u64 a, u64 modulus) {
    if (modulus < 2) {
        throw InvalidArgument("mod_inverse: modulus must be at least 2");
    }
    __int128 old_r = a % modulus, r = modulus;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        __int128 quotient = old_r / r;
        __int128 tmp = old_r - quotient * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quotient * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) {
        throw NoInverseError("mod_inverse: argument shares a factor with the modulus");
    }
    old_s %= static_cast<__int128>(modulus);
    if (old_s < 0) {
        old_s += modulus;
    }
    return static_cast<u64>(old_s);
}

std::vector<Convergent> dyadic_convergents(u64 numerator, unsigned log2_denominator) {
    if (log2_denominator > 64) {
        throw InvalidArgument("dyadic_convergents: denominator exponent above 64");
    }
    u128 x = numerator;
    u128 y = static_cast<u128>(1) << log2_denominator;
    u128 p_prev = 1, p_prev2 = 0;
    u128 q_prev = 0, q_prev2 = 1;
    std::vector<Convergent> out;
    while (y != 0) {
        u128 term = x / y;
        u128 rem = x % y;
        x = y;
        y = rem;
        u128 p = term * p_prev + p_prev2;
        u128 q = term * q_prev + q_prev2;
        if (q > UINT64_MAX || p > UINT64_MAX) {
            break;
        }
        Convergent c{static_cast<u64>(p), static_cast<u64>(q)};
        // Only the first partial quotient can leave the denominator unchanged
        // (q_1 == q_0 == 1); the later convergent supersedes it.
        if (!out.empty() && out.back().denominator == c.denominator) {
            out.back() = c;
        } else {
            out.push_back(c);
        }
        p_prev2 = p_prev;
        p_prev = p;
        q_prev2 = q_prev;
        q_prev = q;
    }
    return out;
}

std::optional<u64> candidate_order(u64 j, unsigned t, u64 N, u64 a) {
    if (j == 0 || N < 2) {
        return std::nullopt;
    }
    for (const Convergent &c : dyadic_convergents(j, t)) {
        u64 q = c.denominator;
        if (q >= N) {
            break;
        }
        if (mod_exp(a, q, N) == 1) {
            return q;
        }
        if (2 * q < N && mod_exp(a, 2 * q, N) == 1) {
            return 2 * q;
        }
    }
    return std::nullopt;
}

u64 brute_force_order(u64 a, u64 N) {
    if (N < 2) {
        throw InvalidArgument("brute_force_order: modulus must be at least 2");
    }
    if (gcd(a % N, N) != 1) {
        throw InvalidArgument("brute_force_order: a is not a unit modulo N");
    }
    u64 value = a % N;
    u64 r = 1;
    while (value != 1) {
        value = mul_mod(value, a, N);
        ++r;
    }
    return r;
}

bool is_prime(u64 x) {
    if (x < 2) {
        return false;
    }
    constexpr std::array<u64, 12> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : witnesses) {
        if (x % p == 0) {
            return x == p;
        }
    }
    u64 d = x - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 w : witnesses) {
        u64 y = mod_exp(w, d, x);
        if (y == 1 || y == x - 1) {
            continue;
        }
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            y = mul_mod(y, y, x);
            if (y == x - 1) {
                composite = false;
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

namespace {

// floor(x^(1/k)).
u64 integer_root(u64 x, unsigned k) {
    auto r = static_cast<u64>(std::pow(static_cast<long double>(x), 1.0L / k));
    auto pow_le = [&](u64 base) {
        u128 acc = 1;
        for (unsigned i = 0; i < k; ++i) {
            acc *= base;
            if (acc > x) {
                return false;
            }
        }
        return true;
    };
    while (r > 0 && !pow_le(r)) {
        --r;
    }
    while (pow_le(r + 1)) {
        ++r;
    }
    return r;
}

}  // namespace

bool is_prime_power(u64 x) {
    if (x < 2) {
        return false;
    }
    for (unsigned k = 1; k < 64; ++k) {
        u64 r = integer_root(x, k);
        if (r < 2) {
            break;
        }
        u128 p = 1;
        for (unsigned i = 0; i < k; ++i) {
            p *= r;
        }
        if (p == x && is_prime(r)) {
            return true;
        }
    }
    return false;
}

}  // namespace shorjit
