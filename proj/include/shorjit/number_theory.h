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
#include <optional>
#include <vector>

namespace shorjit {

/// Residues and moduli are 64-bit; every product goes through 128-bit
/// intermediates so nothing overflows for moduli below 2^64.
using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// One rational approximation numerator/denominator of a continued fraction.
struct Convergent {
    u64 numerator = 0;
    u64 denominator = 1;

    bool operator==(const Convergent &) const = default;
};

u64 gcd(u64 x, u64 y);

/// Number of bits needed to write x (bit_width(0) == 0).
unsigned bit_width(u64 x);

u64 mul_mod(u64 x, u64 y, u64 modulus);

/// base^exponent mod modulus by square-and-multiply. Throws InvalidArgument
/// when modulus < 2.
u64 mod_exp(u64 base, u64 exponent, u64 modulus);

/// x with a*x = 1 (mod modulus). Throws NoInverseError when gcd(a, modulus) != 1.
u64 mod_inverse(u64 a, u64 modulus);

/// Convergents of the exact rational numerator / 2^log2_denominator, in order,
/// with strictly increasing denominators. Stops once a denominator would not
/// fit in 64 bits.
std::vector<Convergent> dyadic_convergents(u64 numerator, unsigned log2_denominator);

/// Order candidate read off a phase estimate j / 2^t.
///
/// Walks the convergents of j / 2^t and returns the first denominator q < N
/// with a^q = 1 (mod N). When q itself fails, 2q is tried before moving on,
/// which recovers orders aliased by an even factor. j == 0 returns nothing.
std::optional<u64> candidate_order(u64 j, unsigned t, u64 N, u64 a);

/// Smallest r >= 1 with a^r = 1 (mod N) by iterated multiplication. Test oracle.
u64 brute_force_order(u64 a, u64 N);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 x);

/// True when x = p^k for a prime p and k >= 1.
bool is_prime_power(u64 x);

}  // namespace shorjit
