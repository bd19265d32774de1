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

#include <gtest/gtest.h>

#include "shorjit/errors.h"
#include "shorjit/number_theory.h"
#include "shorjit/rng.h"

namespace shorjit {
namespace {

u64 slow_pow(u64 base, u64 exponent, u64 modulus) {
    u64 r = 1 % modulus;
    for (u64 i = 0; i < exponent; ++i) {
        r = static_cast<u64>(u128{r} * base % modulus);
    }
    return r;
}

bool trial_division_prime(u64 x) {
    if (x < 2) {
        return false;
    }
    for (u64 d = 2; d * d <= x; ++d) {
        if (x % d == 0) {
            return false;
        }
    }
    return true;
}

TEST(Gcd, SmallCases) {
    EXPECT_EQ(gcd(15, 6), 3u);
    EXPECT_EQ(gcd(21, 14), 7u);
    EXPECT_EQ(gcd(42, 0), 42u);
    EXPECT_EQ(gcd(0, 42), 42u);
}

TEST(Gcd, CommutativeAndIdempotent) {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        u64 x = rng.uniform_int(0, 1u << 20);
        u64 y = rng.uniform_int(1, 1u << 20);
        EXPECT_EQ(gcd(x, y), gcd(y, x));
        EXPECT_EQ(gcd(y, y), y);
        u64 g = gcd(x, y);
        EXPECT_EQ(x % g, 0u);
        EXPECT_EQ(y % g, 0u);
        EXPECT_EQ(gcd(x / g, y / g), 1u);
    }
}

TEST(ModExp, Examples) {
    EXPECT_EQ(mod_exp(7, 4, 15), 1u);
    EXPECT_EQ(mod_exp(2, 4, 15), 1u);
    EXPECT_EQ(mod_exp(9, 0, 15), 1u);
    EXPECT_THROW(mod_exp(3, 2, 1), InvalidArgument);
}

TEST(ModExp, MatchesRepeatedMultiplication) {
    Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        u64 m = rng.uniform_int(2, 5000);
        u64 b = rng.uniform_int(0, 100000);
        u64 e = rng.uniform_int(0, 300);
        EXPECT_EQ(mod_exp(b, e, m), slow_pow(b, e, m)) << b << "^" << e << " mod " << m;
    }
}

TEST(ModExp, WideModulusDoesNotOverflow) {
    const u64 m = 18446744073709551557ull;  // largest 64-bit prime
    EXPECT_EQ(mod_exp(2, m - 1, m), 1u);     // Fermat
    EXPECT_EQ(mul_mod(m - 1, m - 1, m), 1u);
}

TEST(ModInverse, Examples) {
    EXPECT_EQ(mod_inverse(7, 15), 13u);
    EXPECT_EQ(mod_inverse(1, 15), 1u);
    EXPECT_EQ(mod_inverse(2, 15), 8u);
    EXPECT_THROW(mod_inverse(6, 15), NoInverseError);
}

TEST(ModInverse, ProductIsOne) {
    for (u64 N = 2; N < 200; ++N) {
        for (u64 a = 1; a < N; ++a) {
            if (gcd(a, N) != 1) {
                continue;
            }
            u64 inv = mod_inverse(a, N);
            EXPECT_LT(inv, N);
            EXPECT_EQ(a * inv % N, 1 % N) << a << " mod " << N;
        }
    }
}

TEST(Convergents, OfThreeQuarters) {
    auto c = dyadic_convergents(192, 8);
    ASSERT_FALSE(c.empty());
    EXPECT_EQ(c.back(), (Convergent{3, 4}));
    for (std::size_t i = 1; i < c.size(); ++i) {
        EXPECT_LT(c[i - 1].denominator, c[i].denominator);
        EXPECT_EQ(gcd(c[i].numerator, c[i].denominator), 1u);
    }
}

TEST(Convergents, LastOneIsTheReducedFraction) {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        unsigned t = static_cast<unsigned>(rng.uniform_int(1, 40));
        u64 j = rng.uniform_int(0, (u64{1} << t) - 1);
        auto c = dyadic_convergents(j, t);
        ASSERT_FALSE(c.empty());
        u64 g = gcd(j, u64{1} << t);
        EXPECT_EQ(c.back().numerator, j / g);
        EXPECT_EQ(c.back().denominator, (u64{1} << t) / g);
    }
}

TEST(CandidateOrder, Examples) {
    EXPECT_EQ(candidate_order(192, 8, 15, 7), std::optional<u64>(4));
    EXPECT_EQ(candidate_order(0, 8, 15, 7), std::nullopt);
    // 1/2 gives denominator 2, which fails; doubling recovers 4.
    EXPECT_EQ(candidate_order(128, 8, 15, 7), std::optional<u64>(4));
}

TEST(CandidateOrder, RecoversExactPhases) {
    for (u64 N : {15u, 21u, 33u, 35u, 39u, 55u, 77u}) {
        const unsigned t = 2 * bit_width(N);
        for (u64 a = 2; a < N - 1; ++a) {
            if (gcd(a, N) != 1) {
                continue;
            }
            const u64 r = brute_force_order(a, N);
            if ((u64{1} << t) % r != 0) {
                continue;  // only exact dyadic phases
            }
            for (u64 k = 1; k < r; ++k) {
                if (gcd(k, r) != 1) {
                    continue;
                }
                u64 j = k * ((u64{1} << t) / r);
                EXPECT_EQ(candidate_order(j, t, N, a), std::optional<u64>(r))
                    << "N=" << N << " a=" << a << " k=" << k;
            }
        }
    }
}

TEST(CandidateOrder, ResultIsAlwaysAnOrderMultiple) {
    const u64 N = 35;
    const unsigned t = 12;
    for (u64 a : {2u, 3u, 4u, 6u, 8u, 9u, 11u}) {
        for (u64 j = 0; j < (u64{1} << t); j += 7) {
            auto r = candidate_order(j, t, N, a);
            if (r) {
                EXPECT_LT(*r, N);
                EXPECT_EQ(mod_exp(a, *r, N), 1u);
            }
        }
    }
}

TEST(BruteForceOrder, Examples) {
    EXPECT_EQ(brute_force_order(7, 15), 4u);
    EXPECT_EQ(brute_force_order(4, 15), 2u);
    EXPECT_EQ(brute_force_order(2, 15), 4u);
    EXPECT_THROW(brute_force_order(3, 15), InvalidArgument);
}

TEST(Primality, AgreesWithTrialDivision) {
    for (u64 x = 0; x < 5000; ++x) {
        EXPECT_EQ(is_prime(x), trial_division_prime(x)) << x;
    }
    EXPECT_TRUE(is_prime(18446744073709551557ull));
    EXPECT_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Primality, PrimePowers) {
    EXPECT_TRUE(is_prime_power(9));
    EXPECT_TRUE(is_prime_power(27));
    EXPECT_TRUE(is_prime_power(7));
    EXPECT_TRUE(is_prime_power(u64{3} * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3));
    EXPECT_FALSE(is_prime_power(15));
    EXPECT_FALSE(is_prime_power(36));
    EXPECT_FALSE(is_prime_power(1));
}

TEST(BitWidth, Basics) {
    EXPECT_EQ(bit_width(0), 0u);
    EXPECT_EQ(bit_width(1), 1u);
    EXPECT_EQ(bit_width(15), 4u);
    EXPECT_EQ(bit_width(16), 5u);
    EXPECT_EQ(bit_width(~u64{0}), 64u);
}

TEST(Rng, DeterministicAndSplittable) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next_u64(), b.next_u64());
    }
    Rng parent(42);
    Rng c1 = parent.split(1);
    Rng c2 = parent.split(2);
    EXPECT_NE(c1.next_u64(), c2.next_u64());
    // split does not advance the parent
    EXPECT_EQ(parent.next_u64(), Rng(42).next_u64());
}

TEST(Rng, UniformIntStaysInRangeAndCoversIt) {
    Rng rng(9);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        u64 v = rng.uniform_int(3, 9);
        ASSERT_GE(v, 3u);
        ASSERT_LE(v, 9u);
        ++hits[v - 3];
    }
    for (int h : hits) {
        EXPECT_GT(h, 800);
        EXPECT_LT(h, 1200);
    }
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, MatchesReferenceSplitMix64) {
    // Reference outputs of SplitMix64 started from state 0.
    EXPECT_EQ(mix64(0x9E3779B97F4A7C15ull), 0xE220A8397B1DCDAFull);
    EXPECT_EQ(mix64(2 * 0x9E3779B97F4A7C15ull), 0x6E789E6AA1B965F4ull);
    // Draw i of a stream is the reference sequence started from its key.
    Rng rng(123, 4);
    const u64 key = rng.key();
    for (u64 i = 1; i <= 5; ++i) {
        EXPECT_EQ(rng.next_u64(), mix64(key + i * 0x9E3779B97F4A7C15ull));
    }
}

}  // namespace
}  // namespace shorjit
