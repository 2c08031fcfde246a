#include "primseq/complexity.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

namespace primseq {
namespace {

using Bits = std::vector<std::uint8_t>;

BitSequence seq_of(std::string_view s) { return BitSequence::from_string(s); }

// Shortest recurrence s_n = sum c_i s_{n-i} valid for every n >= L of the
// periodic extension; checking one period of n suffices.
u64 brute_linear_complexity(const BitSequence& seq) {
    const u64 T = seq.period();
    auto at = [&](u64 n) { return seq[n % T]; };
    for (u64 L = 0; L <= T; ++L) {
        for (u64 mask = 0; mask < (u64{1} << L); ++mask) {
            bool ok = true;
            for (u64 n = L; n < L + T && ok; ++n) {
                unsigned acc = 0;
                for (u64 i = 1; i <= L; ++i) acc ^= ((mask >> (i - 1)) & 1) & at(n - i);
                ok = acc == at(n);
            }
            if (ok) return L;
        }
    }
    return T;
}

u64 brute_two_adic(const BitSequence& seq) {
    const u64 T = seq.period();
    const u64 m = (u64{1} << T) - 1;
    u64 s2 = 0;
    for (u64 n = 0; n < T; ++n) s2 |= u64{seq[n]} << n;
    const u64 g = s2 == 0 ? m : std::gcd(m, s2);
    return floor_log2(m / g);
}

BitSequence random_sequence(std::mt19937_64& rng, std::size_t T) {
    Bits bits(T);
    for (auto& b : bits) b = rng() & 1;
    return BitSequence(std::move(bits));
}

TEST(LinearComplexity, Examples) {
    EXPECT_EQ(linear_complexity_gcd(seq_of("010")), 3u);
    EXPECT_EQ(linear_complexity_gcd(seq_of("00000")), 0u);
    EXPECT_EQ(linear_complexity_gcd(seq_of("10000")), 5u);
    EXPECT_EQ(linear_complexity_bm(seq_of("010")), 3u);
    EXPECT_EQ(linear_complexity_bm(seq_of("111")), 1u);
    EXPECT_EQ(linear_complexity_gcd(seq_of("111")), 1u);
    EXPECT_EQ(linear_complexity_bm(seq_of("00000")), 0u);
    EXPECT_EQ(linear_complexity_bm(seq_of("10000")), 5u);
}

TEST(LinearComplexity, EmptyRejected) {
    EXPECT_THROW(linear_complexity_gcd(BitSequence{}), std::invalid_argument);
    EXPECT_THROW(linear_complexity_bm(BitSequence{}), std::invalid_argument);
}

TEST(LinearComplexity, ExhaustiveAgainstBruteForce) {
    for (std::size_t T = 1; T <= 8; ++T) {
        for (u64 v = 0; v < (u64{1} << T); ++v) {
            Bits bits(T);
            for (std::size_t i = 0; i < T; ++i) bits[i] = (v >> i) & 1;
            const BitSequence seq(bits);
            const u64 expected = brute_linear_complexity(seq);
            ASSERT_EQ(linear_complexity_gcd(seq), expected) << seq.to_string();
            ASSERT_EQ(linear_complexity_bm(seq), expected) << seq.to_string();
        }
    }
}

TEST(LinearComplexity, RandomOddPeriodsBmMatchesGcd) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        const std::size_t T = 2 * (rng() % 128) + 1;  // odd, <= 255
        const auto seq = random_sequence(rng, T);
        ASSERT_EQ(linear_complexity_bm(seq), linear_complexity_gcd(seq)) << seq.to_string();
    }
}

TEST(LinearComplexity, RandomLongAndEvenPeriods) {
    std::mt19937_64 rng(5);
    for (std::size_t T : {64u, 65u, 127u, 128u, 129u, 500u, 1023u, 2203u}) {
        const auto seq = random_sequence(rng, T);
        ASSERT_EQ(linear_complexity_bm(seq), linear_complexity_gcd(seq)) << T;
    }
}

TEST(SOne, Examples) {
    EXPECT_EQ(s_one(build_s_sequence(build_context(13))), 1u);
    EXPECT_EQ(s_one(build_s_sequence(build_context(11))), 0u);
    EXPECT_EQ(s_one(build_s_sequence(build_context(19))), 1u);
}

TEST(Epsilon, Examples) {
    EXPECT_EQ(epsilon_of(13), 1u);
    EXPECT_EQ(epsilon_of(11), 0u);
    EXPECT_EQ(epsilon_of(5281), 1u);
    EXPECT_THROW(epsilon_of(2), std::invalid_argument);
}

TEST(LcLowerBound, Examples) {
    EXPECT_EQ(lc_lower_bound(factorize(3), 1), 3u);
    EXPECT_EQ(lc_lower_bound(factorize(11), 0), 10u);
    EXPECT_EQ(lc_lower_bound(factorize(31), 0), 5u);
    EXPECT_EQ(lc_lower_bound(factorize(15), 0), 2u);  // min(ord_3 2, ord_5 2)
    EXPECT_THROW(lc_lower_bound(factorize(12), 0), std::invalid_argument);
}

TEST(TwoAdic, Examples) {
    const auto a = two_adic_complexity(seq_of("010"));
    EXPECT_EQ(a.s2, 2);
    EXPECT_EQ(a.c, 2u);
    const auto z = two_adic_complexity(seq_of("000"));
    EXPECT_EQ(z.s2, 0);
    EXPECT_EQ(z.c, 0u);
    const auto o = two_adic_complexity(seq_of("111"));
    EXPECT_EQ(o.s2, 7);
    EXPECT_EQ(o.c, 0u);
}

TEST(TwoAdic, AgreesWithMachineWordOracle) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t T = 1 + rng() % 62;
        const auto seq = random_sequence(rng, T);
        const auto r = two_adic_complexity(seq);
        ASSERT_EQ(r.c, brute_two_adic(seq)) << seq.to_string();
        ASSERT_LE(r.c, T - 1);
    }
}

TEST(TwoAdic, BitOrderMatchesPowersOfTwo) {
    const auto r = two_adic_complexity(seq_of("0011"));
    EXPECT_EQ(r.s2, 12);
}

TEST(CLowerBound, Examples) {
    EXPECT_EQ(c_lower_bound(23), 4u);
    EXPECT_EQ(c_lower_bound(2351), 11u);
    EXPECT_EQ(c_lower_bound(164504919713ULL), 37u);
    EXPECT_THROW(c_lower_bound(2), std::invalid_argument);
}

TEST(Probe, MersenneAndComposite) {
    EXPECT_TRUE(probe_mersenne_number(7).is_prime);
    EXPECT_FALSE(probe_mersenne_number(7).smallest_factor.has_value());
    EXPECT_TRUE(probe_mersenne_number(31).is_prime);
    EXPECT_TRUE(probe_mersenne_number(2203).is_prime);
    EXPECT_EQ(probe_mersenne_number(11).smallest_factor, 23u);
    EXPECT_FALSE(probe_mersenne_number(11).is_prime);
    EXPECT_EQ(probe_mersenne_number(15).smallest_factor, 7u);
    ProbeOptions small;
    small.factor_k_max = 1000;
    const auto p199 = probe_mersenne_number(199, small);
    EXPECT_FALSE(p199.smallest_factor.has_value());
    EXPECT_FALSE(p199.is_prime);
}

TEST(FullReport, Examples) {
    const auto c13 = build_context(13);
    const auto r13 = full_report(c13, 1'000'000);
    EXPECT_EQ(r13.linear, 3u);
    EXPECT_EQ(r13.two_adic, 2u);
    EXPECT_TRUE(r13.mersenne_prime);
    EXPECT_EQ(r13.two_adic_lower, 2u);
    EXPECT_TRUE(r13.consistent(build_s_sequence(c13)));

    const auto r43 = full_report(build_context(43), 1'000'000);
    EXPECT_EQ(r43.linear_lower, 10u);
    EXPECT_EQ(r43.two_adic_lower, 4u);
    EXPECT_EQ(r43.mersenne_factor, 23u);

    const auto c11 = build_context(11);
    const auto r11 = full_report(c11, 1'000'000);
    EXPECT_EQ(r11.epsilon, 0u);
    EXPECT_GE(r11.linear, r11.linear_lower);
    EXPECT_TRUE(r11.consistent(build_s_sequence(c11)));
}

TEST(FullReport, TwoAdicLowerAbsentBeyondBudget) {
    // p = 751 has T = 199; its smallest factor needs k near 4e8.
    const auto r = full_report(build_context(751), 1000);
    EXPECT_FALSE(r.two_adic_lower.has_value());
    EXPECT_FALSE(r.mersenne_prime);
}

TEST(Properties, SOneLemmaForPrimesOneModFour) {
    for (u64 p = 13; p <= 10000; p += 4) {
        if (!is_prime(p)) continue;
        const auto ctx = build_context(p);
        ASSERT_EQ(ctx.roots.front() + ctx.roots.back(), p) << p;
        ASSERT_EQ(s_one(build_s_sequence(ctx)), 1u) << p;
    }
}

TEST(Properties, BoundsHoldForPrimesUpTo2000) {
    for (u64 p = 11; p <= 2000; p += 2) {
        if (!is_prime(p)) continue;
        const auto ctx = build_context(p);
        for (auto variant : {SequenceVariant::s, SequenceVariant::t}) {
            const auto seq = build_sequence(ctx, variant);
            const auto r = full_report(ctx, seq, variant);
            ASSERT_EQ(r.linear_bm, r.linear_gcd) << p;
            ASSERT_TRUE(r.consistent(seq)) << p;
            if (!seq.is_constant()) {
                ASSERT_GE(r.linear, r.linear_lower) << p;
                if (r.two_adic_lower) ASSERT_GE(r.two_adic, *r.two_adic_lower) << p;
            }
        }
    }
}

TEST(Properties, MersennePeriodsHaveMaximalTwoAdicComplexity) {
    const std::vector<u64> mersenne_periods{3, 5, 7, 19, 31};
    std::set<u64> seen;
    for (u64 p = 11; p <= 20000; p += 2) {
        if (!is_prime(p)) continue;
        const u64 T = euler_phi(p - 1) - 1;
        if (std::find(mersenne_periods.begin(), mersenne_periods.end(), T) == mersenne_periods.end()) continue;
        const auto seq = build_s_sequence(build_context(p));
        if (seq.is_constant()) continue;
        ASSERT_EQ(two_adic_complexity(seq).c, T - 1) << p;
        seen.insert(T);
    }
    // T = 5 only arises from p = 19, whose sequence is constant.
    EXPECT_EQ(seen, (std::set<u64>{3, 7, 19, 31}));
}

TEST(Properties, PeriodFiveSequenceIsConstant) {
    const auto ctx = build_context(19);
    const auto seq = build_s_sequence(ctx);
    EXPECT_TRUE(seq.is_constant());
    EXPECT_EQ(two_adic_complexity(seq).c, 0u);
    EXPECT_EQ(linear_complexity_gcd(seq), 1u);
    const auto r = full_report(ctx, seq, SequenceVariant::s);
    EXPECT_FALSE(r.non_constant);
    EXPECT_TRUE(r.consistent(seq));
}

TEST(Properties, SingleOneSequenceIsMaximal) {
    for (std::size_t T : {3u, 5u, 7u, 13u, 31u, 61u}) {
        Bits bits(T, 0);
        bits[0] = 1;
        const BitSequence seq(bits);
        EXPECT_EQ(linear_complexity_gcd(seq), T);
        EXPECT_EQ(linear_complexity_bm(seq), T);
        EXPECT_EQ(two_adic_complexity(seq).c, T - 1);
    }
}

TEST(Properties, ConstantSequences) {
    for (std::size_t T : {1u, 2u, 9u, 100u}) {
        const BitSequence zeros(Bits(T, 0)), ones(Bits(T, 1));
        EXPECT_EQ(linear_complexity_gcd(zeros), 0u);
        EXPECT_EQ(linear_complexity_gcd(ones), 1u);
        EXPECT_EQ(linear_complexity_bm(ones), 1u);
        EXPECT_EQ(two_adic_complexity(zeros).c, 0u);
        EXPECT_EQ(two_adic_complexity(ones).c, 0u);
    }
}

}  // namespace
}  // namespace primseq
