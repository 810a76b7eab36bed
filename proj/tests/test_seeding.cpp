#include "oracles.hpp"

#include "hashlab/errors.hpp"
#include "hashlab/generator.hpp"
#include "hashlab/seed.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

using namespace hashlab;

namespace {

const oracle::big kP89 = oracle::mersenne(89);

// Chi-squared upper-tail p-value of observed counts against a flat expectation.
double uniform_p_value(std::span<const std::uint64_t> counts) {
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const double expected = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (const auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
    const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST(MasterSeed, HexRoundTrip) {
    const MasterSeed s = MasterSeed::from_hex("0x1");
    EXPECT_EQ(s, MasterSeed(1));
    EXPECT_EQ(s.to_short_hex(), "0x1");
    EXPECT_EQ(s.to_hex(), "0x" + std::string(63, '0') + "1");
    EXPECT_EQ(MasterSeed().to_short_hex(), "0x0");

    const std::string full = "0x0123456789abcdef0123456789ABCDEFfedcba9876543210fedcba9876543210";
    const MasterSeed big = MasterSeed::from_hex(full);
    EXPECT_EQ(big.limbs[3], 0x0123456789abcdefULL);
    EXPECT_EQ(big.limbs[0], 0xfedcba9876543210ULL);
    EXPECT_EQ(MasterSeed::from_hex(big.to_hex()), big);
}

TEST(MasterSeed, RejectsMalformedHex) {
    EXPECT_THROW(MasterSeed::from_hex("123"), InvalidParams);
    EXPECT_THROW(MasterSeed::from_hex("0x"), InvalidParams);
    EXPECT_THROW(MasterSeed::from_hex("0xg1"), InvalidParams);
    EXPECT_THROW(MasterSeed::from_hex("0x" + std::string(65, '1')), InvalidParams);
    EXPECT_NO_THROW(MasterSeed::from_hex("0x" + std::string(64, 'f')));
}

TEST(MasterSeed, DerivedSeedsAreDeterministicAndDistinct) {
    const MasterSeed root(42);
    EXPECT_EQ(derive_seed(root, "trial", 3), derive_seed(root, "trial", 3));
    EXPECT_NE(derive_seed(root, "trial", 3), derive_seed(root, "trial", 4));
    EXPECT_NE(derive_seed(root, "trial", 3), derive_seed(root, "other", 3));
    EXPECT_NE(derive_seed(root, "trial", 3), derive_seed(MasterSeed(43), "trial", 3));
}

TEST(MakeGenerator, SameTagSameCoefficients) {
    const auto a = make_generator(MasterSeed(0), "t");
    const auto b = make_generator(MasterSeed(0), "t");
    ASSERT_EQ(a.coefficients().size(), 100u);
    EXPECT_TRUE(std::equal(a.coefficients().begin(), a.coefficients().end(), b.coefficients().begin()));
}

TEST(MakeGenerator, DistinctTagsDiffer) {
    const auto a = make_generator(MasterSeed(0), "a");
    const auto b = make_generator(MasterSeed(0), "b");
    EXPECT_FALSE(std::equal(a.coefficients().begin(), a.coefficients().end(), b.coefficients().begin()));
}

TEST(MakeGenerator, CoefficientsAreReduced) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto g = make_generator(MasterSeed(s), "reduce");
        for (const uint128 c : g.coefficients()) EXPECT_LT(oracle::to_big(c), kP89);
    }
}

TEST(MakeGenerator, SeedZeroIsNotDegenerate) {
    const auto g = make_generator(MasterSeed(0), "t");
    const auto nonzero = std::count_if(g.coefficients().begin(), g.coefficients().end(), [](uint128 c) { return c != 0; });
    EXPECT_GT(nonzero, 90);
}

TEST(MakeGenerator, TagLengthBounds) {
    EXPECT_THROW(make_generator(MasterSeed(1), ""), InvalidParams);
    EXPECT_THROW(make_generator(MasterSeed(1), std::string(33, 'x')), InvalidParams);
    EXPECT_NO_THROW(make_generator(MasterSeed(1), std::string(32, 'x')));
}

TEST(Generator, ConstantPolynomial) {
    std::vector<uint128> coeffs(100, 0);
    coeffs[0] = 5;
    IndependentGenerator g(coeffs);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(g.next_word(8), 5u);
}

TEST(Generator, QuadraticAtCounterTwo) {
    IndependentGenerator g({1, 1, 1}, 2);
    EXPECT_EQ(g.next_residue(), uint128{7});
    EXPECT_EQ(g.counter(), 3u);
    EXPECT_EQ(g.next_residue(), uint128{13});
}

TEST(Generator, CounterAdvancesByOnePerWord) {
    auto g = make_generator(MasterSeed(9), "count");
    g.next_word(8);
    g.next_word(64);
    EXPECT_EQ(g.counter(), 2u);
}

TEST(Generator, MatchesPowerSumOracle) {
    auto g = make_generator(MasterSeed(0x5eed), "oracle");
    const std::vector<uint128> coeffs(g.coefficients().begin(), g.coefficients().end());
    for (std::uint64_t x = 0; x < 1000; ++x) {
        const oracle::big expect = oracle::power_sum<uint128>(coeffs, x, kP89);
        ASSERT_EQ(oracle::to_big(g.next_residue()), expect) << "at x=" << x;
    }
}

TEST(Generator, MatchesOracleFromLargeCounter) {
    auto seeded = make_generator(MasterSeed(77), "offset");
    const std::vector<uint128> coeffs(seeded.coefficients().begin(), seeded.coefficients().end());
    const std::uint64_t start = 0xfffffffffffff000ULL;
    IndependentGenerator g(coeffs, start);
    for (std::uint64_t i = 0; i < 300; ++i) {
        const oracle::big expect = oracle::power_sum<uint128>(coeffs, oracle::big(start) + i, kP89);
        ASSERT_EQ(oracle::to_big(g.next_residue()), expect);
    }
}

TEST(Generator, NextWordIsLowBitsOfResidue) {
    auto a = make_generator(MasterSeed(3), "bits");
    auto b = make_generator(MasterSeed(3), "bits");
    for (const unsigned bits : {8u, 16u, 32u, 64u}) {
        const uint128 r = a.next_residue();
        const std::uint64_t mask = bits == 64 ? ~0ULL : (1ULL << bits) - 1;
        EXPECT_EQ(b.next_word(bits), static_cast<std::uint64_t>(r) & mask);
    }
}

TEST(Generator, HornerEvaluateAgreesWithStream) {
    auto g = make_generator(MasterSeed(11), "horner");
    for (std::uint64_t x = 0; x < 64; ++x) EXPECT_EQ(g.evaluate(x), g.next_residue());
}

TEST(Generator, ByteWordsPassChiSquared) {
    auto g = make_generator(MasterSeed(2024), "chi2");
    std::vector<std::uint64_t> counts(256, 0);
    for (int i = 0; i < 1'000'000; ++i) ++counts[g.next_word(8)];
    EXPECT_GT(uniform_p_value(counts), 0.001);
}

TEST(Generator, NextBelowIsUniformOnNonPowerOfTwo) {
    auto g = make_generator(MasterSeed(8), "below");
    std::vector<std::uint64_t> counts(7, 0);
    for (int i = 0; i < 70'000; ++i) {
        const auto v = g.next_below(7);
        ASSERT_LT(v, 7u);
        ++counts[v];
    }
    EXPECT_GT(uniform_p_value(counts), 0.001);
    EXPECT_THROW(g.next_below(0), InvalidParams);
}

TEST(WordSlicer, PacksValuesLowBitsFirst) {
    auto a = make_generator(MasterSeed(5), "slice");
    auto b = make_generator(MasterSeed(5), "slice");
    WordSlicer s(a, 16);
    const std::uint64_t w = b.next_word(64);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(s.next(), (w >> (16 * i)) & 0xffff);
    const std::uint64_t w2 = b.next_word(64);
    EXPECT_EQ(s.next(), w2 & 0xffff);
}

TEST(RandomPermutation, Singleton) {
    auto g = make_generator(MasterSeed(1), "perm");
    EXPECT_EQ(random_permutation(g, 1), std::vector<std::uint32_t>{0});
}

TEST(RandomPermutation, BijectiveForEveryPowerOfTwo) {
    auto g = make_generator(MasterSeed(1), "perm");
    for (std::size_t n = 1; n <= 65536; n *= 2) {
        auto p = random_permutation(g, n);
        ASSERT_EQ(p.size(), n);
        std::sort(p.begin(), p.end());
        for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(p[i], i) << "n=" << n;
    }
}

TEST(RandomPermutation, DeterministicUnderFixedSeed) {
    auto a = make_generator(MasterSeed(0xabc), "perm");
    auto b = make_generator(MasterSeed(0xabc), "perm");
    EXPECT_EQ(random_permutation(a, 16), random_permutation(b, 16));
}

TEST(RandomPermutation, RejectsBadSizes) {
    auto g = make_generator(MasterSeed(1), "perm");
    EXPECT_THROW(random_permutation(g, 3), InvalidParams);
    EXPECT_THROW(random_permutation(g, 0), InvalidParams);
    EXPECT_THROW(random_permutation(g, 131072), InvalidParams);
}

TEST(RandomPermutation, AllTwentyFourOrdersOfFourAreEquallyLikely) {
    std::map<std::vector<std::uint32_t>, std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4800; ++s) {
        auto g = make_generator(MasterSeed(s), "perm4", 8);
        ++seen[random_permutation(g, 4)];
    }
    ASSERT_EQ(seen.size(), 24u);
    std::vector<std::uint64_t> counts;
    for (const auto& [perm, n] : seen) counts.push_back(n);
    EXPECT_GT(uniform_p_value(counts), 0.001);
}
