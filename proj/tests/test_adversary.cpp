#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

#include "evqc/adversary.hpp"
#include "evqc/error.hpp"
#include "support/oracles.hpp"

using namespace evqc;

namespace {

std::vector<std::size_t> random_subset(std::mt19937_64 &rng, std::size_t size, std::size_t k) {
    std::vector<std::size_t> all(size);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(k);
    return all;
}

} // namespace

TEST(Witness, TwoBitExample) {
    const std::vector<std::size_t> q{0, 1};
    const auto f = cn_witness(2, q);
    EXPECT_EQ(f, BoolFunc::from_ones(2, std::vector<std::size_t>{2}));
    EXPECT_TRUE(QueryTranscript::all_zero(2, q).consistent_with(f));
}

TEST(Witness, EmptyQuerySet) {
    for (unsigned n = 2; n <= 6; ++n) {
        const auto f = cn_witness(n, {});
        EXPECT_TRUE(ref::brute_in_cn(f));
    }
}

TEST(Witness, StructureOnRandomQuerySets) {
    std::mt19937_64 rng(40);
    for (int t = 0; t < 1000; ++t) {
        const unsigned n = 3;
        const auto q = random_subset(rng, 8, 4);
        const auto f = cn_witness(n, q);
        ASSERT_TRUE(is_in_cn(f));
        ASSERT_TRUE(ref::brute_in_cn(f));
        ASSERT_TRUE(QueryTranscript::all_zero(n, q).consistent_with(f));
    }
    for (int t = 0; t < 300; ++t) {
        const unsigned n = 2 + t % 7;
        const std::size_t size = std::size_t{1} << n;
        std::uniform_int_distribution<std::size_t> k(0, size / 2);
        const auto q = random_subset(rng, size, k(rng));
        const auto f = cn_witness(n, q);
        const auto ones = f.ones();
        ASSERT_EQ(ones.size(), size / 4);
        for (auto j : q) ASSERT_FALSE(f(j));
        // j0 is the smallest unqueried argument.
        std::vector<bool> hit(size, false);
        for (auto j : q) hit[j] = true;
        std::size_t j0 = 0;
        while (hit[j0]) ++j0;
        const int parity = std::popcount(ones.front() ^ j0) & 1;
        for (auto a : ones) {
            ASSERT_EQ(std::popcount(a ^ j0) & 1, parity);
            for (auto b : ones) ASSERT_EQ(std::popcount(a ^ b) & 1, 0);
        }
    }
}

TEST(Witness, Errors) {
    const std::vector<std::size_t> too_many{0, 1, 2};
    EXPECT_THROW((void)cn_witness(2, too_many), NoWitness);
    const std::vector<std::size_t> outside{4};
    EXPECT_THROW((void)cn_witness(2, outside), IndexOutOfRange);
    EXPECT_THROW((void)cn_witness(1, {}), ClassUndefined);
}

TEST(Transcript, ConsistencyFollowsAnswers) {
    const std::vector<std::size_t> q{1, 3};
    const auto t = QueryTranscript::all_zero(2, q);
    EXPECT_TRUE(t.consistent_with(BoolFunc::constant(2, false)));
    EXPECT_FALSE(t.consistent_with(BoolFunc::constant(2, true)));
    EXPECT_FALSE(t.consistent_with(BoolFunc::from_ones(2, std::vector<std::size_t>{3})));
}

TEST(MinQueries, Formula) {
    EXPECT_EQ(min_queries(2), 3U);
    EXPECT_EQ(min_queries(3), 5U);
    EXPECT_EQ(min_queries(10), 513U);
    EXPECT_THROW((void)min_queries(1), ClassUndefined);
}

TEST(Verify, ExhaustiveSmallCases) {
    const auto r2 = verify_adversary(2, 0, 1);
    EXPECT_TRUE(r2.passed());
    EXPECT_TRUE(r2.exhaustive);
    EXPECT_EQ(r2.exhaustive_sets, 6U);
    const auto r3 = verify_adversary(3, 0, 1);
    EXPECT_TRUE(r3.passed());
    EXPECT_EQ(r3.exhaustive_sets, 70U);
}

TEST(Verify, SampledEightBits) {
    const auto r = verify_adversary(8, 1000, 5);
    EXPECT_TRUE(r.passed());
    EXPECT_FALSE(r.exhaustive);
    EXPECT_EQ(r.trials, 1000U);
}
