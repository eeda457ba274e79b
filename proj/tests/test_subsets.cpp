#include <gtest/gtest.h>

#include "madc/subsets.hpp"
#include "oracles.hpp"

using madc::KSubset;

TEST(Binomial, SmallValues) {
    EXPECT_EQ(madc::binomial(7, 2), 21u);
    EXPECT_EQ(madc::binomial(7, 3), 35u);
    EXPECT_EQ(madc::binomial(5, 0), 1u);
    EXPECT_EQ(madc::binomial(5, 6), 0u);
    EXPECT_EQ(madc::binomial(64, 32), 1832624140942590534ULL);
}

TEST(Binomial, RejectsGroundSetAboveLimit) { EXPECT_THROW(madc::binomial(65, 2), madc::ValidationError); }

TEST(Rank, KnownValues) {
    EXPECT_EQ(madc::rank_subset(7, KSubset{1, 2, 3}), 1u);
    EXPECT_EQ(madc::rank_subset(7, KSubset{1, 2, 4}), 2u);
    EXPECT_EQ(madc::rank_subset(5, KSubset{2, 3, 4, 5}), 5u);
}

TEST(Rank, FirstSubsetHasRankOne) {
    for (int n = 1; n <= 20; ++n) {
        for (int k = 1; k <= n; ++k) {
            std::vector<int> first(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) first[static_cast<std::size_t>(i)] = i + 1;
            EXPECT_EQ(madc::rank_subset(n, KSubset(first)), 1u);
        }
    }
}

TEST(Rank, RejectsBadInput) {
    const std::vector<int> out_of_range{1, 8};
    const std::vector<int> unsorted{3, 1};
    const std::vector<int> duplicate{2, 2};
    EXPECT_THROW(madc::rank_subset(7, out_of_range), madc::ValidationError);
    EXPECT_THROW(madc::rank_subset(7, unsorted), madc::ValidationError);
    EXPECT_THROW(madc::rank_subset(7, duplicate), madc::ValidationError);
    EXPECT_THROW(KSubset({2, 2}), madc::ValidationError);
    EXPECT_THROW(KSubset({0, 1}), madc::ValidationError);
}

TEST(Unrank, KnownAndBoundaryValues) {
    EXPECT_EQ(madc::unrank_subset(7, 3, 1), (KSubset{1, 2, 3}));
    EXPECT_EQ(madc::unrank_subset(5, 4, 5), (KSubset{2, 3, 4, 5}));
    EXPECT_EQ(madc::unrank_subset(9, 4, madc::binomial(9, 4)), (KSubset{6, 7, 8, 9}));
    EXPECT_THROW(madc::unrank_subset(7, 3, 0), madc::ValidationError);
    EXPECT_THROW(madc::unrank_subset(7, 3, 36), madc::ValidationError);
}

TEST(Enumerate, OrderAndCount) {
    const auto pairs = madc::enumerate_subsets(7, 2);
    ASSERT_EQ(pairs.size(), 21u);
    EXPECT_EQ(pairs[0], (KSubset{1, 2}));
    EXPECT_EQ(pairs[1], (KSubset{1, 3}));
    EXPECT_EQ(pairs[2], (KSubset{1, 4}));

    const auto quads = madc::enumerate_subsets(5, 4);
    const std::vector<KSubset> expected{{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 4, 5}, {1, 3, 4, 5}, {2, 3, 4, 5}};
    EXPECT_EQ(quads, expected);

    EXPECT_EQ(madc::enumerate_subsets(4, 4), (std::vector<KSubset>{{1, 2, 3, 4}}));
    EXPECT_THROW(madc::enumerate_subsets(3, 4), madc::ValidationError);
}

// Exhaustive bijection and monotonicity against the bitmask oracle.
TEST(RankProperty, MatchesBruteForceOrderUpToTwelve) {
    for (int n = 1; n <= 12; ++n) {
        for (int k = 1; k <= n; ++k) {
            const auto reference = oracle::sorted_subsets(n, k);
            const auto listed = madc::enumerate_subsets(n, k);
            ASSERT_EQ(listed.size(), reference.size());
            ASSERT_EQ(listed.size(), madc::binomial(n, k));
            for (std::size_t i = 0; i < reference.size(); ++i) {
                const std::uint64_t r = i + 1;
                ASSERT_EQ(listed[i].points(), reference[i]) << "n=" << n << " k=" << k << " i=" << i;
                ASSERT_EQ(madc::rank_subset(n, listed[i]), r);
                ASSERT_EQ(madc::unrank_subset(n, k, r), listed[i]);
                if (i > 0) {
                    ASSERT_LT(listed[i - 1], listed[i]);
                }
            }
        }
    }
}

TEST(SubsetsOf, BlockSubsetsInLexOrder) {
    const auto us = madc::subsets_of(KSubset{3, 5, 6}, 2);
    EXPECT_EQ(us, (std::vector<KSubset>{{3, 5}, {3, 6}, {5, 6}}));
}

TEST(KSubsetLabel, CompactAndSpaced) {
    EXPECT_EQ((KSubset{1, 2, 3}).to_string(), "{123}");
    EXPECT_EQ((KSubset{3, 10, 12}).to_string(), "{3 10 12}");
    EXPECT_EQ((KSubset{1, 2}).to_string(false), "{1 2}");
}
