#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "vgrsi/error.hpp"
#include "vgrsi/visibility.hpp"

namespace vgrsi {
namespace {

using Idx = std::vector<std::size_t>;

TEST(VisibleOracle, CollinearPointBlocks) {
    std::vector<double> p{1, 2, 3};
    EXPECT_EQ(visible_oracle(p, 2, 10).visible, (Idx{1}));
}

TEST(VisibleOracle, PointBelowSegmentIsSeenThrough) {
    // segment (0,3)-(2,2) passes 2.5 at k=1, and p_1 = 1 lies below it
    std::vector<double> p{3, 1, 2};
    EXPECT_EQ(visible_oracle(p, 2, 10).visible, (Idx{1, 0}));
}

TEST(VisibleOracle, AdjacentAlwaysVisible) {
    std::mt19937_64 rng(3);
    auto p = testing::random_walk(rng, 20);
    for (std::size_t wv : {1u, 5u, 50u}) EXPECT_EQ(visible_oracle(p, 1, wv).visible, (Idx{0}));
}

TEST(VisibleOracle, WindowLimitsRange) {
    std::vector<double> p{1, 2, 3};
    EXPECT_EQ(visible_oracle(p, 2, 1).visible, (Idx{1}));
    std::vector<double> q{3, 1, 2};
    EXPECT_EQ(visible_oracle(q, 2, 1).visible, (Idx{1}));
}

TEST(VisibleOracle, IndexOutOfRange) {
    std::vector<double> p{1, 2, 3};
    EXPECT_THROW(visible_oracle(p, 3, 10), ValidationError);
    EXPECT_THROW(visible_fast(p, 5, 10, 3), ValidationError);
    EXPECT_THROW(visible_oracle(p, 2, 0), ValidationError);
}

TEST(VisibleFast, CapKeepsNearest) {
    std::vector<double> p{3, 1, 2};
    auto v = visible_fast(p, 2, 10, 1);
    EXPECT_EQ(v.visible, (Idx{1}));
    EXPECT_TRUE(v.capped);
    EXPECT_FALSE(visible_fast(p, 2, 10, 5).capped);
}

TEST(VisibleFast, DecreasingSeriesSeesOnlyNeighbour) {
    std::vector<double> p{5, 4, 3, 2, 1};
    EXPECT_EQ(visible_oracle(p, 4, 10).visible, (Idx{3}));
    EXPECT_EQ(visible_fast(p, 4, 10, 10).visible, (Idx{3}));
}

TEST(VisibleFast, MatchesOracleTruncated) {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 40; ++rep) {
        auto p = testing::random_walk(rng, 50);
        for (std::size_t j = 0; j < p.size(); ++j) {
            for (std::size_t ws : {1u, 3u, 10u}) {
                auto full = visible_oracle(p, j, 50).visible;
                auto capped = visible_fast(p, j, 50, ws).visible;
                full.resize(std::min(full.size(), ws));
                ASSERT_EQ(capped, full) << "rep " << rep << " j " << j;
                ASSERT_EQ(capped, oracle::visible(p, j, 50, ws));
            }
        }
    }
}

TEST(VisibleFast, IntegerWalksWithTies) {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        auto p = testing::integer_walk(rng, 80);
        for (std::size_t j = 0; j < p.size(); ++j)
            ASSERT_EQ(visible_fast(p, j, 40).visible, visible_oracle(p, j, 40).visible) << "rep " << rep << " j " << j;
    }
}

TEST(VisibilityProperties, OrderingAdjacencyMonotonicity) {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        auto p = testing::random_walk(rng, 100);
        for (std::size_t j = 1; j < p.size(); ++j) {
            auto small = visible_fast(p, j, 10).visible;
            auto large = visible_fast(p, j, 60).visible;
            ASSERT_FALSE(small.empty());
            EXPECT_EQ(small.front(), j - 1);
            for (std::size_t k = 1; k < large.size(); ++k) EXPECT_GT(large[k - 1], large[k]);
            for (auto i : small) EXPECT_NE(std::find(large.begin(), large.end(), i), large.end());
            for (auto i : large) {
                EXPECT_LE(i, j - 1);
                EXPECT_GE(i + 60, j);
            }
        }
    }
}

TEST(VisibilityProperties, TranslationAndScaling) {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 30; ++rep) {
        auto p = testing::random_walk(rng, 120);
        std::vector<double> shifted = p, scaled = p;
        for (auto& v : shifted) v += 37.25;
        for (auto& v : scaled) v *= 2.5;
        for (std::size_t j = 0; j < p.size(); ++j) {
            auto base = visible_fast(p, j, 50).visible;
            EXPECT_EQ(visible_fast(shifted, j, 50).visible, base);
            EXPECT_EQ(visible_fast(scaled, j, 50).visible, base);
        }
    }
}

}  // namespace
}  // namespace vgrsi
