#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "vgrsi/error.hpp"
#include "vgrsi/indicator.hpp"

namespace vgrsi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Increments, OneShorterThanSeries) {
    std::vector<double> p{1, 3, 2, 2};
    EXPECT_EQ(increments(p), (std::vector<double>{2, -1, 0}));
    EXPECT_TRUE(increments(std::vector<double>{5}).empty());
}

TEST(Normalize, Arithmetic) {
    EXPECT_DOUBLE_EQ(normalize(1.0), 50.0);
    EXPECT_DOUBLE_EQ(normalize(3.0), 75.0);
    EXPECT_DOUBLE_EQ(normalize(0.0), 0.0);
    EXPECT_EQ(normalize(kInf), 100.0);
}

TEST(Aggregate, DegenerateRules) {
    EXPECT_EQ(strength_ratio(2, 0), kInf);
    EXPECT_FALSE(strength_ratio(0, 0));
    EXPECT_EQ(strength_ratio(0, 4), 0.0);

    EXPECT_EQ(aggregate(kInf, 3.0, Aggregation::A0), kInf);
    EXPECT_FALSE(aggregate(std::nullopt, 3.0, Aggregation::A0));
    EXPECT_FALSE(aggregate(kInf, kInf, Aggregation::A1));
    EXPECT_FALSE(aggregate(0.0, 0.0, Aggregation::A1));
    EXPECT_EQ(aggregate(kInf, 2.0, Aggregation::A1), kInf);
    EXPECT_EQ(aggregate(2.0, kInf, Aggregation::A1), 0.0);
    EXPECT_EQ(aggregate(0.0, 0.0, Aggregation::A0), 0.0);
}

TEST(Finalize, BalancedIsFifty) {
    VgrsiComponents c{2.5, 2.5, 4, 4};
    finalize(c, Aggregation::A0);
    EXPECT_EQ(*c.r_a, 1.0);
    EXPECT_NEAR(*c.value, 50.0, 1e-12);
}

TEST(Finalize, QuotientThreeGivesSeventyFive) {
    VgrsiComponents c{3.0, 1.0, 5, 5};
    finalize(c, Aggregation::A1);
    EXPECT_DOUBLE_EQ(*c.r_s, 3.0);
    EXPECT_DOUBLE_EQ(*c.r_n, 1.0);
    EXPECT_DOUBLE_EQ(*c.value, 75.0);
}

TEST(Finalize, SwappingSidesInvertsRatios) {
    VgrsiComponents up{6.0, 2.0, 3, 5}, down{2.0, 6.0, 5, 3};
    finalize(up, Aggregation::A0);
    finalize(down, Aggregation::A0);
    EXPECT_DOUBLE_EQ(*down.r_s, 1.0 / *up.r_s);
    EXPECT_DOUBLE_EQ(*down.r_n, 1.0 / *up.r_n);
    EXPECT_DOUBLE_EQ(*down.r_a, 0.5 * (1.0 / *up.r_s + 1.0 / *up.r_n));
}

TEST(ComponentsAt, MonotoneUpIsHundred) {
    std::vector<double> p;
    for (int i = 0; i < 60; ++i) p.push_back(100 + i * 0.5 + 0.01 * i * i);
    VgrsiParams params{10, 15, Aggregation::A0};
    for (std::size_t t = 10; t < p.size(); ++t) {
        auto c = components_at(p, t, params);
        EXPECT_EQ(c.n_minus, 0);
        EXPECT_EQ(*c.value, 100.0);
    }
}

TEST(ComponentsAt, WarmupAndRangeErrors) {
    std::vector<double> p(30, 1.0);
    VgrsiParams params{10, 10, Aggregation::A0};
    EXPECT_THROW(components_at(p, 9, params), WarmupError);
    EXPECT_THROW(components_at(p, 30, params), ValidationError);
    EXPECT_THROW(components_at(std::vector<double>{}, 0, params), ValidationError);
    EXPECT_THROW(rolling(std::vector<double>(10, 1.0), params), ValidationError);
}

TEST(ComponentsAt, MatchesTripleLoopOracle) {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        auto p = testing::random_walk(rng, 120);
        VgrsiParams params{35, 35, rep % 2 ? Aggregation::A1 : Aggregation::A0};
        for (std::size_t t = params.window_size; t < p.size(); t += 7) {
            auto c = components_at(p, t, params);
            auto o = oracle::sums(p, t, params.window_size, params.window_visibility);
            ASSERT_EQ(c.n_plus, o.n_plus);
            ASSERT_EQ(c.n_minus, o.n_minus);
            EXPECT_NEAR(c.s_plus, o.s_plus, 1e-9 * std::max(1.0, o.s_plus));
            EXPECT_NEAR(c.s_minus, o.s_minus, 1e-9 * std::max(1.0, o.s_minus));
            auto ov = oracle::value(o, rep % 2);
            ASSERT_EQ(c.value.has_value(), ov.has_value());
            if (ov) EXPECT_NEAR(*c.value, *ov, 1e-9);
        }
    }
}

TEST(ComponentsAt, IndexZeroAndFlatStepsContributeNothing) {
    // j = 1 sees only i = 0, which has no increment
    std::vector<double> p{1, 2, 2, 2};
    auto c = components_at(p, 1, VgrsiParams{1, 5, Aggregation::A0});
    EXPECT_EQ(c.n_plus + c.n_minus, 0);
    EXPECT_FALSE(c.value);
    auto flat = components_at(p, 3, VgrsiParams{1, 5, Aggregation::A0});
    EXPECT_EQ(flat.n_plus + flat.n_minus, 0);
}

TEST(ComponentsAt, RepeatedVisibleIndexCountsPerSource) {
    // i = 1 is visible from both j = 2 and j = 3
    std::vector<double> p{1, 3, 2, 2.5};
    auto c = components_at(p, 3, VgrsiParams{2, 3, Aggregation::A0});
    auto o = oracle::sums(p, 3, 2, 3);
    EXPECT_EQ(c.n_plus, o.n_plus);
    EXPECT_EQ(c.n_minus, o.n_minus);
    EXPECT_GE(c.n_plus, 2);
}

TEST(Rolling, WarmupBoundary) {
    std::mt19937_64 rng(1);
    auto p = testing::random_walk(rng, 21);
    auto r = rolling(p, VgrsiParams{20, 20, Aggregation::A0});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].index, 20u);
    EXPECT_TRUE(r[0].value.has_value());
}

TEST(Rolling, ConstantSeriesUndefined) {
    std::vector<double> p(80, 1.2345);
    for (auto v : {Aggregation::A0, Aggregation::A1})
        for (const auto& pt : rolling(p, VgrsiParams{15, 30, v})) EXPECT_FALSE(pt.value.has_value());
}

TEST(Rolling, IdenticalToPerInstantPath) {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        auto p = testing::random_walk(rng, 150);
        VgrsiParams params{12 + static_cast<std::size_t>(rep), 40, rep % 2 ? Aggregation::A1 : Aggregation::A0};
        for (const auto& pt : rolling(p, params)) {
            auto c = components_at(p, pt.index, params);
            ASSERT_EQ(pt.value.has_value(), c.value.has_value());
            if (c.value) ASSERT_EQ(*pt.value, *c.value);
        }
    }
}

TEST(Rolling, BoundedAndScaleInvariant) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        auto p = testing::random_walk(rng, 200, 500.0);
        std::vector<double> q = p;
        for (auto& v : q) v *= 3.7;
        for (auto variant : {Aggregation::A0, Aggregation::A1}) {
            VgrsiParams params{20, 40, variant};
            auto a = rolling_values(p, params), b = rolling_values(q, params);
            for (std::size_t t = 0; t < a.size(); ++t) {
                ASSERT_EQ(a[t].has_value(), b[t].has_value());
                if (!a[t]) continue;
                EXPECT_GE(*a[t], 0.0);
                EXPECT_LE(*a[t], 100.0);
                EXPECT_NEAR(*a[t], *b[t], 1e-9);
            }
        }
    }
}

TEST(Interpretation, ImpulseLiftsQuotientAboveMean) {
    // driftless chop (one small rise, two smaller falls) then one large up-move
    std::vector<double> p;
    double x = 100;
    for (int i = 0; i < 60; ++i) {
        x += (i % 3 == 0 ? 0.1 : -0.05);
        p.push_back(x);
    }
    p.push_back(x + 5.0);
    p.push_back(x + 4.95);
    const std::size_t t = p.size() - 1;
    auto a0 = components_at(p, t, VgrsiParams{20, 40, Aggregation::A0});
    auto a1 = components_at(p, t, VgrsiParams{20, 40, Aggregation::A1});
    ASSERT_TRUE(a0.value && a1.value);
    EXPECT_GT(*a1.value, *a0.value);
}

TEST(Interpretation, SteadyUptrendKeepsMeanAboveFifty) {
    std::vector<double> p;
    double x = 100;
    for (int i = 0; i < 300; ++i) {
        x += (i % 5 == 4) ? -0.3 : 1.0;
        p.push_back(x);
    }
    for (const auto& pt : rolling(p, VgrsiParams{20, 40, Aggregation::A0})) {
        ASSERT_TRUE(pt.value);
        EXPECT_GE(*pt.value, 50.0) << "t = " << pt.index;
    }
}

}  // namespace
}  // namespace vgrsi
