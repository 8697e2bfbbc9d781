#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vgrsi/backtest.hpp"
#include "vgrsi/error.hpp"

namespace vgrsi {
namespace {

using testing::at;

InstrumentSpec fx() { return InstrumentSpec{"EURUSD", 0.0001, 100000, "USD", 3.0, 2}; }

std::vector<Candle> flat_bars(std::size_t minutes, Timestamp start) {
    std::vector<double> closes(minutes, 1.1);
    return testing::candles_from_closes(closes, start, 0.0002);
}

struct Planted {
    std::vector<MaybeValue> m1, m5, m30;
};

Planted neutral(const MarketView& mv) {
    return {std::vector<MaybeValue>(mv.bars(Timeframe::M1).size(), 50.0),
            std::vector<MaybeValue>(mv.bars(Timeframe::M5).size(), 50.0),
            std::vector<MaybeValue>(mv.bars(Timeframe::M30).size(), 50.0)};
}

void plant_cross(std::vector<MaybeValue>& v, std::size_t bar, double from, double to) {
    v[bar - 1] = from;
    v[bar] = to;
}

BacktestResult replay(const MarketView& mv, const Planted& p, const StrategyParams& params) {
    return run_backtest(mv, params, BrokerConfig{}, IndicatorPaths{p.m1, p.m5, p.m30});
}

StrategyParams wide_stops() {
    StrategyParams s;
    s.buy_threshold = 30;
    s.sell_threshold = 80;
    s.sl_tp_lookback = 10;
    s.sl_tp_multiplier = 10;
    return s;
}

TEST(MarketView, CompletedIndexRespectsBarClose) {
    const auto start = at(2024, 1, 2);
    MarketView mv(flat_bars(120, start), start, start + Seconds{7200}, fx());
    EXPECT_EQ(mv.bars(Timeframe::M5).size(), 24u);
    EXPECT_EQ(mv.bars(Timeframe::M30).size(), 4u);
    EXPECT_FALSE(mv.completed_index(Timeframe::M5, 3));
    EXPECT_EQ(mv.completed_index(Timeframe::M5, 4), 0u);   // M1 bar 00:04 closes at 00:05
    EXPECT_EQ(mv.completed_index(Timeframe::M30, 58), 0u);
    EXPECT_EQ(mv.completed_index(Timeframe::M30, 59), 1u);
}

TEST(MarketView, DropsBarsAfterTradeEnd) {
    const auto start = at(2024, 1, 2);
    MarketView mv(flat_bars(120, start), start + Seconds{1800}, start + Seconds{3600}, fx());
    EXPECT_EQ(mv.bars(Timeframe::M1).size(), 60u);
    EXPECT_EQ(mv.first_trade_bar(), 30u);
}

TEST(RunBacktest, PlantedCrossingsFireAtExpectedInstants) {
    const auto start = at(2024, 1, 2);
    MarketView mv(flat_bars(180, start), start, start + Seconds{3 * 3600}, fx());
    auto p = neutral(mv);
    plant_cross(p.m30, 1, 40, 25);  // closes 01:00, held until 01:30
    plant_cross(p.m5, 14, 40, 25);  // closes 01:15, held until 01:20
    plant_cross(p.m1, 76, 40, 25);  // closes 01:17 -> entry
    plant_cross(p.m1, 80, 40, 25);  // 01:21, M5 no longer crossing
    plant_cross(p.m5, 16, 40, 25);  // closes 01:25
    plant_cross(p.m1, 85, 40, 25);  // 01:26, all three but inside the 30 minute gap
    plant_cross(p.m30, 3, 40, 25);  // closes 02:00
    plant_cross(p.m5, 26, 40, 25);  // closes 02:15
    plant_cross(p.m1, 135, 40, 25); // 02:16 -> entry

    auto res = replay(mv, p, wide_stops());
    ASSERT_EQ(res.signals.size(), 2u);
    EXPECT_EQ(res.signals[0].time, at(2024, 1, 2, 1, 17));
    EXPECT_EQ(res.signals[1].time, at(2024, 1, 2, 2, 16));
    for (const auto& s : res.signals) EXPECT_EQ(s.direction, Direction::Long);
    ASSERT_EQ(res.trades.size(), 2u);
    for (const auto& t : res.trades) EXPECT_EQ(t.reason, ExitReason::EndOfWindow);
}

TEST(RunBacktest, RemovingOneTimeframeSilencesEntry) {
    const auto start = at(2024, 1, 2);
    MarketView mv(flat_bars(180, start), start, start + Seconds{3 * 3600}, fx());
    auto p = neutral(mv);
    plant_cross(p.m30, 1, 85, 75);
    plant_cross(p.m5, 14, 85, 75);
    plant_cross(p.m1, 76, 85, 75);
    auto res = replay(mv, p, wide_stops());
    ASSERT_EQ(res.signals.size(), 1u);
    EXPECT_EQ(res.signals[0].direction, Direction::Short);

    for (auto* path : {&p.m1, &p.m5, &p.m30}) {
        auto q = p;
        auto& v = path == &p.m1 ? q.m1 : path == &p.m5 ? q.m5 : q.m30;
        for (auto& x : v) x = 50.0;
        EXPECT_TRUE(replay(mv, q, wide_stops()).signals.empty());
    }
}

TEST(RunBacktest, UndefinedValuesNeverSignal) {
    const auto start = at(2024, 1, 2);
    MarketView mv(flat_bars(180, start), start, start + Seconds{3 * 3600}, fx());
    auto p = neutral(mv);
    for (auto* v : {&p.m1, &p.m5, &p.m30})
        for (std::size_t i = 0; i < v->size(); ++i) (*v)[i] = i % 2 ? MaybeValue{} : MaybeValue{10.0};
    EXPECT_TRUE(replay(mv, p, wide_stops()).signals.empty());
}

TEST(RunBacktest, PositionCapHolds) {
    const auto start = at(2024, 1, 2);
    MarketView mv(flat_bars(6 * 60, start), start, start + Seconds{6 * 3600}, fx());
    auto p = neutral(mv);
    // a conjunctive long cross every hour
    for (std::size_t h = 1; h < 6; ++h) {
        plant_cross(p.m30, 2 * h - 1, 40, 25);
        plant_cross(p.m5, 12 * h + 2, 40, 25);
        plant_cross(p.m1, 60 * h + 14, 40, 25);
    }
    auto res = replay(mv, p, wide_stops());
    EXPECT_EQ(res.signals.size(), 2u);
    EXPECT_EQ(res.trades.size(), 2u);
}

TEST(RunBacktest, FlatIndicatorMeansFlatEquity) {
    const auto start = at(2024, 1, 2);
    MarketView mv(flat_bars(120, start), start, start + Seconds{7200}, fx());
    auto res = replay(mv, neutral(mv), wide_stops());
    EXPECT_TRUE(res.trades.empty());
    for (const auto& e : res.equity) EXPECT_EQ(e.equity, 10000.0);
    EXPECT_EQ(res.profit(), 0.0);
}

TEST(RunBacktest, PathLengthMismatch) {
    const auto start = at(2024, 1, 2);
    MarketView mv(flat_bars(120, start), start, start + Seconds{7200}, fx());
    auto p = neutral(mv);
    p.m5.pop_back();
    EXPECT_THROW(replay(mv, p, wide_stops()), ValidationError);
}

TEST(RunBacktest, RealIndicatorRunKeepsInvariants) {
    const auto start = at(2024, 3, 4);
    auto m1 = testing::random_m1_history(21, start, 3 * 1440, 1.1, 0.0004);
    MarketView mv(m1, start + Seconds{86400}, start + Seconds{3 * 86400}, fx());
    StrategyParams s;
    for (auto& ind : s.indicator) ind = VgrsiParams{10, 20, Aggregation::A0};
    s.buy_threshold = 35;
    s.sell_threshold = 70;
    s.sl_tp_lookback = 10;
    s.sl_tp_multiplier = 2;
    auto res = run_backtest(mv, s, BrokerConfig{});
    double sum = 0;
    for (const auto& t : res.trades) sum += t.realized_pnl;
    EXPECT_NEAR(res.final_balance - res.initial_balance, sum, 0.005);
    for (std::size_t i = 1; i < res.signals.size(); ++i)
        EXPECT_GE(res.signals[i].time - res.signals[i - 1].time, s.min_entry_gap);
    for (const auto& t : res.trades) {
        EXPECT_GE(t.position.open_time, mv.trade_start());
        EXPECT_LE(t.exit_time, mv.trade_end());
    }
}

}  // namespace
}  // namespace vgrsi
