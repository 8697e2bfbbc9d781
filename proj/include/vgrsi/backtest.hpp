#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "vgrsi/broker.hpp"
#include "vgrsi/indicator.hpp"
#include "vgrsi/marketdata.hpp"
#include "vgrsi/signals.hpp"

namespace vgrsi {

/// M1 history for one simulation span plus everything derived from it that
/// does not depend on strategy parameters.
class MarketView {
public:
    /// `m1` must be sorted M1 candles. Trading happens on bars whose open time
    /// lies in [trade_start, trade_end); earlier bars only warm up indicators.
    MarketView(std::vector<Candle> m1, Timestamp trade_start, Timestamp trade_end, const InstrumentSpec& spec,
               PriceSource source = PriceSource::Mid);

    const std::vector<Candle>& bars(Timeframe tf) const { return bars_[index_of(tf)]; }
    const PriceSeries& series(Timeframe tf) const { return series_[index_of(tf)]; }
    const InstrumentSpec& spec() const { return spec_; }
    Timestamp trade_start() const { return trade_start_; }
    Timestamp trade_end() const { return trade_end_; }
    std::size_t first_trade_bar() const { return first_trade_; }
    std::size_t end_trade_bar() const { return end_trade_; }

    /// For M1 bar k, the index of the latest coarser bar that has closed by the
    /// close of k, or nullopt.
    std::optional<std::size_t> completed_index(Timeframe tf, std::size_t k) const;

    /// Indicator values aligned to series(tf); cached per parameter set.
    const std::vector<MaybeValue>& indicator(Timeframe tf, const VgrsiParams& p) const;
    /// Fills the cache for `p` ahead of concurrent reads.
    void precompute(Timeframe tf, const VgrsiParams& p);

private:
    using Key = std::tuple<std::size_t, std::size_t, std::size_t, int>;
    static Key key_of(Timeframe tf, const VgrsiParams& p);

    InstrumentSpec spec_;
    Timestamp trade_start_{}, trade_end_{};
    std::array<std::vector<Candle>, 3> bars_;
    std::array<PriceSeries, 3> series_;
    std::array<std::vector<std::ptrdiff_t>, 3> completed_;
    std::size_t first_trade_ = 0, end_trade_ = 0;
    mutable std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<Contribution>> contrib_cache_;
    mutable std::map<Key, std::vector<MaybeValue>> value_cache_;
};

struct BacktestResult {
    std::vector<TradeRecord> trades;
    std::vector<EquityPoint> equity;
    std::vector<Signal> signals;
    std::vector<OrderRejection> rejections;
    double initial_balance = 0;
    double final_balance = 0;

    double profit() const { return final_balance - initial_balance; }
};

/// Bar-by-bar simulation: SL/TP resolution, then entry evaluation at the bar
/// close, then marking. Positions still open at the end are liquidated.
BacktestResult run_backtest(const MarketView& market, const StrategyParams& params, const BrokerConfig& broker);

/// Same loop driven by caller-supplied indicator values, each aligned to
/// market.bars(tf). Used to replay planted indicator paths.
using IndicatorPaths = std::array<std::span<const MaybeValue>, 3>;
BacktestResult run_backtest(const MarketView& market, const StrategyParams& params, const BrokerConfig& broker,
                            const IndicatorPaths& values);

/// True when every timeframe's indicator has at least one defined value at or
/// after trade_start.
bool has_defined_values(const MarketView& market, const StrategyParams& params);

}  // namespace vgrsi
