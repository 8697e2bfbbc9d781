#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vgrsi/broker.hpp"
#include "vgrsi/indicator.hpp"

namespace vgrsi {

/// Peak-to-trough decline of the equity curve as a percent of `base`.
double max_drawdown(std::span<const double> equity, double base);

struct SharpeConvention {
    bool annualize = true;
    double periods_per_year = 252.0;
};

/// mean / sample stdev of simple daily returns, rf = 0; undefined when the
/// returns have zero variance.
MaybeValue sharpe(std::span<const double> daily_equity, SharpeConvention conv = {});

/// Closing equity per UTC date, preceded by the initial balance.
std::vector<double> daily_equity(std::span<const EquityPoint> curve, double initial_balance);

struct WindowStats {
    std::size_t trades_all = 0;
    std::size_t trades_long = 0;
    std::size_t trades_short = 0;
    MaybeValue sharpe;
    double max_drawdown_pct = 0;
    double profit = 0;
};

WindowStats window_stats(std::span<const TradeRecord> trades, std::span<const EquityPoint> curve,
                         double initial_balance, SharpeConvention conv = {});

struct CountStats {
    std::size_t min = 0;
    std::size_t max = 0;
    double mean = 0;
};

struct Summary {
    std::size_t windows = 0;
    CountStats trades_all, trades_long, trades_short;
    MaybeValue mean_sharpe;  // over windows where it is defined
    double mean_max_drawdown_pct = 0;
    std::size_t total_trades = 0;
    std::size_t trading_days = 0;
    double trades_per_day = 0;
    double total_profit = 0;
    double profit_per_day = 0;
};

Summary aggregate(std::span<const WindowStats> windows, std::size_t trading_days);

}  // namespace vgrsi
