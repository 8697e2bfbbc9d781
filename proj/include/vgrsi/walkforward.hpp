#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "vgrsi/backtest.hpp"
#include "vgrsi/metrics.hpp"
#include "vgrsi/signals.hpp"

namespace vgrsi {

enum class SearchMode { Grid, Random };

std::string_view to_string(SearchMode m);
SearchMode search_mode_from_string(std::string_view name);

/// Inclusive integer range walked with a fixed step.
struct Range {
    long lo = 0;
    long hi = 0;
    long step = 1;

    std::size_t count() const { return hi < lo ? 0 : static_cast<std::size_t>((hi - lo) / step) + 1; }
    long at(std::size_t k) const { return lo + static_cast<long>(k) * step; }
    bool contains(double v) const { return v >= static_cast<double>(lo) && v <= static_cast<double>(hi); }
    bool operator==(const Range&) const = default;
};

struct ParameterRanges {
    Range window_size{10, 200, 10};
    Range window_visibility{10, 200, 10};
    Range buy_threshold{20, 35, 5};
    Range sell_threshold{70, 95, 5};
    Range sl_tp_lookback{10, 100, 10};
    Range sl_tp_multiplier{1, 10, 1};
    std::vector<Aggregation> variants{Aggregation::A0, Aggregation::A1};

    void validate() const;
    bool operator==(const ParameterRanges&) const = default;
};

struct WalkForwardConfig {
    int train_days = 30;
    int trade_days = 7;
    int step_days = 7;
    SearchMode search = SearchMode::Random;
    std::size_t search_budget = 64;
    std::uint64_t seed = 1;
    ParameterRanges ranges;
    BrokerConfig broker;
    PriceSource price_source = PriceSource::Mid;
    Seconds min_entry_gap{1800};
    std::size_t max_open_positions = 2;
    CrossDirection short_cross = CrossDirection::FromAbove;
    SharpeConvention sharpe;
    unsigned threads = 1;

    void validate() const;
};

/// Candidate strategies for one search. Grid mode shares (W_S, W_V, variant)
/// across the three timeframes and decodes candidates lazily; random mode
/// draws independent per-timeframe values from a seeded generator.
class ParameterSpace {
public:
    ParameterSpace(const WalkForwardConfig& config, std::uint64_t seed);

    std::size_t size() const;
    StrategyParams operator[](std::size_t k) const;

    /// Indices to evaluate within a budget: all of them when they fit, an
    /// evenly strided subset otherwise.
    std::vector<std::size_t> plan(std::size_t budget) const;

    SearchMode mode() const { return mode_; }

private:
    StrategyParams base() const;

    WalkForwardConfig config_;
    SearchMode mode_;
    std::vector<StrategyParams> drawn_;
};

ParameterSpace parameter_space(const WalkForwardConfig& config);

/// Uniform integer on [lo, hi] by rejection, independent of the standard
/// library's distribution implementation.
long uniform_int(std::mt19937_64& rng, long lo, long hi);

struct CandidateScore {
    std::size_t index = 0;  // enumeration order
    StrategyParams params;
    double profit = 0;
    std::size_t trades = 0;
    bool live = false;  // some defined indicator value on every timeframe
};

struct Optimization {
    StrategyParams best;
    double profit = 0;
    std::size_t trades = 0;
    std::vector<CandidateScore> scores;
};

/// Index into `scores` of the best live candidate: highest profit, then fewer
/// trades, then earlier enumeration. nullopt when none is live.
std::optional<std::size_t> select_best(std::span<const CandidateScore> scores);

/// Best in-sample profit; ties go to fewer trades, then enumeration order.
/// Throws when no candidate has a defined indicator value on every timeframe.
Optimization optimize_window(MarketView& train, std::span<const StrategyParams> candidates,
                             const BrokerConfig& broker, unsigned threads = 1, std::size_t window_index = 0);

struct WindowResult {
    std::size_t index = 0;
    Timestamp train_start{}, trade_start{}, trade_end{};
    StrategyParams params;
    double in_sample_profit = 0;
    std::size_t in_sample_trades = 0;
    double out_of_sample_profit = 0;
    WindowStats stats;
    std::vector<TradeRecord> trades;
    std::vector<EquityPoint> equity;
    std::vector<Signal> signals;
};

struct WalkForwardResult {
    std::vector<WindowResult> windows;
    std::vector<double> cumulative_profit;  // prefix sums of out-of-sample profit
};

struct WindowBounds {
    Timestamp train_start, trade_start, trade_end;
};

/// Calendar windows tiling the history from the midnight of its first bar.
std::vector<WindowBounds> window_schedule(std::span<const Candle> m1, const WalkForwardConfig& config);

/// Indicator warm-up taken from before each window: enough M30 bars for the
/// largest W_S and W_V in the search ranges.
Seconds warmup_span(const WalkForwardConfig& config);

WalkForwardResult run_walkforward(std::span<const Candle> m1, const WalkForwardConfig& config,
                                  const InstrumentSpec& spec);

}  // namespace vgrsi
