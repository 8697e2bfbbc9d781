#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "vgrsi/indicator.hpp"
#include "vgrsi/marketdata.hpp"

namespace vgrsi {

enum class Direction { Long, Short };

std::string_view to_string(Direction d);

inline constexpr int sign_of(Direction d) { return d == Direction::Long ? 1 : -1; }

/// Which way the indicator must pass a threshold to count as a crossing.
enum class CrossDirection { FromAbove, FromBelow };

std::string_view to_string(CrossDirection d);
CrossDirection cross_direction_from_string(std::string_view name);

struct StrategyParams {
    std::array<VgrsiParams, 3> indicator{};  // indexed by index_of(Timeframe)
    double buy_threshold = 30;
    double sell_threshold = 80;
    std::size_t sl_tp_lookback = 20;  // N
    double sl_tp_multiplier = 2;      // Z
    Seconds min_entry_gap{1800};
    std::size_t max_open_positions = 2;
    CrossDirection short_cross = CrossDirection::FromAbove;

    const VgrsiParams& on(Timeframe tf) const { return indicator[index_of(tf)]; }
    VgrsiParams& on(Timeframe tf) { return indicator[index_of(tf)]; }

    void validate() const;
    bool operator==(const StrategyParams&) const = default;
};

/// Previous and current completed-bar values of one timeframe.
struct TimeframeState {
    MaybeValue prev;
    MaybeValue curr;
};

using EntryState = std::array<TimeframeState, 3>;

struct Signal {
    Timestamp time{};
    Direction direction = Direction::Long;
    double sl_distance_points = 0;
    double tp_distance_points = 0;
    double buy_threshold = 0;
    double sell_threshold = 0;
    std::array<MaybeValue, 3> snapshot{};
};

/// Downward cross: prev > threshold >= curr, both defined.
bool crossing(MaybeValue prev, MaybeValue curr, double threshold);
bool crossing(MaybeValue prev, MaybeValue curr, double threshold, CrossDirection dir);

/// Which direction, if any, the multi-timeframe rule opens right now. The
/// position cap and entry gap suppress a would-be entry.
std::optional<Direction> entry_direction(const EntryState& state, const StrategyParams& params,
                                         std::size_t open_count, std::optional<Timestamp> last_entry,
                                         Timestamp now);

/// Median candle height over the last N candles in points, times Z, rounded
/// to whole points and floored at one point.
double sl_tp_distance(std::span<const Candle> recent, std::size_t lookback, double multiplier,
                      const InstrumentSpec& spec);

/// Full entry decision. `recent` ends with the bar that just closed and is
/// used for SL/TP sizing; with fewer than N bars no signal is produced.
std::optional<Signal> evaluate_entry(const EntryState& state, const StrategyParams& params, std::size_t open_count,
                                     std::optional<Timestamp> last_entry, Timestamp now,
                                     std::span<const Candle> recent, const InstrumentSpec& spec);

/// One JSON object per line for audit logs.
std::string to_json_line(const Signal& s);

}  // namespace vgrsi
