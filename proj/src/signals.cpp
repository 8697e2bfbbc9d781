#include "vgrsi/signals.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "vgrsi/error.hpp"

namespace vgrsi {

std::string_view to_string(Direction d) { return d == Direction::Long ? "long" : "short"; }

std::string_view to_string(CrossDirection d) { return d == CrossDirection::FromAbove ? "from_above" : "from_below"; }

CrossDirection cross_direction_from_string(std::string_view name) {
    if (name == "from_above") return CrossDirection::FromAbove;
    if (name == "from_below") return CrossDirection::FromBelow;
    throw ParseError("unknown cross direction '" + std::string(name) + "'");
}

void StrategyParams::validate() const {
    for (const auto& p : indicator) p.validate();
    if (!(buy_threshold < sell_threshold)) throw ValidationError("buy_threshold must be below sell_threshold");
    if (sl_tp_lookback < 1) throw ValidationError("sl_tp_lookback must be >= 1");
    if (!(sl_tp_multiplier > 0)) throw ValidationError("sl_tp_multiplier must be > 0");
    if (min_entry_gap < Seconds{0}) throw ValidationError("min_entry_gap must be >= 0");
}

bool crossing(MaybeValue prev, MaybeValue curr, double threshold) {
    return prev && curr && *prev > threshold && *curr <= threshold;
}

bool crossing(MaybeValue prev, MaybeValue curr, double threshold, CrossDirection dir) {
    if (dir == CrossDirection::FromAbove) return crossing(prev, curr, threshold);
    return prev && curr && *prev < threshold && *curr >= threshold;
}

std::optional<Direction> entry_direction(const EntryState& state, const StrategyParams& params,
                                         std::size_t open_count, std::optional<Timestamp> last_entry,
                                         Timestamp now) {
    bool go_long = true, go_short = true;
    for (const auto& tf : state) {
        go_long = go_long && crossing(tf.prev, tf.curr, params.buy_threshold);
        go_short = go_short && crossing(tf.prev, tf.curr, params.sell_threshold, params.short_cross);
    }
    if (go_long == go_short) return std::nullopt;
    if (open_count >= params.max_open_positions) return std::nullopt;
    if (last_entry && now - *last_entry < params.min_entry_gap) return std::nullopt;
    return go_long ? Direction::Long : Direction::Short;
}

double sl_tp_distance(std::span<const Candle> recent, std::size_t lookback, double multiplier,
                      const InstrumentSpec& spec) {
    if (lookback < 1) throw ValidationError("sl_tp_distance: N must be >= 1");
    if (recent.size() < lookback)
        throw ValidationError("sl_tp_distance: need " + std::to_string(lookback) + " candles, have " +
                              std::to_string(recent.size()));
    std::vector<double> heights;
    heights.reserve(lookback);
    for (const auto& c : recent.last(lookback)) heights.push_back((c.high - c.low) / spec.point);
    std::sort(heights.begin(), heights.end());
    const std::size_t mid = heights.size() / 2;
    const double median = heights.size() % 2 ? heights[mid] : 0.5 * (heights[mid - 1] + heights[mid]);
    return std::max(1.0, std::round(median * multiplier));
}

std::optional<Signal> evaluate_entry(const EntryState& state, const StrategyParams& params, std::size_t open_count,
                                     std::optional<Timestamp> last_entry, Timestamp now,
                                     std::span<const Candle> recent, const InstrumentSpec& spec) {
    auto dir = entry_direction(state, params, open_count, last_entry, now);
    if (!dir || recent.size() < params.sl_tp_lookback) return std::nullopt;
    Signal s;
    s.time = now;
    s.direction = *dir;
    s.sl_distance_points = sl_tp_distance(recent, params.sl_tp_lookback, params.sl_tp_multiplier, spec);
    s.tp_distance_points = s.sl_distance_points;
    s.buy_threshold = params.buy_threshold;
    s.sell_threshold = params.sell_threshold;
    for (std::size_t k = 0; k < state.size(); ++k) s.snapshot[k] = state[k].curr;
    return s;
}

std::string to_json_line(const Signal& s) {
    nlohmann::ordered_json j;
    j["time"] = format_timestamp(s.time);
    j["direction"] = to_string(s.direction);
    j["buy_threshold"] = s.buy_threshold;
    j["sell_threshold"] = s.sell_threshold;
    auto& snap = j["vgrsi"];
    snap = nlohmann::ordered_json::object();
    for (auto tf : kAllTimeframes) {
        const auto& v = s.snapshot[index_of(tf)];
        snap[std::string(to_string(tf))] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    }
    j["sl_points"] = s.sl_distance_points;
    j["tp_points"] = s.tp_distance_points;
    return j.dump();
}

}  // namespace vgrsi
