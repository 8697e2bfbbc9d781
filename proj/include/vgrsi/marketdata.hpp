#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vgrsi {

using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

enum class Timeframe { M1, M5, M30 };

inline constexpr Timeframe kAllTimeframes[] = {Timeframe::M1, Timeframe::M5, Timeframe::M30};

constexpr Seconds duration_of(Timeframe tf) {
    switch (tf) {
        case Timeframe::M1: return Seconds{60};
        case Timeframe::M5: return Seconds{300};
        case Timeframe::M30: return Seconds{1800};
    }
    return Seconds{0};
}

constexpr std::size_t index_of(Timeframe tf) { return static_cast<std::size_t>(tf); }

std::string_view to_string(Timeframe tf);
Timeframe timeframe_from_string(std::string_view name);

/// Which side of the quote the indicator reads.
enum class PriceSource { Mid, Bid, Ask };

std::string_view to_string(PriceSource src);
PriceSource price_source_from_string(std::string_view name);

struct InstrumentSpec {
    std::string symbol = "EURUSD";
    double point = 0.00001;            // price units per point
    double contract_size = 100000.0;   // units per lot
    std::string quote_currency = "USD";
    double commission_per_lot = 0.0;   // account currency, per lot, per side
    int default_spread_points = 0;

    void validate() const;

    /// Half the constant spread, in price units.
    double half_spread() const { return 0.5 * default_spread_points * point; }
    double bid(double mid) const { return mid - half_spread(); }
    double ask(double mid) const { return mid + half_spread(); }
};

/// Reads an instrument definition from a key/value file (INI or TOML style,
/// keys named after the InstrumentSpec fields, optionally under [instrument]).
InstrumentSpec load_instrument_spec(const std::filesystem::path& path);

struct Candle {
    Timestamp open_time{};
    Timeframe timeframe = Timeframe::M1;
    double open = 0, high = 0, low = 0, close = 0;
    double volume = 0;

    Timestamp close_time() const { return open_time + duration_of(timeframe); }
    /// Throws ValidationError when OHLC ordering or positivity is broken.
    void validate() const;

    bool operator==(const Candle&) const = default;
};

struct PriceSeries {
    Timeframe timeframe = Timeframe::M1;
    std::vector<double> prices;
    std::vector<Timestamp> timestamps;

    std::size_t size() const { return prices.size(); }
    bool empty() const { return prices.empty(); }
    double operator[](std::size_t i) const { return prices[i]; }

    void validate() const;
};

/// ISO-8601 UTC: "2024-01-31T00:00:00Z" (a space separator and a missing Z
/// are accepted on input).
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

Timestamp floor_day(Timestamp ts);

/// CSV schema: timestamp,open,high,low,close,volume
std::vector<Candle> read_csv(std::istream& in, const InstrumentSpec& spec, Timeframe timeframe);
std::vector<Candle> load_csv(const std::filesystem::path& path, const InstrumentSpec& spec,
                             Timeframe timeframe);

/// Shortest round-trip formatting, so reading back yields identical doubles.
void write_csv(std::ostream& out, std::span<const Candle> candles);
void write_csv(const std::filesystem::path& path, std::span<const Candle> candles);

/// Aggregates M1 bars into midnight-anchored M5/M30 bars. Interior windows with
/// missing minutes are still emitted; the trailing window only when it is full
/// or when emit_partial is set.
std::vector<Candle> resample(std::span<const Candle> candles, Timeframe target,
                             bool emit_partial = false);

PriceSeries close_series(std::span<const Candle> candles);
PriceSeries close_series(std::span<const Candle> candles, PriceSource source,
                         const InstrumentSpec& spec);

/// Distinct UTC calendar dates carrying at least one bar.
std::size_t trading_days(std::span<const Candle> candles);

}  // namespace vgrsi
