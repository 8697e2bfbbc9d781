#include "vgrsi/marketdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "vgrsi/config.hpp"
#include "vgrsi/error.hpp"

namespace vgrsi {

using namespace std::chrono;

std::string_view to_string(Timeframe tf) {
    switch (tf) {
        case Timeframe::M1: return "M1";
        case Timeframe::M5: return "M5";
        case Timeframe::M30: return "M30";
    }
    return "?";
}

Timeframe timeframe_from_string(std::string_view name) {
    if (name == "M1") return Timeframe::M1;
    if (name == "M5") return Timeframe::M5;
    if (name == "M30") return Timeframe::M30;
    throw ParseError("unknown timeframe '" + std::string(name) + "'");
}

std::string_view to_string(PriceSource src) {
    switch (src) {
        case PriceSource::Mid: return "mid";
        case PriceSource::Bid: return "bid";
        case PriceSource::Ask: return "ask";
    }
    return "?";
}

PriceSource price_source_from_string(std::string_view name) {
    if (name == "mid") return PriceSource::Mid;
    if (name == "bid") return PriceSource::Bid;
    if (name == "ask") return PriceSource::Ask;
    throw ParseError("unknown price source '" + std::string(name) + "'");
}

void InstrumentSpec::validate() const {
    if (!(point > 0) || !std::isfinite(point)) throw ValidationError(symbol + ": point must be > 0");
    if (!(contract_size > 0) || !std::isfinite(contract_size))
        throw ValidationError(symbol + ": contract_size must be > 0");
    if (default_spread_points < 0) throw ValidationError(symbol + ": default_spread_points must be >= 0");
    if (commission_per_lot < 0) throw ValidationError(symbol + ": commission_per_lot must be >= 0");
}

InstrumentSpec load_instrument_spec(const std::filesystem::path& path) {
    auto doc = KeyValueDocument::from_file(path);
    InstrumentSpec spec;
    auto pick = [&](std::string_view key) { return doc.lookup("instrument", key); };
    if (auto v = pick("symbol")) spec.symbol = *v;
    if (auto v = pick("point")) spec.point = parse_double(*v, "point");
    if (auto v = pick("contract_size")) spec.contract_size = parse_double(*v, "contract_size");
    if (auto v = pick("quote_currency")) spec.quote_currency = *v;
    if (auto v = pick("commission_per_lot")) spec.commission_per_lot = parse_double(*v, "commission_per_lot");
    if (auto v = pick("default_spread_points"))
        spec.default_spread_points = static_cast<int>(parse_int(*v, "default_spread_points"));
    spec.validate();
    return spec;
}

void Candle::validate() const {
    for (double v : {open, high, low, close, volume})
        if (!std::isfinite(v)) throw ValidationError("non-finite value in candle at " + format_timestamp(open_time));
    if (!(low > 0)) throw ValidationError("non-positive price in candle at " + format_timestamp(open_time));
    if (low > high) throw ValidationError("low > high in candle at " + format_timestamp(open_time));
    if (low > std::min(open, close) || high < std::max(open, close))
        throw ValidationError("open/close outside [low, high] in candle at " + format_timestamp(open_time));
    if (volume < 0) throw ValidationError("negative volume in candle at " + format_timestamp(open_time));
}

void PriceSeries::validate() const {
    if (timestamps.size() != prices.size()) throw ValidationError("price/timestamp length mismatch");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!std::isfinite(prices[i]) || !(prices[i] > 0))
            throw ValidationError("price " + std::to_string(i) + " is not finite and positive");
        if (i > 0 && !(timestamps[i - 1] < timestamps[i]))
            throw ValidationError("timestamps not strictly increasing at " + std::to_string(i));
    }
}

namespace {

int digits(std::string_view s, std::size_t pos, std::size_t n) {
    int v = 0;
    if (pos + n > s.size()) throw ParseError("truncated timestamp '" + std::string(s) + "'");
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') throw ParseError("bad timestamp '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

void expect_char(std::string_view s, std::size_t pos, std::string_view allowed) {
    if (pos >= s.size() || allowed.find(s[pos]) == std::string_view::npos)
        throw ParseError("bad timestamp '" + std::string(s) + "'");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    auto s = trim(text);
    // YYYY-MM-DD[T ]HH:MM[:SS][Z]
    int y = digits(s, 0, 4);
    expect_char(s, 4, "-");
    int mo = digits(s, 5, 2);
    expect_char(s, 7, "-");
    int d = digits(s, 8, 2);
    int hh = 0, mm = 0, ss = 0;
    std::size_t pos = 10;
    if (pos < s.size() && s[pos] != 'Z') {
        expect_char(s, pos, "T ");
        hh = digits(s, pos + 1, 2);
        expect_char(s, pos + 3, ":");
        mm = digits(s, pos + 4, 2);
        pos += 6;
        if (pos < s.size() && s[pos] == ':') {
            ss = digits(s, pos + 1, 2);
            pos += 3;
        }
    }
    if (pos < s.size() && s[pos] == 'Z') ++pos;
    if (pos != s.size()) throw ParseError("trailing characters in timestamp '" + std::string(s) + "'");
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) throw ParseError("invalid date/time '" + std::string(s) + "'");
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
    auto dp = floor<days>(ts);
    year_month_day ymd{dp};
    hh_mm_ss hms{ts - dp};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Timestamp floor_day(Timestamp ts) { return Timestamp{floor<days>(ts)}; }

std::vector<Candle> read_csv(std::istream& in, const InstrumentSpec& spec, Timeframe timeframe) {
    spec.validate();
    std::vector<Candle> out;
    std::vector<std::size_t> line_of;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (view.rfind("timestamp", 0) == 0) continue;
        }
        std::string_view fields[6];
        std::size_t n = 0;
        std::size_t start = 0;
        while (true) {
            auto comma = view.find(',', start);
            if (n == 6) throw ParseError("expected 6 fields", lineno);
            fields[n++] = trim(view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (n != 6) throw ParseError("expected 6 fields, got " + std::to_string(n), lineno);
        Candle c;
        c.timeframe = timeframe;
        try {
            c.open_time = parse_timestamp(fields[0]);
            c.open = parse_double(fields[1], "open");
            c.high = parse_double(fields[2], "high");
            c.low = parse_double(fields[3], "low");
            c.close = parse_double(fields[4], "close");
            c.volume = parse_double(fields[5], "volume");
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
        try {
            c.validate();
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back(c);
        line_of.push_back(lineno);
    }

    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out[a].open_time < out[b].open_time; });
    std::vector<Candle> sorted;
    sorted.reserve(out.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && out[order[k]].open_time == out[order[k - 1]].open_time)
            throw ValidationError("line " + std::to_string(line_of[order[k]]) + ": duplicate timestamp " +
                                  format_timestamp(out[order[k]].open_time));
        sorted.push_back(out[order[k]]);
    }
    return sorted;
}

std::vector<Candle> load_csv(const std::filesystem::path& path, const InstrumentSpec& spec, Timeframe timeframe) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_csv(in, spec, timeframe);
}

void write_csv(std::ostream& out, std::span<const Candle> candles) {
    out << "timestamp,open,high,low,close,volume\n";
    for (const auto& c : candles) {
        out << format_timestamp(c.open_time) << ',' << format_double(c.open) << ',' << format_double(c.high) << ','
            << format_double(c.low) << ',' << format_double(c.close) << ',' << format_double(c.volume) << '\n';
    }
}

void write_csv(const std::filesystem::path& path, std::span<const Candle> candles) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_csv(out, candles);
}

std::vector<Candle> resample(std::span<const Candle> candles, Timeframe target, bool emit_partial) {
    if (target == Timeframe::M1) throw ValidationError("resample target must be coarser than M1");
    const auto width = duration_of(target);
    const auto per_window = width / duration_of(Timeframe::M1);

    std::vector<Candle> out;
    std::size_t count = 0;
    for (std::size_t i = 0; i < candles.size(); ++i) {
        const auto& c = candles[i];
        if (c.timeframe != Timeframe::M1) throw ValidationError("resample input must be M1");
        if (i > 0 && !(candles[i - 1].open_time < c.open_time))
            throw ValidationError("resample input not sorted at " + format_timestamp(c.open_time));
        const auto day_start = floor_day(c.open_time);
        const auto window = day_start + ((c.open_time - day_start) / width) * width;
        if (out.empty() || out.back().open_time != window) {
            out.push_back(Candle{window, target, c.open, c.high, c.low, c.close, c.volume});
            count = 1;
        } else {
            auto& bar = out.back();
            bar.high = std::max(bar.high, c.high);
            bar.low = std::min(bar.low, c.low);
            bar.close = c.close;
            bar.volume += c.volume;
            ++count;
        }
    }
    if (!out.empty() && !emit_partial && count < static_cast<std::size_t>(per_window)) out.pop_back();
    return out;
}

PriceSeries close_series(std::span<const Candle> candles) {
    if (candles.empty()) throw ValidationError("close_series: no candles");
    PriceSeries s;
    s.timeframe = candles.front().timeframe;
    s.prices.reserve(candles.size());
    s.timestamps.reserve(candles.size());
    for (const auto& c : candles) {
        if (!s.timestamps.empty() && !(s.timestamps.back() < c.open_time))
            throw ValidationError("close_series: candles not sorted at " + format_timestamp(c.open_time));
        s.prices.push_back(c.close);
        s.timestamps.push_back(c.open_time);
    }
    return s;
}

PriceSeries close_series(std::span<const Candle> candles, PriceSource source, const InstrumentSpec& spec) {
    auto s = close_series(candles);
    if (source == PriceSource::Mid) return s;
    for (auto& p : s.prices) p = source == PriceSource::Bid ? spec.bid(p) : spec.ask(p);
    return s;
}

std::size_t trading_days(std::span<const Candle> candles) {
    std::set<Timestamp> dates;
    for (const auto& c : candles) dates.insert(floor_day(c.open_time));
    return dates.size();
}

}  // namespace vgrsi
