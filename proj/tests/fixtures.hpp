#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vgrsi/marketdata.hpp"

namespace vgrsi::testing {

inline std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n, double start = 100.0, double step = 1.0) {
    std::normal_distribution<double> noise(0.0, step);
    std::vector<double> p(n);
    double x = start;
    for (auto& v : p) {
        v = x;
        x += noise(rng);
    }
    return p;
}

/// Integer-valued walk: exercises exact collinearity and zero increments.
inline std::vector<double> integer_walk(std::mt19937_64& rng, std::size_t n, long start = 1000) {
    std::uniform_int_distribution<int> step(-3, 3);
    std::vector<double> p(n);
    long x = start;
    for (auto& v : p) {
        v = static_cast<double>(x);
        x += step(rng);
    }
    return p;
}

inline Timestamp at(int year, unsigned month, unsigned day, int hour = 0, int minute = 0) {
    using namespace std::chrono;
    return sys_days{std::chrono::year{year} / month / day} + hours{hour} + minutes{minute};
}

/// M1 candles whose closes follow `closes`; open is the previous close and
/// the wick adds `wick` on both sides.
inline std::vector<Candle> candles_from_closes(const std::vector<double>& closes, Timestamp start, double wick = 0.0,
                                               Seconds spacing = Seconds{60}) {
    std::vector<Candle> out;
    out.reserve(closes.size());
    double prev = closes.empty() ? 0.0 : closes.front();
    for (std::size_t i = 0; i < closes.size(); ++i) {
        Candle c;
        c.open_time = start + static_cast<long>(i) * spacing;
        c.timeframe = Timeframe::M1;
        c.open = prev;
        c.close = closes[i];
        c.high = std::max(c.open, c.close) + wick;
        c.low = std::min(c.open, c.close) - wick;
        c.volume = 1;
        out.push_back(c);
        prev = closes[i];
    }
    return out;
}

/// Geometric random-walk M1 history, 24/7, with intrabar wicks.
inline std::vector<Candle> random_m1_history(std::uint64_t seed, Timestamp start, std::size_t minutes,
                                             double price = 1.1, double vol = 0.0002) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, vol);
    std::uniform_real_distribution<double> wick(0.0, vol);
    std::vector<Candle> out;
    out.reserve(minutes);
    double p = price;
    for (std::size_t i = 0; i < minutes; ++i) {
        Candle c;
        c.open_time = start + static_cast<long>(i) * Seconds{60};
        c.open = p;
        p *= std::exp(noise(rng));
        c.close = p;
        c.high = std::max(c.open, c.close) * (1 + wick(rng));
        c.low = std::min(c.open, c.close) * (1 - wick(rng));
        c.volume = 1 + static_cast<double>(i % 7);
        out.push_back(c);
    }
    return out;
}

/// Per-minute moves in points: a ninety-minute slide that ends in a two-minute
/// plunge on an M30 boundary. With W_S near 10, W_V between 10 and 30 and the
/// A1 variant, all three timeframes cross the buy threshold on its last bar.
inline const std::vector<int> kPlunge{
    0,   -3,  19,  1,   1,   -36, -27, -27, -20,  -20,  0,   -4,  11,  36,  36,  37,  43,  -16, -1,  2,  30,  18,  32,
    3,   -24, -20, -2,  -1,  4,   -30, -29, -40,  -35,  -16, -19, -39, -7,  -21, -22, -22, -23, -22, -24, -27, -32, -36,
    -32, -29, -18, -10, -2,  -24, -21, -43, -22,  -52,  -59, -81, -111, -105, -43, -38, -3, 46,  20,  36,  59,  9,   7,
    2,   2,   6,   45,  32,  11,  7,   3,   3,    3,    12,  10,  10,  2,   -6,  -8,  -4,  7,   -14, -134, -146};

/// Random-walk M1 history (5 point noise) with plunges planted every two to
/// six hours, each followed by an hour-long recovery of the whole slide.
inline std::vector<Candle> planted_plunge_history(std::uint64_t seed, Timestamp start, int days, double point = 0.00001) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 5.0);
    std::uniform_real_distribution<double> wick(0.0, 2.0);
    std::uniform_int_distribution<int> gap_bars(2, 6);
    double slide = 0;
    for (int v : kPlunge) slide -= v;

    const std::size_t total = static_cast<std::size_t>(days) * 1440;
    std::vector<double> steps;
    steps.reserve(total + 400);
    while (steps.size() < total) {
        for (int i = gap_bars(rng) * 30; i > 0; --i) steps.push_back(noise(rng));
        for (int v : kPlunge) steps.push_back(v + 0.3 * noise(rng));
        for (int i = 0; i < 60; ++i) steps.push_back(slide / 60 + noise(rng));
    }
    steps.resize(total);

    std::vector<Candle> out;
    out.reserve(total);
    double p = 1.1;
    for (std::size_t i = 0; i < total; ++i) {
        Candle c;
        c.open_time = start + static_cast<long>(i) * Seconds{60};
        c.open = p;
        p += steps[i] * point;
        c.close = p;
        c.high = std::max(c.open, c.close) + wick(rng) * point;
        c.low = std::min(c.open, c.close) - wick(rng) * point;
        c.volume = 1;
        out.push_back(c);
    }
    return out;
}

}  // namespace vgrsi::testing
