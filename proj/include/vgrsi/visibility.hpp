#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "vgrsi/marketdata.hpp"

namespace vgrsi {

/// Indices visible backward from j, nearest first.
struct VisibleSet {
    std::size_t j = 0;
    std::vector<std::size_t> visible;
    bool capped = false;  // collection stopped at the cap with candidates left unscanned

    bool operator==(const VisibleSet&) const = default;
};

inline constexpr std::size_t kNoCap = std::numeric_limits<std::size_t>::max();

/// Direct check of the visibility inequality for every intermediate point.
/// O(W_V^2) per j; kept as the reference the fast path is tested against.
VisibleSet visible_oracle(std::span<const double> prices, std::size_t j, std::size_t window_visibility);

/// Slope scan from j-1 backward: i is visible iff its slope to j is strictly
/// below every slope seen closer to j. Stops after `cap` visible indices.
VisibleSet visible_fast(std::span<const double> prices, std::size_t j, std::size_t window_visibility,
                        std::size_t cap = kNoCap);

inline VisibleSet visible_oracle(const PriceSeries& s, std::size_t j, std::size_t wv) {
    return visible_oracle(std::span<const double>(s.prices), j, wv);
}
inline VisibleSet visible_fast(const PriceSeries& s, std::size_t j, std::size_t wv, std::size_t cap = kNoCap) {
    return visible_fast(std::span<const double>(s.prices), j, wv, cap);
}

/// Allocation-free form of visible_fast. Calls fn(i) for each visible index in
/// nearest-first order; returns true when the cap cut the scan short.
template <typename Fn>
bool for_each_visible(std::span<const double> prices, std::size_t j, std::size_t window_visibility,
                      std::size_t cap, Fn&& fn) {
    if (j == 0 || window_visibility == 0 || cap == 0) return false;
    const std::size_t lo = j > window_visibility ? j - window_visibility : 0;
    const double pj = prices[j];
    double min_slope = std::numeric_limits<double>::infinity();
    std::size_t found = 0;
    for (std::size_t i = j; i-- > lo;) {
        const double slope = (prices[i] - pj) / (static_cast<double>(i) - static_cast<double>(j));
        if (slope < min_slope) {
            min_slope = slope;
            fn(i);
            if (++found == cap) return i > lo;
        }
    }
    return false;
}

}  // namespace vgrsi
