#include "vgrsi/visibility.hpp"

#include <string>

#include "vgrsi/error.hpp"

namespace vgrsi {
namespace {

void check_args(std::span<const double> prices, std::size_t j, std::size_t wv) {
    if (j >= prices.size())
        throw ValidationError("visibility: index " + std::to_string(j) + " out of range for series of length " +
                              std::to_string(prices.size()));
    if (wv == 0) throw ValidationError("visibility: window_visibility must be >= 1");
}

}  // namespace

VisibleSet visible_oracle(std::span<const double> prices, std::size_t j, std::size_t window_visibility) {
    check_args(prices, j, window_visibility);
    VisibleSet out{j, {}, false};
    const std::size_t lo = j > window_visibility ? j - window_visibility : 0;
    const double pj = prices[j];
    for (std::size_t i = j; i-- > lo;) {
        const double pi = prices[i];
        const double di = static_cast<double>(i);
        const double dj = static_cast<double>(j);
        bool visible = true;
        for (std::size_t k = i + 1; k < j && visible; ++k) {
            const double line = pj + (pi - pj) / (di - dj) * (static_cast<double>(k) - dj);
            visible = prices[k] < line;
        }
        if (visible) out.visible.push_back(i);
    }
    return out;
}

VisibleSet visible_fast(std::span<const double> prices, std::size_t j, std::size_t window_visibility,
                        std::size_t cap) {
    check_args(prices, j, window_visibility);
    if (cap == 0) throw ValidationError("visibility: cap must be >= 1");
    VisibleSet out{j, {}, false};
    out.capped = for_each_visible(prices, j, window_visibility, cap, [&](std::size_t i) { out.visible.push_back(i); });
    return out;
}

}  // namespace vgrsi
