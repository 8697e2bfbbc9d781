#pragma once

// Literal transcriptions of the indicator definition, written without any
// library code so they can serve as independent references.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace vgrsi::oracle {

struct Sums {
    double s_plus = 0, s_minus = 0;
    long n_plus = 0, n_minus = 0;
};

/// Nearest-first visible indices from j, capped at `cap`, by checking the
/// strict inequality for every intermediate k.
inline std::vector<std::size_t> visible(const std::vector<double>& p, std::size_t j, std::size_t wv, std::size_t cap) {
    std::vector<std::size_t> out;
    const long lo = std::max(0L, static_cast<long>(j) - static_cast<long>(wv));
    for (long i = static_cast<long>(j) - 1; i >= lo && out.size() < cap; --i) {
        bool ok = true;
        for (long k = i + 1; k < static_cast<long>(j); ++k) {
            const double segment = p[j] + (p[i] - p[j]) / static_cast<double>(i - static_cast<long>(j)) *
                                              static_cast<double>(k - static_cast<long>(j));
            if (!(p[k] < segment)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(static_cast<std::size_t>(i));
    }
    return out;
}

inline Sums sums(const std::vector<double>& p, std::size_t t, std::size_t ws, std::size_t wv) {
    Sums s;
    for (std::size_t j = t - ws + 1; j <= t; ++j) {
        for (std::size_t i : visible(p, j, wv, ws)) {
            if (i < 1) continue;
            const double d = p[i] - p[i - 1];
            if (d > 0) {
                s.s_plus += d;
                s.n_plus += 1;
            } else if (d < 0) {
                s.s_minus -= d;
                s.n_minus += 1;
            }
        }
    }
    return s;
}

/// Ratio with x/0 = inf for x > 0 and 0/0 undefined.
inline std::optional<double> ratio(double a, double b) {
    if (b == 0) return a > 0 ? std::optional<double>(std::numeric_limits<double>::infinity()) : std::nullopt;
    return a / b;
}

/// VGRSI value from the sums; variant 0 = mean, 1 = quotient.
inline std::optional<double> value(const Sums& s, int variant) {
    auto rs = ratio(s.s_plus, s.s_minus);
    auto rn = ratio(static_cast<double>(s.n_plus), static_cast<double>(s.n_minus));
    if (!rs || !rn) return std::nullopt;
    double ra;
    if (variant == 0) {
        ra = (std::isinf(*rs) || std::isinf(*rn)) ? std::numeric_limits<double>::infinity() : (*rs + *rn) / 2;
    } else {
        if (std::isinf(*rs) && std::isinf(*rn)) return std::nullopt;
        if (*rs == 0 && *rn == 0) return std::nullopt;
        if (std::isinf(*rs) || *rn == 0) return 100.0;
        if (std::isinf(*rn)) return 0.0;
        ra = *rs / *rn;
    }
    if (std::isinf(ra)) return 100.0;
    return 100.0 - 100.0 / (1.0 + ra);
}

}  // namespace vgrsi::oracle
