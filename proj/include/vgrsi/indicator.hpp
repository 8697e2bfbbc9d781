#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vgrsi/marketdata.hpp"

namespace vgrsi {

/// How the amplitude ratio r_S and frequency ratio r_N are combined.
enum class Aggregation {
    A0,  // mean: (r_S + r_N) / 2, trend persistence
    A1,  // quotient: r_S / r_N, impulse without follow-through
};

std::string_view to_string(Aggregation a);
Aggregation aggregation_from_string(std::string_view name);

struct VgrsiParams {
    std::size_t window_size = 20;        // instants aggregated, also the per-instant visibility cap
    std::size_t window_visibility = 40;  // backward lookback for visibility candidates
    Aggregation variant = Aggregation::A0;

    void validate() const;
    bool operator==(const VgrsiParams&) const = default;
};

/// A value that is either a number or undefined (degenerate ratios, warm-up).
using MaybeValue = std::optional<double>;

struct VgrsiComponents {
    double s_plus = 0;
    double s_minus = 0;
    long n_plus = 0;
    long n_minus = 0;
    MaybeValue r_s;
    MaybeValue r_n;
    MaybeValue r_a;    // may hold +inf
    MaybeValue value;  // in [0, 100] when defined
};

/// Up/down totals contributed by the visible set of a single instant j.
struct Contribution {
    double s_plus = 0;
    double s_minus = 0;
    long n_plus = 0;
    long n_minus = 0;
};

/// Δp_i = p_i - p_{i-1} for i >= 1.
std::vector<double> increments(std::span<const double> prices);

/// num/den with the limit conventions: x/0 = +inf for x > 0, 0/0 undefined.
MaybeValue strength_ratio(double num, double den);
MaybeValue aggregate(MaybeValue r_s, MaybeValue r_n, Aggregation variant);
/// 100 - 100 / (1 + r); +inf maps to 100.
double normalize(double r_a);

/// Fills ratios and value from the four sums.
void finalize(VgrsiComponents& c, Aggregation variant);

/// Contribution of instant j: visible indices i >= 1 (capped at W_S, nearest
/// first) add Δp_i to S+ or -Δp_i to S-; zero increments are skipped.
Contribution contribution_at(std::span<const double> prices, std::size_t j, const VgrsiParams& params);

/// Per-instant contributions for every j of the series (index 0 is empty).
std::vector<Contribution> contributions(std::span<const double> prices, const VgrsiParams& params);

/// Full breakdown of VGRSI(t). Requires t >= W_S.
VgrsiComponents components_at(std::span<const double> prices, std::size_t t, const VgrsiParams& params);
inline VgrsiComponents components_at(const PriceSeries& s, std::size_t t, const VgrsiParams& params) {
    return components_at(std::span<const double>(s.prices), t, params);
}

struct IndicatorPoint {
    std::size_t index = 0;
    MaybeValue value;
};

/// One point per t in [W_S, N]. Bit-identical to components_at(t).value.
std::vector<IndicatorPoint> rolling(std::span<const double> prices, const VgrsiParams& params);
inline std::vector<IndicatorPoint> rolling(const PriceSeries& s, const VgrsiParams& params) {
    return rolling(std::span<const double>(s.prices), params);
}

/// Rolling values aligned to the series (undefined during warm-up), built from
/// precomputed contributions so that A0 and A1 can share the visibility work.
std::vector<MaybeValue> rolling_values(std::span<const Contribution> contribs, const VgrsiParams& params);
std::vector<MaybeValue> rolling_values(std::span<const double> prices, const VgrsiParams& params);

}  // namespace vgrsi
