#include "vgrsi/indicator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vgrsi/error.hpp"
#include "vgrsi/visibility.hpp"

namespace vgrsi {

std::string_view to_string(Aggregation a) { return a == Aggregation::A0 ? "A0" : "A1"; }

Aggregation aggregation_from_string(std::string_view name) {
    if (name == "A0" || name == "a0") return Aggregation::A0;
    if (name == "A1" || name == "a1") return Aggregation::A1;
    throw ParseError("unknown aggregation variant '" + std::string(name) + "'");
}

void VgrsiParams::validate() const {
    if (window_size < 1) throw ValidationError("window_size must be >= 1");
    if (window_visibility < 1) throw ValidationError("window_visibility must be >= 1");
}

std::vector<double> increments(std::span<const double> prices) {
    std::vector<double> d;
    if (prices.size() < 2) return d;
    d.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) d.push_back(prices[i] - prices[i - 1]);
    return d;
}

MaybeValue strength_ratio(double num, double den) {
    if (den == 0) {
        if (num > 0) return std::numeric_limits<double>::infinity();
        return std::nullopt;
    }
    return num / den;
}

MaybeValue aggregate(MaybeValue r_s, MaybeValue r_n, Aggregation variant) {
    if (!r_s || !r_n) return std::nullopt;
    const double s = *r_s, n = *r_n;
    if (variant == Aggregation::A0) {
        if (std::isinf(s) || std::isinf(n)) return std::numeric_limits<double>::infinity();
        return 0.5 * (s + n);
    }
    const bool s_inf = std::isinf(s), n_inf = std::isinf(n);
    if (s_inf && n_inf) return std::nullopt;
    if (s_inf) return std::numeric_limits<double>::infinity();
    if (n_inf) return 0.0;
    if (n == 0) {
        if (s == 0) return std::nullopt;
        return std::numeric_limits<double>::infinity();
    }
    return s / n;
}

double normalize(double r_a) {
    if (std::isinf(r_a)) return 100.0;
    return 100.0 - 100.0 / (1.0 + r_a);
}

void finalize(VgrsiComponents& c, Aggregation variant) {
    c.r_s = strength_ratio(c.s_plus, c.s_minus);
    c.r_n = strength_ratio(static_cast<double>(c.n_plus), static_cast<double>(c.n_minus));
    c.r_a = aggregate(c.r_s, c.r_n, variant);
    c.value = c.r_a ? MaybeValue{normalize(*c.r_a)} : std::nullopt;
}

Contribution contribution_at(std::span<const double> prices, std::size_t j, const VgrsiParams& params) {
    Contribution c;
    for_each_visible(prices, j, params.window_visibility, params.window_size, [&](std::size_t i) {
        if (i == 0) return;
        const double d = prices[i] - prices[i - 1];
        if (d > 0) {
            c.s_plus += d;
            ++c.n_plus;
        } else if (d < 0) {
            c.s_minus += -d;
            ++c.n_minus;
        }
    });
    return c;
}

std::vector<Contribution> contributions(std::span<const double> prices, const VgrsiParams& params) {
    params.validate();
    std::vector<Contribution> out(prices.size());
    for (std::size_t j = 1; j < prices.size(); ++j) out[j] = contribution_at(prices, j, params);
    return out;
}

namespace {

VgrsiComponents sum_window(std::span<const Contribution> contribs, std::size_t t, const VgrsiParams& params) {
    VgrsiComponents c;
    for (std::size_t j = t + 1 - params.window_size; j <= t; ++j) {
        const auto& x = contribs[j];
        c.s_plus += x.s_plus;
        c.s_minus += x.s_minus;
        c.n_plus += x.n_plus;
        c.n_minus += x.n_minus;
    }
    finalize(c, params.variant);
    return c;
}

}  // namespace

VgrsiComponents components_at(std::span<const double> prices, std::size_t t, const VgrsiParams& params) {
    params.validate();
    if (prices.empty()) throw ValidationError("components_at: empty series");
    if (t >= prices.size())
        throw ValidationError("components_at: t = " + std::to_string(t) + " beyond series of length " +
                              std::to_string(prices.size()));
    if (t < params.window_size)
        throw WarmupError("components_at: t = " + std::to_string(t) + " precedes warm-up (W_S = " +
                          std::to_string(params.window_size) + ")");
    std::vector<Contribution> local(params.window_size);
    const std::size_t first = t + 1 - params.window_size;
    for (std::size_t j = first; j <= t; ++j) local[j - first] = contribution_at(prices, j, params);
    return sum_window(local, params.window_size - 1, params);
}

std::vector<MaybeValue> rolling_values(std::span<const Contribution> contribs, const VgrsiParams& params) {
    params.validate();
    std::vector<MaybeValue> out(contribs.size());
    for (std::size_t t = params.window_size; t < contribs.size(); ++t) out[t] = sum_window(contribs, t, params).value;
    return out;
}

std::vector<MaybeValue> rolling_values(std::span<const double> prices, const VgrsiParams& params) {
    return rolling_values(contributions(prices, params), params);
}

std::vector<IndicatorPoint> rolling(std::span<const double> prices, const VgrsiParams& params) {
    params.validate();
    if (prices.size() < params.window_size + 1)
        throw ValidationError("rolling: series of length " + std::to_string(prices.size()) +
                              " is shorter than W_S + 1 = " + std::to_string(params.window_size + 1));
    auto values = rolling_values(prices, params);
    std::vector<IndicatorPoint> out;
    out.reserve(prices.size() - params.window_size);
    for (std::size_t t = params.window_size; t < prices.size(); ++t) out.push_back({t, values[t]});
    return out;
}

}  // namespace vgrsi
