#include "vgrsi/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "vgrsi/error.hpp"

namespace vgrsi {

double max_drawdown(std::span<const double> equity, double base) {
    if (equity.empty()) throw ValidationError("max_drawdown: empty equity curve");
    if (!(base > 0)) throw ValidationError("max_drawdown: base must be > 0");
    double peak = equity.front();
    double worst = 0;
    for (double e : equity) {
        peak = std::max(peak, e);
        worst = std::max(worst, peak - e);
    }
    return worst / base * 100.0;
}

MaybeValue sharpe(std::span<const double> daily_equity, SharpeConvention conv) {
    if (daily_equity.size() < 2) throw ValidationError("sharpe: need at least two daily samples");
    std::vector<double> r;
    r.reserve(daily_equity.size() - 1);
    for (std::size_t i = 1; i < daily_equity.size(); ++i) r.push_back(daily_equity[i] / daily_equity[i - 1] - 1.0);
    if (r.size() < 2) return std::nullopt;
    double mean = 0;
    for (double x : r) mean += x;
    mean /= static_cast<double>(r.size());
    double ss = 0;
    for (double x : r) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(r.size() - 1));
    // Returns that are equal up to rounding have no meaningful ratio.
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) return std::nullopt;
    double s = mean / sd;
    if (conv.annualize) s *= std::sqrt(conv.periods_per_year);
    return s;
}

std::vector<double> daily_equity(std::span<const EquityPoint> curve, double initial_balance) {
    std::vector<double> out{initial_balance};
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const bool last_of_day = i + 1 == curve.size() || floor_day(curve[i + 1].time) != floor_day(curve[i].time);
        if (last_of_day) out.push_back(curve[i].equity);
    }
    return out;
}

WindowStats window_stats(std::span<const TradeRecord> trades, std::span<const EquityPoint> curve,
                         double initial_balance, SharpeConvention conv) {
    WindowStats s;
    for (const auto& t : trades) {
        ++s.trades_all;
        if (t.position.direction == Direction::Long)
            ++s.trades_long;
        else
            ++s.trades_short;
        s.profit += t.realized_pnl;
    }
    std::vector<double> eq{initial_balance};
    for (const auto& p : curve) eq.push_back(p.equity);
    s.max_drawdown_pct = max_drawdown(eq, initial_balance);
    auto daily = daily_equity(curve, initial_balance);
    s.sharpe = daily.size() >= 2 ? sharpe(daily, conv) : std::nullopt;
    return s;
}

namespace {

template <typename Get>
CountStats count_stats(std::span<const WindowStats> w, Get get) {
    CountStats c;
    if (w.empty()) return c;
    c.min = c.max = get(w.front());
    std::size_t sum = 0;
    for (const auto& x : w) {
        const std::size_t v = get(x);
        c.min = std::min(c.min, v);
        c.max = std::max(c.max, v);
        sum += v;
    }
    c.mean = static_cast<double>(sum) / static_cast<double>(w.size());
    return c;
}

}  // namespace

Summary aggregate(std::span<const WindowStats> windows, std::size_t trading_days) {
    Summary s;
    s.windows = windows.size();
    s.trading_days = trading_days;
    if (windows.empty()) return s;
    s.trades_all = count_stats(windows, [](const WindowStats& w) { return w.trades_all; });
    s.trades_long = count_stats(windows, [](const WindowStats& w) { return w.trades_long; });
    s.trades_short = count_stats(windows, [](const WindowStats& w) { return w.trades_short; });
    double sharpe_sum = 0, dd_sum = 0;
    std::size_t sharpe_n = 0;
    for (const auto& w : windows) {
        if (w.sharpe) {
            sharpe_sum += *w.sharpe;
            ++sharpe_n;
        }
        dd_sum += w.max_drawdown_pct;
        s.total_trades += w.trades_all;
        s.total_profit += w.profit;
    }
    if (sharpe_n) s.mean_sharpe = sharpe_sum / static_cast<double>(sharpe_n);
    s.mean_max_drawdown_pct = dd_sum / static_cast<double>(windows.size());
    if (trading_days) {
        s.trades_per_day = static_cast<double>(s.total_trades) / static_cast<double>(trading_days);
        s.profit_per_day = s.total_profit / static_cast<double>(trading_days);
    }
    return s;
}

}  // namespace vgrsi
