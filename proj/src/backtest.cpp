#include "vgrsi/backtest.hpp"

#include <algorithm>

#include "vgrsi/error.hpp"

namespace vgrsi {

MarketView::MarketView(std::vector<Candle> m1, Timestamp trade_start, Timestamp trade_end,
                       const InstrumentSpec& spec, PriceSource source)
    : spec_(spec), trade_start_(trade_start), trade_end_(trade_end) {
    if (!(trade_start < trade_end)) throw ValidationError("MarketView: empty trade span");
    std::erase_if(m1, [&](const Candle& c) { return c.open_time >= trade_end; });
    auto& base = bars_[index_of(Timeframe::M1)];
    base = std::move(m1);
    for (std::size_t k = 0; k < base.size(); ++k) {
        if (base[k].timeframe != Timeframe::M1) throw ValidationError("MarketView: expected M1 candles");
        if (k > 0 && !(base[k - 1].open_time < base[k].open_time))
            throw ValidationError("MarketView: M1 candles not sorted");
    }
    bars_[index_of(Timeframe::M5)] = resample(base, Timeframe::M5);
    bars_[index_of(Timeframe::M30)] = resample(base, Timeframe::M30);

    for (auto tf : kAllTimeframes) {
        const auto& b = bars_[index_of(tf)];
        if (!b.empty()) series_[index_of(tf)] = close_series(b, source, spec_);
        series_[index_of(tf)].timeframe = tf;

        auto& done = completed_[index_of(tf)];
        done.assign(base.size(), -1);
        std::ptrdiff_t idx = -1;
        for (std::size_t k = 0; k < base.size(); ++k) {
            const auto now = base[k].close_time();
            while (idx + 1 < static_cast<std::ptrdiff_t>(b.size()) && b[idx + 1].close_time() <= now) ++idx;
            done[k] = idx;
        }
    }

    auto first = std::lower_bound(base.begin(), base.end(), trade_start,
                                  [](const Candle& c, Timestamp t) { return c.open_time < t; });
    first_trade_ = static_cast<std::size_t>(first - base.begin());
    end_trade_ = base.size();
}

std::optional<std::size_t> MarketView::completed_index(Timeframe tf, std::size_t k) const {
    const auto idx = completed_[index_of(tf)][k];
    if (idx < 0) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

MarketView::Key MarketView::key_of(Timeframe tf, const VgrsiParams& p) {
    return {index_of(tf), p.window_size, p.window_visibility, static_cast<int>(p.variant)};
}

void MarketView::precompute(Timeframe tf, const VgrsiParams& p) { (void)indicator(tf, p); }

const std::vector<MaybeValue>& MarketView::indicator(Timeframe tf, const VgrsiParams& p) const {
    const auto key = key_of(tf, p);
    if (auto it = value_cache_.find(key); it != value_cache_.end()) return it->second;
    const auto ckey = std::make_tuple(index_of(tf), p.window_size, p.window_visibility);
    auto cit = contrib_cache_.find(ckey);
    if (cit == contrib_cache_.end())
        cit = contrib_cache_.emplace(ckey, contributions(series(tf).prices, p)).first;
    return value_cache_.emplace(key, rolling_values(cit->second, p)).first->second;
}

bool has_defined_values(const MarketView& market, const StrategyParams& params) {
    for (auto tf : kAllTimeframes) {
        const auto& values = market.indicator(tf, params.on(tf));
        const auto& bars = market.bars(tf);
        bool any = false;
        for (std::size_t i = 0; i < values.size() && !any; ++i)
            any = values[i].has_value() && bars[i].close_time() > market.trade_start();
        if (!any) return false;
    }
    return true;
}

BacktestResult run_backtest(const MarketView& market, const StrategyParams& params, const BrokerConfig& broker) {
    IndicatorPaths values;
    for (auto tf : kAllTimeframes) values[index_of(tf)] = market.indicator(tf, params.on(tf));
    return run_backtest(market, params, broker, values);
}

BacktestResult run_backtest(const MarketView& market, const StrategyParams& params, const BrokerConfig& broker,
                            const IndicatorPaths& values) {
    params.validate();
    for (auto tf : kAllTimeframes)
        if (values[index_of(tf)].size() != market.bars(tf).size())
            throw ValidationError("run_backtest: indicator path length mismatch on " + std::string(to_string(tf)));
    broker.validate();
    BrokerConfig cfg = broker;
    cfg.max_open_positions = params.max_open_positions;

    const auto& spec = market.spec();
    const auto& m1 = market.bars(Timeframe::M1);

    BacktestResult res;
    AccountState account(cfg);
    res.initial_balance = account.balance;
    res.equity.push_back({market.trade_start(), account.balance, account.equity});

    std::optional<Timestamp> last_entry;
    for (std::size_t k = market.first_trade_bar(); k < market.end_trade_bar(); ++k) {
        const Candle& bar = m1[k];
        auto closed = step_bar(account, bar, spec);
        res.trades.insert(res.trades.end(), closed.begin(), closed.end());

        const Timestamp now = bar.close_time();
        EntryState state;
        for (auto tf : kAllTimeframes) {
            const auto& v = values[index_of(tf)];
            auto idx = market.completed_index(tf, k);
            if (!idx) continue;
            state[index_of(tf)].curr = v[*idx];
            if (*idx > 0) state[index_of(tf)].prev = v[*idx - 1];
        }
        const std::span<const Candle> recent(m1.data(), k + 1);
        if (auto sig = evaluate_entry(state, params, account.open_positions.size(), last_entry, now, recent, spec)) {
            res.signals.push_back(*sig);
            auto order = open_position(account, *sig, quote_at(bar.close, spec), spec, cfg);
            if (std::holds_alternative<Position>(order))
                last_entry = now;
            else
                res.rejections.push_back(std::get<OrderRejection>(order));
        }
        res.equity.push_back({now, account.balance, account.equity});
    }

    if (!account.open_positions.empty()) {
        const Candle& last = m1[market.end_trade_bar() - 1];
        auto closed = close_all(account, last.close_time(), quote_at(last.close, spec), spec);
        res.trades.insert(res.trades.end(), closed.begin(), closed.end());
        res.equity.back() = {last.close_time(), account.balance, account.equity};
    }
    res.final_balance = account.balance;
    return res;
}

}  // namespace vgrsi
