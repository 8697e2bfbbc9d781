#include "vgrsi/walkforward.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "vgrsi/error.hpp"

namespace vgrsi {

std::string_view to_string(SearchMode m) { return m == SearchMode::Grid ? "grid" : "random"; }

SearchMode search_mode_from_string(std::string_view name) {
    if (name == "grid") return SearchMode::Grid;
    if (name == "random") return SearchMode::Random;
    throw ParseError("unknown search mode '" + std::string(name) + "'");
}

void ParameterRanges::validate() const {
    for (const Range* r : {&window_size, &window_visibility, &buy_threshold, &sell_threshold, &sl_tp_lookback,
                           &sl_tp_multiplier}) {
        if (r->step < 1 || r->hi < r->lo) throw ValidationError("parameter range must satisfy lo <= hi, step >= 1");
    }
    if (window_size.lo < 1 || window_visibility.lo < 1 || sl_tp_lookback.lo < 1 || sl_tp_multiplier.lo < 1)
        throw ValidationError("window sizes, N and Z ranges must start at >= 1");
    if (buy_threshold.hi >= sell_threshold.lo) throw ValidationError("buy range must lie below sell range");
    if (variants.empty()) throw ValidationError("at least one aggregation variant required");
}

void WalkForwardConfig::validate() const {
    if (train_days < 1 || trade_days < 1 || step_days < 1) throw ValidationError("window lengths must be >= 1 day");
    if (search_budget < 1) throw ValidationError("search_budget must be >= 1");
    ranges.validate();
    broker.validate();
}

long uniform_int(std::mt19937_64& rng, long lo, long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
}

ParameterSpace::ParameterSpace(const WalkForwardConfig& config, std::uint64_t seed)
    : config_(config), mode_(config.search) {
    config_.ranges.validate();
    if (mode_ == SearchMode::Random) {
        std::mt19937_64 rng(seed);
        const auto& r = config_.ranges;
        drawn_.reserve(config_.search_budget);
        for (std::size_t n = 0; n < config_.search_budget; ++n) {
            StrategyParams p = base();
            for (auto tf : kAllTimeframes) {
                auto& ind = p.on(tf);
                ind.window_size = static_cast<std::size_t>(uniform_int(rng, r.window_size.lo, r.window_size.hi));
                ind.window_visibility =
                    static_cast<std::size_t>(uniform_int(rng, r.window_visibility.lo, r.window_visibility.hi));
                ind.variant = r.variants[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(r.variants.size()) - 1))];
            }
            p.buy_threshold = static_cast<double>(uniform_int(rng, r.buy_threshold.lo, r.buy_threshold.hi));
            p.sell_threshold = static_cast<double>(uniform_int(rng, r.sell_threshold.lo, r.sell_threshold.hi));
            p.sl_tp_lookback = static_cast<std::size_t>(uniform_int(rng, r.sl_tp_lookback.lo, r.sl_tp_lookback.hi));
            p.sl_tp_multiplier = static_cast<double>(uniform_int(rng, r.sl_tp_multiplier.lo, r.sl_tp_multiplier.hi));
            drawn_.push_back(p);
        }
    }
}

StrategyParams ParameterSpace::base() const {
    StrategyParams p;
    p.min_entry_gap = config_.min_entry_gap;
    p.max_open_positions = config_.max_open_positions;
    p.short_cross = config_.short_cross;
    return p;
}

std::size_t ParameterSpace::size() const {
    if (mode_ == SearchMode::Random) return drawn_.size();
    const auto& r = config_.ranges;
    return r.window_size.count() * r.window_visibility.count() * r.variants.size() * r.buy_threshold.count() *
           r.sell_threshold.count() * r.sl_tp_lookback.count() * r.sl_tp_multiplier.count();
}

StrategyParams ParameterSpace::operator[](std::size_t k) const {
    if (k >= size()) throw ValidationError("parameter index out of range");
    if (mode_ == SearchMode::Random) return drawn_[k];
    const auto& r = config_.ranges;
    auto take = [&k](std::size_t radix) {
        const std::size_t digit = k % radix;
        k /= radix;
        return digit;
    };
    StrategyParams p = base();
    p.sl_tp_multiplier = static_cast<double>(r.sl_tp_multiplier.at(take(r.sl_tp_multiplier.count())));
    p.sl_tp_lookback = static_cast<std::size_t>(r.sl_tp_lookback.at(take(r.sl_tp_lookback.count())));
    p.sell_threshold = static_cast<double>(r.sell_threshold.at(take(r.sell_threshold.count())));
    p.buy_threshold = static_cast<double>(r.buy_threshold.at(take(r.buy_threshold.count())));
    const auto variant = r.variants[take(r.variants.size())];
    const auto wv = static_cast<std::size_t>(r.window_visibility.at(take(r.window_visibility.count())));
    const auto ws = static_cast<std::size_t>(r.window_size.at(take(r.window_size.count())));
    for (auto& ind : p.indicator) ind = VgrsiParams{ws, wv, variant};
    return p;
}

std::vector<std::size_t> ParameterSpace::plan(std::size_t budget) const {
    const std::size_t n = size();
    std::vector<std::size_t> idx;
    if (budget >= n) {
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        return idx;
    }
    idx.reserve(budget);
    // floor(i * n / budget) without overflowing the product
    const std::size_t q = n / budget, r = n % budget;
    for (std::size_t i = 0; i < budget; ++i) idx.push_back(i * q + i * r / budget);
    return idx;
}

ParameterSpace parameter_space(const WalkForwardConfig& config) { return ParameterSpace(config, config.seed); }

Optimization optimize_window(MarketView& train, std::span<const StrategyParams> candidates,
                             const BrokerConfig& broker, unsigned threads, std::size_t window_index) {
    if (candidates.empty()) throw ValidationError("optimize_window: empty candidate set");
    for (const auto& c : candidates)
        for (auto tf : kAllTimeframes) train.precompute(tf, c.on(tf));

    std::vector<CandidateScore> scores(candidates.size());
    auto evaluate = [&](std::size_t i) {
        auto& s = scores[i];
        s.index = i;
        s.params = candidates[i];
        s.live = has_defined_values(train, candidates[i]);
        if (!s.live) return;
        const auto res = run_backtest(train, candidates[i], broker);
        s.profit = res.profit();
        s.trades = res.trades.size();
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(candidates.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < candidates.size(); ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < candidates.size(); i = next++) evaluate(i);
            });
    }

    const auto best = select_best(scores);
    if (!best)
        throw Error("optimize_window: no candidate yields a defined VGRSI value on every timeframe in window " +
                    std::to_string(window_index));
    Optimization out;
    out.best = scores[*best].params;
    out.profit = scores[*best].profit;
    out.trades = scores[*best].trades;
    out.scores = std::move(scores);
    return out;
}

std::optional<std::size_t> select_best(std::span<const CandidateScore> scores) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto& s = scores[i];
        if (!s.live) continue;
        if (!best) {
            best = i;
            continue;
        }
        const auto& b = scores[*best];
        if (s.profit > b.profit || (s.profit == b.profit && s.trades < b.trades)) best = i;
    }
    return best;
}

Seconds warmup_span(const WalkForwardConfig& config) {
    const auto& r = config.ranges;
    const long bars = r.window_size.hi + r.window_visibility.hi + 2;
    return bars * duration_of(Timeframe::M30);
}

std::vector<WindowBounds> window_schedule(std::span<const Candle> m1, const WalkForwardConfig& config) {
    config.validate();
    if (m1.empty()) throw ValidationError("walk-forward: empty history");
    const auto day = Seconds{86400};
    const Timestamp start = floor_day(m1.front().open_time);
    const Timestamp end = floor_day(m1.back().open_time) + day;
    const auto needed = (config.train_days + config.trade_days) * day;
    if (end - start < needed)
        throw ValidationError("walk-forward: history spans " + std::to_string((end - start) / day) +
                              " days, need at least " + std::to_string(config.train_days + config.trade_days));
    std::vector<WindowBounds> out;
    for (Timestamp train = start;; train += config.step_days * day) {
        const Timestamp trade = train + config.train_days * day;
        const Timestamp trade_end = trade + config.trade_days * day;
        if (trade_end > end) break;
        out.push_back({train, trade, trade_end});
    }
    return out;
}

namespace {

std::vector<Candle> slice(std::span<const Candle> m1, Timestamp from, Timestamp to) {
    auto lo = std::lower_bound(m1.begin(), m1.end(), from, [](const Candle& c, Timestamp t) { return c.open_time < t; });
    auto hi = std::lower_bound(lo, m1.end(), to, [](const Candle& c, Timestamp t) { return c.open_time < t; });
    return {lo, hi};
}

std::uint64_t window_seed(std::uint64_t seed, std::size_t window) {
    // splitmix64 step keeps per-window streams decorrelated
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(window) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

WalkForwardResult run_walkforward(std::span<const Candle> m1, const WalkForwardConfig& config,
                                  const InstrumentSpec& spec) {
    const auto schedule = window_schedule(m1, config);
    const auto warmup = warmup_span(config);
    WalkForwardResult out;
    double cumulative = 0;
    for (std::size_t w = 0; w < schedule.size(); ++w) {
        const auto& b = schedule[w];
        ParameterSpace space(config, window_seed(config.seed, w));
        std::vector<StrategyParams> candidates;
        for (auto k : space.plan(config.search_budget)) candidates.push_back(space[k]);

        MarketView train(slice(m1, b.train_start - warmup, b.trade_start), b.train_start, b.trade_start, spec,
                         config.price_source);
        auto opt = optimize_window(train, candidates, config.broker, config.threads, w);

        MarketView trade(slice(m1, b.trade_start - warmup, b.trade_end), b.trade_start, b.trade_end, spec,
                         config.price_source);
        auto res = run_backtest(trade, opt.best, config.broker);

        WindowResult wr;
        wr.index = w;
        wr.train_start = b.train_start;
        wr.trade_start = b.trade_start;
        wr.trade_end = b.trade_end;
        wr.params = opt.best;
        wr.in_sample_profit = opt.profit;
        wr.in_sample_trades = opt.trades;
        wr.out_of_sample_profit = res.profit();
        wr.stats = window_stats(res.trades, res.equity, res.initial_balance, config.sharpe);
        wr.trades = std::move(res.trades);
        wr.equity = std::move(res.equity);
        wr.signals = std::move(res.signals);
        cumulative += wr.out_of_sample_profit;
        out.cumulative_profit.push_back(cumulative);
        out.windows.push_back(std::move(wr));
    }
    return out;
}

}  // namespace vgrsi
