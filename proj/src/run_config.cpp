#include "vgrsi/run_config.hpp"

#include <sstream>

#include "vgrsi/error.hpp"

namespace vgrsi {
namespace {

Range parse_range(const std::string& text, std::string_view what) {
    std::vector<long long> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(parse_int(item, what));
    if (parts.size() == 2) parts.push_back(1);
    if (parts.size() != 3) throw ParseError(std::string(what) + ": expected [lo, hi] or [lo, hi, step]");
    return Range{static_cast<long>(parts[0]), static_cast<long>(parts[1]), static_cast<long>(parts[2])};
}

std::filesystem::path resolve_path(const std::string& p, const std::filesystem::path& base) {
    std::filesystem::path path(p);
    return path.is_relative() ? base / path : path;
}

}  // namespace

void RunConfig::resolve() {
    instrument.validate();
    indicator.validate();
    broker.validate();
    strategy.validate();
    walkforward.seed = seed;
    walkforward.broker = broker;
    walkforward.sharpe = sharpe;
    walkforward.price_source = price_source;
    walkforward.min_entry_gap = strategy.min_entry_gap;
    walkforward.max_open_positions = strategy.max_open_positions;
    walkforward.short_cross = strategy.short_cross;
    walkforward.validate();
}

RunConfig run_config_from_document(const KeyValueDocument& doc, const std::filesystem::path& base_dir) {
    RunConfig c;
    auto get = [&](std::string_view section, std::string_view key) { return doc.lookup(section, key); };
    auto num = [&](std::string_view section, std::string_view key, double fallback) {
        auto v = get(section, key);
        return v ? parse_double(*v, key) : fallback;
    };
    auto integer = [&](std::string_view section, std::string_view key, long long fallback) {
        auto v = get(section, key);
        return v ? parse_int(*v, key) : fallback;
    };

    if (auto f = doc.get("instrument.file")) c.instrument = load_instrument_spec(resolve_path(*f, base_dir));
    if (auto v = doc.get("instrument.symbol")) c.instrument.symbol = *v;
    c.instrument.point = num("instrument", "point", c.instrument.point);
    c.instrument.contract_size = num("instrument", "contract_size", c.instrument.contract_size);
    if (auto v = doc.get("instrument.quote_currency")) c.instrument.quote_currency = *v;
    c.instrument.commission_per_lot = num("instrument", "commission_per_lot", c.instrument.commission_per_lot);
    c.instrument.default_spread_points =
        static_cast<int>(integer("instrument", "default_spread_points", c.instrument.default_spread_points));

    if (auto v = doc.get("data.m1")) c.data_m1 = resolve_path(*v, base_dir);
    if (auto v = doc.get("data.price_source")) c.price_source = price_source_from_string(*v);

    if (auto v = doc.get("indicator.timeframe")) c.indicator_timeframe = timeframe_from_string(*v);
    c.indicator.window_size = static_cast<std::size_t>(integer("indicator", "window_size", 20));
    c.indicator.window_visibility = static_cast<std::size_t>(integer("indicator", "window_visibility", 40));
    if (auto v = doc.get("indicator.variant")) c.indicator.variant = aggregation_from_string(*v);

    auto& s = c.strategy;
    for (auto tf : kAllTimeframes) {
        const std::string prefix = tf == Timeframe::M1 ? "m1_" : tf == Timeframe::M5 ? "m5_" : "m30_";
        auto& p = s.on(tf);
        auto shared_or = [&](const std::string& key, long long fallback) {
            if (auto v = doc.get("strategy." + prefix + key)) return parse_int(*v, key);
            if (auto v = doc.get("strategy." + key)) return parse_int(*v, key);
            return fallback;
        };
        p.window_size = static_cast<std::size_t>(shared_or("window_size", 20));
        p.window_visibility = static_cast<std::size_t>(shared_or("window_visibility", 40));
        if (auto v = doc.get("strategy." + prefix + "variant"))
            p.variant = aggregation_from_string(*v);
        else if (auto w = doc.get("strategy.variant"))
            p.variant = aggregation_from_string(*w);
    }
    s.buy_threshold = num("strategy", "buy_threshold", s.buy_threshold);
    s.sell_threshold = num("strategy", "sell_threshold", s.sell_threshold);
    s.sl_tp_lookback = static_cast<std::size_t>(integer("strategy", "sl_tp_lookback", static_cast<long long>(s.sl_tp_lookback)));
    s.sl_tp_multiplier = num("strategy", "sl_tp_multiplier", s.sl_tp_multiplier);
    s.min_entry_gap = Seconds{static_cast<long long>(num("strategy", "min_entry_gap_minutes", 30) * 60)};
    s.max_open_positions =
        static_cast<std::size_t>(integer("strategy", "max_open_positions", static_cast<long long>(s.max_open_positions)));
    if (auto v = doc.get("strategy.short_cross_direction")) s.short_cross = cross_direction_from_string(*v);

    if (auto v = doc.get("backtest.start")) c.backtest_start = parse_timestamp(*v);
    if (auto v = doc.get("backtest.end")) c.backtest_end = parse_timestamp(*v);

    c.broker.initial_balance = num("broker", "initial_balance", c.broker.initial_balance);
    c.broker.leverage = num("broker", "leverage", c.broker.leverage);
    c.broker.margin_budget = num("broker", "margin_budget", c.broker.margin_budget);
    c.broker.lot_step = num("broker", "lot_step", c.broker.lot_step);
    c.broker.max_open_positions = s.max_open_positions;

    auto& w = c.walkforward;
    w.train_days = static_cast<int>(integer("walkforward", "train_days", w.train_days));
    w.trade_days = static_cast<int>(integer("walkforward", "trade_days", w.trade_days));
    w.step_days = static_cast<int>(integer("walkforward", "step_days", w.step_days));
    if (auto v = doc.get("walkforward.search")) w.search = search_mode_from_string(*v);
    w.search_budget = static_cast<std::size_t>(integer("walkforward", "search_budget", static_cast<long long>(w.search_budget)));
    w.threads = static_cast<unsigned>(integer("walkforward", "threads", w.threads));
    auto range = [&](std::string_view key, Range& r) {
        if (auto v = doc.get("walkforward." + std::string(key))) r = parse_range(*v, key);
    };
    range("window_size", w.ranges.window_size);
    range("window_visibility", w.ranges.window_visibility);
    range("buy_threshold", w.ranges.buy_threshold);
    range("sell_threshold", w.ranges.sell_threshold);
    range("sl_tp_lookback", w.ranges.sl_tp_lookback);
    range("sl_tp_multiplier", w.ranges.sl_tp_multiplier);
    if (auto v = doc.get("walkforward.variants")) {
        w.ranges.variants.clear();
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) w.ranges.variants.push_back(aggregation_from_string(item));
    }

    if (auto v = doc.get("metrics.sharpe_annualize")) c.sharpe.annualize = doc.get_bool("metrics.sharpe_annualize", true);
    c.sharpe.periods_per_year = num("metrics", "sharpe_periods_per_year", c.sharpe.periods_per_year);

    if (auto v = doc.get("out")) c.out_dir = resolve_path(*v, base_dir);
    c.seed = static_cast<std::uint64_t>(integer("", "seed", static_cast<long long>(c.seed)));
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    auto doc = KeyValueDocument::from_file(path);
    return run_config_from_document(doc, path.parent_path());
}

Json to_json(const RunConfig& c) {
    Json j{{"instrument", to_json(c.instrument)},
           {"data_m1", c.data_m1.string()},
           {"price_source", std::string(to_string(c.price_source))},
           {"indicator_timeframe", std::string(to_string(c.indicator_timeframe))},
           {"indicator", to_json(c.indicator)},
           {"strategy", to_json(c.strategy)},
           {"backtest_start", c.backtest_start ? Json(format_timestamp(*c.backtest_start)) : Json(nullptr)},
           {"backtest_end", c.backtest_end ? Json(format_timestamp(*c.backtest_end)) : Json(nullptr)},
           {"walkforward", to_json(c.walkforward)},
           {"broker", to_json(c.broker)},
           {"sharpe_annualize", c.sharpe.annualize},
           {"sharpe_periods_per_year", c.sharpe.periods_per_year},
           {"out_dir", c.out_dir.string()},
           {"seed", c.seed}};
    return j;
}

RunConfig run_config_from_json(const Json& j) {
    RunConfig c;
    c.instrument = instrument_from_json(j.at("instrument"));
    c.data_m1 = j.at("data_m1").get<std::string>();
    c.price_source = price_source_from_string(j.at("price_source").get<std::string>());
    c.indicator_timeframe = timeframe_from_string(j.at("indicator_timeframe").get<std::string>());
    c.indicator = vgrsi_params_from_json(j.at("indicator"));
    c.strategy = strategy_params_from_json(j.at("strategy"));
    if (!j.at("backtest_start").is_null()) c.backtest_start = parse_timestamp(j.at("backtest_start").get<std::string>());
    if (!j.at("backtest_end").is_null()) c.backtest_end = parse_timestamp(j.at("backtest_end").get<std::string>());
    c.walkforward = walkforward_config_from_json(j.at("walkforward"));
    c.broker = broker_from_json(j.at("broker"));
    c.sharpe.annualize = j.at("sharpe_annualize").get<bool>();
    c.sharpe.periods_per_year = j.at("sharpe_periods_per_year").get<double>();
    c.out_dir = j.at("out_dir").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace vgrsi
