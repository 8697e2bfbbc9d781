#include "vgrsi/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>

#include "vgrsi/error.hpp"

namespace vgrsi {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

void write_indicator_csv(std::ostream& out, const PriceSeries& series, std::span<const MaybeValue> values) {
    out << "timestamp,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_timestamp(series.timestamps[i]) << ',';
        if (i < values.size() && values[i]) out << format_number(*values[i]);
        out << '\n';
    }
}

void write_trade_log(std::ostream& out, std::span<const TradeRecord> trades) {
    out << "open_time,close_time,direction,lots,entry,exit,sl,tp,reason,commission,pnl\n";
    for (const auto& t : trades) {
        const auto& p = t.position;
        out << format_timestamp(p.open_time) << ',' << format_timestamp(t.exit_time) << ',' << to_string(p.direction)
            << ',' << format_number(p.volume_lots) << ',' << format_number(p.entry_price) << ','
            << format_number(t.exit_price) << ',' << format_number(p.sl_price) << ',' << format_number(p.tp_price)
            << ',' << to_string(t.reason) << ',' << format_number(t.commission_paid) << ','
            << format_number(t.realized_pnl) << '\n';
    }
}

void write_equity_curve(std::ostream& out, std::span<const EquityPoint> curve) {
    out << "timestamp,balance,equity\n";
    for (const auto& e : curve)
        out << format_timestamp(e.time) << ',' << format_number(e.balance) << ',' << format_number(e.equity) << '\n';
}

void write_signals(std::ostream& out, std::span<const Signal> signals) {
    for (const auto& s : signals) out << to_json_line(s) << '\n';
}

namespace {

Json maybe(const MaybeValue& v) { return v ? Json(*v) : Json(nullptr); }

std::string params_brief(const StrategyParams& p) {
    std::string s;
    for (auto tf : kAllTimeframes) {
        const auto& v = p.on(tf);
        s += std::string(to_string(tf)) + ":" + std::to_string(v.window_size) + "/" +
             std::to_string(v.window_visibility) + "/" + std::string(to_string(v.variant)) + " ";
    }
    s += "buy:" + format_number(p.buy_threshold) + " sell:" + format_number(p.sell_threshold) +
         " N:" + std::to_string(p.sl_tp_lookback) + " Z:" + format_number(p.sl_tp_multiplier);
    return s;
}

Json range_json(const Range& r) { return Json::array({r.lo, r.hi, r.step}); }
Range range_from(const Json& j) { return Range{j.at(0).get<long>(), j.at(1).get<long>(), j.at(2).get<long>()}; }

}  // namespace

void write_windows_csv(std::ostream& out, std::span<const WindowResult> windows, std::span<const double> cumulative) {
    out << "window,trade_start,trade_end,trades_all,trades_long,trades_short,sharpe,max_drawdown_pct,"
           "in_sample_profit,out_of_sample_profit,cumulative_profit,params\n";
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& w = windows[i];
        out << w.index << ',' << format_timestamp(w.trade_start) << ',' << format_timestamp(w.trade_end) << ','
            << w.stats.trades_all << ',' << w.stats.trades_long << ',' << w.stats.trades_short << ',';
        if (w.stats.sharpe) out << format_number(*w.stats.sharpe);
        out << ',' << format_number(w.stats.max_drawdown_pct) << ',' << format_number(w.in_sample_profit) << ','
            << format_number(w.out_of_sample_profit) << ','
            << (i < cumulative.size() ? format_number(cumulative[i]) : std::string()) << ",\""
            << params_brief(w.params) << "\"\n";
    }
}

void write_summary_csv(std::ostream& out, const Summary& s) {
    out << "windows,all_min,all_max,all_mean,long_min,long_max,long_mean,short_min,short_max,short_mean,"
           "sharpe_mean,max_drawdown_pct_mean,total_trades,trading_days,trades_per_day,total_profit,profit_per_day\n";
    out << s.windows << ',' << s.trades_all.min << ',' << s.trades_all.max << ',' << format_number(s.trades_all.mean)
        << ',' << s.trades_long.min << ',' << s.trades_long.max << ',' << format_number(s.trades_long.mean) << ','
        << s.trades_short.min << ',' << s.trades_short.max << ',' << format_number(s.trades_short.mean) << ','
        << (s.mean_sharpe ? format_number(*s.mean_sharpe) : std::string()) << ','
        << format_number(s.mean_max_drawdown_pct) << ',' << s.total_trades << ',' << s.trading_days << ','
        << format_number(s.trades_per_day) << ',' << format_number(s.total_profit) << ','
        << format_number(s.profit_per_day) << '\n';
}

Json to_json(const Summary& s) {
    auto counts = [](const CountStats& c) { return Json{{"min", c.min}, {"max", c.max}, {"mean", c.mean}}; };
    return Json{{"windows", s.windows},
                {"all_trades", counts(s.trades_all)},
                {"long_trades", counts(s.trades_long)},
                {"short_trades", counts(s.trades_short)},
                {"sharpe_mean", maybe(s.mean_sharpe)},
                {"max_drawdown_pct_mean", s.mean_max_drawdown_pct},
                {"total_trades", s.total_trades},
                {"trading_days", s.trading_days},
                {"trades_per_day", s.trades_per_day},
                {"total_profit", s.total_profit},
                {"profit_per_day", s.profit_per_day}};
}

Json to_json(const WindowStats& s) {
    return Json{{"trades_all", s.trades_all},     {"trades_long", s.trades_long},
                {"trades_short", s.trades_short}, {"sharpe", maybe(s.sharpe)},
                {"max_drawdown_pct", s.max_drawdown_pct}, {"profit", s.profit}};
}

WindowStats window_stats_from_json(const Json& j) {
    WindowStats s;
    s.trades_all = j.at("trades_all").get<std::size_t>();
    s.trades_long = j.at("trades_long").get<std::size_t>();
    s.trades_short = j.at("trades_short").get<std::size_t>();
    if (!j.at("sharpe").is_null()) s.sharpe = j.at("sharpe").get<double>();
    s.max_drawdown_pct = j.at("max_drawdown_pct").get<double>();
    s.profit = j.at("profit").get<double>();
    return s;
}

Json to_json(const InstrumentSpec& s) {
    return Json{{"symbol", s.symbol},
                {"point", s.point},
                {"contract_size", s.contract_size},
                {"quote_currency", s.quote_currency},
                {"commission_per_lot", s.commission_per_lot},
                {"default_spread_points", s.default_spread_points}};
}

InstrumentSpec instrument_from_json(const Json& j) {
    InstrumentSpec s;
    s.symbol = j.at("symbol").get<std::string>();
    s.point = j.at("point").get<double>();
    s.contract_size = j.at("contract_size").get<double>();
    s.quote_currency = j.at("quote_currency").get<std::string>();
    s.commission_per_lot = j.at("commission_per_lot").get<double>();
    s.default_spread_points = j.at("default_spread_points").get<int>();
    s.validate();
    return s;
}

Json to_json(const VgrsiParams& p) {
    return Json{{"window_size", p.window_size},
                {"window_visibility", p.window_visibility},
                {"variant", std::string(to_string(p.variant))}};
}

VgrsiParams vgrsi_params_from_json(const Json& j) {
    VgrsiParams p;
    p.window_size = j.at("window_size").get<std::size_t>();
    p.window_visibility = j.at("window_visibility").get<std::size_t>();
    p.variant = aggregation_from_string(j.at("variant").get<std::string>());
    return p;
}

Json to_json(const StrategyParams& p) {
    Json ind = Json::object();
    for (auto tf : kAllTimeframes) ind[std::string(to_string(tf))] = to_json(p.on(tf));
    return Json{{"indicator", ind},
                {"buy_threshold", p.buy_threshold},
                {"sell_threshold", p.sell_threshold},
                {"sl_tp_lookback", p.sl_tp_lookback},
                {"sl_tp_multiplier", p.sl_tp_multiplier},
                {"min_entry_gap_seconds", p.min_entry_gap.count()},
                {"max_open_positions", p.max_open_positions},
                {"short_cross_direction", std::string(to_string(p.short_cross))}};
}

StrategyParams strategy_params_from_json(const Json& j) {
    StrategyParams p;
    for (auto tf : kAllTimeframes) p.on(tf) = vgrsi_params_from_json(j.at("indicator").at(std::string(to_string(tf))));
    p.buy_threshold = j.at("buy_threshold").get<double>();
    p.sell_threshold = j.at("sell_threshold").get<double>();
    p.sl_tp_lookback = j.at("sl_tp_lookback").get<std::size_t>();
    p.sl_tp_multiplier = j.at("sl_tp_multiplier").get<double>();
    p.min_entry_gap = Seconds{j.at("min_entry_gap_seconds").get<long long>()};
    p.max_open_positions = j.at("max_open_positions").get<std::size_t>();
    p.short_cross = cross_direction_from_string(j.at("short_cross_direction").get<std::string>());
    return p;
}

Json to_json(const BrokerConfig& b) {
    return Json{{"initial_balance", b.initial_balance},
                {"leverage", b.leverage},
                {"margin_budget", b.margin_budget},
                {"lot_step", b.lot_step},
                {"max_open_positions", b.max_open_positions}};
}

BrokerConfig broker_from_json(const Json& j) {
    BrokerConfig b;
    b.initial_balance = j.at("initial_balance").get<double>();
    b.leverage = j.at("leverage").get<double>();
    b.margin_budget = j.at("margin_budget").get<double>();
    b.lot_step = j.at("lot_step").get<double>();
    b.max_open_positions = j.at("max_open_positions").get<std::size_t>();
    return b;
}

Json to_json(const WalkForwardConfig& c) {
    Json variants = Json::array();
    for (auto v : c.ranges.variants) variants.push_back(std::string(to_string(v)));
    return Json{{"train_days", c.train_days},
                {"trade_days", c.trade_days},
                {"step_days", c.step_days},
                {"search", std::string(to_string(c.search))},
                {"search_budget", c.search_budget},
                {"seed", c.seed},
                {"ranges",
                 {{"window_size", range_json(c.ranges.window_size)},
                  {"window_visibility", range_json(c.ranges.window_visibility)},
                  {"buy_threshold", range_json(c.ranges.buy_threshold)},
                  {"sell_threshold", range_json(c.ranges.sell_threshold)},
                  {"sl_tp_lookback", range_json(c.ranges.sl_tp_lookback)},
                  {"sl_tp_multiplier", range_json(c.ranges.sl_tp_multiplier)},
                  {"variants", variants}}},
                {"broker", to_json(c.broker)},
                {"price_source", std::string(to_string(c.price_source))},
                {"min_entry_gap_seconds", c.min_entry_gap.count()},
                {"max_open_positions", c.max_open_positions},
                {"short_cross_direction", std::string(to_string(c.short_cross))},
                {"sharpe_annualize", c.sharpe.annualize},
                {"sharpe_periods_per_year", c.sharpe.periods_per_year},
                {"threads", c.threads}};
}

WalkForwardConfig walkforward_config_from_json(const Json& j) {
    WalkForwardConfig c;
    c.train_days = j.at("train_days").get<int>();
    c.trade_days = j.at("trade_days").get<int>();
    c.step_days = j.at("step_days").get<int>();
    c.search = search_mode_from_string(j.at("search").get<std::string>());
    c.search_budget = j.at("search_budget").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto& r = j.at("ranges");
    c.ranges.window_size = range_from(r.at("window_size"));
    c.ranges.window_visibility = range_from(r.at("window_visibility"));
    c.ranges.buy_threshold = range_from(r.at("buy_threshold"));
    c.ranges.sell_threshold = range_from(r.at("sell_threshold"));
    c.ranges.sl_tp_lookback = range_from(r.at("sl_tp_lookback"));
    c.ranges.sl_tp_multiplier = range_from(r.at("sl_tp_multiplier"));
    c.ranges.variants.clear();
    for (const auto& v : r.at("variants")) c.ranges.variants.push_back(aggregation_from_string(v.get<std::string>()));
    c.broker = broker_from_json(j.at("broker"));
    c.price_source = price_source_from_string(j.at("price_source").get<std::string>());
    c.min_entry_gap = Seconds{j.at("min_entry_gap_seconds").get<long long>()};
    c.max_open_positions = j.at("max_open_positions").get<std::size_t>();
    c.short_cross = cross_direction_from_string(j.at("short_cross_direction").get<std::string>());
    c.sharpe.annualize = j.at("sharpe_annualize").get<bool>();
    c.sharpe.periods_per_year = j.at("sharpe_periods_per_year").get<double>();
    c.threads = j.at("threads").get<unsigned>();
    return c;
}

Json to_json(const WindowResult& w) {
    return Json{{"window", w.index},
                {"train_start", format_timestamp(w.train_start)},
                {"trade_start", format_timestamp(w.trade_start)},
                {"trade_end", format_timestamp(w.trade_end)},
                {"params", to_json(w.params)},
                {"in_sample_profit", w.in_sample_profit},
                {"in_sample_trades", w.in_sample_trades},
                {"out_of_sample_profit", w.out_of_sample_profit},
                {"stats", to_json(w.stats)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

}  // namespace vgrsi
