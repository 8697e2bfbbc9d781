#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vgrsi/error.hpp"
#include "vgrsi/io.hpp"
#include "vgrsi/run_config.hpp"

namespace fs = std::filesystem;
using namespace vgrsi;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string replay;
    std::string from;
};

RunConfig load(const Options& o) {
    RunConfig c;
    if (!o.replay.empty()) {
        std::ifstream in(o.replay);
        if (!in) throw Error("cannot open manifest " + o.replay);
        c = run_config_from_json(Json::parse(in).at("config"));
    } else {
        if (o.config.empty()) throw ValidationError("--config is required");
        c = load_run_config(o.config);
    }
    if (!o.out.empty()) c.out_dir = o.out;
    if (o.seed) c.seed = *o.seed;
    c.resolve();
    if (!fs::exists(c.data_m1)) throw ValidationError("data file not found: " + c.data_m1.string());
    fs::create_directories(c.out_dir);
    return c;
}

Json manifest(const RunConfig& c, std::string_view command) {
    return Json{{"command", std::string(command)},
                {"seed", c.seed},
                {"data_sha256", sha256_file(c.data_m1)},
                {"config", to_json(c)}};
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    fn(out);
}

void write_manifest(const RunConfig& c, const Json& m) { write_text(c.out_dir / "manifest.json", m.dump(2) + "\n"); }

std::vector<Candle> history(const RunConfig& c) {
    auto m1 = load_csv(c.data_m1, c.instrument, Timeframe::M1);
    if (m1.empty()) throw ValidationError("no bars in " + c.data_m1.string());
    return m1;
}

int cmd_indicator(const Options& o) {
    auto c = load(o);
    auto m1 = history(c);
    auto bars = c.indicator_timeframe == Timeframe::M1 ? m1 : resample(m1, c.indicator_timeframe);
    auto series = close_series(bars, c.price_source, c.instrument);
    auto values = rolling_values(series.prices, c.indicator);
    write_file(c.out_dir / "vgrsi.csv", [&](std::ostream& out) { write_indicator_csv(out, series, values); });
    auto defined = static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](auto& v) { return v.has_value(); }));
    auto m = manifest(c, "indicator");
    m["defined"] = defined;
    m["undefined"] = values.size() - defined;
    write_manifest(c, m);
    std::cout << "values " << values.size() << " defined " << defined << " undefined " << values.size() - defined
              << "\n";
    return 0;
}

int cmd_backtest(const Options& o) {
    auto c = load(o);
    auto m1 = history(c);
    const auto start = c.backtest_start.value_or(m1.front().open_time);
    const auto end = c.backtest_end.value_or(floor_day(m1.back().open_time) + std::chrono::days{1});
    MarketView market(std::move(m1), start, end, c.instrument, c.price_source);
    auto res = run_backtest(market, c.strategy, c.broker);
    auto stats = window_stats(res.trades, res.equity, res.initial_balance, c.sharpe);

    write_file(c.out_dir / "trades.csv", [&](std::ostream& out) { write_trade_log(out, res.trades); });
    write_file(c.out_dir / "equity.csv", [&](std::ostream& out) { write_equity_curve(out, res.equity); });
    write_file(c.out_dir / "signals.jsonl", [&](std::ostream& out) { write_signals(out, res.signals); });
    Json js{{"trade_start", format_timestamp(start)},
            {"trade_end", format_timestamp(end)},
            {"stats", to_json(stats)},
            {"final_balance", res.final_balance},
            {"rejections", res.rejections.size()}};
    write_text(c.out_dir / "stats.json", js.dump(2) + "\n");
    auto m = manifest(c, "backtest");
    m["result"] = js;
    write_manifest(c, m);
    std::cout << "trades " << stats.trades_all << " profit " << format_number(stats.profit) << "\n";
    return 0;
}

std::size_t trade_days(std::span<const Candle> m1, const WalkForwardResult& r) {
    if (r.windows.empty()) return 0;
    const auto lo = r.windows.front().trade_start, hi = r.windows.back().trade_end;
    auto first = std::lower_bound(m1.begin(), m1.end(), lo, [](const Candle& k, Timestamp t) { return k.open_time < t; });
    auto last = std::lower_bound(first, m1.end(), hi, [](const Candle& k, Timestamp t) { return k.open_time < t; });
    return trading_days(std::span<const Candle>(first, last));
}

void write_summary(const fs::path& dir, const Summary& s) {
    write_file(dir / "summary.csv", [&](std::ostream& out) { write_summary_csv(out, s); });
    write_text(dir / "summary.json", to_json(s).dump(2) + "\n");
}

int cmd_walkforward(const Options& o) {
    auto c = load(o);
    auto m1 = history(c);
    auto res = run_walkforward(m1, c.walkforward, c.instrument);

    std::vector<TradeRecord> trades;
    std::vector<Signal> signals;
    std::vector<WindowStats> stats;
    Json windows = Json::array();
    for (const auto& w : res.windows) {
        trades.insert(trades.end(), w.trades.begin(), w.trades.end());
        signals.insert(signals.end(), w.signals.begin(), w.signals.end());
        stats.push_back(w.stats);
        windows.push_back(to_json(w));
    }
    const auto days = trade_days(m1, res);
    auto summary = aggregate(stats, days);

    write_file(c.out_dir / "windows.csv",
               [&](std::ostream& out) { write_windows_csv(out, res.windows, res.cumulative_profit); });
    write_file(c.out_dir / "trades.csv", [&](std::ostream& out) { write_trade_log(out, trades); });
    write_file(c.out_dir / "signals.jsonl", [&](std::ostream& out) { write_signals(out, signals); });
    write_summary(c.out_dir, summary);

    auto m = manifest(c, "walkforward");
    m["trading_days"] = days;
    m["windows"] = windows;
    m["cumulative_profit"] = res.cumulative_profit;
    write_manifest(c, m);

    if (!o.replay.empty()) {
        std::ifstream in(o.replay);
        auto prior = Json::parse(in);
        if (prior.at("data_sha256") != m["data_sha256"]) {
            std::cerr << "replay: data fingerprint differs from manifest\n";
            return 1;
        }
        if (prior.at("windows") != windows) {
            std::cerr << "replay: window results differ from manifest\n";
            return 1;
        }
        std::cout << "replay identical\n";
    }
    std::cout << "windows " << res.windows.size() << " total_profit "
              << format_number(res.cumulative_profit.empty() ? 0.0 : res.cumulative_profit.back()) << "\n";
    return 0;
}

int cmd_report(const Options& o) {
    fs::path dir = o.from;
    if (dir.empty()) {
        if (!o.out.empty()) dir = o.out;
        else if (!o.config.empty()) dir = load_run_config(o.config).out_dir;
        else throw ValidationError("report needs --from, --out or --config");
    }
    std::ifstream in(dir / "manifest.json");
    if (!in) throw Error("no manifest.json in " + dir.string());
    auto m = Json::parse(in);
    if (m.at("command") != "walkforward") throw ValidationError("report expects a walkforward manifest");
    std::vector<WindowStats> stats;
    for (const auto& w : m.at("windows")) stats.push_back(window_stats_from_json(w.at("stats")));
    auto summary = aggregate(stats, m.at("trading_days").get<std::size_t>());
    const fs::path out = o.out.empty() ? dir : fs::path(o.out);
    fs::create_directories(out);
    write_summary(out, summary);
    write_summary_csv(std::cout, summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VGRSI indicator, backtester and walk-forward optimizer"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "key/value run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (overrides config)");
        sub->add_option("--seed", o.seed, "random seed (overrides config)");
    };
    auto* ind = app.add_subcommand("indicator", "write rolling VGRSI values");
    auto* bt = app.add_subcommand("backtest", "backtest fixed strategy parameters");
    auto* wf = app.add_subcommand("walkforward", "rolling optimization and out-of-sample trading");
    auto* rep = app.add_subcommand("report", "summary table from a walkforward output directory");
    for (auto* s : {ind, bt, wf, rep}) add_common(s);
    wf->add_option("--replay", o.replay, "rerun from a manifest and verify identical results")->check(CLI::ExistingFile);
    rep->add_option("--from", o.from, "walkforward output directory")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*ind) return cmd_indicator(o);
        if (*bt) return cmd_backtest(o);
        if (*wf) return cmd_walkforward(o);
        return cmd_report(o);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
