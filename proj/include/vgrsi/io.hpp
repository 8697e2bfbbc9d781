#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "vgrsi/backtest.hpp"
#include "vgrsi/metrics.hpp"
#include "vgrsi/walkforward.hpp"

namespace vgrsi {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

/// SHA-256 of the file contents, lowercase hex.
std::string sha256_file(const std::filesystem::path& path);

/// timestamp,value with an empty value field where the indicator is undefined.
void write_indicator_csv(std::ostream& out, const PriceSeries& series, std::span<const MaybeValue> values);

/// open_time,close_time,direction,lots,entry,exit,sl,tp,reason,commission,pnl
void write_trade_log(std::ostream& out, std::span<const TradeRecord> trades);
/// timestamp,balance,equity
void write_equity_curve(std::ostream& out, std::span<const EquityPoint> curve);
void write_signals(std::ostream& out, std::span<const Signal> signals);

/// One row per window: trade counts, Sharpe, drawdown, profits, chosen params.
void write_windows_csv(std::ostream& out, std::span<const WindowResult> windows, std::span<const double> cumulative);

void write_summary_csv(std::ostream& out, const Summary& s);
Json to_json(const Summary& s);
Json to_json(const WindowStats& s);
WindowStats window_stats_from_json(const Json& j);

Json to_json(const InstrumentSpec& s);
InstrumentSpec instrument_from_json(const Json& j);
Json to_json(const VgrsiParams& p);
VgrsiParams vgrsi_params_from_json(const Json& j);
Json to_json(const StrategyParams& p);
StrategyParams strategy_params_from_json(const Json& j);
Json to_json(const BrokerConfig& b);
BrokerConfig broker_from_json(const Json& j);
Json to_json(const WalkForwardConfig& c);
WalkForwardConfig walkforward_config_from_json(const Json& j);

/// Per-window record as stored in run manifests (without the bulky logs).
Json to_json(const WindowResult& w);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace vgrsi
