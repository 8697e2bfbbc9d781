#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vgrsi/marketdata.hpp"
#include "vgrsi/signals.hpp"

namespace vgrsi {

struct BrokerConfig {
    double initial_balance = 10000.0;
    double leverage = 100.0;
    double margin_budget = 1000.0;  // margin committed per trade
    double lot_step = 0.01;
    std::size_t max_open_positions = 2;

    void validate() const;
};

struct Quote {
    double bid = 0;
    double ask = 0;
};

inline Quote quote_at(double mid, const InstrumentSpec& spec) { return {spec.bid(mid), spec.ask(mid)}; }

struct Position {
    std::uint64_t id = 0;
    Direction direction = Direction::Long;
    double entry_price = 0;  // ask for long, bid for short
    double volume_lots = 0;
    double sl_price = 0;
    double tp_price = 0;
    Timestamp open_time{};
    double margin_used = 0;
    double open_commission = 0;
};

enum class ExitReason { StopLoss, TakeProfit, EndOfWindow };

std::string_view to_string(ExitReason r);

struct TradeRecord {
    Position position;
    double exit_price = 0;
    Timestamp exit_time{};
    ExitReason reason = ExitReason::EndOfWindow;
    double commission_paid = 0;  // both sides
    double realized_pnl = 0;     // net of commission, rounded to cents
};

struct OrderRejection {
    Timestamp time{};
    Direction direction = Direction::Long;
    std::string reason;
};

struct EquityPoint {
    Timestamp time{};
    double balance = 0;
    double equity = 0;
};

/// Single-instrument account. Balance moves only when a trade is realized;
/// the opening commission shows up in equity immediately.
struct AccountState {
    double initial_balance = 10000.0;
    double balance = 10000.0;
    double equity = 10000.0;
    double peak_equity = 10000.0;
    double leverage = 100.0;
    std::vector<Position> open_positions;
    std::uint64_t next_id = 1;

    explicit AccountState(const BrokerConfig& cfg = {});

    double margin_in_use() const;
    /// Re-marks open positions (longs at bid, shorts at ask).
    void mark(const Quote& q, const InstrumentSpec& spec);
};

using OrderResult = std::variant<Position, OrderRejection>;

/// Gross PnL in account currency for closing `p` at `exit_price`.
double gross_pnl(const Position& p, double exit_price, const InstrumentSpec& spec);
double round_cents(double amount);

/// Sizes and opens a position at the current quote; on success the position
/// is added to the account.
OrderResult open_position(AccountState& account, const Signal& signal, const Quote& market,
                          const InstrumentSpec& spec, const BrokerConfig& cfg);

/// Resolves SL/TP touches inside one M1 bar (SL wins when both are inside the
/// range) and re-marks the account at the bar close.
std::vector<TradeRecord> step_bar(AccountState& account, const Candle& bar, const InstrumentSpec& spec);

std::vector<TradeRecord> close_all(AccountState& account, Timestamp time, const Quote& market,
                                   const InstrumentSpec& spec);

}  // namespace vgrsi
