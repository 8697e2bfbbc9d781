#include "vgrsi/broker.hpp"

#include <cmath>

#include "vgrsi/error.hpp"

namespace vgrsi {

std::string_view to_string(ExitReason r) {
    switch (r) {
        case ExitReason::StopLoss: return "SL";
        case ExitReason::TakeProfit: return "TP";
        case ExitReason::EndOfWindow: return "end_of_window";
    }
    return "?";
}

void BrokerConfig::validate() const {
    if (!(initial_balance > 0)) throw ValidationError("initial_balance must be > 0");
    if (!(leverage > 0)) throw ValidationError("leverage must be > 0");
    if (margin_budget < 0) throw ValidationError("margin_budget must be >= 0");
    if (!(lot_step > 0)) throw ValidationError("lot_step must be > 0");
}

AccountState::AccountState(const BrokerConfig& cfg)
    : initial_balance(cfg.initial_balance),
      balance(cfg.initial_balance),
      equity(cfg.initial_balance),
      peak_equity(cfg.initial_balance),
      leverage(cfg.leverage) {}

double AccountState::margin_in_use() const {
    double m = 0;
    for (const auto& p : open_positions) m += p.margin_used;
    return m;
}

double round_cents(double amount) { return std::round(amount * 100.0) / 100.0; }

double gross_pnl(const Position& p, double exit_price, const InstrumentSpec& spec) {
    return (exit_price - p.entry_price) * sign_of(p.direction) * p.volume_lots * spec.contract_size;
}

void AccountState::mark(const Quote& q, const InstrumentSpec& spec) {
    double unrealized = 0;
    for (const auto& p : open_positions) {
        const double px = p.direction == Direction::Long ? q.bid : q.ask;
        unrealized += gross_pnl(p, px, spec) - p.open_commission;
    }
    equity = balance + unrealized;
    if (equity > peak_equity) peak_equity = equity;
}

OrderResult open_position(AccountState& account, const Signal& signal, const Quote& market,
                          const InstrumentSpec& spec, const BrokerConfig& cfg) {
    auto reject = [&](std::string why) { return OrderRejection{signal.time, signal.direction, std::move(why)}; };
    if (account.open_positions.size() >= cfg.max_open_positions) return reject("position cap reached");
    if (!(cfg.margin_budget > 0)) return reject("zero margin budget");

    const double entry = signal.direction == Direction::Long ? market.ask : market.bid;
    if (!(entry > 0)) return reject("non-positive entry price");
    const double raw_lots = cfg.margin_budget * account.leverage / (entry * spec.contract_size);
    const double steps = std::floor(raw_lots / cfg.lot_step + 1e-9);
    const double lots = steps * cfg.lot_step;
    if (!(lots > 0)) return reject("budget below minimum lot");

    const double margin = lots * spec.contract_size * entry / account.leverage;
    if (account.equity - account.margin_in_use() < margin) return reject("insufficient margin");
    if (!(signal.sl_distance_points > 0)) return reject("non-positive SL/TP distance");

    Position p;
    p.id = account.next_id++;
    p.direction = signal.direction;
    p.entry_price = entry;
    p.volume_lots = lots;
    const double offset = signal.sl_distance_points * spec.point;
    const double tp_offset = signal.tp_distance_points * spec.point;
    if (p.direction == Direction::Long) {
        p.sl_price = entry - offset;
        p.tp_price = entry + tp_offset;
    } else {
        p.sl_price = entry + offset;
        p.tp_price = entry - tp_offset;
    }
    p.open_time = signal.time;
    p.margin_used = margin;
    p.open_commission = spec.commission_per_lot * lots;
    account.open_positions.push_back(p);
    account.mark(market, spec);
    return p;
}

namespace {

TradeRecord realize(AccountState& account, const Position& p, double exit_price, Timestamp when, ExitReason why,
                    const InstrumentSpec& spec) {
    TradeRecord r;
    r.position = p;
    r.exit_price = exit_price;
    r.exit_time = when;
    r.reason = why;
    r.commission_paid = 2.0 * spec.commission_per_lot * p.volume_lots;
    r.realized_pnl = round_cents(gross_pnl(p, exit_price, spec) - r.commission_paid);
    account.balance += r.realized_pnl;
    return r;
}

}  // namespace

std::vector<TradeRecord> step_bar(AccountState& account, const Candle& bar, const InstrumentSpec& spec) {
    std::vector<TradeRecord> closed;
    const double hs = spec.half_spread();
    const Timestamp when = bar.close_time();
    std::vector<Position> still_open;
    still_open.reserve(account.open_positions.size());
    for (const auto& p : account.open_positions) {
        bool sl_hit, tp_hit;
        if (p.direction == Direction::Long) {
            sl_hit = bar.low - hs <= p.sl_price;
            tp_hit = bar.high - hs >= p.tp_price;
        } else {
            sl_hit = bar.high + hs >= p.sl_price;
            tp_hit = bar.low + hs <= p.tp_price;
        }
        if (sl_hit) {
            closed.push_back(realize(account, p, p.sl_price, when, ExitReason::StopLoss, spec));
        } else if (tp_hit) {
            closed.push_back(realize(account, p, p.tp_price, when, ExitReason::TakeProfit, spec));
        } else {
            still_open.push_back(p);
        }
    }
    account.open_positions = std::move(still_open);
    account.mark(quote_at(bar.close, spec), spec);
    return closed;
}

std::vector<TradeRecord> close_all(AccountState& account, Timestamp time, const Quote& market,
                                   const InstrumentSpec& spec) {
    std::vector<TradeRecord> closed;
    for (const auto& p : account.open_positions) {
        const double px = p.direction == Direction::Long ? market.bid : market.ask;
        closed.push_back(realize(account, p, px, time, ExitReason::EndOfWindow, spec));
    }
    account.open_positions.clear();
    account.mark(market, spec);
    return closed;
}

}  // namespace vgrsi
