#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "vgrsi/config.hpp"
#include "vgrsi/io.hpp"
#include "vgrsi/walkforward.hpp"

namespace vgrsi {

/// Everything a CLI run needs. Built from a key/value file, then overridden
/// by flags; serialized in full into every run manifest.
struct RunConfig {
    InstrumentSpec instrument;
    std::filesystem::path data_m1;
    PriceSource price_source = PriceSource::Mid;

    Timeframe indicator_timeframe = Timeframe::M1;
    VgrsiParams indicator;

    StrategyParams strategy;
    std::optional<Timestamp> backtest_start;
    std::optional<Timestamp> backtest_end;

    WalkForwardConfig walkforward;
    BrokerConfig broker;
    SharpeConvention sharpe;

    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 1;

    /// Pushes shared settings (seed, broker, sharpe, price source) into the
    /// walk-forward block and validates everything.
    void resolve();
};

/// Relative paths are taken relative to `base_dir`.
RunConfig run_config_from_document(const KeyValueDocument& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

Json to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

}  // namespace vgrsi
