#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pga/random.hpp"

namespace pga {

/// CEX-DEX arbitrage simulation settings. Time is measured in the same unit
/// as drift and volatility (per unit time, per square-root unit time); the
/// defaults run 10^4 blocks over one unit of time.
struct MarketSimConfig {
  double drift = 0.0;
  double volatility = 0.05;
  double horizon = 1.0;
  double block_time = 1e-4;
  double initial_price = 100.0;
  double fee_rate = 0.001;
  double liquidity_depth = 100.0;
  double base_fee = 1.0;
  double revert_rate_base = 0.1;
  double revert_rate_priority = 0.1;
  int num_arbitrageurs = 5;
  std::uint64_t seed = 0;
  int histogram_bins = 20;

  /// Number of blocks, ceil(T / block_time).
  std::size_t num_blocks() const;

  friend bool operator==(const MarketSimConfig&, const MarketSimConfig&) = default;
};

/// Throws ConfigInvalid on any violated bound.
MarketSimConfig validate_config(const MarketSimConfig& raw);

/// True prices at t = 0, dt, ..., num_blocks * dt by exact log-space stepping.
std::vector<double> gbm_path(const MarketSimConfig& config, Philox& rng);

enum class TradeSide {
  None,
  SellOnDex,  // DEX price above the CEX price net of the fee
  BuyOnDex,   // DEX price below the CEX price net of the fee
};

struct Opportunity {
  TradeSide side = TradeSide::None;
  /// V = v * L.
  double value = 0.0;
  /// Breakeven priority bid V - g (may be negative).
  double breakeven_bid = 0.0;
  /// Traded volume on the DEX.
  double volume = 0.0;
};

/// Value of closing the gap between DEX price p_d and CEX price p_c against
/// a pool with fee f and depth L; `base_fee` only enters the breakeven bid.
Opportunity opportunity_value(double dex_price, double cex_price, double fee_rate,
                              double liquidity_depth, double base_fee = 0.0);

enum class BlockOutcome { NoOpportunity, AllAbstained, ArbitrageExecuted };

const char* to_string(BlockOutcome outcome);

struct BlockEvent {
  std::size_t block_index = 0;
  double true_price = 0.0;
  double onchain_price_before = 0.0;
  double onchain_price_after = 0.0;
  /// V = v L when the opportunity clears the base fee.
  std::optional<double> opportunity_value;
  /// |p_true - p_onchain_before|.
  double discrepancy = 0.0;
  BlockOutcome outcome = BlockOutcome::NoOpportunity;
  std::optional<double> winning_bid;
  int participants = 0;
  double sequencer_fees = 0.0;
  double volume = 0.0;
  double lp_fees = 0.0;
  /// |p_true - p_onchain_before| / 2 * volume.
  double lp_adverse_loss = 0.0;
  /// Arbitrageur gross profit v L, the alternative LP loss measure.
  double lp_gross_loss = 0.0;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;
};

struct MarketSimReport {
  MarketSimConfig config;
  std::vector<BlockEvent> events;
  std::vector<double> true_prices;
  std::vector<double> onchain_prices;
  std::size_t opportunities = 0;
  std::size_t executed = 0;
  double mad = 0.0;
  double dbf = 0.0;
  double max_deviation = 0.0;
  double cfe = 0.0;
  double casl = 0.0;
  double nlp = 0.0;
  /// Sum of v L over executed events.
  double gross_lp_loss = 0.0;
  double csr = 0.0;
  /// Total value V over executed events, for the rent-dissipation check.
  double executed_value = 0.0;
  std::vector<double> era_series;
  Histogram revenue_distribution;
};

/// Runs one sequential simulation. The price path uses substream 0 of the
/// seed and auction draws substream 1, so configs that differ only in
/// auction parameters see the same true-price path.
MarketSimReport simulate(const MarketSimConfig& config);

}  // namespace pga
