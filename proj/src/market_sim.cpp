#include "pga/market_sim.hpp"

#include <algorithm>
#include <cmath>

#include "pga/equilibrium.hpp"
#include "pga/error.hpp"

namespace pga {

namespace {

// Post-arbitrage prices sit on the band edge; rounding can leave them one ulp
// outside, which must not count as a band violation.
constexpr double kBandSlack = 1e-12;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::ConfigInvalid, what);
}

}  // namespace

std::size_t MarketSimConfig::num_blocks() const {
  const double ratio = horizon / block_time;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

MarketSimConfig validate_config(const MarketSimConfig& c) {
  require(std::isfinite(c.drift), "drift must be finite");
  require(std::isfinite(c.volatility) && c.volatility >= 0.0, "volatility must be >= 0");
  require(std::isfinite(c.block_time) && c.block_time > 0.0, "block_time must be > 0");
  require(std::isfinite(c.horizon) && c.horizon >= c.block_time, "horizon must be >= block_time");
  require(c.horizon / c.block_time <= 1e8, "too many blocks");
  require(std::isfinite(c.initial_price) && c.initial_price > 0.0, "initial_price must be > 0");
  require(c.fee_rate >= 0.0 && c.fee_rate < 1.0, "fee_rate must lie in [0, 1)");
  require(std::isfinite(c.liquidity_depth) && c.liquidity_depth > 0.0,
          "liquidity_depth must be > 0");
  require(std::isfinite(c.base_fee) && c.base_fee > 0.0, "base_fee must be > 0");
  require(c.revert_rate_base >= 0.0 && c.revert_rate_base <= 1.0, "r1 must lie in [0, 1]");
  require(c.revert_rate_priority >= 0.0 && c.revert_rate_priority <= 1.0,
          "r2 must lie in [0, 1]");
  require(c.num_arbitrageurs >= 2, "need at least two arbitrageurs");
  require(c.histogram_bins >= 1, "histogram needs at least one bin");
  return c;
}

std::vector<double> gbm_path(const MarketSimConfig& raw, Philox& rng) {
  const MarketSimConfig c = validate_config(raw);
  const std::size_t blocks = c.num_blocks();
  const double dt = c.block_time;
  const double drift = (c.drift - 0.5 * c.volatility * c.volatility) * dt;
  const double scale = c.volatility * std::sqrt(dt);
  std::vector<double> path(blocks + 1);
  path[0] = c.initial_price;
  if (scale == 0.0) {
    // Deterministic limit, evaluated directly so it carries no drift error.
    for (std::size_t k = 1; k <= blocks; ++k) {
      path[k] = c.initial_price * std::exp(drift * static_cast<double>(k));
    }
    return path;
  }
  double log_p = std::log(c.initial_price);
  for (std::size_t k = 1; k <= blocks; ++k) {
    log_p += drift + scale * rng.normal();
    path[k] = std::exp(log_p);
  }
  return path;
}

Opportunity opportunity_value(double p_d, double p_c, double f, double depth, double base_fee) {
  Opportunity out;
  if (p_d * (1.0 - f) > p_c) {
    const double gap = p_d - p_c / (1.0 - f);
    out.side = TradeSide::SellOnDex;
    out.value = 0.5 * gap * gap * depth;
    out.volume = gap * depth;
  } else if (p_d * (1.0 + f) < p_c) {
    const double gap = p_c / (1.0 + f) - p_d;
    out.side = TradeSide::BuyOnDex;
    out.value = 0.5 * gap * gap * depth;
    out.volume = gap * depth;
  }
  out.breakeven_bid = out.value - base_fee;
  return out;
}

const char* to_string(BlockOutcome outcome) {
  switch (outcome) {
    case BlockOutcome::NoOpportunity: return "no_opportunity";
    case BlockOutcome::AllAbstained: return "all_abstained";
    case BlockOutcome::ArbitrageExecuted: return "executed";
  }
  return "unknown";
}

namespace {

struct AuctionDraw {
  int participants = 0;
  double winning_bid = 0.0;
  double fees = 0.0;
};

// Participation count, then the winning bid as the quantile of the max of K
// uniforms and each loser as a uniform draw below it.
AuctionDraw draw_auction(const AuctionParams& params, Philox& rng) {
  AuctionDraw out;
  const double g = params.base_fee;
  if (params.full_revert_protection()) {
    out.participants = params.num_agents;
    out.winning_bid = params.breakeven_bid();
    out.fees = g + out.winning_bid;
    return out;
  }
  const Equilibrium eq = solve_equilibrium(params);
  out.participants = rng.binomial(params.num_agents, 1.0 - eq.abstain_prob());
  if (out.participants == 0) return out;
  const double u_max = std::pow(rng.uniform_open(), 1.0 / out.participants);
  out.winning_bid = quantile(eq, u_max);
  out.fees = g + out.winning_bid;
  for (int j = 1; j < out.participants; ++j) {
    out.fees += params.revert_cost(quantile(eq, u_max * rng.uniform()));
  }
  return out;
}

}  // namespace

MarketSimReport simulate(const MarketSimConfig& raw) {
  const MarketSimConfig c = validate_config(raw);
  MarketSimReport rep;
  rep.config = c;

  Philox path_rng(c.seed, 0);
  Philox auction_rng(c.seed, 1);
  rep.true_prices = gbm_path(c, path_rng);
  const std::size_t blocks = rep.true_prices.size() - 1;
  rep.onchain_prices.resize(blocks + 1);
  rep.onchain_prices[0] = rep.true_prices[0];
  rep.events.reserve(blocks);

  double abs_dev_sum = 0.0;
  std::size_t beyond_band = 0;

  for (std::size_t k = 1; k <= blocks; ++k) {
    const double p_true = rep.true_prices[k];
    const double p_prev = rep.onchain_prices[k - 1];
    BlockEvent ev;
    ev.block_index = k;
    ev.true_price = p_true;
    ev.onchain_price_before = p_prev;
    ev.onchain_price_after = p_prev;
    ev.discrepancy = std::abs(p_true - p_prev);

    const Opportunity opp =
        opportunity_value(p_prev, p_true, c.fee_rate, c.liquidity_depth, c.base_fee);
    if (opp.side != TradeSide::None && opp.value > c.base_fee) {
      ++rep.opportunities;
      ev.opportunity_value = opp.value;
      const AuctionParams params{opp.value, c.base_fee, c.revert_rate_base,
                                 c.revert_rate_priority, c.num_arbitrageurs};
      const AuctionDraw draw = draw_auction(params, auction_rng);
      ev.participants = draw.participants;
      if (draw.participants == 0) {
        ev.outcome = BlockOutcome::AllAbstained;
      } else {
        ++rep.executed;
        ev.outcome = BlockOutcome::ArbitrageExecuted;
        ev.winning_bid = draw.winning_bid;
        ev.sequencer_fees = draw.fees;
        ev.onchain_price_after =
            p_prev > p_true ? p_true * (1.0 + c.fee_rate) : p_true * (1.0 - c.fee_rate);
        ev.volume = opp.volume;
        ev.lp_fees = c.fee_rate * opp.volume;
        ev.lp_adverse_loss = 0.5 * ev.discrepancy * opp.volume;
        ev.lp_gross_loss = opp.value;
        rep.cfe += ev.lp_fees;
        rep.casl += ev.lp_adverse_loss;
        rep.gross_lp_loss += ev.lp_gross_loss;
        rep.csr += ev.sequencer_fees;
        rep.executed_value += opp.value;
        rep.era_series.push_back(c.base_fee + draw.winning_bid);
      }
    }
    rep.onchain_prices[k] = ev.onchain_price_after;
    rep.events.push_back(ev);
  }

  for (std::size_t k = 0; k <= blocks; ++k) {
    const double dev = std::abs(rep.onchain_prices[k] - rep.true_prices[k]);
    abs_dev_sum += dev;
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (dev > c.fee_rate * rep.true_prices[k] * (1.0 + kBandSlack)) ++beyond_band;
  }
  const double samples = static_cast<double>(blocks + 1);
  rep.mad = abs_dev_sum / samples;
  rep.dbf = static_cast<double>(beyond_band) / samples;
  rep.nlp = rep.cfe - rep.casl;

  Histogram& h = rep.revenue_distribution;
  h.counts.assign(static_cast<std::size_t>(c.histogram_bins), 0);
  for (const BlockEvent& ev : rep.events) {
    if (ev.outcome == BlockOutcome::ArbitrageExecuted) h.hi = std::max(h.hi, ev.sequencer_fees);
  }
  for (const BlockEvent& ev : rep.events) {
    if (ev.outcome != BlockOutcome::ArbitrageExecuted) continue;
    std::size_t bin = h.hi > 0.0 ? static_cast<std::size_t>(ev.sequencer_fees / h.hi *
                                                            c.histogram_bins)
                                 : 0;
    ++h.counts[std::min(bin, h.counts.size() - 1)];
  }
  return rep;
}

}  // namespace pga
