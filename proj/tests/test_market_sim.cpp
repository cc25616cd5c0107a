#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pga/analytics.hpp"
#include "pga/equilibrium.hpp"
#include "pga/market_sim.hpp"
#include "pga/oracle.hpp"

using namespace pga;

namespace {

MarketSimConfig short_run() {
  MarketSimConfig c;
  c.horizon = 0.2;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  MarketSimConfig c;
  CHECK(c.num_blocks() == 10000);
  c.volatility = -1;
  CHECK_THROWS_AS(validate_config(c), Error);
  c = MarketSimConfig{};
  c.fee_rate = 1.0;
  CHECK_THROWS_AS(validate_config(c), Error);
  c = MarketSimConfig{};
  c.num_arbitrageurs = 1;
  CHECK_THROWS_AS(validate_config(c), Error);
}

TEST_CASE("opportunity value") {
  const Opportunity none = opportunity_value(100.0, 100.05, 0.001, 100.0);
  CHECK(none.side == TradeSide::None);
  CHECK(none.value == 0.0);
  const Opportunity up = opportunity_value(100.0, 101.0, 0.001, 100.0, 1.0);
  CHECK(up.side == TradeSide::BuyOnDex);
  const double gap = 101.0 / 1.001 - 100.0;
  CHECK(up.value == doctest::Approx(0.5 * gap * gap * 100.0));
  CHECK(up.breakeven_bid == doctest::Approx(up.value - 1.0));
  const Opportunity down = opportunity_value(101.0, 100.0, 0.001, 100.0);
  CHECK(down.side == TradeSide::SellOnDex);
}

TEST_CASE("zero volatility gives a flat path and no trades") {
  MarketSimConfig c = short_run();
  c.volatility = 0.0;
  const MarketSimReport r = simulate(c);
  CHECK(r.opportunities == 0);
  CHECK(r.mad == 0.0);
  CHECK(r.dbf == 0.0);
  for (double p : r.true_prices) CHECK(p == 100.0);
}

TEST_CASE("simulation invariants") {
  const MarketSimConfig c = short_run();
  const MarketSimReport r = simulate(c);
  CHECK(r.events.size() == c.num_blocks());
  CHECK(r.true_prices.size() == c.num_blocks() + 1);
  CHECK(r.executed <= r.opportunities);
  CHECK(r.executed > 0);
  CHECK(r.era_series.size() == r.executed);
  // Gaps too small to clear the base fee stay open, so DBF is positive.
  CHECK(r.dbf > 0.0);
  CHECK(r.dbf < 1.0);
  CHECK(r.nlp == doctest::Approx(r.cfe - r.casl));
  CHECK(r.csr < r.executed_value);
  std::uint64_t binned = 0;
  for (auto n : r.revenue_distribution.counts) binned += n;
  CHECK(binned == r.executed);
  for (const BlockEvent& e : r.events) {
    if (e.outcome != BlockOutcome::ArbitrageExecuted) {
      CHECK(e.onchain_price_after == e.onchain_price_before);
      continue;
    }
    CHECK(*e.opportunity_value > c.base_fee);
    CHECK(*e.winning_bid <= *e.opportunity_value - c.base_fee + 1e-12);
    CHECK(e.participants >= 1);
    CHECK(std::abs(e.onchain_price_after - e.true_price) ==
          doctest::Approx(c.fee_rate * e.true_price));
  }
}

TEST_CASE("same seed gives identical reports") {
  const MarketSimReport a = simulate(short_run());
  const MarketSimReport b = simulate(short_run());
  CHECK(a.true_prices == b.true_prices);
  CHECK(a.csr == b.csr);
  MarketSimConfig other = short_run();
  other.revert_rate_base = 0.5;
  CHECK(simulate(other).true_prices == a.true_prices);
}

TEST_CASE("full revert protection extracts the whole value") {
  MarketSimConfig c = short_run();
  c.revert_rate_base = 0.0;
  c.revert_rate_priority = 0.0;
  const MarketSimReport r = simulate(c);
  CHECK(r.executed == r.opportunities);
  CHECK(r.csr == doctest::Approx(r.executed_value));
  for (const BlockEvent& e : r.events) {
    if (e.outcome == BlockOutcome::ArbitrageExecuted) CHECK(e.participants == c.num_arbitrageurs);
  }
}

TEST_CASE("max-of-K sampling matches per-agent sampling") {
  const AuctionParams p = validate_params({6.0, 1.0, 0.2, 0.3, 5});
  const Equilibrium eq = solve_equilibrium(p);
  const int trials = 200000;
  Philox a(1), b(2);
  RunningStats per_agent_win, max_k_win, per_agent_fees, max_k_fees;
  for (int t = 0; t < trials; ++t) {
    double best = -1.0, fees = 0.0;
    for (int i = 0; i < p.num_agents; ++i) {
      const Action act = sample_action(eq, a);
      if (act.is_abstain()) continue;
      fees += p.revert_cost(act.amount());
      best = std::max(best, act.amount());
    }
    if (best >= 0.0) {
      fees += p.base_fee + best - p.revert_cost(best);
      per_agent_win.add(best);
    }
    per_agent_fees.add(fees);

    const int k = b.binomial(p.num_agents, 1.0 - eq.abstain_prob());
    double f2 = 0.0;
    if (k > 0) {
      const double u_max = std::pow(b.uniform_open(), 1.0 / k);
      const double win = quantile(eq, u_max);
      max_k_win.add(win);
      f2 = p.base_fee + win;
      for (int j = 1; j < k; ++j) f2 += p.revert_cost(quantile(eq, u_max * b.uniform()));
    }
    max_k_fees.add(f2);
  }
  const double se_win = std::hypot(per_agent_win.std_error(), max_k_win.std_error());
  CHECK(std::abs(per_agent_win.mean() - max_k_win.mean()) < 4.0 * se_win);
  const double se_fees = std::hypot(per_agent_fees.std_error(), max_k_fees.std_error());
  CHECK(std::abs(per_agent_fees.mean() - max_k_fees.mean()) < 4.0 * se_fees);
  CHECK(std::abs(max_k_fees.mean() - revenue_report(p).expected_revenue) <
        4.0 * max_k_fees.std_error());
}
