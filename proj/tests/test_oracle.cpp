#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "pga/analytics.hpp"
#include "pga/oracle.hpp"

using namespace pga;

TEST_CASE("running stats merge equals sequential") {
  RunningStats all, left, right;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i * 0.7) * 3 + i * 0.01;
    all.add(x);
    (i < 37 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.count() == all.count());
  CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-14));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("replay agrees with closed forms") {
  const AuctionParams p = validate_params({10.0, 1.0, 0.1, 0.1, 20});
  const ReplayReport r = monte_carlo_replay(solve_equilibrium(p), 200000, 42);
  const RevenueReport exact = revenue_report(p);
  CHECK(r.revenue.within(exact.expected_revenue, 4.0));
  CHECK(r.submitted_txs.within(exact.expected_submitted_txs, 4.0));
  CHECK(r.base_revenue.within(exact.base_revenue, 4.0));
  CHECK(r.per_agent_payoff.within(0.0, 4.0));
}

TEST_CASE("replay is independent of thread count") {
  const Equilibrium eq = solve_equilibrium(validate_params({5.0, 0.5, 0.3, 0.6, 4}));
  ::setenv("PGA_LAB_THREADS", "1", 1);
  const ReplayReport a = monte_carlo_replay(eq, 5000, 9);
  ::setenv("PGA_LAB_THREADS", "8", 1);
  const ReplayReport b = monte_carlo_replay(eq, 5000, 9);
  ::unsetenv("PGA_LAB_THREADS");
  CHECK(a.revenue.mean == b.revenue.mean);
  CHECK(a.revenue.std_error == b.revenue.std_error);
}

TEST_CASE("best response scan certifies the equilibrium") {
  const Equilibrium eq = solve_equilibrium(validate_params({10.0, 1.0, 0.2, 0.4, 6}));
  const BestResponseScan s = best_response_scan(eq, 500);
  CHECK(s.certified());
  CHECK(s.max_probe_payoff < 0.0);
}

TEST_CASE("best response scan rejects a wrong strategy") {
  const AuctionParams p = validate_params({10.0, 1.0, 0.2, 0.4, 6});
  MixedStrategy wrong = solve_equilibrium(p).strategy();
  wrong.abstain_prob *= 0.5;
  CHECK(!best_response_scan(p, wrong, 500).certified());
}

TEST_CASE("constructive pure deviations") {
  const AuctionParams p = validate_params({10.0, 1.0, 0.0, 0.0, 3});
  CHECK(!find_pure_deviation(p, PureProfile({Action::bid(9), Action::bid(9), Action::abstain()})));
  const auto over = find_pure_deviation(p, PureProfile({Action::bid(9.5), Action::bid(2),
                                                        Action::abstain()}));
  REQUIRE(over);
  CHECK(over->rule == DeviationRule::OverbidderAbstains);
  CHECK(over->payoff_after > over->payoff_before);
  const auto under = find_pure_deviation(p, PureProfile({Action::bid(4), Action::bid(2),
                                                         Action::abstain()}));
  REQUIRE(under);
  CHECK(under->rule == DeviationRule::OutbidUnderbid);
  const auto lone = find_pure_deviation(p, PureProfile({Action::bid(9), Action::bid(2),
                                                        Action::abstain()}));
  REQUIRE(lone);
  CHECK(lone->rule == DeviationRule::TopBidderUndercuts);
  const AuctionParams costly = validate_params({10.0, 1.0, 0.1, 0.0, 3});
  const auto tied = find_pure_deviation(costly, PureProfile({Action::bid(9), Action::bid(9),
                                                             Action::abstain()}));
  REQUIRE(tied);
  CHECK(tied->rule == DeviationRule::TiedTopBidderAbstains);
}

TEST_CASE("pure enumeration has no mismatches") {
  const AuctionParams p = validate_params({4.0, 1.0, 0.0, 0.0, 3});
  const PureEnumerationReport r = enumerate_pure_profiles(p, 6, 2);
  CHECK(r.mismatches == 0);
  CHECK(r.undeviated == r.certified_equilibria);
  CHECK(r.certified_equilibria > 0);
  CHECK(r.profiles == r.deviations_found + r.undeviated);
}

TEST_CASE("comparative statics signs away from the r1 terms") {
  const auto checks =
      comparative_statics_check(validate_params({10.0, 1.0, 0.2, 0.3, 6}));
  REQUIRE(!checks.empty());
  for (const SignCheck& s : checks) {
    if (s.parameter == "r1" && s.quantity == "expected_bid") continue;
    CAPTURE(s.quantity);
    CAPTURE(s.parameter);
    CHECK(s.pass);
  }
}

TEST_CASE("minimum-outlay special case") {
  const HillmanSametCheck h = hillman_samet_check(10.0, 1.0, 4, 400);
  CHECK(h.max_deviation < 1e-12);
  CHECK(h.floor_deviation < 1e-12);
}
