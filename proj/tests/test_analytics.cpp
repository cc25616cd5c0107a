#include <doctest.h>

#include <cmath>
#include <vector>

#include "pga/analytics.hpp"
#include "pga/equilibrium.hpp"

using namespace pga;

namespace {

AuctionParams params(int n, double r1 = 0.1, double r2 = 0.1) {
  return validate_params({10.0, 1.0, r1, r2, n});
}

}  // namespace

TEST_CASE("revenue report frozen values") {
  const RevenueReport r = revenue_report(params(20));
  CHECK(r.abstain_prob == doctest::Approx(0.788664982765905).epsilon(1e-13));
  CHECK(r.participation_prob == doctest::Approx(0.991333351837737).epsilon(1e-13));
  CHECK(r.expected_revenue == doctest::Approx(9.91333351837737).epsilon(1e-13));
  CHECK(r.expected_submitted_txs == doctest::Approx(4.22670034468189).epsilon(1e-12));
  CHECK(r.base_revenue == doctest::Approx(1.31487005112215).epsilon(1e-10));
  CHECK(r.priority_revenue == doctest::Approx(8.59846346725522).epsilon(1e-10));
  CHECK(r.base_revenue + r.priority_revenue == doctest::Approx(r.expected_revenue));
  CHECK(r.welfare_loss == doctest::Approx(10.0 - r.expected_revenue));
}

TEST_CASE("large-N limits") {
  const RevenueLimits l = revenue_report(params(20)).limits;
  CHECK(l.revenue == doctest::Approx(9.89010989010989).epsilon(1e-13));
  CHECK(l.submitted_txs == doctest::Approx(4.51085950651685).epsilon(1e-13));
  CHECK(l.base_revenue == doctest::Approx(1.34119584076158).epsilon(1e-12));
  CHECK(l.priority_revenue == doctest::Approx(8.54891404934831).epsilon(1e-12));
  CHECK(!l.submitted_txs_unbounded);
  const RevenueReport far = revenue_report(params(20000));
  CHECK(far.expected_revenue == doctest::Approx(l.revenue).epsilon(1e-3));
  CHECK(far.expected_submitted_txs == doctest::Approx(l.submitted_txs).epsilon(1e-3));
}

TEST_CASE("full revert protection") {
  const RevenueReport r = revenue_report(params(6, 0.0, 0.0));
  CHECK(r.expected_revenue == 10.0);
  CHECK(r.expected_submitted_txs == 6.0);
  CHECK(r.limits.submitted_txs_unbounded);
}

TEST_CASE("scheme 1 optimum") {
  const AuctionParams p = params(5, 0.0, 0.1);
  CHECK(scheme1_optimal_r1(p, 0.5) == doctest::Approx(0.473684210526316).epsilon(1e-13));
  CHECK(scheme1_optimal_r1(p, 2.0) == 1.0);
  const GridArgmax grid = scheme1_optimal_r1_grid(p, 0.5);
  CHECK(std::abs(grid.argmax - 0.473684210526316) < 2e-4);
  CHECK(grid.max_value >= scheme1_profit(p, 0.5) - 1e-12);
}

TEST_CASE("scheme 2 revenue and comparison") {
  const AuctionParams p = params(2, 0.0, 0.1);
  const double p2 = 0.5 / 9.0;
  CHECK(scheme2_revenue(p, 0.5) == doctest::Approx((1 - p2 * p2) * 10.0).epsilon(1e-13));
  const SchemeComparison c = compare_schemes(p, 0.5);
  CHECK(c.optimal_r1 == doctest::Approx(0.473684210526316));
  CHECK(c.winner == SchemeWinner::Scheme2);
  const std::vector<double> costs{0.1, 0.5, 1.0, 2.0, 4.0};
  CHECK(scheme_gap_sign_changes(p, costs) == 0);
}

TEST_CASE("mev tax") {
  const MevTaxParams m = mev_tax_reparameterize(0.2, 1.0);
  CHECK(m.revert_rate_base == 0.2);
  CHECK(m.revert_rate_priority == doctest::Approx(0.1));
  CHECK(m.bid_scale == 2.0);
  const AuctionParams p = params(5, 0.2, 0.2);
  const MevTaxReport zero = expected_mev_tax(p, 0.0);
  CHECK(zero.expected_tax == 0.0);
  const MevTaxReport r = expected_mev_tax(p, 1.0);
  CHECK(r.expected_tax > 0.0);
  CHECK(r.expected_tax <= r.upper_bound);
  const MevTaxReport big = expected_mev_tax(p, 1e6);
  CHECK(big.expected_tax == doctest::Approx(big.asymptote).epsilon(1e-4));
}

TEST_CASE("binomial pmf sums to one") {
  double s = 0;
  for (int k = 0; k <= 30; ++k) s += std::exp(log_binomial_pmf(30, k, 0.37));
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::exp(log_binomial_pmf(4, 2, 0.5)) == doctest::Approx(6.0 / 16));
}
