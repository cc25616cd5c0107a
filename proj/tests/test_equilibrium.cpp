#include <doctest.h>

#include <cmath>

#include "pga/equilibrium.hpp"
#include "pga/oracle.hpp"

using namespace pga;

namespace {

AuctionParams params(int n, double r1 = 0.1, double r2 = 0.1) {
  return validate_params({10.0, 1.0, r1, r2, n});
}

}  // namespace

TEST_CASE("abstention probability matches frozen values") {
  CHECK(abstain_probability(params(20)) == doctest::Approx(0.788664982765905).epsilon(1e-13));
  CHECK(abstain_probability(params(2)) == doctest::Approx(0.1 / 9.1).epsilon(1e-13));
  CHECK(abstain_probability(params(20), 0.0) ==
        solve_equilibrium(params(20)).abstain_prob());
}

TEST_CASE("cdf endpoints and a frozen interior value") {
  const Equilibrium eq = solve_equilibrium(params(2));
  CHECK(cdf(eq, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cdf(eq, 9.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(cdf(eq, 4.5) == doctest::Approx(0.0990099009900990).epsilon(1e-12));
  CHECK(eq.formula_value_at_breakeven() == doctest::Approx(1.0));
}

TEST_CASE("cdf agrees with the indifference solver") {
  for (int n : {2, 5, 20}) {
    const Equilibrium eq = solve_equilibrium(params(n, 0.3, 0.7), 0.2);
    for (double b : {0.0, 1.0, 4.0, 8.0, 8.79}) {
      CHECK(cdf(eq, b) == doctest::Approx(cdf_by_indifference(eq.params(), 0.2, b)).epsilon(1e-9));
    }
  }
}

TEST_CASE("quantile inverts cdf") {
  const Equilibrium eq = solve_equilibrium(params(20));
  for (double u : {0.0, 0.01, 0.25, 0.5, 0.9, 1.0}) {
    const double b = quantile(eq, u);
    CHECK(cdf(eq, b) == doctest::Approx(u).epsilon(1e-12));
    CHECK(b == doctest::Approx(quantile_by_bisection(eq, u)).epsilon(1e-9));
  }
  CHECK(quantile(eq, 0.5) == doctest::Approx(4.764759538).epsilon(1e-9));
}

TEST_CASE("expected bid") {
  CHECK(expected_bid(solve_equilibrium(params(20))) == doctest::Approx(4.640468508).epsilon(1e-9));
  // Minimum-outlay special case: E[B*] = (V - g) / 2 at N = 2.
  const AuctionParams hs = validate_params({1.0, 0.1, 1.0, 1.0, 2});
  CHECK(expected_bid(solve_equilibrium(hs), 1e-12) == doctest::Approx(0.45).epsilon(1e-10));
  const Equilibrium eq = solve_equilibrium(params(5));
  CHECK(expected_max_bid(eq, 1) == doctest::Approx(expected_bid(eq)));
  CHECK(expected_max_bid(eq, 3) > expected_max_bid(eq, 2));
}

TEST_CASE("r2 does not move abstention") {
  CHECK(abstain_probability(params(7, 0.2, 0.0)) == abstain_probability(params(7, 0.2, 1.0)));
}

TEST_CASE("entry cost shrinks the support") {
  const AuctionParams p = validate_params({10.0, 1.0, 0.0, 0.1, 2});
  const Equilibrium eq = solve_equilibrium(p, 0.5);
  CHECK(eq.abstain_prob() == doctest::Approx(0.5 / 9.0).epsilon(1e-13));
  CHECK(eq.support_max() == 8.5);
  CHECK(cdf(eq, 8.5) == doctest::Approx(1.0));
  CHECK(cdf(eq, 8.9) == 1.0);
  CHECK(eq.formula_value_at_breakeven() > 1.0);
  CHECK_THROWS_AS(solve_equilibrium(p, 9.0), Error);
}

TEST_CASE("degenerate and pure cases") {
  const AuctionParams p = validate_params({10.0, 1.0, 0.0, 0.0, 4});
  CHECK_THROWS_AS(solve_equilibrium(p), Error);
  CHECK_THROWS_AS(pure_equilibrium(params(4)), Error);
  const PureEquilibrium pe = pure_equilibrium(p);
  CHECK(pe.top_bid == 9.0);
  const PureProfile rep = pe.representative();
  CHECK(rep.size() == 4);
  CHECK(is_pure_equilibrium(p, rep));
  CHECK(!is_pure_equilibrium(p, PureProfile({Action::bid(9.0), Action::bid(8.0),
                                             Action::abstain(), Action::abstain()})));
  CHECK(is_pure_equilibrium(p, PureProfile({Action::bid(9.0), Action::bid(9.0), Action::bid(9.0),
                                            Action::bid(0.0)})));
}

TEST_CASE("sampling reproduces p*") {
  const Equilibrium eq = solve_equilibrium(params(10));
  Philox rng(11);
  int abstain = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Action a = sample_action(eq, rng);
    if (a.is_abstain()) ++abstain;
    else CHECK(a.amount() <= 9.0);
  }
  const double p = eq.abstain_prob();
  CHECK(std::abs(double(abstain) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}
