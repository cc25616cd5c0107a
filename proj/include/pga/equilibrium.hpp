#pragma once

#include <optional>
#include <vector>

#include "pga/model.hpp"
#include "pga/random.hpp"

namespace pga {

/// Unique symmetric mixed-strategy equilibrium of the auction.
///
/// `entry_cost` is the per-participant charge paid up front by searchers
/// (zero for the baseline auction). Indifference between abstaining and every
/// bid in the support pins down
///
///   z(b) = (r1 g + r2 b + c) / (V - g - b + r1 g + r2 b),
///   p*   = z(0)^(1/(N-1)),
///   F*(b) = (z(b)^(1/(N-1)) - p*) / (1 - p*).
///
/// z reaches 1 at b = V - g - c, so the bid support is [0, V - g - c]. For
/// c > 0 the closed form exceeds 1 on (V - g - c, V - g]; cdf() returns 1 there
/// and formula_value_at_breakeven() reports the unclamped value.
class Equilibrium {
 public:
  const AuctionParams& params() const { return params_; }
  double entry_cost() const { return entry_cost_; }
  double abstain_prob() const { return abstain_prob_; }
  /// Upper end of the bid support, V - g - c.
  double support_max() const { return params_.breakeven_bid() - entry_cost_; }

  /// Opponent strategy object for payoff evaluation.
  MixedStrategy strategy() const;

  /// Closed-form F* evaluated at b = V - g without clamping; 1 for the
  /// baseline, above 1 whenever entry_cost > 0.
  double formula_value_at_breakeven() const;

 private:
  friend Equilibrium solve_equilibrium(const AuctionParams&, double);

  Equilibrium(AuctionParams params, double entry_cost, double abstain_prob, double log_z0)
      : params_(params), entry_cost_(entry_cost), abstain_prob_(abstain_prob), log_z0_(log_z0) {}

  friend double cdf(const Equilibrium&, double);
  friend double quantile(const Equilibrium&, double);

  AuctionParams params_;
  double entry_cost_;
  double abstain_prob_;
  double log_z0_;  // log z(0); -inf when r1 g + c = 0
};

/// Throws DegenerateNoRevertCost when r1 = r2 = 0 and entry_cost = 0 (use
/// pure_equilibrium), CostTooLarge when entry_cost >= V - g.
Equilibrium solve_equilibrium(const AuctionParams& params, double entry_cost = 0.0);

/// Closed-form abstention probability p*; depends on (V, g, r1, N, c) only.
double abstain_probability(const AuctionParams& params, double entry_cost = 0.0);

/// F*(b) for b in [0, V - g]. Residue in [-1e-12, 0) is clamped to 0; a more
/// negative value raises NumericalFailure.
double cdf(const Equilibrium& eq, double bid);

/// Exact algebraic inverse of cdf() on [0, 1].
double quantile(const Equilibrium& eq, double u);

/// Abstain with probability p*, otherwise Bid(quantile(U)).
Action sample_action(const Equilibrium& eq, Philox& rng);

/// E[B*] for B* ~ F*, as the integral of 1 - F* over the support.
double expected_bid(const Equilibrium& eq, double tol = 1e-8);

/// E[max of k i.i.d. draws from F*], the integral of 1 - F*^k.
double expected_max_bid(const Equilibrium& eq, int k, double tol = 1e-8);

/// Pure-strategy equilibria for r1 = r2 = 0: the top two bids equal
/// V - g - c and everybody else is free (at or below that level).
struct PureEquilibrium {
  AuctionParams params;
  double entry_cost = 0.0;
  double top_bid = 0.0;

  /// Canonical representative: agents N-1 and N bid top_bid, the rest abstain.
  PureProfile representative() const;
};

/// Throws NotApplicable if either revert rate is nonzero.
PureEquilibrium pure_equilibrium(const AuctionParams& params, double entry_cost = 0.0);

/// Iff condition for a pure Nash equilibrium with r1 = r2 = 0: the two highest
/// participating bids both equal V - g - c.
bool is_pure_equilibrium(const AuctionParams& params, const PureProfile& profile,
                         double entry_cost = 0.0);

}  // namespace pga
