#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pga/equilibrium.hpp"
#include "pga/model.hpp"

namespace pga {

/// Mean with standard error from a Monte Carlo run.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  /// |mean - expected| <= sigmas * std_error. A zero standard error demands
  /// equality up to `floor`.
  bool within(double expected, double sigmas = 3.0, double floor = 1e-12) const;
};

/// Welford accumulator; merge() is Chan's pairwise update.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const;  // sample variance
  double std_error() const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct ReplayReport {
  McEstimate revenue;
  McEstimate base_revenue;
  McEstimate priority_revenue;
  McEstimate entry_fees;
  McEstimate submitted_txs;
  McEstimate participation;
  /// Average payoff across agents, per auction.
  McEstimate per_agent_payoff;
};

/// Plays `trials` independent auctions with every agent drawing from the
/// equilibrium. The sequencer collects g + b_w from the winner, r1 g + r2 b_j
/// from every losing participant, and the entry cost from every participant.
///
/// Trials are split into fixed chunks, each with its own Philox substream, so
/// results are bit-identical for any PGA_LAB_THREADS.
ReplayReport monte_carlo_replay(const Equilibrium& eq, std::uint64_t trials, std::uint64_t seed);

struct BestResponseScan {
  /// Supremum of deviation payoffs over the grid and Abstain.
  double max_payoff = 0.0;
  double argmax_bid = 0.0;
  bool argmax_is_abstain = false;
  /// Lowest payoff among actions the strategy actually plays (grid points in
  /// the support, plus Abstain when it has mass).
  double min_support_payoff = 0.0;
  /// Largest payoff among probe bids strictly above V - g.
  double max_probe_payoff = 0.0;

  /// Equilibrium certificate: nothing beats zero by more than tol, every
  /// played action is within tol of the best, and overbids lose money.
  bool certified(double tol = 1e-9) const {
    return max_payoff <= tol && max_payoff - min_support_payoff <= tol && max_probe_payoff < 0.0;
  }
};

/// Evaluates the payoff of every grid bid on [0, V - g], of Abstain, and of a
/// few probe bids above V - g against opponents playing `opponents`.
BestResponseScan best_response_scan(const AuctionParams& params, const MixedStrategy& opponents,
                                    int grid_points, double entry_cost = 0.0);

BestResponseScan best_response_scan(const Equilibrium& eq, int grid_points);

enum class DeviationRule {
  OverbidderAbstains,     // top bid above V - g
  OutbidUnderbid,         // top bid below V - g (or nobody bids)
  TopBidderUndercuts,     // unique top bid at V - g
  TiedTopBidderAbstains,  // tie at V - g with positive revert cost
};

const char* to_string(DeviationRule rule);

struct PureDeviation {
  std::size_t agent = 0;
  Action action;
  DeviationRule rule = DeviationRule::OutbidUnderbid;
  double payoff_before = 0.0;
  double payoff_after = 0.0;
};

/// Constructs a strictly profitable unilateral deviation from `profile`
/// following the four-case argument (overbid, underbid, lone top bid at
/// V - g, tie at V - g). Returns nullopt exactly when no such deviation
/// exists, which for r1 = r2 = 0 is the top-two-at-breakeven condition.
/// Every returned deviation has been re-checked with pure_payoff.
std::optional<PureDeviation> find_pure_deviation(const AuctionParams& params,
                                                 const PureProfile& profile);

struct PureEnumerationReport {
  std::uint64_t profiles = 0;
  std::uint64_t deviations_found = 0;
  /// Profiles with no constructive deviation.
  std::uint64_t undeviated = 0;
  /// Undeviated profiles that also pass the iff characterisation and admit no
  /// profitable grid deviation.
  std::uint64_t certified_equilibria = 0;
  /// Profiles where the constructive answer disagrees with the iff test.
  std::uint64_t mismatches = 0;
};

/// Exhaustive check over all profiles on the bid grid {0, h, 2h, ...} with
/// h = (V - g) / steps (extended `overshoot` steps past V - g) plus Abstain.
PureEnumerationReport enumerate_pure_profiles(const AuctionParams& params, int steps = 20,
                                              int overshoot = 2);

struct SignCheck {
  std::string quantity;   // "p_star", "expected_bid", "cdf"
  std::string parameter;  // "V", "g", "r1", "r2", "N"
  double derivative = 0.0;
  int expected_sign = 0;  // +1, -1, or 0 for "does not depend"
  bool pass = false;
};

/// Finite-difference signs of p* and E[B*] against the comparative statics:
/// p* rises in N, g, r1, falls in V, ignores r2; E[B*] rises in V, falls in
/// N, r1, r2. Continuous parameters use central differences with `step`,
/// N uses a unit forward difference.
std::vector<SignCheck> comparative_statics_check(const AuctionParams& base, double step = 1e-4);

/// Pointwise signs of dF*/d(N, V, r1, r2) on an interior bid grid: F* rises
/// in N, r1, r2 and falls in V. One SignCheck per parameter; `derivative`
/// holds the worst grid value.
std::vector<SignCheck> cdf_sign_check(const AuctionParams& base, double step = 1e-5,
                                      int grid_points = 50);

struct HillmanSametCheck {
  /// max |F(x) - (x/V)^(1/(N-1))| over grid points x in [g, V].
  double max_deviation = 0.0;
  /// max |F(x) - (g/V)^(1/(N-1))| over grid points x in [0, g).
  double floor_deviation = 0.0;
};

/// Maps the special case r1 = r2 = 1, g = c_min onto effective bids x = g + b
/// and compares against the minimum-outlay all-pay auction CDF (x/V)^(1/(N-1)).
HillmanSametCheck hillman_samet_check(double value, double min_outlay, int num_agents,
                                      int grid_points);

/// F*(b) by solving the indifference condition
///   z (V - g - b) = (1 - z)(r1 g + r2 b) + c
/// for z with bisection. Independent of the closed form in cdf().
double cdf_by_indifference(const AuctionParams& params, double entry_cost, double bid);

/// Bisection inverse of cdf(), used to cross-check quantile().
double quantile_by_bisection(const Equilibrium& eq, double u);

/// Everything the verification battery needs for one parameter point.
struct OracleReport {
  ReplayReport replay;
  BestResponseScan best_response;
  std::vector<SignCheck> comparative_signs;
};

OracleReport run_oracle(const AuctionParams& params, std::uint64_t trials, std::uint64_t seed,
                        int grid_points = 1000);

}  // namespace pga
