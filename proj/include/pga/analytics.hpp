#pragma once

#include <span>
#include <vector>

#include "pga/model.hpp"

namespace pga {

struct RevenueLimits {
  double revenue = 0.0;
  double base_revenue = 0.0;
  double priority_revenue = 0.0;
  double submitted_txs = 0.0;
  /// Full revert protection on the base fee: submissions grow without bound.
  bool submitted_txs_unbounded = false;
};

/// Equilibrium outcome quantities for one auction.
struct RevenueReport {
  double abstain_prob = 0.0;
  double participation_prob = 0.0;
  double expected_revenue = 0.0;
  double base_revenue = 0.0;
  double priority_revenue = 0.0;
  double expected_submitted_txs = 0.0;
  /// V minus expected revenue: value left unextracted.
  double welfare_loss = 0.0;
  RevenueLimits limits;
};

/// Closed forms for revenue, its base/priority split, blockspace usage and
/// their N -> infinity limits. Covers full revert protection (r1 = 0) too:
/// everybody participates, revenue is V and submissions equal N.
RevenueReport revenue_report(const AuctionParams& params);

/// Expected sequencer profit when it absorbs a cost `cost` per submitted
/// transaction: (1 - p*^N) V - c (1 - p*) N.
double scheme1_profit(const AuctionParams& params, double cost);

/// Profit-maximising r1 for scheme1_profit:
///   c (V - g) / ((V - c) g)  if c <= g,   1 otherwise.
double scheme1_optimal_r1(const AuctionParams& params, double cost);

struct GridArgmax {
  double argmax = 0.0;
  double max_value = 0.0;
};

/// Brute-force maximiser of scheme1_profit over `points` evenly spaced r1 in [0, 1].
GridArgmax scheme1_optimal_r1_grid(const AuctionParams& params, double cost, int points = 10001);

/// Expected sequencer revenue when searchers pay the entry cost themselves:
/// (1 - p*^N) V with p* the entry-cost equilibrium abstention probability.
double scheme2_revenue(const AuctionParams& params, double cost);

enum class SchemeWinner { Scheme1, Scheme2, Tie };

const char* to_string(SchemeWinner w);

struct SchemeComparison {
  double cost = 0.0;
  double optimal_r1 = 0.0;
  double scheme1_profit_at_optimum = 0.0;
  double scheme2_revenue_at_r1_zero = 0.0;
  SchemeWinner winner = SchemeWinner::Tie;
};

/// Scheme 1 at its optimal r1 against Scheme 2 at r1 = 0. Differences within
/// `tie_tolerance` are reported as a tie.
SchemeComparison compare_schemes(const AuctionParams& params, double cost,
                                 double tie_tolerance = 1e-9);

/// Number of sign changes of (Scheme 2 - Scheme 1) along `costs`, ignoring
/// points inside the tie tolerance.
int scheme_gap_sign_changes(const AuctionParams& params, std::span<const double> costs,
                            double tie_tolerance = 1e-9);

/// Revert rates after folding an MEV tax into the bid: with effective bid
/// b = (1 + tau) * raw_bid, the losing-side penalty on b is r / (1 + tau).
struct MevTaxParams {
  double raw_revert_rate = 0.0;
  double tax_rate = 0.0;
  double revert_rate_base = 0.0;
  double revert_rate_priority = 0.0;
  /// Effective bid per unit of raw bid, 1 + tau.
  double bid_scale = 1.0;
};

MevTaxParams mev_tax_reparameterize(double raw_revert_rate, double tax_rate);

struct MevTaxReport {
  double tax_rate = 0.0;
  double expected_tax = 0.0;
  /// Expected winning effective bid at this tax rate; bounds expected_tax.
  double upper_bound = 0.0;
  /// Expected tax in the tau -> infinity limit (r2 -> 0, scale -> 1).
  double asymptote = 0.0;
};

/// Expected MEV tax tau/(1+tau) * sum_k P(N_P = k) E[max of k draws], with
/// r = params.revert_rate_base as the raw revert rate.
MevTaxReport expected_mev_tax(const AuctionParams& params, double tax_rate, double tol = 1e-8);

/// log P(X = k) for X ~ Binomial(n, prob), evaluated in log space.
double log_binomial_pmf(int n, int k, double prob);

}  // namespace pga
