#include "pga/analytics.hpp"

#include <cmath>
#include <limits>

#include "pga/equilibrium.hpp"

namespace pga {

RevenueReport revenue_report(const AuctionParams& raw) {
  const AuctionParams p = validate_params(raw);
  const double V = p.value;
  const double g = p.base_fee;
  const double r1g = p.revert_rate_base * g;
  const double n = p.num_agents;
  RevenueReport out;

  if (r1g == 0.0) {
    out.abstain_prob = 0.0;
    out.participation_prob = 1.0;
    out.expected_revenue = V;
    out.base_revenue = g;
    out.priority_revenue = V - g;
    out.expected_submitted_txs = n;
    out.welfare_loss = 0.0;
    out.limits = {V, g, V - g, std::numeric_limits<double>::infinity(), true};
    return out;
  }

  const double spread = V - g;
  const double log_ratio = std::log(r1g) - std::log(spread + r1g);
  out.abstain_prob = std::exp(log_ratio / (n - 1));
  out.participation_prob = -std::expm1(log_ratio * n / (n - 1));
  out.expected_submitted_txs = -std::expm1(log_ratio / (n - 1)) * n;
  out.expected_revenue = out.participation_prob * V;
  const double losers = out.expected_submitted_txs - out.participation_prob;
  out.base_revenue = out.participation_prob * g + losers * r1g;
  out.priority_revenue = out.participation_prob * spread - losers * r1g;
  out.welfare_loss = V * std::exp(log_ratio * n / (n - 1));

  const double log_term = std::log1p(spread / r1g);
  const double denom = spread + r1g;
  out.limits.revenue = V * spread / denom;
  out.limits.base_revenue = spread * (g - r1g) / denom + r1g * log_term;
  out.limits.priority_revenue = spread - r1g * log_term;
  out.limits.submitted_txs = log_term;
  return out;
}

namespace {

void check_cost(const AuctionParams& p, double cost) {
  if (!std::isfinite(cost) || cost < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "cost must be finite and non-negative");
  }
  if (cost >= p.breakeven_bid()) {
    throw Error(ErrorCode::CostTooLarge, "cost must stay below V - g");
  }
}

}  // namespace

double scheme1_profit(const AuctionParams& raw, double cost) {
  const AuctionParams p = validate_params(raw);
  check_cost(p, cost);
  const RevenueReport r = revenue_report(p);
  return r.expected_revenue - cost * r.expected_submitted_txs;
}

double scheme1_optimal_r1(const AuctionParams& raw, double cost) {
  const AuctionParams p = validate_params(raw);
  check_cost(p, cost);
  if (cost > p.base_fee) return 1.0;
  return cost * (p.value - p.base_fee) / ((p.value - cost) * p.base_fee);
}

GridArgmax scheme1_optimal_r1_grid(const AuctionParams& raw, double cost, int points) {
  const AuctionParams p = validate_params(raw);
  check_cost(p, cost);
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  GridArgmax best{0.0, -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < points; ++i) {
    AuctionParams q = p;
    q.revert_rate_base = static_cast<double>(i) / (points - 1);
    const double profit = scheme1_profit(q, cost);
    if (profit > best.max_value) best = {q.revert_rate_base, profit};
  }
  return best;
}

double scheme2_revenue(const AuctionParams& raw, double cost) {
  const AuctionParams p = validate_params(raw);
  check_cost(p, cost);
  const double numer = p.revert_rate_base * p.base_fee + cost;
  if (numer == 0.0) return p.value;
  const double n = p.num_agents;
  const double log_ratio = std::log(numer) - std::log(p.breakeven_bid() + p.revert_rate_base * p.base_fee);
  return -std::expm1(log_ratio * n / (n - 1)) * p.value;
}

const char* to_string(SchemeWinner w) {
  switch (w) {
    case SchemeWinner::Scheme1: return "scheme1";
    case SchemeWinner::Scheme2: return "scheme2";
    case SchemeWinner::Tie: return "tie";
  }
  return "unknown";
}

SchemeComparison compare_schemes(const AuctionParams& raw, double cost, double tie_tolerance) {
  const AuctionParams p = validate_params(raw);
  check_cost(p, cost);
  SchemeComparison out;
  out.cost = cost;
  AuctionParams s1 = p;
  out.optimal_r1 = scheme1_optimal_r1(p, cost);
  s1.revert_rate_base = out.optimal_r1;
  out.scheme1_profit_at_optimum = scheme1_profit(s1, cost);
  AuctionParams s2 = p;
  s2.revert_rate_base = 0.0;
  out.scheme2_revenue_at_r1_zero = scheme2_revenue(s2, cost);
  const double gap = out.scheme2_revenue_at_r1_zero - out.scheme1_profit_at_optimum;
  if (std::abs(gap) <= tie_tolerance) {
    out.winner = SchemeWinner::Tie;
  } else {
    out.winner = gap > 0.0 ? SchemeWinner::Scheme2 : SchemeWinner::Scheme1;
  }
  return out;
}

int scheme_gap_sign_changes(const AuctionParams& params, std::span<const double> costs,
                            double tie_tolerance) {
  int changes = 0;
  int last = 0;
  for (double c : costs) {
    const SchemeComparison cmp = compare_schemes(params, c, tie_tolerance);
    const int sign = cmp.winner == SchemeWinner::Scheme2   ? 1
                     : cmp.winner == SchemeWinner::Scheme1 ? -1
                                                           : 0;
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

MevTaxParams mev_tax_reparameterize(double raw_revert_rate, double tax_rate) {
  if (!std::isfinite(raw_revert_rate) || raw_revert_rate < 0.0 || raw_revert_rate > 1.0) {
    throw Error(ErrorCode::RateOutOfRange, "revert rate must lie in [0, 1]");
  }
  if (!std::isfinite(tax_rate) || tax_rate < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "tax rate must be finite and non-negative");
  }
  return MevTaxParams{raw_revert_rate, tax_rate, raw_revert_rate,
                      raw_revert_rate / (1.0 + tax_rate), 1.0 + tax_rate};
}

double log_binomial_pmf(int n, int k, double prob) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  const double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  const double a = k == 0 ? 0.0 : k * std::log(prob);
  const double b = k == n ? 0.0 : (n - k) * std::log1p(-prob);
  return log_choose + a + b;
}

namespace {

// sum_k P(N_P = k) E[max of k draws from F*] for the equilibrium at `p`.
double expected_winning_bid(const AuctionParams& p, double tol) {
  if (p.full_revert_protection()) return p.breakeven_bid();
  const Equilibrium eq = solve_equilibrium(p);
  const int n = p.num_agents;
  const double participate = 1.0 - eq.abstain_prob();
  std::vector<double> weights(static_cast<std::size_t>(n) + 1, 0.0);
  double mass = 0.0;
  for (int k = 1; k <= n; ++k) {
    weights[k] = std::exp(log_binomial_pmf(n, k, participate));
    mass += weights[k];
  }
  double total = 0.0;
  for (int k = 1; k <= n; ++k) {
    if (weights[k] < 1e-15 * mass) continue;
    total += weights[k] * expected_max_bid(eq, k, tol);
  }
  return total;
}

}  // namespace

MevTaxReport expected_mev_tax(const AuctionParams& raw, double tax_rate, double tol) {
  const AuctionParams p = validate_params(raw);
  const MevTaxParams m = mev_tax_reparameterize(p.revert_rate_base, tax_rate);
  AuctionParams taxed = p;
  taxed.revert_rate_priority = m.revert_rate_priority;
  AuctionParams limit = p;
  limit.revert_rate_priority = 0.0;

  MevTaxReport out;
  out.tax_rate = tax_rate;
  out.upper_bound = expected_winning_bid(taxed, tol);
  out.expected_tax = tax_rate / (1.0 + tax_rate) * out.upper_bound;
  out.asymptote = expected_winning_bid(limit, tol);
  return out;
}

}  // namespace pga
