#include "pga/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pga/quadrature.hpp"

namespace pga {

namespace {

constexpr double kClampTolerance = 1e-12;

double check_entry_cost(const AuctionParams& params, double entry_cost) {
  if (!std::isfinite(entry_cost) || entry_cost < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "entry cost must be finite and non-negative");
  }
  if (entry_cost >= params.breakeven_bid()) {
    throw Error(ErrorCode::CostTooLarge, "entry cost must stay below V - g");
  }
  return entry_cost;
}

double log_z_at_zero(const AuctionParams& p, double entry_cost) {
  const double numer = p.revert_rate_base * p.base_fee + entry_cost;
  if (numer == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(numer) - std::log(p.breakeven_bid() + p.revert_rate_base * p.base_fee);
}

}  // namespace

double abstain_probability(const AuctionParams& params, double entry_cost) {
  const double log_z0 = log_z_at_zero(params, entry_cost);
  return std::exp(log_z0 / (params.num_agents - 1));
}

Equilibrium solve_equilibrium(const AuctionParams& raw, double entry_cost) {
  const AuctionParams params = validate_params(raw);
  check_entry_cost(params, entry_cost);
  if (params.full_revert_protection() && entry_cost == 0.0) {
    throw Error(ErrorCode::DegenerateNoRevertCost,
                "no revert cost and no entry cost: the equilibrium is in pure strategies");
  }
  const double log_z0 = log_z_at_zero(params, entry_cost);
  return Equilibrium(params, entry_cost, std::exp(log_z0 / (params.num_agents - 1)), log_z0);
}

MixedStrategy Equilibrium::strategy() const {
  const Equilibrium self = *this;
  return MixedStrategy{abstain_prob_, support_max(),
                       [self](double b) { return cdf(self, b); },
                       [self](double u) { return quantile(self, u); }};
}

double Equilibrium::formula_value_at_breakeven() const {
  // z(V - g) = (r1 g + r2 (V - g) + c) / (r1 g + r2 (V - g))
  const double loss = params_.revert_cost(params_.breakeven_bid());
  if (loss == 0.0) return std::numeric_limits<double>::infinity();
  const double z = (loss + entry_cost_) / loss;
  return (std::pow(z, 1.0 / (params_.num_agents - 1)) - abstain_prob_) / (1.0 - abstain_prob_);
}

double cdf(const Equilibrium& eq, double bid) {
  const AuctionParams& p = eq.params_;
  if (!(bid >= 0.0 && bid <= p.breakeven_bid())) {
    throw Error(ErrorCode::OutOfSupport, "bid outside [0, V - g]");
  }
  if (bid >= eq.support_max()) return 1.0;
  const double exponent = 1.0 / (p.num_agents - 1);
  const double loss = p.revert_cost(bid) + eq.entry_cost_;
  const double log_z = std::log(loss) - std::log(p.breakeven_bid() - bid + p.revert_cost(bid));
  double f;
  if (std::isinf(eq.log_z0_)) {
    f = std::exp(exponent * log_z);
  } else {
    f = eq.abstain_prob_ * std::expm1(exponent * (log_z - eq.log_z0_)) /
        -std::expm1(exponent * eq.log_z0_);
  }
  if (f < 0.0) {
    if (f < -kClampTolerance) {
      throw Error(ErrorCode::NumericalFailure, "equilibrium cdf went negative");
    }
    return 0.0;
  }
  return std::min(f, 1.0);
}

double quantile(const Equilibrium& eq, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "quantile level must lie in [0, 1]");
  }
  if (u == 0.0) return 0.0;
  if (u == 1.0) return eq.support_max();
  const AuctionParams& p = eq.params_;
  const double pstar = eq.abstain_prob_;
  const double q = std::pow(pstar + (1.0 - pstar) * u, p.num_agents - 1);
  const double base_loss = p.revert_rate_base * p.base_fee;
  const double r2 = p.revert_rate_priority;
  const double b = (q * (p.breakeven_bid() + base_loss) - base_loss - eq.entry_cost_) /
                   (r2 * (1.0 - q) + q);
  return std::clamp(b, 0.0, eq.support_max());
}

Action sample_action(const Equilibrium& eq, Philox& rng) {
  if (rng.uniform() < eq.abstain_prob()) return Action::abstain();
  return Action::bid(quantile(eq, rng.uniform()));
}

double expected_bid(const Equilibrium& eq, double tol) {
  return expected_max_bid(eq, 1, tol);
}

double expected_max_bid(const Equilibrium& eq, int k, double tol) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "need at least one draw");
  const auto tail = [&](double x) { return 1.0 - std::pow(cdf(eq, x), k); };
  const auto res = integrate(tail, 0.0, eq.support_max(), tol);
  return res.value;
}

PureProfile PureEquilibrium::representative() const {
  std::vector<Action> actions(static_cast<std::size_t>(params.num_agents), Action::abstain());
  actions[actions.size() - 1] = Action::bid(top_bid);
  actions[actions.size() - 2] = Action::bid(top_bid);
  return PureProfile(std::move(actions));
}

PureEquilibrium pure_equilibrium(const AuctionParams& raw, double entry_cost) {
  const AuctionParams params = validate_params(raw);
  check_entry_cost(params, entry_cost);
  if (!params.full_revert_protection()) {
    throw Error(ErrorCode::NotApplicable,
                "a revert rate is nonzero: no pure-strategy equilibrium exists");
  }
  return PureEquilibrium{params, entry_cost, params.breakeven_bid() - entry_cost};
}

bool is_pure_equilibrium(const AuctionParams& params, const PureProfile& profile,
                         double entry_cost) {
  if (!params.full_revert_protection()) return false;
  std::vector<double> bids;
  for (const auto& a : profile.actions()) {
    if (a.is_bid()) bids.push_back(a.amount());
  }
  if (bids.size() < 2) return false;
  std::partial_sort(bids.begin(), bids.begin() + 2, bids.end(), std::greater<>());
  const double target = params.breakeven_bid() - entry_cost;
  return bids[0] == target && bids[1] == target;
}

}  // namespace pga
