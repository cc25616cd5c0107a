#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pga/error.hpp"

namespace pga {

/// One auction instance: common value, base fee, revert penalty rates on the
/// base fee and on the priority bid, and the number of agents.
///
/// Construct through validate_params(); a value of this type that came out of
/// it always satisfies value > base_fee > 0, both rates in [0, 1] and
/// num_agents >= 2.
struct AuctionParams {
  double value = 0.0;
  double base_fee = 0.0;
  double revert_rate_base = 0.0;
  double revert_rate_priority = 0.0;
  int num_agents = 2;

  /// Breakeven priority bid V - g.
  double breakeven_bid() const { return value - base_fee; }
  /// Revert cost paid by a losing participant that bid `bid`.
  double revert_cost(double bid) const {
    return revert_rate_base * base_fee + revert_rate_priority * bid;
  }
  bool full_revert_protection() const {
    return revert_rate_base == 0.0 && revert_rate_priority == 0.0;
  }

  friend bool operator==(const AuctionParams&, const AuctionParams&) = default;
};

AuctionParams validate_params(const AuctionParams& raw);

struct Abstain {
  friend bool operator==(Abstain, Abstain) = default;
};

struct Bid {
  double amount = 0.0;
  friend bool operator==(Bid, Bid) = default;
};

/// Either abstention or a finite, non-negative priority bid.
class Action {
 public:
  Action() = default;
  Action(Abstain) {}
  Action(Bid bid);

  static Action abstain() { return Action(Abstain{}); }
  static Action bid(double amount) { return Action(Bid{amount}); }

  bool is_abstain() const { return std::holds_alternative<Abstain>(value_); }
  bool is_bid() const { return std::holds_alternative<Bid>(value_); }
  /// Bid amount; throws InvalidArgument on Abstain.
  double amount() const;

  friend bool operator==(const Action&, const Action&) = default;

 private:
  std::variant<Abstain, Bid> value_;
};

std::string to_string(const Action& action);

/// One action per agent.
class PureProfile {
 public:
  explicit PureProfile(std::vector<Action> actions) : actions_(std::move(actions)) {}

  std::size_t size() const { return actions_.size(); }
  const Action& operator[](std::size_t i) const { return actions_[i]; }
  const std::vector<Action>& actions() const { return actions_; }

  /// Copy with agent `i` switched to `action`.
  PureProfile with(std::size_t i, Action action) const;

  /// Highest participating bid, if anyone participates.
  std::optional<double> max_bid() const;

 private:
  std::vector<Action> actions_;
};

/// Symmetric mixed strategy: abstain with probability abstain_prob, otherwise
/// bid from a continuous distribution on [0, support_max].
struct MixedStrategy {
  double abstain_prob = 0.0;
  double support_max = 0.0;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
};

/// Payoff of `agent` under a pure profile, with uniform tie-breaking among the
/// highest participating bids. Abstention pays exactly 0; `entry_cost` is
/// charged to every participant.
double pure_payoff(const AuctionParams& params, const PureProfile& profile, std::size_t agent,
                   double entry_cost = 0.0);

/// Probability that `agent` wins under the pure profile.
double pure_win_probability(const PureProfile& profile, std::size_t agent);

/// Expected payoff of bidding `own_bid` when all N-1 opponents play
/// `opponents`. `entry_cost` is charged whenever the agent participates.
double expected_payoff_vs_symmetric(const AuctionParams& params, const MixedStrategy& opponents,
                                    double own_bid, double entry_cost = 0.0);

struct SettingPreset {
  std::string name;
  double revert_rate_base = 0.0;
  double revert_rate_priority = 0.0;
  std::string note;
};

/// Names of the revert-penalty settings (L1 builders, L2 sequencers, with and
/// without revert protection or MEV taxes).
const std::vector<std::string>& preset_names();

/// Settings whose penalty is a range need `rate`; fixed settings ignore it.
SettingPreset preset(std::string_view name, std::optional<double> rate = std::nullopt);

/// Copy of `params` with the preset's revert rates.
AuctionParams apply_preset(AuctionParams params, const SettingPreset& preset);

}  // namespace pga
