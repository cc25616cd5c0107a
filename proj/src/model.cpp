#include "pga/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pga {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ValueNotAboveBaseFee: return "ValueNotAboveBaseFee";
    case ErrorCode::NonPositiveFee: return "NonPositiveFee";
    case ErrorCode::RateOutOfRange: return "RateOutOfRange";
    case ErrorCode::TooFewAgents: return "TooFewAgents";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::MissingPresetRate: return "MissingPresetRate";
    case ErrorCode::DegenerateNoRevertCost: return "DegenerateNoRevertCost";
    case ErrorCode::CostTooLarge: return "CostTooLarge";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

bool is_rate(double r) { return std::isfinite(r) && r >= 0.0 && r <= 1.0; }

}  // namespace

AuctionParams validate_params(const AuctionParams& raw) {
  if (!std::isfinite(raw.base_fee) || raw.base_fee <= 0.0) {
    throw Error(ErrorCode::NonPositiveFee, "base fee must be positive");
  }
  if (!std::isfinite(raw.value) || raw.value <= raw.base_fee) {
    throw Error(ErrorCode::ValueNotAboveBaseFee, "value must exceed the base fee");
  }
  if (!is_rate(raw.revert_rate_base) || !is_rate(raw.revert_rate_priority)) {
    throw Error(ErrorCode::RateOutOfRange, "revert rates must lie in [0, 1]");
  }
  if (raw.num_agents < 2) {
    throw Error(ErrorCode::TooFewAgents, "need at least two agents");
  }
  return raw;
}

Action::Action(Bid bid) : value_(bid) {
  if (!std::isfinite(bid.amount) || bid.amount < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "bid must be finite and non-negative");
  }
}

double Action::amount() const {
  if (const auto* b = std::get_if<Bid>(&value_)) return b->amount;
  throw Error(ErrorCode::InvalidArgument, "abstain has no bid amount");
}

std::string to_string(const Action& action) {
  if (action.is_abstain()) return "abstain";
  std::ostringstream os;
  os.precision(17);
  os << action.amount();
  return os.str();
}

PureProfile PureProfile::with(std::size_t i, Action action) const {
  auto actions = actions_;
  actions.at(i) = action;
  return PureProfile(std::move(actions));
}

std::optional<double> PureProfile::max_bid() const {
  std::optional<double> best;
  for (const auto& a : actions_) {
    if (a.is_bid() && (!best || a.amount() > *best)) best = a.amount();
  }
  return best;
}

double pure_win_probability(const PureProfile& profile, std::size_t agent) {
  if (agent >= profile.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "agent index out of range");
  }
  const Action& own = profile[agent];
  if (own.is_abstain()) return 0.0;
  const double top = *profile.max_bid();
  if (own.amount() != top) return 0.0;
  int ties = 0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != agent && profile[j].is_bid() && profile[j].amount() == own.amount()) ++ties;
  }
  return 1.0 / (1.0 + ties);
}

double pure_payoff(const AuctionParams& params, const PureProfile& profile, std::size_t agent,
                   double entry_cost) {
  if (profile.size() != static_cast<std::size_t>(params.num_agents)) {
    throw Error(ErrorCode::InvalidArgument, "profile length must equal N");
  }
  const double win = pure_win_probability(profile, agent);
  const Action& own = profile[agent];
  if (own.is_abstain()) return 0.0;
  const double b = own.amount();
  return (params.breakeven_bid() - b) * win - params.revert_cost(b) * (1.0 - win) - entry_cost;
}

double expected_payoff_vs_symmetric(const AuctionParams& params, const MixedStrategy& opponents,
                                    double own_bid, double entry_cost) {
  if (!std::isfinite(own_bid) || own_bid < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "own bid must be finite and non-negative");
  }
  const double p = opponents.abstain_prob;
  const double f = own_bid >= opponents.support_max ? 1.0 : opponents.cdf(own_bid);
  const double win = std::pow(p + (1.0 - p) * f, params.num_agents - 1);
  return win * (params.breakeven_bid() - own_bid) - (1.0 - win) * params.revert_cost(own_bid) -
         entry_cost;
}

namespace {

struct PresetRow {
  const char* name;
  bool ranged;
  bool priority_equals_base;  // ranged rows: r2 = r1, otherwise r2 = 0
  const char* note;
};

constexpr PresetRow kPresets[] = {
    {"l1-priority-fee", true, true, "L1 block builder, bids paid via priority fees"},
    {"l1-coinbase-transfer", true, false, "L1 block builder, bids paid via coinbase transfer"},
    {"l2-priority-ordering", true, true, "L2 sequencer with priority ordering"},
    {"l2-priority-ordering-mev-tax", true, false,
     "L2 sequencer with priority ordering, apps using MEV taxes"},
    {"l1-revert-protection", false, false, "L1 block builder with revert protection"},
    {"l2-revert-protection", false, false, "L2 sequencer with revert protection"},
    {"l2-revert-protection-mev-tax", false, false,
     "L2 sequencer with revert protection, apps using MEV taxes"},
};

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& row : kPresets) out.emplace_back(row.name);
    return out;
  }();
  return names;
}

SettingPreset preset(std::string_view name, std::optional<double> rate) {
  for (const auto& row : kPresets) {
    if (name != row.name) continue;
    SettingPreset out{row.name, 0.0, 0.0, row.note};
    if (row.ranged) {
      if (!rate) {
        throw Error(ErrorCode::MissingPresetRate,
                    std::string(name) + " takes a revert rate in (0, 1]");
      }
      if (!std::isfinite(*rate) || *rate <= 0.0 || *rate > 1.0) {
        throw Error(ErrorCode::RateOutOfRange, "preset rate must lie in (0, 1]");
      }
      out.revert_rate_base = *rate;
      out.revert_rate_priority = row.priority_equals_base ? *rate : 0.0;
    }
    return out;
  }
  throw Error(ErrorCode::UnknownPreset, std::string(name));
}

AuctionParams apply_preset(AuctionParams params, const SettingPreset& preset) {
  params.revert_rate_base = preset.revert_rate_base;
  params.revert_rate_priority = preset.revert_rate_priority;
  return params;
}

}  // namespace pga
