#include "pga/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pga/parallel.hpp"

namespace pga {

bool McEstimate::within(double expected, double sigmas, double floor) const {
  return std::abs(mean - expected) <= std::max(sigmas * std_error, floor);
}

void RunningStats::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double n = n_a + n_b;
  const double delta = other.mean_ - mean_;
  mean_ += delta * n_b / n;
  m2_ += other.m2_ + delta * delta * n_a * n_b / n;
  count_ += other.count_;
}

double RunningStats::variance() const {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningStats::std_error() const {
  return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

namespace {

constexpr std::uint64_t kReplayChunks = 64;

struct ReplayStats {
  RunningStats revenue, base, priority, entry, submitted, participation, payoff;

  void merge(const ReplayStats& o) {
    revenue.merge(o.revenue);
    base.merge(o.base);
    priority.merge(o.priority);
    entry.merge(o.entry);
    submitted.merge(o.submitted);
    participation.merge(o.participation);
    payoff.merge(o.payoff);
  }
};

ReplayStats merge_pairwise(std::span<const ReplayStats> parts) {
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  ReplayStats left = merge_pairwise(parts.first(half));
  left.merge(merge_pairwise(parts.subspan(half)));
  return left;
}

McEstimate to_estimate(const RunningStats& s, std::uint64_t seed) {
  return McEstimate{s.mean(), s.std_error(), s.count(), seed};
}

ReplayStats replay_chunk(const Equilibrium& eq, std::uint64_t trials, Philox rng) {
  const AuctionParams& p = eq.params();
  const std::size_t n = static_cast<std::size_t>(p.num_agents);
  const double g = p.base_fee;
  const double c = eq.entry_cost();
  std::vector<double> bids;
  std::vector<std::size_t> top;
  bids.reserve(n);
  top.reserve(n);
  ReplayStats out;
  for (std::uint64_t t = 0; t < trials; ++t) {
    bids.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Action a = sample_action(eq, rng);
      if (a.is_bid()) bids.push_back(a.amount());
    }
    const double k = static_cast<double>(bids.size());
    double base = 0.0, priority = 0.0, value = 0.0;
    if (!bids.empty()) {
      const double best = *std::max_element(bids.begin(), bids.end());
      top.clear();
      for (std::size_t j = 0; j < bids.size(); ++j) {
        if (bids[j] == best) top.push_back(j);
      }
      const std::size_t winner = top.size() == 1 ? top[0] : top[rng.below(top.size())];
      for (std::size_t j = 0; j < bids.size(); ++j) {
        if (j == winner) {
          base += g;
          priority += bids[j];
        } else {
          base += p.revert_rate_base * g;
          priority += p.revert_rate_priority * bids[j];
        }
      }
      value = p.value;
    }
    const double entry = c * k;
    const double revenue = base + priority + entry;
    out.revenue.add(revenue);
    out.base.add(base);
    out.priority.add(priority);
    out.entry.add(entry);
    out.submitted.add(k);
    out.participation.add(bids.empty() ? 0.0 : 1.0);
    out.payoff.add((value - revenue) / static_cast<double>(n));
  }
  return out;
}

}  // namespace

ReplayReport monte_carlo_replay(const Equilibrium& eq, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  const std::uint64_t chunks = std::min(trials, kReplayChunks);
  std::vector<ReplayStats> parts(chunks);
  const Philox root(seed);
  parallel_for(chunks, [&](std::size_t i) {
    const std::uint64_t share = trials / chunks + (i < trials % chunks ? 1 : 0);
    parts[i] = replay_chunk(eq, share, root.split(i));
  });
  const ReplayStats all = merge_pairwise(parts);
  return ReplayReport{to_estimate(all.revenue, seed),   to_estimate(all.base, seed),
                      to_estimate(all.priority, seed),  to_estimate(all.entry, seed),
                      to_estimate(all.submitted, seed), to_estimate(all.participation, seed),
                      to_estimate(all.payoff, seed)};
}

BestResponseScan best_response_scan(const AuctionParams& params, const MixedStrategy& opponents,
                                    int grid_points, double entry_cost) {
  if (grid_points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  const double top = params.breakeven_bid();
  BestResponseScan out;
  out.max_payoff = 0.0;  // Abstain
  out.argmax_is_abstain = true;
  out.min_support_payoff =
      opponents.abstain_prob > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double b = top * (static_cast<double>(i) / (grid_points - 1));
    const double u = expected_payoff_vs_symmetric(params, opponents, b, entry_cost);
    if (u > out.max_payoff) {
      out.max_payoff = u;
      out.argmax_bid = b;
      out.argmax_is_abstain = false;
    }
    if (b <= opponents.support_max) out.min_support_payoff = std::min(out.min_support_payoff, u);
  }
  out.max_probe_payoff = -std::numeric_limits<double>::infinity();
  for (double eps : {1e-6, 1e-3, 0.1, 1.0}) {
    const double b = top + eps * std::max(1.0, top);
    const double u = expected_payoff_vs_symmetric(params, opponents, b, entry_cost);
    out.max_probe_payoff = std::max(out.max_probe_payoff, u);
  }
  return out;
}

BestResponseScan best_response_scan(const Equilibrium& eq, int grid_points) {
  return best_response_scan(eq.params(), eq.strategy(), grid_points, eq.entry_cost());
}

const char* to_string(DeviationRule rule) {
  switch (rule) {
    case DeviationRule::OverbidderAbstains: return "overbidder-abstains";
    case DeviationRule::OutbidUnderbid: return "outbid-underbid";
    case DeviationRule::TopBidderUndercuts: return "top-bidder-undercuts";
    case DeviationRule::TiedTopBidderAbstains: return "tied-top-bidder-abstains";
  }
  return "unknown";
}

namespace {

std::optional<PureDeviation> try_deviation(const AuctionParams& params, const PureProfile& profile,
                                           std::size_t agent, Action action, DeviationRule rule) {
  const double before = pure_payoff(params, profile, agent);
  const double after = pure_payoff(params, profile.with(agent, action), agent);
  if (after > before) return PureDeviation{agent, action, rule, before, after};
  return std::nullopt;
}

}  // namespace

std::optional<PureDeviation> find_pure_deviation(const AuctionParams& params,
                                                 const PureProfile& profile) {
  if (profile.size() != static_cast<std::size_t>(params.num_agents)) {
    throw Error(ErrorCode::InvalidArgument, "profile length must equal N");
  }
  const double breakeven = params.breakeven_bid();
  const auto top = profile.max_bid();

  std::vector<std::size_t> leaders, others;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (top && profile[i].is_bid() && profile[i].amount() == *top) {
      leaders.push_back(i);
    } else {
      others.push_back(i);
    }
  }

  if (!top || *top < breakeven) {
    // Someone outbids the leader while staying under the breakeven bid.
    const double floor = top ? *top : 0.0;
    std::vector<std::size_t> order = others;
    order.insert(order.end(), leaders.begin(), leaders.end());
    for (double frac = 0.5; frac > 1e-6; frac *= 0.5) {
      const double bid = top ? floor + frac * (breakeven - floor) : 0.0;
      for (std::size_t agent : order) {
        if (auto d = try_deviation(params, profile, agent, Action::bid(bid),
                                   DeviationRule::OutbidUnderbid)) {
          return d;
        }
      }
      if (!top) break;
    }
    return std::nullopt;
  }

  if (*top > breakeven) {
    return try_deviation(params, profile, leaders.front(), Action::abstain(),
                         DeviationRule::OverbidderAbstains);
  }

  if (leaders.size() == 1) {
    std::optional<double> second;
    for (std::size_t i : others) {
      if (profile[i].is_bid() && (!second || profile[i].amount() > *second)) {
        second = profile[i].amount();
      }
    }
    const double bid = second ? 0.5 * (*second + breakeven) : 0.0;
    return try_deviation(params, profile, leaders.front(), Action::bid(bid),
                         DeviationRule::TopBidderUndercuts);
  }

  // Tie at the breakeven bid: only a revert cost makes abstaining strictly better.
  return try_deviation(params, profile, leaders.front(), Action::abstain(),
                       DeviationRule::TiedTopBidderAbstains);
}

PureEnumerationReport enumerate_pure_profiles(const AuctionParams& params, int steps,
                                              int overshoot) {
  if (steps < 1 || overshoot < 0) throw Error(ErrorCode::InvalidArgument, "bad grid");
  std::vector<Action> choices{Action::abstain()};
  for (int i = 0; i <= steps + overshoot; ++i) {
    choices.push_back(Action::bid(params.breakeven_bid() * (static_cast<double>(i) / steps)));
  }
  const std::size_t n = static_cast<std::size_t>(params.num_agents);
  const std::size_t m = choices.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;

  PureEnumerationReport out;
  std::vector<std::size_t> digits(n, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    std::vector<Action> actions;
    actions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      actions.push_back(choices[rest % m]);
      rest /= m;
    }
    const PureProfile profile(std::move(actions));
    ++out.profiles;
    const bool iff = is_pure_equilibrium(params, profile);
    if (find_pure_deviation(params, profile)) {
      ++out.deviations_found;
      if (iff) ++out.mismatches;
      continue;
    }
    ++out.undeviated;
    bool grid_stable = true;
    for (std::size_t agent = 0; agent < n && grid_stable; ++agent) {
      const double current = pure_payoff(params, profile, agent);
      for (const Action& alt : choices) {
        if (pure_payoff(params, profile.with(agent, alt), agent) > current) {
          grid_stable = false;
          break;
        }
      }
    }
    if (iff && grid_stable) {
      ++out.certified_equilibria;
    } else {
      ++out.mismatches;
    }
  }
  return out;
}

namespace {

AuctionParams shifted(AuctionParams p, const std::string& name, double delta) {
  if (name == "V") p.value += delta;
  else if (name == "g") p.base_fee += delta;
  else if (name == "r1") p.revert_rate_base += delta;
  else if (name == "r2") p.revert_rate_priority += delta;
  else if (name == "N") p.num_agents += static_cast<int>(delta);
  return p;
}

constexpr double kFdQuadratureTol = 1e-13;

template <typename F>
double central_difference(const AuctionParams& base, const std::string& name, double step,
                          const F& f) {
  if (name == "N") return f(shifted(base, "N", 1.0)) - f(base);
  return (f(shifted(base, name, step)) - f(shifted(base, name, -step))) / (2.0 * step);
}

}  // namespace

std::vector<SignCheck> comparative_statics_check(const AuctionParams& raw, double step) {
  const AuctionParams base = validate_params(raw);
  if (!(step > 0.0 && step <= 1e-3)) {
    throw Error(ErrorCode::InvalidArgument, "step must lie in (0, 1e-3]");
  }
  if (base.revert_rate_base <= step || base.revert_rate_base + step >= 1.0 ||
      base.revert_rate_priority <= step || base.revert_rate_priority + step >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "base point must be interior in both revert rates");
  }
  const auto pstar = [](const AuctionParams& p) { return abstain_probability(p); };
  const auto mean_bid = [](const AuctionParams& p) {
    return expected_bid(solve_equilibrium(p), kFdQuadratureTol);
  };
  struct Entry {
    const char* quantity;
    const char* parameter;
    int sign;
  };
  static constexpr Entry kTable[] = {
      {"p_star", "N", +1},       {"p_star", "g", +1},        {"p_star", "r1", +1},
      {"p_star", "V", -1},       {"p_star", "r2", 0},        {"expected_bid", "V", +1},
      {"expected_bid", "N", -1}, {"expected_bid", "r1", -1}, {"expected_bid", "r2", -1},
  };
  std::vector<SignCheck> out;
  for (const auto& e : kTable) {
    const std::string q = e.quantity;
    const double d = q == "p_star" ? central_difference(base, e.parameter, step, pstar)
                                   : central_difference(base, e.parameter, step, mean_bid);
    const bool pass = e.sign == 0 ? d == 0.0 : d * e.sign > 0.0;
    out.push_back(SignCheck{q, e.parameter, d, e.sign, pass});
  }
  return out;
}

std::vector<SignCheck> cdf_sign_check(const AuctionParams& raw, double step, int grid_points) {
  const AuctionParams base = validate_params(raw);
  if (grid_points < 1) throw Error(ErrorCode::InvalidArgument, "need grid points");
  struct Entry {
    const char* parameter;
    int sign;
  };
  static constexpr Entry kTable[] = {{"N", +1}, {"V", -1}, {"r1", +1}, {"r2", +1}};
  std::vector<SignCheck> out;
  for (const auto& e : kTable) {
    double worst = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid_points; ++j) {
      const double b = base.breakeven_bid() * (j + 0.5) / grid_points;
      const auto F = [b](const AuctionParams& p) { return cdf(solve_equilibrium(p), b); };
      worst = std::min(worst, e.sign * central_difference(base, e.parameter, step, F));
    }
    out.push_back(SignCheck{"cdf", e.parameter, e.sign * worst, e.sign, worst >= -1e-9});
  }
  return out;
}

HillmanSametCheck hillman_samet_check(double value, double min_outlay, int num_agents,
                                      int grid_points) {
  if (!(min_outlay > 0.0 && min_outlay < value)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < c_min < V");
  }
  if (grid_points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  const AuctionParams params = validate_params({value, min_outlay, 1.0, 1.0, num_agents});
  const Equilibrium eq = solve_equilibrium(params);
  const double p = eq.abstain_prob();
  const double exponent = 1.0 / (num_agents - 1);
  const double floor = std::pow(min_outlay / value, exponent);
  HillmanSametCheck out;
  for (int i = 0; i < grid_points; ++i) {
    const double x = value * (static_cast<double>(i) / (grid_points - 1));
    if (x < min_outlay) {
      out.floor_deviation = std::max(out.floor_deviation, std::abs(p - floor));
    } else {
      const double b = std::min(x - min_outlay, params.breakeven_bid());
      const double effective = p + (1.0 - p) * cdf(eq, b);
      out.max_deviation =
          std::max(out.max_deviation, std::abs(effective - std::pow(x / value, exponent)));
    }
  }
  return out;
}

namespace {

double solve_indifference(const AuctionParams& p, double entry_cost, double bid) {
  const double gain = p.breakeven_bid() - bid;
  const double loss = p.revert_cost(bid);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double z = 0.5 * (lo + hi);
    if (z * gain - (1.0 - z) * loss - entry_cost < 0.0) lo = z;
    else hi = z;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double cdf_by_indifference(const AuctionParams& params, double entry_cost, double bid) {
  const double exponent = 1.0 / (params.num_agents - 1);
  const double p = std::pow(solve_indifference(params, entry_cost, 0.0), exponent);
  const double z = solve_indifference(params, entry_cost, bid);
  return (std::pow(z, exponent) - p) / (1.0 - p);
}

double quantile_by_bisection(const Equilibrium& eq, double u) {
  double lo = 0.0, hi = eq.support_max();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(eq, mid) < u) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

OracleReport run_oracle(const AuctionParams& params, std::uint64_t trials, std::uint64_t seed,
                        int grid_points) {
  const Equilibrium eq = solve_equilibrium(params);
  OracleReport out;
  out.replay = monte_carlo_replay(eq, trials, seed);
  out.best_response = best_response_scan(eq, grid_points);
  out.comparative_signs = comparative_statics_check(params);
  return out;
}

}  // namespace pga
