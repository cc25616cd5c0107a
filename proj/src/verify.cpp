#include "pga/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "pga/analytics.hpp"
#include "pga/equilibrium.hpp"
#include "pga/io.hpp"
#include "pga/market_sim.hpp"
#include "pga/oracle.hpp"
#include "pga/parallel.hpp"
#include "pga/sweep.hpp"

namespace pga {

std::optional<Battery> parse_battery(std::string_view name) {
  if (name == "default") return Battery::Default;
  if (name == "quick") return Battery::Quick;
  return std::nullopt;
}

const char* to_string(Battery battery) {
  return battery == Battery::Default ? "default" : "quick";
}

AuctionParams random_params(Philox& rng, int max_agents) {
  AuctionParams p;
  p.base_fee = 0.1 + 4.9 * rng.uniform();
  p.value = p.base_fee + 0.5 + 49.5 * rng.uniform();
  p.revert_rate_base = 1.0 - rng.uniform();
  p.revert_rate_priority = 1.0 - rng.uniform();
  p.num_agents = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_agents - 1)));
  return validate_params(p);
}

namespace {

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Distinct substreams per check so batteries do not share draws.
Philox check_rng(std::uint64_t seed, int id) { return Philox(seed, 1000 + static_cast<std::uint64_t>(id)); }

std::vector<AuctionParams> draws(std::uint64_t seed, int id, int count, int max_agents = 30) {
  Philox rng = check_rng(seed, id);
  std::vector<AuctionParams> out;
  for (int i = 0; i < count; ++i) out.push_back(random_params(rng, max_agents));
  return out;
}

bool quick(Battery b) { return b == Battery::Quick; }

Outcome boundary(Battery, std::uint64_t seed) {
  double worst0 = 0.0, worst1 = 0.0;
  for (const AuctionParams& p : draws(seed, 1, 100)) {
    const Equilibrium eq = solve_equilibrium(p);
    worst0 = std::max(worst0, std::abs(cdf(eq, 0.0)));
    worst1 = std::max(worst1, std::abs(cdf(eq, p.breakeven_bid()) - 1.0));
    worst1 = std::max(worst1, std::abs(eq.formula_value_at_breakeven() - 1.0));
  }
  return {worst0 <= 1e-12 && worst1 <= 1e-12,
          fmt("100 draws: max |F(0)| = %.3g, max |F(V-g) - 1| = %.3g", worst0, worst1)};
}

Outcome indifference(Battery, std::uint64_t seed) {
  const auto params = draws(seed, 1, 100);
  std::vector<BestResponseScan> scans(params.size());
  parallel_for(params.size(), [&](std::size_t i) {
    scans[i] = best_response_scan(solve_equilibrium(params[i]), 1000);
  });
  double worst = -1e300, worst_gap = 0.0, worst_probe = -1e300;
  bool ok = true;
  for (const auto& s : scans) {
    ok = ok && s.certified(1e-9);
    worst = std::max(worst, s.max_payoff);
    worst_gap = std::max(worst_gap, s.max_payoff - s.min_support_payoff);
    worst_probe = std::max(worst_probe, s.max_probe_payoff);
  }
  return {ok, fmt("100 draws x 1000 bids: max payoff %.3g, max spread %.3g, max overbid payoff %.3g",
                  worst, worst_gap, worst_probe)};
}

Outcome mc_agreement(Battery b, std::uint64_t seed) {
  const AuctionParams p{10.0, 1.0, 0.1, 0.1, 20};
  const std::uint64_t trials = quick(b) ? 100000 : 1000000;
  const ReplayReport r = monte_carlo_replay(solve_equilibrium(p), trials, seed);
  const RevenueReport closed = revenue_report(p);
  const bool ok = r.revenue.within(closed.expected_revenue) &&
                  r.submitted_txs.within(closed.expected_submitted_txs) &&
                  r.per_agent_payoff.within(0.0);
  return {ok, fmt("%llu trials: revenue %.6f +- %.2g (closed %.6f), submitted %.5f +- %.2g "
                  "(closed %.5f), payoff %.2g +- %.2g",
                  static_cast<unsigned long long>(trials), r.revenue.mean, r.revenue.std_error,
                  closed.expected_revenue, r.submitted_txs.mean, r.submitted_txs.std_error,
                  closed.expected_submitted_txs, r.per_agent_payoff.mean,
                  r.per_agent_payoff.std_error)};
}

Outcome decomposition(Battery b, std::uint64_t seed) {
  const int count = quick(b) ? 5 : 20;
  const std::uint64_t trials = quick(b) ? 20000 : 100000;
  const auto params = draws(seed, 4, count);
  double worst_identity = 0.0, worst_z = 0.0;
  int failures = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const RevenueReport closed = revenue_report(params[i]);
    worst_identity = std::max(
        worst_identity,
        std::abs(closed.base_revenue + closed.priority_revenue - closed.expected_revenue));
    const ReplayReport r = monte_carlo_replay(solve_equilibrium(params[i]), trials, seed + i);
    const double zb = std::abs(r.base_revenue.mean - closed.base_revenue) /
                      std::max(r.base_revenue.std_error, 1e-300);
    const double zp = std::abs(r.priority_revenue.mean - closed.priority_revenue) /
                      std::max(r.priority_revenue.std_error, 1e-300);
    worst_z = std::max({worst_z, zb, zp});
    if (!r.base_revenue.within(closed.base_revenue)) ++failures;
    if (!r.priority_revenue.within(closed.priority_revenue)) ++failures;
  }
  return {worst_identity <= 1e-9 && failures == 0,
          fmt("%d draws x %llu trials: max |base+priority-total| = %.3g, max |z| = %.3f, "
              "components outside 3 SE: %d",
              count, static_cast<unsigned long long>(trials), worst_identity, worst_z, failures)};
}

Outcome limits(Battery, std::uint64_t) {
  const RevenueReport r = revenue_report({10.0, 1.0, 0.1, 0.1, 1000000});
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  const double e_rev = rel(r.expected_revenue, r.limits.revenue);
  const double e_base = rel(r.base_revenue, r.limits.base_revenue);
  const double e_prio = rel(r.priority_revenue, r.limits.priority_revenue);
  const double e_sub = rel(r.expected_submitted_txs, r.limits.submitted_txs);
  const double worst = std::max({e_rev, e_base, e_prio, e_sub});
  const bool anchors = std::abs(r.limits.revenue - 90.0 / 9.1) <= 1e-12 &&
                       std::abs(r.limits.submitted_txs - std::log(91.0)) <= 1e-12;
  return {worst <= 1e-3 && anchors,
          fmt("N=1e6 relative gaps: revenue %.3g, base %.3g, priority %.3g, submitted %.3g; "
              "limits %.9f, %.9f",
              e_rev, e_base, e_prio, e_sub, r.limits.revenue, r.limits.submitted_txs)};
}

Outcome comp_stats(Battery, std::uint64_t) {
  const std::vector<AuctionParams> bases = {{10.0, 1.0, 0.1, 0.1, 5},
                                            {10.0, 1.0, 0.5, 0.2, 3},
                                            {5.0, 1.0, 0.3, 0.6, 10},
                                            {20.0, 2.0, 0.05, 0.9, 2},
                                            {50.0, 5.0, 0.8, 0.4, 20}};
  std::vector<std::vector<SignCheck>> results(bases.size());
  parallel_for(bases.size(), [&](std::size_t i) {
    results[i] = comparative_statics_check(bases[i]);
    auto pointwise = cdf_sign_check(bases[i]);
    results[i].insert(results[i].end(), pointwise.begin(), pointwise.end());
  });
  int total = 0, failed = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (const SignCheck& s : results[i]) {
      ++total;
      if (!s.pass) {
        ++failed;
        if (first_failure.empty()) {
          first_failure = fmt("; first failure at base %zu: d%s/d%s = %.3g", i, s.quantity.c_str(),
                              s.parameter.c_str(), s.derivative);
        }
      }
    }
  }
  return {failed == 0, fmt("%d sign checks at 5 base points, %d failed", total, failed) +
                           first_failure};
}

Outcome r2_invariance(Battery, std::uint64_t) {
  bool ok = true;
  for (int n : {2, 5, 20}) {
    const RevenueReport a = revenue_report({10.0, 1.0, 0.1, 0.0, n});
    for (double r2 : {0.3, 1.0}) {
      const RevenueReport b = revenue_report({10.0, 1.0, 0.1, r2, n});
      ok = ok && a.expected_revenue == b.expected_revenue &&
           a.participation_prob == b.participation_prob &&
           a.expected_submitted_txs == b.expected_submitted_txs;
    }
  }
  return {ok, ok ? "revenue, participation, submitted bit-identical for r2 in {0, 0.3, 1}, "
                   "N in {2, 5, 20}"
                 : "r2 changed an outcome"};
}

Outcome hillman_samet(Battery, std::uint64_t) {
  double worst = 0.0, worst_floor = 0.0;
  for (int n : {2, 5, 10}) {
    const HillmanSametCheck h = hillman_samet_check(1.0, 0.1, n, 1001);
    worst = std::max(worst, h.max_deviation);
    worst_floor = std::max(worst_floor, h.floor_deviation);
  }
  return {worst <= 1e-10 && worst_floor <= 1e-10,
          fmt("N in {2,5,10}: max |F - (x/V)^(1/(N-1))| = %.3g, floor gap %.3g", worst,
              worst_floor)};
}

Outcome schemes(Battery b, std::uint64_t seed) {
  const int count = quick(b) ? 5 : 20;
  Philox rng = check_rng(seed, 9);
  std::vector<std::pair<AuctionParams, double>> cases;
  for (int i = 0; i < count; ++i) {
    AuctionParams p;
    p.base_fee = 0.2 + 4.8 * rng.uniform();
    p.value = p.base_fee + 1.0 + 19.0 * rng.uniform();
    p.revert_rate_base = 0.5;
    p.revert_rate_priority = 1.0 - rng.uniform();
    p.num_agents = 2 + static_cast<int>(rng.below(19));
    const double c = (0.01 + 0.98 * rng.uniform()) * std::min(p.breakeven_bid(), 2.0 * p.base_fee);
    cases.emplace_back(validate_params(p), c);
  }
  std::vector<double> gaps(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const auto& [p, c] = cases[i];
    gaps[i] = std::abs(scheme1_optimal_r1(p, c) - scheme1_optimal_r1_grid(p, c).argmax);
  });
  const double worst_gap = *std::max_element(gaps.begin(), gaps.end());

  bool small_c_ok = true;
  int max_changes = 0;
  for (int n : {2, 5, 20}) {
    const AuctionParams p{10.0, 1.0, 0.1, 0.1, n};
    small_c_ok = small_c_ok && compare_schemes(p, 1e-6).winner != SchemeWinner::Scheme1;
    std::vector<double> costs;
    for (int k = 1; k < 400; ++k) costs.push_back(p.breakeven_bid() * k / 400.0);
    max_changes = std::max(max_changes, scheme_gap_sign_changes(p, costs));
  }
  return {worst_gap <= 1e-3 && small_c_ok && max_changes <= 1,
          fmt("%d draws: max |r1* - grid argmax| = %.3g; c=1e-6 winner ok: %s; max sign changes "
              "over c sweep: %d",
              count, worst_gap, small_c_ok ? "yes" : "no", max_changes)};
}

Outcome pure_characterisation(Battery b, std::uint64_t) {
  const int steps = quick(b) ? 10 : 20;
  const PureEnumerationReport a = enumerate_pure_profiles({10.0, 1.0, 0.1, 0.0, 3}, steps);
  const PureEnumerationReport c = enumerate_pure_profiles({10.0, 1.0, 0.1, 0.1, 3}, steps);
  const PureEnumerationReport z = enumerate_pure_profiles({10.0, 1.0, 0.0, 0.0, 3}, steps);
  // Profiles with at least two bids at V - g and none above: 3 * (1 + steps) + 1.
  const std::uint64_t expected_eq = 3 * (1 + static_cast<std::uint64_t>(steps)) + 1;
  const bool ok = a.deviations_found == a.profiles && a.mismatches == 0 &&
                  c.deviations_found == c.profiles && c.mismatches == 0 && z.mismatches == 0 &&
                  z.certified_equilibria == expected_eq && z.undeviated == expected_eq;
  return {ok, fmt("r1=0.1: %llu/%llu and %llu/%llu profiles deviated; r1=r2=0: %llu certified "
                  "(expected %llu), %llu mismatches",
                  static_cast<unsigned long long>(a.deviations_found),
                  static_cast<unsigned long long>(a.profiles),
                  static_cast<unsigned long long>(c.deviations_found),
                  static_cast<unsigned long long>(c.profiles),
                  static_cast<unsigned long long>(z.certified_equilibria),
                  static_cast<unsigned long long>(expected_eq),
                  static_cast<unsigned long long>(z.mismatches))};
}

Outcome market(Battery b, std::uint64_t seed) {
  MarketSimConfig still;
  still.volatility = 0.0;
  still.horizon = 0.1;
  still.seed = seed;
  const MarketSimReport s = simulate(still);
  const bool still_ok = s.opportunities == 0 && s.executed == 0 && s.mad == 0.0 && s.csr == 0.0;

  const int pairs = quick(b) ? 20 : 100;
  MarketSimConfig base;
  base.horizon = quick(b) ? 0.2 : 1.0;
  std::vector<int> ordered(pairs, 0);
  std::vector<int> identities_ok(pairs, 0);
  parallel_for(static_cast<std::size_t>(pairs), [&](std::size_t i) {
    MarketSimConfig rp = base, nrp = base;
    rp.seed = nrp.seed = seed + i;
    rp.revert_rate_base = rp.revert_rate_priority = 0.0;
    nrp.revert_rate_base = nrp.revert_rate_priority = 1.0;
    const MarketSimReport a = simulate(rp);
    const MarketSimReport c = simulate(nrp);
    ordered[i] = c.mad >= a.mad ? 1 : 0;
    bool ok = true;
    for (const MarketSimReport* r : {&a, &c}) {
      double csr = 0.0;
      for (const BlockEvent& e : r->events) csr += e.sequencer_fees;
      ok = ok && r->nlp == r->cfe - r->casl && r->csr == csr;
    }
    identities_ok[i] = ok ? 1 : 0;
  });
  int wins = 0, identities = 0;
  for (int i = 0; i < pairs; ++i) {
    wins += ordered[i];
    identities += identities_ok[i];
  }
  const bool ok = still_ok && wins * 100 >= 95 * pairs && identities == pairs;
  return {ok, fmt("sigma=0: %zu opportunities, MAD %.3g; MAD(no RP) >= MAD(full RP) in %d/%d "
                  "pairs; accounting exact in %d/%d",
                  s.opportunities, s.mad, wins, pairs, identities, pairs)};
}

// Restores PGA_LAB_THREADS on scope exit.
struct ThreadOverride {
  std::optional<std::string> saved;
  explicit ThreadOverride(const char* value) {
    if (const char* old = std::getenv("PGA_LAB_THREADS")) saved = old;
    ::setenv("PGA_LAB_THREADS", value, 1);
  }
  ~ThreadOverride() {
    if (saved) ::setenv("PGA_LAB_THREADS", saved->c_str(), 1);
    else ::unsetenv("PGA_LAB_THREADS");
  }
};

Outcome determinism(Battery b, std::uint64_t seed) {
  MarketSimConfig cfg;
  cfg.seed = seed;
  cfg.horizon = quick(b) ? 0.1 : 0.5;
  SweepSpec spec;
  spec.target = SweepTarget::Cdf;
  spec.fixed = {10.0, 1.0, 0.1, 0.1, 20};
  spec.axes = {parse_sweep_axis("r1=0.01,0.05,0.1,0.5,1.0")};
  spec.grid = 200;
  const AuctionParams p{10.0, 1.0, 0.1, 0.1, 20};
  const std::uint64_t trials = quick(b) ? 20000 : 100000;

  const auto run = [&] {
    const MarketSimReport r = simulate(cfg);
    std::string out = to_json(r).dump(2) + events_table(r).str() + run_sweep(spec).str();
    out += to_json(monte_carlo_replay(solve_equilibrium(p), trials, seed).revenue).dump();
    return out;
  };
  std::string serial, threaded, again;
  {
    ThreadOverride one("1");
    serial = run();
  }
  {
    ThreadOverride many("8");
    threaded = run();
    again = run();
  }
  const bool ok = serial == threaded && threaded == again;
  return {ok, fmt("simulate JSON+CSV, cdf sweep CSV, replay JSON: %zu bytes, %s across runs and "
                  "thread counts",
                  serial.size(), ok ? "identical" : "DIFFERENT")};
}

struct CheckDef {
  const char* name;
  double budget;
  Outcome (*fn)(Battery, std::uint64_t);
};

constexpr CheckDef kChecks[kCheckCount] = {
    {"cdf boundary conditions", 1.0, boundary},
    {"indifference certificate", 10.0, indifference},
    {"monte carlo agreement", 60.0, mc_agreement},
    {"revenue decomposition", 60.0, decomposition},
    {"large-N limits", 1.0, limits},
    {"comparative statics signs", 10.0, comp_stats},
    {"r2 invariance", 1.0, r2_invariance},
    {"hillman-samet special case", 1.0, hillman_samet},
    {"cost schemes", 30.0, schemes},
    {"pure-strategy equilibria", 60.0, pure_characterisation},
    {"market simulation properties", 120.0, market},
    {"determinism", 10.0, determinism},
};

}  // namespace

CheckResult run_check(int id, Battery battery, std::uint64_t seed) {
  if (id < 1 || id > kCheckCount) throw Error(ErrorCode::IndexOutOfRange, "no such check");
  const CheckDef& def = kChecks[id - 1];
  CheckResult out;
  out.id = id;
  out.name = def.name;
  out.budget_seconds = def.budget;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = def.fn(battery, seed);
    out.pass = o.pass;
    out.detail = o.detail;
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("error: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (battery == Battery::Default && out.seconds > out.budget_seconds) {
    out.pass = false;
    out.detail += fmt(" [over budget: %.2f s > %.0f s]", out.seconds, out.budget_seconds);
  }
  return out;
}

std::vector<CheckResult> run_battery(Battery battery, std::uint64_t seed) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= kCheckCount; ++id) out.push_back(run_check(id, battery, seed));
  return out;
}

}  // namespace pga
