#include "pga/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pga/analytics.hpp"
#include "pga/equilibrium.hpp"
#include "pga/io.hpp"
#include "pga/market_sim.hpp"
#include "pga/sweep.hpp"
#include "pga/verify.hpp"

namespace pga {

namespace {

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

std::string g10(double x) { return fmt("%.10g", x); }

// Usage problems detected after parsing (conflicting flags and the like).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag name -> (option, setter from a config-file value). A config value is
// applied only when the flag was absent from the command line.
class Bindings {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& key, T& var, const std::string& help) {
    CLI::Option* opt = app->add_option("--" + key, var, help)->capture_default_str();
    entries_.push_back({key, opt, [&var](const Json& j) { assign(var, j); }});
    return opt;
  }

  void apply_config(const std::string& path) const {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read config file " + path);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a flat JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const Entry* e = find(it.key());
      if (!e) throw Error(ErrorCode::ConfigInvalid, "unknown config key '" + it.key() + "'");
      if (e->option->count() > 0) continue;
      try {
        e->set(it.value());
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::ConfigInvalid, "config key '" + it.key() + "' has the wrong type");
      }
    }
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<void(const Json&)> set;
  };

  const Entry* find(const std::string& key) const {
    for (const Entry& e : entries_) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  template <typename T>
  static void assign(T& var, const Json& j) {
    var = j.get<T>();
  }
  static void assign(std::vector<std::string>& var, const Json& j) {
    var = j.is_string() ? std::vector<std::string>{j.get<std::string>()}
                        : j.get<std::vector<std::string>>();
  }

  std::vector<Entry> entries_;
};

struct AuctionOpts {
  double V = 10.0;
  double g = 1.0;
  double r1 = 0.1;
  double r2 = 0.1;
  int N = 20;
  double c = 0.0;
  std::string preset;
  double rate = std::numeric_limits<double>::quiet_NaN();
};

struct CommonOpts {
  std::string config;
  std::string out;
  bool json = false;
};

void add_common(CLI::App* app, CommonOpts& o, bool with_json = true) {
  app->add_option("--config", o.config, "Flat JSON file of flag values (flags take precedence)");
  app->add_option("--out", o.out, "Write the report to this file");
  if (with_json) app->add_flag("--json", o.json, "Print the JSON report instead of a summary");
}

void add_auction(CLI::App* app, Bindings& b, AuctionOpts& o) {
  CLI::Option* r1 = b.add(app, "r1", o.r1, "Revert penalty rate on the base fee");
  CLI::Option* r2 = b.add(app, "r2", o.r2, "Revert penalty rate on the priority bid");
  b.add(app, "V", o.V, "Common value of the opportunity");
  b.add(app, "g", o.g, "Base fee");
  b.add(app, "N", o.N, "Number of agents");
  b.add(app, "c", o.c, "Per-transaction revert-protection cost");
  CLI::Option* pre = b.add(app, "preset", o.preset, "Named revert-penalty setting");
  b.add(app, "rate", o.rate, "Rate for presets given as a range");
  pre->excludes(r1)->excludes(r2);
}

AuctionParams resolve(const AuctionOpts& o) {
  AuctionParams p{o.V, o.g, o.r1, o.r2, o.N};
  if (!o.preset.empty()) {
    std::optional<double> rate;
    if (!std::isnan(o.rate)) rate = o.rate;
    p = apply_preset(p, preset(o.preset, rate));
  }
  return validate_params(p);
}

std::string describe(const AuctionParams& p) {
  return "V=" + g10(p.value) + ", g=" + g10(p.base_fee) + ", r1=" + g10(p.revert_rate_base) +
         ", r2=" + g10(p.revert_rate_priority) + ", N=" + std::to_string(p.num_agents);
}

void emit_json(const CommonOpts& o, const Json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (!o.out.empty()) write_file(o.out, text);
  if (o.json) out << text;
}

// Subcommand handlers return an exit code.

int cmd_equilibrium(const AuctionOpts& a, const CommonOpts& o, bool strict, std::ostream& out,
                    std::ostream& err) {
  const AuctionParams p = resolve(a);
  if (p.full_revert_protection() && a.c == 0.0) {
    const PureEquilibrium pe = pure_equilibrium(p, a.c);
    emit_json(o, envelope("equilibrium", to_json(pe)), out);
    if (!o.json) {
      out << "pure-strategy equilibrium (" << describe(p) << ")\n"
          << "  top two bids = " << g10(pe.top_bid)
          << "; other agents bid at most that or abstain\n";
    }
    return kExitOk;
  }
  const Equilibrium eq = solve_equilibrium(p, a.c);
  emit_json(o, envelope("equilibrium", to_json(eq)), out);
  if (!o.json) {
    out << "mixed-strategy equilibrium (" << describe(p) << ", c=" << g10(a.c) << ")\n"
        << "  abstain probability p*  " << g10(eq.abstain_prob()) << "\n"
        << "  bid support             [0, " << g10(eq.support_max()) << "]\n"
        << "  expected bid E[B*]      " << g10(expected_bid(eq)) << "\n";
    for (double q : {0.25, 0.5, 0.75}) {
      out << "  quantile " << fmt("%.2f", q) << "           " << g10(quantile(eq, q)) << "\n";
    }
  }
  if (a.c > 0.0) {
    err << "note: closed-form F at V-g is " << g10(eq.formula_value_at_breakeven())
        << "; the bid support ends at V-g-c = " << g10(eq.support_max()) << "\n";
    if (strict) {
      err << "strict: support upper end differs from V-g\n";
      return kExitVerification;
    }
  }
  return kExitOk;
}

int cmd_revenue(const AuctionOpts& a, const CommonOpts& o, std::ostream& out) {
  const AuctionParams p = resolve(a);
  const RevenueReport r = revenue_report(p);
  Json body{{"params", to_json(p)}, {"report", to_json(r)}};
  emit_json(o, envelope("revenue", body), out);
  if (!o.json) {
    out << "revenue (" << describe(p) << ")\n"
        << "  abstain probability     " << g10(r.abstain_prob) << "\n"
        << "  participation           " << g10(r.participation_prob) << "\n"
        << "  expected revenue        " << g10(r.expected_revenue) << "  (limit "
        << format_double(r.limits.revenue) << ")\n"
        << "    base                  " << g10(r.base_revenue) << "  (limit "
        << format_double(r.limits.base_revenue) << ")\n"
        << "    priority              " << g10(r.priority_revenue) << "  (limit "
        << format_double(r.limits.priority_revenue) << ")\n"
        << "  submitted transactions  " << g10(r.expected_submitted_txs) << "  (limit "
        << format_double(r.limits.submitted_txs) << ")\n"
        << "  welfare loss            " << g10(r.welfare_loss) << "\n";
  }
  return kExitOk;
}

int cmd_compare(const AuctionOpts& a, const CommonOpts& o, std::ostream& out) {
  const AuctionParams p = resolve(a);
  const SchemeComparison cmp = compare_schemes(p, a.c);
  const GridArgmax grid = scheme1_optimal_r1_grid(p, a.c);
  Json body{{"params", to_json(p)},
            {"comparison", to_json(cmp)},
            {"scheme1_grid_argmax", grid.argmax},
            {"scheme1_grid_max", grid.max_value}};
  emit_json(o, envelope("compare-schemes", body), out);
  if (!o.json) {
    out << "cost schemes (" << describe(p) << ", c=" << g10(a.c) << ")\n"
        << "  scheme 1: optimal r1    " << g10(cmp.optimal_r1) << " (grid " << g10(grid.argmax)
        << ")\n"
        << "  scheme 1: profit        " << g10(cmp.scheme1_profit_at_optimum) << "\n"
        << "  scheme 2: revenue       " << g10(cmp.scheme2_revenue_at_r1_zero) << "\n"
        << "  winner                  " << to_string(cmp.winner) << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const AuctionOpts& a, const std::string& target, const std::vector<std::string>& vary,
              int grid, double tau, const CommonOpts& o, std::ostream& out) {
  SweepSpec spec;
  const auto t = parse_sweep_target(target);
  if (!t) throw UsageError("unknown sweep target '" + target + "'");
  spec.target = *t;
  // Sweep points are validated individually, so only presets resolve here.
  spec.fixed = AuctionParams{a.V, a.g, a.r1, a.r2, a.N};
  if (!a.preset.empty()) {
    std::optional<double> rate;
    if (!std::isnan(a.rate)) rate = a.rate;
    spec.fixed = apply_preset(spec.fixed, preset(a.preset, rate));
  }
  spec.cost = a.c;
  spec.tax_rate = tau;
  spec.grid = grid;
  for (const std::string& v : vary) spec.axes.push_back(parse_sweep_axis(v));
  const std::string csv = run_sweep(spec).str();
  if (o.out.empty()) out << csv;
  else write_file(o.out, csv);
  return kExitOk;
}

int cmd_verify(const std::string& battery_name, std::uint64_t seed, const std::vector<int>& only,
               const CommonOpts& o, std::ostream& out) {
  const auto battery = parse_battery(battery_name);
  if (!battery) throw UsageError("unknown battery '" + battery_name + "'");
  std::vector<CheckResult> results;
  if (only.empty()) {
    results = run_battery(*battery, seed);
  } else {
    for (int id : only) results.push_back(run_check(id, *battery, seed));
  }
  bool all = true;
  Json checks = Json::array();
  for (const CheckResult& r : results) {
    all = all && r.pass;
    checks.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    if (!o.json) {
      out << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " ("
          << fmt("%.2f", r.seconds) << " s): " << r.detail << "\n";
    }
  }
  Json body{{"battery", to_string(*battery)}, {"seed", seed}, {"pass", all}, {"checks", checks}};
  emit_json(o, envelope("verify", body), out);
  return all ? kExitOk : kExitVerification;
}

int cmd_simulate(MarketSimConfig cfg, const AuctionOpts& a, const std::string& events,
                 const CommonOpts& o, std::ostream& out) {
  if (!a.preset.empty()) {
    std::optional<double> rate;
    if (!std::isnan(a.rate)) rate = a.rate;
    const SettingPreset s = preset(a.preset, rate);
    cfg.revert_rate_base = s.revert_rate_base;
    cfg.revert_rate_priority = s.revert_rate_priority;
  }
  const MarketSimReport r = simulate(cfg);
  emit_json(o, envelope("simulate", to_json(r)), out);
  if (!events.empty()) write_file(events, events_table(r).str());
  if (!o.json) {
    out << "market simulation: " << r.events.size() << " blocks, " << r.opportunities
        << " opportunities, " << r.executed << " executed\n"
        << "  MAD " << g10(r.mad) << "  DBF " << g10(r.dbf) << "  MD " << g10(r.max_deviation)
        << "\n"
        << "  CFE " << g10(r.cfe) << "  CASL " << g10(r.casl) << "  NLP " << g10(r.nlp)
        << "  gross LP loss " << g10(r.gross_lp_loss) << "\n"
        << "  CSR " << g10(r.csr) << "  value of executed opportunities "
        << g10(r.executed_value) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Priority gas auctions under partial revert protection", "pga-lab"};
  app.require_subcommand(1);
  app.footer("Environment: PGA_LAB_THREADS caps the worker count.");

  AuctionOpts auction;
  CommonOpts common;
  Bindings eq_b, rev_b, cmp_b, sweep_b, ver_b, sim_b;

  CLI::App* eq = app.add_subcommand("equilibrium", "Symmetric equilibrium for one parameter point");
  add_auction(eq, eq_b, auction);
  add_common(eq, common);
  bool strict = false;
  eq->add_flag("--strict", strict, "Fail when the bid support does not reach V - g");

  CLI::App* rev = app.add_subcommand("revenue", "Revenue, decomposition and large-N limits");
  add_auction(rev, rev_b, auction);
  add_common(rev, common);

  CLI::App* cmp = app.add_subcommand("compare-schemes", "Scheme 1 vs Scheme 2 at cost c");
  add_auction(cmp, cmp_b, auction);
  add_common(cmp, common);

  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep emitting a CSV grid");
  add_auction(sweep, sweep_b, auction);
  add_common(sweep, common, false);
  std::string target;
  std::vector<std::string> vary;
  int grid = 200;
  double tau = 0.0;
  sweep_b.add(sweep, "target", target, "cdf|abstention|revenue|submitted|scheme_compare|mev_tax")
      ->required();
  sweep_b.add(sweep, "vary", vary, "name=v1,v2,... or name=start:stop:step (at most two)");
  sweep_b.add(sweep, "grid", grid, "Bid grid points for cdf sweeps");
  sweep_b.add(sweep, "tau", tau, "MEV tax rate");

  CLI::App* ver = app.add_subcommand("verify", "Run the verification battery");
  add_common(ver, common);
  std::string battery = "default";
  std::uint64_t seed = 42;
  std::vector<int> only;
  ver_b.add(ver, "battery", battery, "default|quick");
  ver_b.add(ver, "seed", seed, "Random seed");
  ver_b.add(ver, "check", only, "Run only these check ids (1-12)");

  CLI::App* sim = app.add_subcommand("simulate", "CEX-DEX arbitrage market simulation");
  add_common(sim, common);
  MarketSimConfig cfg;
  std::string events;
  sim_b.add(sim, "mu", cfg.drift, "Drift per unit time");
  sim_b.add(sim, "sigma", cfg.volatility, "Volatility per square-root unit time");
  sim_b.add(sim, "T", cfg.horizon, "Horizon");
  sim_b.add(sim, "block-time", cfg.block_time, "Block time");
  sim_b.add(sim, "p0", cfg.initial_price, "Initial price");
  sim_b.add(sim, "f", cfg.fee_rate, "Pool fee rate");
  sim_b.add(sim, "L", cfg.liquidity_depth, "Liquidity depth");
  sim_b.add(sim, "g", cfg.base_fee, "Base fee");
  CLI::Option* sim_r1 = sim_b.add(sim, "r1", cfg.revert_rate_base, "Revert penalty rate on g");
  CLI::Option* sim_r2 = sim_b.add(sim, "r2", cfg.revert_rate_priority, "Revert penalty rate on b");
  sim_b.add(sim, "N", cfg.num_arbitrageurs, "Number of arbitrageurs");
  sim_b.add(sim, "seed", cfg.seed, "Random seed");
  sim_b.add(sim, "bins", cfg.histogram_bins, "Revenue histogram bins");
  sim_b.add(sim, "events", events, "Write the per-block event log CSV here");
  sim_b.add(sim, "preset", auction.preset, "Named revert-penalty setting")
      ->excludes(sim_r1)
      ->excludes(sim_r2);
  sim_b.add(sim, "rate", auction.rate, "Rate for presets given as a range");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::pair<CLI::App*, const Bindings*> subs[] = {
        {eq, &eq_b}, {rev, &rev_b}, {cmp, &cmp_b}, {sweep, &sweep_b}, {ver, &ver_b}, {sim, &sim_b}};
    for (const auto& [sub, bindings] : subs) {
      if (sub->parsed() && !common.config.empty()) bindings->apply_config(common.config);
    }
    if (eq->parsed()) return cmd_equilibrium(auction, common, strict, out, err);
    if (rev->parsed()) return cmd_revenue(auction, common, out);
    if (cmp->parsed()) return cmd_compare(auction, common, out);
    if (sweep->parsed()) return cmd_sweep(auction, target, vary, grid, tau, common, out);
    if (ver->parsed()) return cmd_verify(battery, seed, only, common, out);
    if (sim->parsed()) return cmd_simulate(cfg, auction, events, common, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace pga
