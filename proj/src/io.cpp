#include "pga/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pga {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::write(std::ostream& out) const {
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
}

std::string CsvTable::str() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

namespace {

// JSON has no infinity; non-finite values become strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

std::string opt_cell(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

}  // namespace

CsvTable events_table(const MarketSimReport& report) {
  CsvTable t;
  t.header = {"block",          "true_price",     "onchain_before", "onchain_after",
              "outcome",        "opportunity_value", "discrepancy", "participants",
              "winning_bid",    "sequencer_fees", "volume",         "lp_fees",
              "lp_adverse_loss", "lp_gross_loss"};
  t.rows.reserve(report.events.size());
  for (const BlockEvent& e : report.events) {
    t.rows.push_back({std::to_string(e.block_index), format_double(e.true_price),
                      format_double(e.onchain_price_before), format_double(e.onchain_price_after),
                      to_string(e.outcome), opt_cell(e.opportunity_value),
                      format_double(e.discrepancy), std::to_string(e.participants),
                      opt_cell(e.winning_bid), format_double(e.sequencer_fees),
                      format_double(e.volume), format_double(e.lp_fees),
                      format_double(e.lp_adverse_loss), format_double(e.lp_gross_loss)});
  }
  return t;
}

Json to_json(const AuctionParams& p) {
  return Json{{"V", p.value},
              {"g", p.base_fee},
              {"r1", p.revert_rate_base},
              {"r2", p.revert_rate_priority},
              {"N", p.num_agents}};
}

Json to_json(const RevenueReport& r) {
  return Json{{"abstain_prob", r.abstain_prob},
              {"participation_prob", r.participation_prob},
              {"expected_revenue", r.expected_revenue},
              {"base_revenue", r.base_revenue},
              {"priority_revenue", r.priority_revenue},
              {"expected_submitted_txs", r.expected_submitted_txs},
              {"welfare_loss", r.welfare_loss},
              {"limits",
               {{"revenue", num(r.limits.revenue)},
                {"base_revenue", num(r.limits.base_revenue)},
                {"priority_revenue", num(r.limits.priority_revenue)},
                {"submitted_txs", num(r.limits.submitted_txs)},
                {"submitted_txs_unbounded", r.limits.submitted_txs_unbounded}}}};
}

Json to_json(const Equilibrium& eq) {
  const double at_breakeven = eq.formula_value_at_breakeven();
  return Json{{"type", "mixed"},
              {"params", to_json(eq.params())},
              {"entry_cost", eq.entry_cost()},
              {"abstain_prob", eq.abstain_prob()},
              {"support_max", eq.support_max()},
              {"expected_bid", expected_bid(eq)},
              {"formula_value_at_breakeven", num(at_breakeven)},
              {"support_matches_breakeven", eq.entry_cost() == 0.0}};
}

Json to_json(const PureEquilibrium& eq) {
  return Json{{"type", "pure"},
              {"params", to_json(eq.params)},
              {"entry_cost", eq.entry_cost},
              {"top_bid", eq.top_bid},
              {"representative", [&] {
                 Json arr = Json::array();
                 const PureProfile profile = eq.representative();
                 for (const Action& a : profile.actions()) arr.push_back(to_string(a));
                 return arr;
               }()}};
}

Json to_json(const SchemeComparison& c) {
  return Json{{"c", c.cost},
              {"optimal_r1", c.optimal_r1},
              {"scheme1_profit_at_optimum", c.scheme1_profit_at_optimum},
              {"scheme2_revenue_at_r1_zero", c.scheme2_revenue_at_r1_zero},
              {"winner", to_string(c.winner)}};
}

Json to_json(const MevTaxReport& r) {
  return Json{{"tau", r.tax_rate},
              {"expected_tax", r.expected_tax},
              {"upper_bound", r.upper_bound},
              {"asymptote", r.asymptote}};
}

Json to_json(const McEstimate& e) {
  return Json{{"mean", e.mean}, {"std_error", e.std_error}, {"trials", e.trials}, {"seed", e.seed}};
}

Json to_json(const OracleReport& r) {
  Json signs = Json::array();
  for (const SignCheck& s : r.comparative_signs) {
    signs.push_back({{"quantity", s.quantity},
                     {"parameter", s.parameter},
                     {"derivative", s.derivative},
                     {"expected_sign", s.expected_sign},
                     {"pass", s.pass}});
  }
  return Json{{"revenue", to_json(r.replay.revenue)},
              {"base_revenue", to_json(r.replay.base_revenue)},
              {"priority_revenue", to_json(r.replay.priority_revenue)},
              {"submitted_txs", to_json(r.replay.submitted_txs)},
              {"per_agent_payoff", to_json(r.replay.per_agent_payoff)},
              {"best_response_max", r.best_response.max_payoff},
              {"best_response_certified", r.best_response.certified()},
              {"comparative_signs", signs}};
}

Json to_json(const MarketSimConfig& c) {
  return Json{{"mu", c.drift},
              {"sigma", c.volatility},
              {"T", c.horizon},
              {"block_time", c.block_time},
              {"p0", c.initial_price},
              {"f", c.fee_rate},
              {"L", c.liquidity_depth},
              {"g", c.base_fee},
              {"r1", c.revert_rate_base},
              {"r2", c.revert_rate_priority},
              {"N", c.num_arbitrageurs},
              {"seed", c.seed},
              {"bins", c.histogram_bins}};
}

Json to_json(const MarketSimReport& r) {
  return Json{{"config", to_json(r.config)},
              {"blocks", r.events.size()},
              {"opportunities", r.opportunities},
              {"executed", r.executed},
              {"mad", r.mad},
              {"dbf", r.dbf},
              {"max_deviation", r.max_deviation},
              {"cfe", r.cfe},
              {"casl", r.casl},
              {"nlp", r.nlp},
              {"gross_lp_loss", r.gross_lp_loss},
              {"csr", r.csr},
              {"executed_value", r.executed_value},
              {"era_series", r.era_series},
              {"revenue_distribution",
               {{"lo", r.revenue_distribution.lo},
                {"hi", r.revenue_distribution.hi},
                {"counts", r.revenue_distribution.counts}}}};
}

Json envelope(const std::string& kind, const Json& body) {
  Json out{{"schema_version", kSchemaVersion}, {"kind", kind}};
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::InvalidArgument, "failed writing " + path);
}

}  // namespace pga
