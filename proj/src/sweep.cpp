#include "pga/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pga/analytics.hpp"
#include "pga/equilibrium.hpp"
#include "pga/parallel.hpp"

namespace pga {

namespace {

constexpr std::string_view kAxisNames[] = {"V", "g", "r1", "r2", "N", "c", "tau", "b"};

double parse_number(std::string_view s) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(s) + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool target_accepts(SweepTarget t, std::string_view axis) {
  if (axis == "b") return t == SweepTarget::Cdf;
  if (axis == "tau") return t == SweepTarget::MevTax;
  if (axis == "c") return t == SweepTarget::Cdf || t == SweepTarget::Abstention ||
                          t == SweepTarget::SchemeCompare;
  if (axis == "r1") return t != SweepTarget::SchemeCompare;
  if (axis == "r2") return t != SweepTarget::MevTax;
  return true;
}

struct Point {
  AuctionParams params;
  double cost = 0.0;
  double tax_rate = 0.0;
  std::optional<double> bid;
  std::vector<std::string> lead;
};

std::string axis_cell(const std::string& name, double v) {
  return name == "N" ? std::to_string(static_cast<int>(v)) : format_double(v);
}

void assign(Point& pt, const std::string& name, double v) {
  if (name == "V") pt.params.value = v;
  else if (name == "g") pt.params.base_fee = v;
  else if (name == "r1") pt.params.revert_rate_base = v;
  else if (name == "r2") pt.params.revert_rate_priority = v;
  else if (name == "N") pt.params.num_agents = static_cast<int>(v);
  else if (name == "c") pt.cost = v;
  else if (name == "tau") pt.tax_rate = v;
  else if (name == "b") pt.bid = v;
}

double cdf_or_step(const AuctionParams& p, double cost, double b) {
  if (p.full_revert_protection() && cost == 0.0) {
    // Pure-strategy limit: all mass at the breakeven bid.
    if (b < 0.0 || b > p.breakeven_bid()) throw Error(ErrorCode::OutOfSupport, "bid outside [0, V - g]");
    return b == p.breakeven_bid() ? 1.0 : 0.0;
  }
  return cdf(solve_equilibrium(p, cost), b);
}

std::vector<std::vector<std::string>> evaluate(const SweepSpec& spec, const Point& pt) {
  const AuctionParams p = validate_params(pt.params);
  std::vector<std::vector<std::string>> rows;
  const auto row = [&](std::vector<std::string> tail) {
    std::vector<std::string> r = pt.lead;
    r.insert(r.end(), tail.begin(), tail.end());
    rows.push_back(std::move(r));
  };
  switch (spec.target) {
    case SweepTarget::Cdf: {
      if (pt.bid) {
        row({format_double(*pt.bid), format_double(cdf_or_step(p, pt.cost, *pt.bid))});
        break;
      }
      const double top = p.breakeven_bid();
      for (int j = 0; j < spec.grid; ++j) {
        const double b = top * (static_cast<double>(j) / (spec.grid - 1));
        row({format_double(b), format_double(cdf_or_step(p, pt.cost, b))});
      }
      break;
    }
    case SweepTarget::Abstention: {
      if (pt.cost < 0.0 || pt.cost >= p.breakeven_bid()) {
        throw Error(ErrorCode::CostTooLarge, "cost must lie in [0, V - g)");
      }
      row({format_double(abstain_probability(p, pt.cost))});
      break;
    }
    case SweepTarget::Revenue: {
      const RevenueReport r = revenue_report(p);
      row({format_double(r.abstain_prob), format_double(r.expected_revenue),
           format_double(r.expected_submitted_txs)});
      break;
    }
    case SweepTarget::Submitted: {
      const RevenueReport r = revenue_report(p);
      row({format_double(r.expected_submitted_txs), format_double(r.limits.submitted_txs)});
      break;
    }
    case SweepTarget::SchemeCompare: {
      const SchemeComparison c = compare_schemes(p, pt.cost);
      row({format_double(c.optimal_r1), format_double(c.scheme1_profit_at_optimum),
           format_double(c.scheme2_revenue_at_r1_zero), to_string(c.winner)});
      break;
    }
    case SweepTarget::MevTax: {
      const MevTaxReport m = expected_mev_tax(p, pt.tax_rate);
      row({format_double(m.expected_tax), format_double(m.upper_bound),
           format_double(m.asymptote)});
      break;
    }
  }
  return rows;
}

}  // namespace

std::optional<SweepTarget> parse_sweep_target(std::string_view name) {
  for (SweepTarget t : {SweepTarget::Cdf, SweepTarget::Abstention, SweepTarget::Revenue,
                        SweepTarget::Submitted, SweepTarget::SchemeCompare, SweepTarget::MevTax}) {
    if (name == to_string(t)) return t;
  }
  return std::nullopt;
}

const char* to_string(SweepTarget target) {
  switch (target) {
    case SweepTarget::Cdf: return "cdf";
    case SweepTarget::Abstention: return "abstention";
    case SweepTarget::Revenue: return "revenue";
    case SweepTarget::Submitted: return "submitted";
    case SweepTarget::SchemeCompare: return "scheme_compare";
    case SweepTarget::MevTax: return "mev_tax";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "axis must look like name=values");
  }
  SweepAxis axis;
  axis.name = std::string(text.substr(0, eq));
  if (std::find(std::begin(kAxisNames), std::end(kAxisNames), axis.name) == std::end(kAxisNames)) {
    throw Error(ErrorCode::InvalidArgument, "unknown sweep parameter '" + axis.name + "'");
  }
  const std::string_view list = text.substr(eq + 1);
  if (list.find(':') != std::string_view::npos) {
    const auto parts = split(list, ':');
    if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "range must be start:stop:step");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || stop < start) throw Error(ErrorCode::InvalidArgument, "empty range");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw Error(ErrorCode::InvalidArgument, "range too long");
    for (std::size_t i = 0; i < count; ++i) axis.values.push_back(start + step * static_cast<double>(i));
  } else {
    for (std::string_view item : split(list, ',')) axis.values.push_back(parse_number(item));
  }
  if (axis.name == "N") {
    for (double v : axis.values) {
      if (v != std::floor(v)) throw Error(ErrorCode::InvalidArgument, "N values must be integers");
    }
  }
  return axis;
}

CsvTable run_sweep(const SweepSpec& spec) {
  if (spec.axes.size() > 2) throw Error(ErrorCode::InvalidArgument, "at most two sweep axes");
  if (spec.grid < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  std::vector<SweepAxis> axes = spec.axes;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (!target_accepts(spec.target, axes[i].name)) {
      throw Error(ErrorCode::InvalidArgument, "parameter '" + axes[i].name +
                                                  "' cannot vary for target " +
                                                  to_string(spec.target));
    }
    if (axes[i].values.empty()) throw Error(ErrorCode::InvalidArgument, "empty axis");
    for (std::size_t j = 0; j < i; ++j) {
      if (axes[j].name == axes[i].name) throw Error(ErrorCode::InvalidArgument, "duplicate axis");
    }
  }
  const auto has_axis = [&](std::string_view n) {
    return std::any_of(axes.begin(), axes.end(), [&](const SweepAxis& a) { return a.name == n; });
  };
  // b is printed in the target columns, c and tau always appear.
  std::vector<std::string> header;
  for (const SweepAxis& a : axes) {
    if (a.name != "b") header.push_back(a.name);
  }
  switch (spec.target) {
    case SweepTarget::Cdf: header.insert(header.end(), {"b", "F"}); break;
    case SweepTarget::Abstention: header.push_back("p_star"); break;
    case SweepTarget::Revenue: header.insert(header.end(), {"p_star", "revenue", "submitted"}); break;
    case SweepTarget::Submitted: header.insert(header.end(), {"submitted", "submitted_limit"}); break;
    case SweepTarget::SchemeCompare:
      if (!has_axis("c")) header.push_back("c");
      header.insert(header.end(), {"optimal_r1", "scheme1_profit", "scheme2_revenue", "winner"});
      break;
    case SweepTarget::MevTax:
      if (!has_axis("tau")) header.push_back("tau");
      header.insert(header.end(), {"expected_tax", "upper_bound", "asymptote"});
      break;
  }

  std::vector<Point> points;
  const std::size_t outer = axes.empty() ? 1 : axes[0].values.size();
  const std::size_t inner = axes.size() < 2 ? 1 : axes[1].values.size();
  for (std::size_t i = 0; i < outer; ++i) {
    for (std::size_t j = 0; j < inner; ++j) {
      Point pt{spec.fixed, spec.cost, spec.tax_rate, std::nullopt, {}};
      for (std::size_t a = 0; a < axes.size(); ++a) {
        const double v = axes[a].values[a == 0 ? i : j];
        assign(pt, axes[a].name, v);
        if (axes[a].name != "b") pt.lead.push_back(axis_cell(axes[a].name, v));
      }
      if (spec.target == SweepTarget::SchemeCompare && !has_axis("c")) {
        pt.lead.push_back(format_double(pt.cost));
      }
      if (spec.target == SweepTarget::MevTax && !has_axis("tau")) {
        pt.lead.push_back(format_double(pt.tax_rate));
      }
      points.push_back(std::move(pt));
    }
  }

  std::vector<std::vector<std::vector<std::string>>> blocks(points.size());
  parallel_for(points.size(), [&](std::size_t i) { blocks[i] = evaluate(spec, points[i]); });

  CsvTable table;
  table.header = std::move(header);
  for (auto& block : blocks) {
    for (auto& r : block) table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace pga
