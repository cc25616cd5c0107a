#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pga/io.hpp"
#include "pga/model.hpp"

namespace pga {

enum class SweepTarget { Cdf, Abstention, Revenue, Submitted, SchemeCompare, MevTax };

std::optional<SweepTarget> parse_sweep_target(std::string_view name);
const char* to_string(SweepTarget target);

/// One varied coordinate: a parameter name (V, g, r1, r2, N, c, tau, b) and
/// its values in output order.
struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

/// Parses "name=v1,v2,..." or "name=start:stop:step" (inclusive).
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepSpec {
  SweepTarget target = SweepTarget::Cdf;
  AuctionParams fixed;
  double cost = 0.0;
  double tax_rate = 0.0;
  /// Up to two axes; the first is the outer loop.
  std::vector<SweepAxis> axes;
  /// Bid grid size for cdf sweeps without a `b` axis.
  int grid = 200;
};

/// Evaluates every sweep point (in parallel) and assembles rows in axis
/// order. Leading columns are the axis names; then, per target:
///   cdf            b,F
///   abstention     p_star
///   revenue        p_star,revenue,submitted
///   submitted      submitted,submitted_limit
///   scheme_compare c,optimal_r1,scheme1_profit,scheme2_revenue,winner
///   mev_tax        tau,expected_tax,upper_bound,asymptote
/// (c and tau are omitted from the tail when they are axes).
CsvTable run_sweep(const SweepSpec& spec);

}  // namespace pga
