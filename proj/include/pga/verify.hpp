#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pga/model.hpp"
#include "pga/random.hpp"

namespace pga {

/// Default runs every check at its stated scale; Quick shrinks trial counts,
/// draw counts and simulation lengths for smoke testing.
enum class Battery { Quick, Default };

std::optional<Battery> parse_battery(std::string_view name);
const char* to_string(Battery battery);

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

inline constexpr int kCheckCount = 12;

/// Random valid parameters for batteries: g in [0.1, 5], V - g in [0.5, 50],
/// r1, r2 in (0, 1], N in [2, max_agents].
AuctionParams random_params(Philox& rng, int max_agents = 30);

/// Runs check `id` (1..12). The runtime budget is part of the verdict only
/// for the default battery.
CheckResult run_check(int id, Battery battery, std::uint64_t seed);

std::vector<CheckResult> run_battery(Battery battery, std::uint64_t seed);

}  // namespace pga
