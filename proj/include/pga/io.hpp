#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pga/analytics.hpp"
#include "pga/equilibrium.hpp"
#include "pga/market_sim.hpp"
#include "pga/model.hpp"
#include "pga/oracle.hpp"

namespace pga {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits ("%.17g"); "inf", "-inf" and "nan" spelled out.
std::string format_double(double x);

/// A grid of pre-formatted cells with a one-line header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out) const;
  std::string str() const;
};

CsvTable events_table(const MarketSimReport& report);

Json to_json(const AuctionParams& params);
Json to_json(const RevenueReport& report);
Json to_json(const Equilibrium& eq);
Json to_json(const PureEquilibrium& eq);
Json to_json(const SchemeComparison& cmp);
Json to_json(const MevTaxReport& report);
Json to_json(const McEstimate& est);
Json to_json(const OracleReport& report);
Json to_json(const MarketSimConfig& config);
/// Summary metrics, ERA series and histogram; per-block events go to CSV.
Json to_json(const MarketSimReport& report);

/// Top-level report envelope: {"schema_version": 1, "kind": kind, ...body}.
Json envelope(const std::string& kind, const Json& body);

/// Writes `text` to `path`, throwing InvalidArgument if the file cannot be opened.
void write_file(const std::string& path, const std::string& text);

}  // namespace pga
