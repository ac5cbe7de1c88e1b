#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fri/aecr.hpp"
#include "fri/css.hpp"
#include "fri/dcc.hpp"
#include "fri/factor.hpp"
#include "fri/graph.hpp"
#include "fri/market_data.hpp"

namespace fri {

inline constexpr int kReportSchemaVersion = 1;

enum class Indicator { css, aecr, factor, dcc };
const char* to_string(Indicator i);
Indicator parse_indicator(std::string_view name);

enum class Status { ok, not_applicable, failed, not_requested };
const char* to_string(Status s);

template <typename T>
struct Outcome {
  Status status = Status::not_requested;
  std::string reason;
  std::optional<T> value;
  double seconds = 0.0;

  // Ok and not-applicable both count as completed.
  bool completed() const { return status == Status::ok || status == Status::not_applicable; }
};

struct FactorOutcome {
  FactorSamples samples;
  // Sample manifests by ticker symbol, for audit.
  std::vector<std::pair<std::string, std::string>> construct_manifest, test_manifest;
  std::optional<HmlFactor> factor;
  std::optional<FactorTestResult> test;
};

struct EvalOptions {
  std::string label = "graph";
  std::string variant;  // news | corr | static | synthetic ...
  std::optional<int> tau;
  std::optional<double> theta;
  std::size_t epsilon = 21;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::set<Indicator> only = {Indicator::css, Indicator::aecr, Indicator::factor, Indicator::dcc};
  FactorOptions factor;  // seed is overwritten with `seed`
  FitOptions fit;
  PairUniverse universe = PairUniverse::with_events;
  std::map<std::string, std::string> dataset_hashes;
};

struct FriReport {
  EvalOptions options;
  Outcome<CssReport> css;
  Outcome<AecrReport> aecr;
  Outcome<FactorOutcome> factor;
  Outcome<DccReport> dcc;

  bool all_completed() const;
  // Table values with not-applicable or failed indicators reported as 0.
  double css_value() const;
  double aecr_value() const;
  double delta_beta_value() const;
  double delta_dcc_value() const;
};

/// Runs the requested indicators in sequence; per-indicator errors are
/// captured in the outcome rather than thrown.
FriReport evaluate(const GraphSet& graph, const ReturnPanel& returns, const EvalOptions& opts);

nlohmann::ordered_json to_json(const FriReport& report, bool include_timing = false);

std::string table_header_csv();
std::string table_row_csv(const FriReport& report);

/// Stable 64-bit FNV-1a of a file's bytes, hex encoded.
std::string file_hash(const std::string& path);

}  // namespace fri
