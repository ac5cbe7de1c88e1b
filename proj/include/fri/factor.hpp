#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fri/context.hpp"
#include "fri/graph.hpp"
#include "fri/stats.hpp"

namespace fri {

enum class EdgeGroup { low, medium, high };
const char* to_string(EdgeGroup g);

/// Three-way split of pairs by edge count against h = φ_h·max and
/// l = φ_l·max. Boundaries are inclusive: count >= h is high, count <= l is
/// low.
struct PairGrouping {
  std::vector<NodePair> pairs;
  std::vector<std::size_t> counts;
  std::vector<EdgeGroup> groups;
  std::size_t max_edges = 0;
  double high_threshold = 0.0;
  double low_threshold = 0.0;

  std::vector<NodePair> members(EdgeGroup g) const;
  std::size_t size(EdgeGroup g) const;
};

/// Throws NotApplicable when max_edges is zero.
PairGrouping group_pairs(std::vector<NodePair> pairs, std::vector<std::size_t> counts, double phi_h = 0.7,
                         double phi_l = 0.3);

struct FactorOptions {
  std::size_t construct_pairs = 1200;
  std::size_t test_pairs = 1000;
  std::size_t groups = 10;
  double phi_h = 0.7;
  double phi_l = 0.3;
  std::uint64_t seed = 0;
};

/// Disjoint construction and test samples drawn without replacement from
/// the pairs with at least one edge. When fewer candidates exist than the
/// two sample sizes require, the candidates are split in proportion to the
/// requested sizes and a warning is recorded.
struct FactorSamples {
  std::vector<NodePair> construct;
  std::vector<NodePair> test;
  std::size_t candidates = 0;
  std::vector<std::string> warnings;
};
FactorSamples sample_factor_pairs(const GraphSet& gs, const FactorOptions& opts);

struct HmlFactor {
  std::size_t first_day = 0;  // window-end day of series[0]
  std::vector<double> series;  // h - l
  std::vector<double> h_series, m_series, l_series;
  PairGrouping grouping;
};

/// Mean of the pairs' rolling series at each window-end day, ignoring
/// missing values.
std::vector<double> group_mean_series(const GraphReturns& ctx, std::span<const NodePair> pairs);

/// Throws NotApplicable ("factor undefined") when the sample has no edges or
/// the high or low group is empty.
HmlFactor construct_hml_factor(const GraphReturns& ctx, std::span<const NodePair> sample, const FactorOptions& opts);

struct FactorTestResult {
  std::vector<double> betas;
  std::vector<double> alphas;
  std::vector<std::size_t> group_sizes;
  double delta_beta = 0.0;
};

/// Sorts the test sample by edge count, splits it into ordered groups
/// (remainder to the highest groups) and regresses each group's mean
/// rolling correlation on HML_R.
FactorTestResult test_hml_factor(const GraphReturns& ctx, const HmlFactor& factor, std::span<const NodePair> sample,
                                 const FactorOptions& opts);

/// Same regression for explicit group series; exposed for direct checks.
FactorTestResult regress_groups(std::span<const std::vector<double>> group_series, std::span<const double> hml,
                                std::vector<std::size_t> group_sizes = {});

/// Mean successive difference of β. Throws on fewer than two values.
double delta_beta(std::span<const double> betas);

}  // namespace fri
