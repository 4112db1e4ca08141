// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_EVAL_HPP
#define VIEWRET_EVAL_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "viewret/pipeline.hpp"

namespace viewret {

struct RankedItem {
  std::string model_id;
  std::uint32_t class_id = 0;
  double distance = 0.0;
};

/// One query's ranking, best match first. Relevance is class equality.
struct RankedRetrieval {
  std::string query_id;
  std::uint32_t query_class = 0;
  std::vector<RankedItem> items;
  /// Relevant items in the whole collection when `items` is truncated;
  /// defaults to the relevant count inside `items`.
  std::optional<std::size_t> relevant_total;

  std::size_t relevant_in_list() const;
  std::size_t relevant_universe() const;
};

/// (recall, precision) after each rank. Throws NoRelevant when the
/// collection holds nothing relevant.
std::vector<std::pair<double, double>> precision_recall_curve(const RankedRetrieval& r);

/// Average precision: mean precision at the ranks of relevant items; 0 when
/// none is retrieved.
double average_precision(const RankedRetrieval& r);

/// Binary-relevance NDCG of one ranking in [0, 1]; 0 without relevant items.
double ndcg(const RankedRetrieval& r);

/// Percent of queries whose rank-1 item shares the query class.
double nn_metric(const std::vector<RankedRetrieval>& results);

/// Percent; per-query AP averaged within each class, then across classes.
double map_metric(const std::vector<RankedRetrieval>& results);

/// Percent; NDCG averaged over queries.
double ndcg_metric(const std::vector<RankedRetrieval>& results);

/// Angle between two viewpoints in radians.
double angular_error(const Viewpoint& estimate, const Viewpoint& truth);

enum class ViewpointSource { kGroundTruth, kProposed, kRansac };
enum class ResolutionSource { kProposed, kFixed };

struct CaseConfig {
  std::string name;
  ViewpointSource viewpoint = ViewpointSource::kProposed;
  ResolutionSource resolution = ResolutionSource::kProposed;
};

/// gt-prop, gt-fixed, prop-prop, prop-fixed, ransac-prop, ransac-fixed.
CaseConfig parse_case(const std::string& name);
std::vector<CaseConfig> parse_cases(const std::string& comma_list);
std::vector<CaseConfig> all_cases();

struct BenchItem {
  std::string id;
  std::uint32_t class_id = 0;
  PointCloud cloud;
  std::optional<Viewpoint> ground_truth;
};

/// Scans of upright primitives (sphere, box, cylinder, cone = classes 0..3)
/// with per-instance dimensions and scanner poses drawn from the seed.
struct SyntheticDatasetConfig {
  int scans_per_class = 5;
  double min_distance = 3.5;
  double max_distance = 5.0;
  double min_elevation_deg = 0.0;
  double max_elevation_deg = 45.0;
  double angular_step_deg = 0.35;
  double noise_sigma = 0.0;
  std::uint64_t seed = 42;
};

/// Applies recognized dataset keys (scans_per_class, min_distance,
/// max_distance, min_elevation_deg, max_elevation_deg, scan_step_deg,
/// scan_noise_sigma) and returns the rest.
std::vector<std::string> apply_dataset_config(const KeyValues& kv,
                                              SyntheticDatasetConfig& cfg);

std::vector<BenchItem> make_synthetic_dataset(const SyntheticDatasetConfig& cfg);

struct CaseReport {
  CaseConfig config;
  double nn = 0.0;
  double map = 0.0;
  double ndcg = 0.0;
  /// Mean angle to ground truth over items that have it; absent otherwise.
  std::optional<double> mean_angular_error;
  std::vector<Viewpoint> viewpoints;  // per item, in dataset order
  std::vector<int> resolutions;
  std::vector<RankedRetrieval> rankings;
};

struct BenchmarkReport {
  std::vector<CaseReport> cases;
};

/// Leave-one-out retrieval per case: every item queries a database built
/// from all items (views at the case's resolution policy), with its own
/// entries excluded from the ranking.
BenchmarkReport run_benchmark(const std::vector<BenchItem>& dataset,
                              const std::vector<CaseConfig>& cases,
                              const PipelineConfig& cfg);

/// `case,metric,value`.
void write_report_csv(std::ostream& os, const BenchmarkReport& report);
/// `case,query_id,recall,precision`.
void write_pr_csv(std::ostream& os, const BenchmarkReport& report);

}  // namespace viewret

#endif  // VIEWRET_EVAL_HPP
