// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>

#include "viewret/error.hpp"
#include "viewret/eval.hpp"

namespace viewret {

std::size_t RankedRetrieval::relevant_in_list() const {
  return static_cast<std::size_t>(std::count_if(
      items.begin(), items.end(),
      [&](const RankedItem& it) { return it.class_id == query_class; }));
}

std::size_t RankedRetrieval::relevant_universe() const {
  return relevant_total.value_or(relevant_in_list());
}

std::vector<std::pair<double, double>> precision_recall_curve(const RankedRetrieval& r) {
  const std::size_t total = r.relevant_universe();
  if (total == 0) throw Error(Errc::kNoRelevant, "query " + r.query_id + " has no relevant item");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(r.items.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    if (r.items[i].class_id == r.query_class) ++hits;
    curve.emplace_back(static_cast<double>(hits) / total,
                       static_cast<double>(hits) / static_cast<double>(i + 1));
  }
  return curve;
}

double average_precision(const RankedRetrieval& r) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    if (r.items[i].class_id != r.query_class) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double ndcg(const RankedRetrieval& r) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    if (r.items[i].class_id == r.query_class) dcg += 1.0 / std::log2(i + 2.0);
  }
  const std::size_t rel = r.relevant_in_list();
  if (rel == 0) return 0.0;
  double ideal = 0.0;
  for (std::size_t i = 0; i < rel; ++i) ideal += 1.0 / std::log2(i + 2.0);
  return dcg / ideal;
}

double nn_metric(const std::vector<RankedRetrieval>& results) {
  if (results.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& r : results) {
    if (r.items.empty()) throw Error(Errc::kInvalidArgument, "empty ranking for " + r.query_id);
    if (r.items.front().class_id == r.query_class) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(results.size());
}

double map_metric(const std::vector<RankedRetrieval>& results) {
  if (results.empty()) return 0.0;
  std::map<std::uint32_t, std::pair<double, std::size_t>> per_class;
  for (const auto& r : results) {
    auto& [sum, n] = per_class[r.query_class];
    sum += average_precision(r);
    ++n;
  }
  double total = 0.0;
  for (const auto& [cls, acc] : per_class) total += acc.first / static_cast<double>(acc.second);
  return 100.0 * total / static_cast<double>(per_class.size());
}

double ndcg_metric(const std::vector<RankedRetrieval>& results) {
  if (results.empty()) return 0.0;
  double total = 0.0;
  for (const auto& r : results) total += ndcg(r);
  return 100.0 * total / static_cast<double>(results.size());
}

double angular_error(const Viewpoint& estimate, const Viewpoint& truth) {
  return std::acos(std::clamp(estimate.direction().dot(truth.direction()), -1.0, 1.0));
}

}  // namespace viewret
