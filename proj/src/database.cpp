// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <limits>
#include <map>

#include "viewret/encode.hpp"
#include "viewret/error.hpp"

namespace viewret {

std::vector<Match> query_db(const DescriptorDb& db,
                            const std::vector<FisherDescriptor>& query,
                            std::size_t top_k,
                            const std::vector<std::string>& exclude) {
  if (db.entries.empty()) throw Error(Errc::kEmptyDb, "database has no entries");
  if (query.empty()) {
    throw Error(Errc::kInvalidArgument, "query needs at least one descriptor");
  }
  // Keyed by model id, which also gives the tie-break order.
  std::map<std::string, Match> best;
  for (const auto& entry : db.entries) {
    if (std::find(exclude.begin(), exclude.end(), entry.model_id) != exclude.end()) {
      continue;
    }
    auto [it, inserted] = best.try_emplace(
        entry.model_id,
        Match{entry.model_id, entry.class_id, std::numeric_limits<double>::infinity()});
    for (const auto& q : query) {
      it->second.distance = std::min(
          it->second.distance,
          cosine_distance(q.values, std::span<const float>(entry.descriptor)));
    }
  }
  std::vector<Match> ranking;
  ranking.reserve(best.size());
  for (auto& [id, m] : best) ranking.push_back(std::move(m));
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const Match& a, const Match& b) { return a.distance < b.distance; });
  if (top_k > 0 && ranking.size() > top_k) ranking.resize(top_k);
  return ranking;
}

}  // namespace viewret
