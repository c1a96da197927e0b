/**
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing,
 *  software distributed under the License is distributed on an "AS
 *  IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
 *  express or implied.  See the License for the specific language
 *  governing permissions and limitations under the License.
 */

#include "sustainrec/hybrid.hpp"

#include <algorithm>
#include <stdexcept>

namespace sustainrec {

ScoredList normalize_scores(const ScoredList& list) {
  if (list.empty()) return {};
  double lo = list.front().score;
  double hi = list.front().score;
  for (const ScoredItem& item : list) {
    lo = std::min(lo, item.score);
    hi = std::max(hi, item.score);
  }
  ScoredList out(list);
  if (hi == lo) {
    for (ScoredItem& item : out) item.score = 1.0;
  } else {
    const double range = hi - lo;
    for (ScoredItem& item : out) item.score = (item.score - lo) / range;
  }
  return out;
}

ScoredList hybrid_recommend(const InteractionMatrix& m, const std::string& user,
                            const UserNetwork& net, const TopicTable& topics,
                            const SustainParams& sustain,
                            const HybridConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
    throw std::invalid_argument("hybrid_recommend: alpha must be in [0, 1]");
  if (cfg.k < 1 || cfg.candidate_count < cfg.k)
    throw std::invalid_argument(
        "hybrid_recommend: need candidate_count >= k >= 1");
  if (net.clusters.empty())
    throw std::runtime_error("hybrid_recommend: untrained network");

  const ScoredList candidates =
      cf_user_scores(m, user, cfg.cf_neighbors, cfg.candidate_count);
  if (candidates.empty()) return {};

  ScoredList network_scores;
  network_scores.reserve(candidates.size());
  const TopicVector fallback(net.dim(), 0.0);
  for (const ScoredItem& c : candidates) {
    const auto row = topics.rows.find(c.resource);
    const TopicVector& input = row == topics.rows.end() ? fallback : row->second;
    network_scores.push_back({c.resource, score_candidate(net, input, sustain)});
  }

  const ScoredList cf_part = cfg.normalize ? normalize_scores(candidates)
                                           : candidates;
  const ScoredList net_part = cfg.normalize ? normalize_scores(network_scores)
                                            : network_scores;

  ScoredList blended;
  blended.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    blended.push_back({candidates[i].resource,
                       cfg.alpha * net_part[i].score +
                           (1.0 - cfg.alpha) * cf_part[i].score});
  std::sort(blended.begin(), blended.end(),
            [](const ScoredItem& a, const ScoredItem& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.resource < b.resource;
            });
  if (blended.size() > cfg.k) blended.resize(cfg.k);
  return blended;
}

}  // namespace sustainrec
