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

#include "sustainrec/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sustainrec {

ScoredList most_popular(const Dataset& train, std::size_t n) {
  ScoredList list;
  list.reserve(train.resources().size());
  // The resource index is sorted by id, so a stable sort on the count
  // keeps ties in ascending id order.
  for (const auto& [resource, idxs] : train.resources())
    list.push_back({resource, static_cast<double>(idxs.size())});
  std::stable_sort(list.begin(), list.end(),
                   [](const ScoredItem& a, const ScoredItem& b) {
                     return a.score > b.score;
                   });
  if (list.size() > n) list.resize(n);
  return list;
}

UserTopicProfile user_topic_profile(const Dataset& train,
                                    const std::string& user,
                                    const TopicTable& topics) {
  UserTopicProfile result;
  result.user_id = user;
  result.profile.assign(topics.dim, 0.0);
  const auto it = train.users().find(user);
  if (it == train.users().end())
    throw std::out_of_range("user_topic_profile: unknown user: " + user);
  std::size_t counted = 0;
  for (const std::size_t idx : it->second) {
    const auto row = topics.rows.find(train.posts()[idx].resource);
    if (row == topics.rows.end()) continue;
    for (std::size_t k = 0; k < row->second.size(); ++k)
      result.profile[k] += row->second[k];
    ++counted;
  }
  if (counted > 0)
    for (double& v : result.profile) v /= static_cast<double>(counted);
  return result;
}

double cosine_dense(const TopicVector& a, const TopicVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine_dense: dimension mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

ScoredList cb_topic_scores(const UserTopicProfile& profile,
                           const TopicTable& resources,
                           const std::set<std::string>& owned, std::size_t n) {
  const bool all_zero =
      std::all_of(profile.profile.begin(), profile.profile.end(),
                  [](double v) { return v == 0.0; });
  if (all_zero) return {};

  ScoredList list;
  for (const auto& [resource, row] : resources.rows) {
    if (owned.count(resource)) continue;
    list.push_back({resource, cosine_dense(profile.profile, row)});
  }
  std::stable_sort(list.begin(), list.end(),
                   [](const ScoredItem& a, const ScoredItem& b) {
                     return a.score > b.score;
                   });
  if (list.size() > n) list.resize(n);
  return list;
}

}  // namespace sustainrec
