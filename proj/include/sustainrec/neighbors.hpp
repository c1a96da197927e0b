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

#ifndef SUSTAINREC_NEIGHBORS_HPP
#define SUSTAINREC_NEIGHBORS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sustainrec/corpus.hpp"

namespace sustainrec {

/// Recommendation output: descending score, ties by ascending resource id.
struct ScoredItem {
  std::string resource;
  double score = 0.0;
};
using ScoredList = std::vector<ScoredItem>;

/// TSV dump `rank \t resource \t score` (6 decimals).
std::string serialize_scored_list(const ScoredList& list);

/// Per-user dump `user \t rank \t resource \t score`; loading preserves
/// each user's rank order.
void save_user_recommendations(
    const std::string& path,
    const std::map<std::string, ScoredList>& recommendations);
std::map<std::string, ScoredList> load_user_recommendations(
    const std::string& path);

/// Binary user-resource matrix over a training split. Users and resources
/// are indexed in ascending id order, so index comparisons reproduce id
/// tie-breaks. Immutable after construction.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;
  static InteractionMatrix from_dataset(const Dataset& train);

  std::size_t user_count() const { return user_ids_.size(); }
  std::size_t resource_count() const { return resource_ids_.size(); }
  const std::vector<int>& user_items(int user) const { return rows_[user]; }
  const std::vector<int>& item_users(int resource) const {
    return cols_[resource];
  }
  /// -1 when absent.
  int user_index(const std::string& user) const;
  int resource_index(const std::string& resource) const;
  const std::string& user_id(int index) const { return user_ids_[index]; }
  const std::string& resource_id(int index) const {
    return resource_ids_[index];
  }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<std::string>& resource_ids() const { return resource_ids_; }

 private:
  std::vector<std::string> user_ids_;
  std::vector<std::string> resource_ids_;
  std::map<std::string, int> user_index_;
  std::map<std::string, int> resource_index_;
  std::vector<std::vector<int>> rows_;  // sorted resource indices per user
  std::vector<std::vector<int>> cols_;  // sorted user indices per resource
};

/// Cosine similarity of two binary vectors given as sorted index sets:
/// |a n b| / sqrt(|a| |b|); 0 when either is empty.
double cosine(const std::vector<int>& a, const std::vector<int>& b);

/// User-based CF: sums the similarities of the k most similar users
/// (ties by ascending user id) over each resource they hold that the
/// target user does not. Empty training row yields an empty list.
ScoredList cf_user_scores(const InteractionMatrix& m, const std::string& user,
                          int k, std::size_t n_candidates);

/// Per-resource top-k similar resources (self excluded), reusable across
/// users since they depend only on the matrix.
struct ResourceNeighborhoods {
  int k = 0;
  std::vector<std::vector<std::pair<int, double>>> neighbors;
};
ResourceNeighborhoods resource_neighborhoods(const InteractionMatrix& m, int k);

/// Resource-based CF: for each owned resource, its k most similar other
/// resources (ties by ascending id) contribute their similarity to every
/// unowned neighbor's score.
ScoredList cf_resource_scores(const InteractionMatrix& m,
                              const std::string& user, int k,
                              std::size_t n_candidates);
ScoredList cf_resource_scores(const InteractionMatrix& m,
                              const ResourceNeighborhoods& cache,
                              const std::string& user,
                              std::size_t n_candidates);

}  // namespace sustainrec

#endif  // SUSTAINREC_NEIGHBORS_HPP
