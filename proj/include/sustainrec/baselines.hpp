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

#ifndef SUSTAINREC_BASELINES_HPP
#define SUSTAINREC_BASELINES_HPP

#include <set>
#include <string>

#include "sustainrec/neighbors.hpp"
#include "sustainrec/topics.hpp"

namespace sustainrec {

/// Unpersonalized popularity ranking: score is the number of training
/// posts holding the resource; ties by ascending resource id. The same
/// list serves every user; owned resources are dropped at evaluation time.
ScoredList most_popular(const Dataset& train, std::size_t n);

/// Mean of the user's training resources' topic vectors.
struct UserTopicProfile {
  std::string user_id;
  TopicVector profile;
};

UserTopicProfile user_topic_profile(const Dataset& train,
                                    const std::string& user,
                                    const TopicTable& topics);

/// Cosine similarity of dense non-negative vectors; 0 if either is zero.
double cosine_dense(const TopicVector& a, const TopicVector& b);

/// Content-based ranking: cosine between the user profile and each
/// unowned resource's topic vector. An all-zero profile yields an empty
/// list.
ScoredList cb_topic_scores(const UserTopicProfile& profile,
                           const TopicTable& resources,
                           const std::set<std::string>& owned, std::size_t n);

}  // namespace sustainrec

#endif  // SUSTAINREC_BASELINES_HPP
