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

#ifndef SUSTAINREC_HYBRID_HPP
#define SUSTAINREC_HYBRID_HPP

#include "sustainrec/neighbors.hpp"
#include "sustainrec/sustain.hpp"
#include "sustainrec/topics.hpp"

namespace sustainrec {

struct HybridConfig {
  double alpha = 0.5;                // network weight; 1 - alpha goes to CF
  std::size_t candidate_count = 100; // CF candidates to re-score
  std::size_t k = 20;                // output size
  int cf_neighbors = 20;             // user neighborhood for the candidates
  bool normalize = true;             // min-max both components before blending
};

/// Min-max normalization onto [0, 1] over the list. Constant lists map to
/// all ones so the other blend component decides the order. Item order is
/// preserved.
ScoredList normalize_scores(const ScoredList& list);

/// Blends the user network's candidate scores with user-based CF over the
/// CF top candidates:
///   final(c) = alpha * network(c) + (1 - alpha) * cf(c)
/// after normalizing both components. Returns the top k (ties by
/// ascending resource id); an empty candidate set yields an empty list.
ScoredList hybrid_recommend(const InteractionMatrix& m, const std::string& user,
                            const UserNetwork& net, const TopicTable& topics,
                            const SustainParams& sustain,
                            const HybridConfig& cfg);

}  // namespace sustainrec

#endif  // SUSTAINREC_HYBRID_HPP
