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

#ifndef SUSTAINREC_EVAL_HPP
#define SUSTAINREC_EVAL_HPP

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sustainrec/corpus.hpp"
#include "sustainrec/neighbors.hpp"

namespace sustainrec {

struct PrPoint {
  int k = 0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Per-algorithm ranking quality, averaged over evaluated users.
struct MetricsReport {
  std::string algorithm;
  int k = 0;
  std::size_t user_count = 0;
  double ndcg = 0.0;
  double map = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  std::vector<PrPoint> pr_curve;  // cutoffs 1..20
};

/// hits = |top-k n relevant|; precision = hits / k, recall = hits /
/// |relevant|. Binary relevance throughout.
std::pair<double, double> precision_recall_at_k(
    const ScoredList& recommended, const std::set<std::string>& relevant,
    int k);

/// AP@k = sum of precision@i over hit ranks i <= k, divided by
/// min(|relevant|, k) so a perfect top-k list scores 1.
double average_precision_at_k(const ScoredList& recommended,
                              const std::set<std::string>& relevant, int k);

/// Binary nDCG with 1/log2(i + 1) discounts and the ideal list truncated
/// at min(|relevant|, k).
double ndcg_at_k(const ScoredList& recommended,
                 const std::set<std::string>& relevant, int k);

using Recommender = std::function<ScoredList(const std::string& user)>;

/// Evaluates a recommender over every user with test posts: the four
/// metrics at `k` plus precision/recall at every cutoff 1..20, all as
/// unweighted means. Users whose recommender returns nothing count as
/// zeros. Throws when the split has no testable user.
MetricsReport evaluate(const std::string& algorithm, const Recommender& fn,
                       const SplitDataset& split, int k);

/// Same, over precomputed per-user lists (missing users count as empty).
MetricsReport evaluate_lists(
    const std::string& algorithm,
    const std::map<std::string, ScoredList>& recommendations,
    const SplitDataset& split, int k);

/// CSV `algorithm,metric,k,value` rows for the four headline metrics.
void save_metrics_csv(const std::string& path,
                      const std::vector<MetricsReport>& reports);
/// CSV `algorithm,k,precision,recall` rows for external plotting.
void save_pr_curve_csv(const std::string& path,
                       const std::vector<MetricsReport>& reports);

}  // namespace sustainrec

#endif  // SUSTAINREC_EVAL_HPP
