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

#ifndef SUSTAINREC_TOPICS_HPP
#define SUSTAINREC_TOPICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sustainrec/corpus.hpp"
#include "sustainrec/rng.hpp"

namespace sustainrec {

/// Dense per-resource (or per-profile) topic probabilities.
using TopicVector = std::vector<double>;

/// Fitted topic model over the resources of a dataset. Each resource's
/// document is the multiset union of the tags assigned to it.
struct TopicModel {
  int topic_count = 0;
  double alpha = 0.0;  // per-topic document smoothing
  double beta = 0.0;   // topic-word smoothing
  std::vector<std::string> vocabulary;         // word index -> tag
  std::vector<std::string> resources;          // doc index -> resource id
  std::map<std::string, std::size_t> resource_index;
  std::vector<std::vector<double>> doc_topic;  // |R| x K, rows sum to 1
  std::vector<std::vector<double>> topic_word; // K x V, rows sum to 1
};

/// Collapsed Gibbs sampler for latent topic assignments. One instance is
/// one sampling sequence: sweeps are strictly sequential and reproduce
/// bit-for-bit from the seed.
class LdaGibbsSampler {
 public:
  LdaGibbsSampler(std::vector<std::vector<int>> docs, int vocab_size,
                  int topic_count, double alpha, double beta,
                  std::uint64_t seed);

  void sweep();

  int topic_count() const { return topic_count_; }
  int vocab_size() const { return vocab_size_; }
  std::int64_t total_tokens() const { return total_tokens_; }
  /// Sum of per-topic assignment counts; equals total_tokens() at every
  /// point of the sampling sequence.
  std::int64_t assigned_total() const;

  std::vector<std::vector<double>> doc_topic_estimate() const;
  std::vector<std::vector<double>> topic_word_estimate() const;

 private:
  std::vector<std::vector<int>> docs_;
  int vocab_size_;
  int topic_count_;
  double alpha_;
  double beta_;
  std::vector<std::vector<int>> assignments_;  // parallel to docs_
  std::vector<int> doc_topic_count_;           // d * K + k
  std::vector<int> topic_word_count_;          // k * V + w
  std::vector<int> topic_count_total_;         // per topic
  std::int64_t total_tokens_ = 0;
  Rng rng_;
  std::vector<double> cumulative_;  // scratch for sampling
};

/// Fits topics to the resources of `d` with `iterations` full Gibbs
/// sweeps. Smoothing follows the usual convention: alpha = 50/K per
/// topic, beta = 0.01. The estimate comes from the final sweep's counts;
/// average_last > 1 instead averages the estimates of that many final
/// sweeps. Deterministic for a fixed seed.
TopicModel fit_lda(const Dataset& d, int topic_count, int iterations,
                   std::uint64_t seed, int average_last = 0);

/// Zeroes entries below `cutoff` without renormalizing. The largest
/// pre-cutoff entry always survives, so the result is never all-zero.
TopicVector apply_cutoff(const TopicVector& row, double cutoff);

/// Cutoff-filtered copy of a resource's topic distribution.
TopicVector resource_topics(const TopicModel& m, const std::string& resource_id,
                            double cutoff);

/// Resource id -> dense cutoff-filtered topic vector, all of length dim.
struct TopicTable {
  int dim = 0;
  std::map<std::string, TopicVector> rows;
};

TopicTable topic_table_from_model(const TopicModel& m, double cutoff);

/// TSV interchange format, one resource per line:
///   resource_id \t topic:probability topic:probability ...
/// with space-separated pairs and 6-decimal probabilities. Only nonzero
/// entries are written; the dimension is inferred on load.
void save_topic_table(const std::string& path, const TopicTable& table);
TopicTable load_topic_table(const std::string& path);

}  // namespace sustainrec

#endif  // SUSTAINREC_TOPICS_HPP
