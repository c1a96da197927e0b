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

#ifndef SUSTAINREC_PIPELINE_HPP
#define SUSTAINREC_PIPELINE_HPP

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sustainrec/baselines.hpp"
#include "sustainrec/corpus.hpp"
#include "sustainrec/eval.hpp"
#include "sustainrec/hybrid.hpp"
#include "sustainrec/neighbors.hpp"
#include "sustainrec/sustain.hpp"
#include "sustainrec/topics.hpp"
#include "sustainrec/wrmf.hpp"

namespace sustainrec {

/// Recommender identifiers accepted in RunConfig::algorithms.
extern const std::vector<std::string> kKnownAlgorithms;
std::string algorithm_display_name(const std::string& algorithm);

/// Everything a batch run needs; serializable as `key = value` lines so a
/// run can be replayed exactly from its config echo. The single seed
/// derives stage seeds by fixed offsets: +1 user sampling, +2 topic
/// fitting, +3 factorization.
struct RunConfig {
  std::string dataset_path;
  PostFormat format = PostFormat::TagPerLine;
  bool filter_unique = true;
  double sample_fraction = 1.0;
  bool sample_before_filter = false;
  double test_fraction = 0.2;

  int topic_count = 500;
  int lda_iterations = 2000;
  double topic_cutoff = 0.01;
  int lda_average_last = 0;
  bool lda_train_only = false;
  std::string topics_file;  // skip topic fitting, ingest this table

  SustainParams sustain;

  int cf_user_neighbors = 20;
  int cf_resource_neighbors = 20;

  int wrmf_factors = 500;
  int wrmf_iterations = 100;
  double wrmf_reg = 0.001;
  double wrmf_conf_alpha = 1.0;

  double hybrid_alpha = 0.5;
  std::size_t hybrid_candidates = 100;
  bool hybrid_normalize = true;

  int eval_k = 20;
  std::vector<std::string> algorithms = {"mp",   "cf_u", "cf_r",
                                         "cb_t", "wrmf", "sustain_cf_u"};
  std::string output_dir = "out";
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

void validate_run_config(const RunConfig& cfg);
std::string serialize_run_config(const RunConfig& cfg);
/// Applies one `key = value` assignment; throws on unknown keys or
/// unparsable values.
void set_config_value(RunConfig& cfg, const std::string& key,
                      const std::string& value);
RunConfig load_run_config(const std::string& path);

/// Error with the pipeline stage it came from.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Lazily materializes the stage chain
///   ingest -> topics -> train-sustain -> recommend -> evaluate,
/// writing each stage's artifact (plus a config fingerprint) into the
/// output directory. A stage whose fingerprint already matches on disk is
/// reloaded instead of recomputed; either way downstream stages consume
/// the serialized artifact, so cached and fresh runs agree byte for byte.
class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg, std::ostream* log = nullptr);

  const RunConfig& config() const { return cfg_; }
  const Dataset& filtered();
  const SplitDataset& split();
  const InteractionMatrix& matrix();
  const TopicTable& topics();
  const std::map<std::string, UserNetwork>& networks();
  const std::map<std::string, ScoredList>& recommendations(
      const std::string& algorithm);
  /// Runs everything configured and writes metrics.csv / pr_curve.csv.
  std::vector<MetricsReport> evaluate_all();

 private:
  template <typename Fn>
  auto run_stage(const std::string& stage, Fn&& fn);
  void log(const std::string& message);
  bool stage_cached(const std::string& artifact, const std::string& meta_name,
                    const std::string& fingerprint);
  void commit_stage(const std::string& meta_name,
                    const std::string& fingerprint);

  std::string ingest_fingerprint() const;
  std::string topics_fingerprint() const;
  std::string networks_fingerprint() const;
  std::string recs_fingerprint(const std::string& algorithm) const;

  std::map<std::string, ScoredList> compute_recommendations(
      const std::string& algorithm);

  RunConfig cfg_;
  std::ostream* log_ = nullptr;
  std::optional<Dataset> filtered_;
  std::optional<SplitDataset> split_;
  std::optional<InteractionMatrix> matrix_;
  std::optional<TopicTable> topics_;
  std::optional<std::map<std::string, UserNetwork>> networks_;
  std::map<std::string, std::map<std::string, ScoredList>> recs_;
};

/// Full batch run: executes every stage, prints progress plus a final
/// per-algorithm summary table to `out`, and leaves all artifacts in
/// cfg.output_dir. On failure a FAILED marker naming the stage is left
/// there and a StageError is thrown.
std::vector<MetricsReport> run_pipeline(const RunConfig& cfg,
                                        std::ostream& out = std::cout);

}  // namespace sustainrec

#endif  // SUSTAINREC_PIPELINE_HPP
