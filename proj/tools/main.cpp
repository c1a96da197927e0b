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

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "sustainrec/pipeline.hpp"

namespace {

using sustainrec::PostFormat;
using sustainrec::RunConfig;

struct CliOptions {
  RunConfig cfg;
  std::string format = "tag-per-line";
  std::string algorithms;
};

void add_common_options(CLI::App& cmd, CliOptions& opt) {
  cmd.set_config("--config", "", "Config file with 'key = value' lines");
  cmd.add_option("--dataset", opt.cfg.dataset_path,
                 "Tab-separated post log to ingest");
  cmd.add_option("--format", opt.format,
                 "Input layout: tag-per-line or packed")
      ->check(CLI::IsMember({"tag-per-line", "packed"}));
  cmd.add_flag("--filter-unique,!--no-filter-unique", opt.cfg.filter_unique,
               "Drop resources bookmarked by a single user (default on)");
  cmd.add_option("--sample-fraction", opt.cfg.sample_fraction,
                 "Fraction of users to keep, in (0, 1]");
  cmd.add_flag("--sample-before-filter", opt.cfg.sample_before_filter,
               "Sample users before the unique-resource filter");
  cmd.add_option("--test-fraction", opt.cfg.test_fraction,
                 "Per-user share of most recent posts held out for testing");
  cmd.add_option("--topics", opt.cfg.topic_count, "Number of latent topics");
  cmd.add_option("--lda-iterations", opt.cfg.lda_iterations,
                 "Gibbs sweeps for topic fitting");
  cmd.add_option("--topic-cutoff", opt.cfg.topic_cutoff,
                 "Zero topic probabilities below this value");
  cmd.add_option("--lda-average-last", opt.cfg.lda_average_last,
                 "Average the estimates of the last N sweeps (0 = final only)");
  cmd.add_flag("--lda-train-only", opt.cfg.lda_train_only,
               "Fit topics on the training split instead of the full dataset");
  cmd.add_option("--topics-file", opt.cfg.topics_file,
                 "Precomputed topic table; skips topic fitting");
  cmd.add_option("--sustain-r", opt.cfg.sustain.r, "Attentional focus");
  cmd.add_option("--sustain-beta", opt.cfg.sustain.beta, "Cluster competition");
  cmd.add_option("--sustain-eta", opt.cfg.sustain.eta, "Learning rate");
  cmd.add_option("--sustain-tau", opt.cfg.sustain.tau,
                 "Cluster recruitment threshold");
  cmd.add_option("--cf-user-k", opt.cfg.cf_user_neighbors,
                 "User neighborhood size");
  cmd.add_option("--cf-resource-k", opt.cfg.cf_resource_neighbors,
                 "Resource neighborhood size");
  cmd.add_option("--wrmf-factors", opt.cfg.wrmf_factors, "Latent factors");
  cmd.add_option("--wrmf-iterations", opt.cfg.wrmf_iterations, "ALS sweeps");
  cmd.add_option("--wrmf-reg", opt.cfg.wrmf_reg, "Regularization");
  cmd.add_option("--wrmf-conf-alpha", opt.cfg.wrmf_conf_alpha,
                 "Confidence weight on observed entries");
  cmd.add_option("--hybrid-alpha", opt.cfg.hybrid_alpha,
                 "Weight of the network score in the blend, in [0, 1]");
  cmd.add_option("--hybrid-candidates", opt.cfg.hybrid_candidates,
                 "CF candidates re-scored by the network");
  cmd.add_flag("--hybrid-normalize,!--no-normalize", opt.cfg.hybrid_normalize,
               "Min-max normalize both components before blending");
  cmd.add_option("--eval-k", opt.cfg.eval_k, "Ranking cutoff for the metrics");
  cmd.add_option("--algorithms", opt.algorithms,
                 "Comma-separated subset of mp,cf_u,cf_r,cb_t,wrmf,sustain_cf_u");
  cmd.add_option("--output-dir", opt.cfg.output_dir,
                 "Directory for artifacts and reports");
  cmd.add_option("--seed", opt.cfg.seed, "Global seed; stages derive theirs");
  cmd.add_option("--threads", opt.cfg.threads, "Worker pool size per stage");
}

RunConfig resolve(CliOptions& opt) {
  opt.cfg.format = sustainrec::post_format_from_string(opt.format);
  if (!opt.algorithms.empty())
    sustainrec::set_config_value(opt.cfg, "algorithms", opt.algorithms);
  return opt.cfg;
}

void print_stats(const sustainrec::Dataset& d) {
  const auto stats = d.stats();
  std::cout << "posts\t" << stats.posts << "\n"
            << "users\t" << stats.users << "\n"
            << "resources\t" << stats.resources << "\n"
            << "tags\t" << stats.tags << "\n"
            << "tag-assignments\t" << stats.tag_assignments << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid bookmark-recommender benchmark"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* ingest =
      app.add_subcommand("ingest", "Parse, filter and write the dataset");
  CLI::App* topics =
      app.add_subcommand("topics", "Fit (or ingest) the resource topic table");
  CLI::App* train = app.add_subcommand(
      "train-sustain", "Train one category-learning network per user");
  CLI::App* recommend = app.add_subcommand(
      "recommend", "Write per-user recommendation lists for each algorithm");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Run recommenders and report metrics");
  CLI::App* run_all =
      app.add_subcommand("run-all", "Full pipeline: ingest through evaluate");
  for (CLI::App* cmd : {ingest, topics, train, recommend, evaluate, run_all})
    add_common_options(*cmd, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve(opt);
    if (ingest->parsed()) {
      sustainrec::Pipeline pipeline(cfg, &std::cout);
      print_stats(pipeline.filtered());
    } else if (topics->parsed()) {
      sustainrec::Pipeline pipeline(cfg, &std::cout);
      pipeline.topics();
    } else if (train->parsed()) {
      sustainrec::Pipeline pipeline(cfg, &std::cout);
      pipeline.networks();
    } else if (recommend->parsed()) {
      sustainrec::Pipeline pipeline(cfg, &std::cout);
      for (const std::string& algorithm : cfg.algorithms)
        pipeline.recommendations(algorithm);
    } else {
      sustainrec::run_pipeline(cfg, std::cout);
    }
  } catch (const sustainrec::StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
