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

#include "sustainrec/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "sustainrec/parallel.hpp"
#include "sustainrec/util.hpp"

namespace sustainrec {

const std::vector<std::string> kKnownAlgorithms = {
    "mp", "cf_u", "cf_r", "cb_t", "wrmf", "sustain_cf_u"};

std::string algorithm_display_name(const std::string& algorithm) {
  if (algorithm == "mp") return "MP";
  if (algorithm == "cf_u") return "CF_U";
  if (algorithm == "cf_r") return "CF_R";
  if (algorithm == "cb_t") return "CB_T";
  if (algorithm == "wrmf") return "WRMF";
  if (algorithm == "sustain_cf_u") return "SUSTAIN+CF_U";
  return algorithm;
}

namespace {

std::string bool_str(bool v) { return v ? "true" : "false"; }

bool parse_bool(const std::string& value, bool& out) {
  if (value == "true" || value == "1") {
    out = true;
    return true;
  }
  if (value == "false" || value == "0") {
    out = false;
    return true;
  }
  return false;
}

std::string join_algorithms(const std::vector<std::string>& algorithms) {
  std::string out;
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    if (i) out += ',';
    out += algorithms[i];
  }
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

}  // namespace

void validate_run_config(const RunConfig& cfg) {
  auto fail = [](const std::string& message) {
    throw std::invalid_argument("config: " + message);
  };
  if (cfg.dataset_path.empty() && cfg.topics_file.empty())
    fail("dataset path is required");
  if (cfg.dataset_path.empty()) fail("dataset path is required");
  if (cfg.output_dir.empty()) fail("output-dir is required");
  if (!(cfg.sample_fraction > 0.0) || cfg.sample_fraction > 1.0)
    fail("sample-fraction must be in (0, 1]");
  if (!(cfg.test_fraction > 0.0) || !(cfg.test_fraction < 1.0))
    fail("test-fraction must be in (0, 1)");
  if (cfg.topic_count < 1) fail("topics must be >= 1");
  if (cfg.lda_iterations < 1) fail("lda-iterations must be >= 1");
  if (cfg.topic_cutoff < 0.0) fail("topic-cutoff must be >= 0");
  if (cfg.lda_average_last < 0) fail("lda-average-last must be >= 0");
  if (cfg.sustain.r < 0.0) fail("sustain-r must be >= 0");
  if (cfg.sustain.beta < 0.0) fail("sustain-beta must be >= 0");
  if (!(cfg.sustain.eta > 0.0) || !(cfg.sustain.eta < 1.0))
    fail("sustain-eta must be in (0, 1)");
  if (!(cfg.sustain.tau > 0.0) || !(cfg.sustain.tau < 1.0))
    fail("sustain-tau must be in (0, 1)");
  if (cfg.cf_user_neighbors < 1) fail("cf-user-k must be >= 1");
  if (cfg.cf_resource_neighbors < 1) fail("cf-resource-k must be >= 1");
  if (cfg.wrmf_factors < 1) fail("wrmf-factors must be >= 1");
  if (cfg.wrmf_iterations < 1) fail("wrmf-iterations must be >= 1");
  if (!(cfg.wrmf_reg > 0.0)) fail("wrmf-reg must be > 0");
  if (cfg.wrmf_conf_alpha < 0.0) fail("wrmf-conf-alpha must be >= 0");
  if (!(cfg.hybrid_alpha >= 0.0 && cfg.hybrid_alpha <= 1.0))
    fail("hybrid-alpha must be in [0, 1]");
  if (cfg.hybrid_candidates < 1) fail("hybrid-candidates must be >= 1");
  if (cfg.eval_k < 1) fail("eval-k must be >= 1");
  if (cfg.threads < 1) fail("threads must be >= 1");
  if (cfg.algorithms.empty()) fail("algorithms must not be empty");
  for (const std::string& algorithm : cfg.algorithms) {
    if (std::find(kKnownAlgorithms.begin(), kKnownAlgorithms.end(),
                  algorithm) == kKnownAlgorithms.end())
      fail("unknown algorithm '" + algorithm + "' (known: " +
           join_algorithms(kKnownAlgorithms) + ")");
  }
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::string out;
  auto kv = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("dataset", cfg.dataset_path);
  kv("format", to_string(cfg.format));
  kv("filter-unique", bool_str(cfg.filter_unique));
  kv("sample-fraction", format_shortest(cfg.sample_fraction));
  kv("sample-before-filter", bool_str(cfg.sample_before_filter));
  kv("test-fraction", format_shortest(cfg.test_fraction));
  kv("topics", std::to_string(cfg.topic_count));
  kv("lda-iterations", std::to_string(cfg.lda_iterations));
  kv("topic-cutoff", format_shortest(cfg.topic_cutoff));
  kv("lda-average-last", std::to_string(cfg.lda_average_last));
  kv("lda-train-only", bool_str(cfg.lda_train_only));
  kv("topics-file", cfg.topics_file);
  kv("sustain-r", format_shortest(cfg.sustain.r));
  kv("sustain-beta", format_shortest(cfg.sustain.beta));
  kv("sustain-eta", format_shortest(cfg.sustain.eta));
  kv("sustain-tau", format_shortest(cfg.sustain.tau));
  kv("cf-user-k", std::to_string(cfg.cf_user_neighbors));
  kv("cf-resource-k", std::to_string(cfg.cf_resource_neighbors));
  kv("wrmf-factors", std::to_string(cfg.wrmf_factors));
  kv("wrmf-iterations", std::to_string(cfg.wrmf_iterations));
  kv("wrmf-reg", format_shortest(cfg.wrmf_reg));
  kv("wrmf-conf-alpha", format_shortest(cfg.wrmf_conf_alpha));
  kv("hybrid-alpha", format_shortest(cfg.hybrid_alpha));
  kv("hybrid-candidates", std::to_string(cfg.hybrid_candidates));
  kv("hybrid-normalize", bool_str(cfg.hybrid_normalize));
  kv("eval-k", std::to_string(cfg.eval_k));
  kv("algorithms", join_algorithms(cfg.algorithms));
  kv("output-dir", cfg.output_dir);
  kv("seed", std::to_string(cfg.seed));
  kv("threads", std::to_string(cfg.threads));
  return out;
}

void set_config_value(RunConfig& cfg, const std::string& key,
                      const std::string& value) {
  auto fail = [&]() {
    throw std::invalid_argument("config: bad value '" + value + "' for key '" +
                                key + "'");
  };
  auto as_double = [&]() {
    double v = 0.0;
    if (!parse_double(value, v)) fail();
    return v;
  };
  auto as_int = [&]() {
    std::int64_t v = 0;
    if (!parse_int64(value, v)) fail();
    return static_cast<int>(v);
  };
  auto as_bool = [&]() {
    bool v = false;
    if (!parse_bool(value, v)) fail();
    return v;
  };

  if (key == "dataset") cfg.dataset_path = value;
  else if (key == "format") cfg.format = post_format_from_string(value);
  else if (key == "filter-unique") cfg.filter_unique = as_bool();
  else if (key == "sample-fraction") cfg.sample_fraction = as_double();
  else if (key == "sample-before-filter") cfg.sample_before_filter = as_bool();
  else if (key == "test-fraction") cfg.test_fraction = as_double();
  else if (key == "topics") cfg.topic_count = as_int();
  else if (key == "lda-iterations") cfg.lda_iterations = as_int();
  else if (key == "topic-cutoff") cfg.topic_cutoff = as_double();
  else if (key == "lda-average-last") cfg.lda_average_last = as_int();
  else if (key == "lda-train-only") cfg.lda_train_only = as_bool();
  else if (key == "topics-file") cfg.topics_file = value;
  else if (key == "sustain-r") cfg.sustain.r = as_double();
  else if (key == "sustain-beta") cfg.sustain.beta = as_double();
  else if (key == "sustain-eta") cfg.sustain.eta = as_double();
  else if (key == "sustain-tau") cfg.sustain.tau = as_double();
  else if (key == "cf-user-k") cfg.cf_user_neighbors = as_int();
  else if (key == "cf-resource-k") cfg.cf_resource_neighbors = as_int();
  else if (key == "wrmf-factors") cfg.wrmf_factors = as_int();
  else if (key == "wrmf-iterations") cfg.wrmf_iterations = as_int();
  else if (key == "wrmf-reg") cfg.wrmf_reg = as_double();
  else if (key == "wrmf-conf-alpha") cfg.wrmf_conf_alpha = as_double();
  else if (key == "hybrid-alpha") cfg.hybrid_alpha = as_double();
  else if (key == "hybrid-candidates")
    cfg.hybrid_candidates = static_cast<std::size_t>(as_int());
  else if (key == "hybrid-normalize") cfg.hybrid_normalize = as_bool();
  else if (key == "eval-k") cfg.eval_k = as_int();
  else if (key == "algorithms") {
    cfg.algorithms.clear();
    for (const auto part : split_view(value, ','))
      if (!part.empty()) cfg.algorithms.emplace_back(part);
  } else if (key == "output-dir") cfg.output_dir = value;
  else if (key == "seed") {
    std::int64_t v = 0;
    if (!parse_int64(value, v) || v < 0) fail();
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "threads") {
    const int v = as_int();
    if (v < 1) fail();
    cfg.threads = static_cast<unsigned>(v);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

RunConfig load_run_config(const std::string& path) {
  RunConfig cfg;
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    try {
      set_config_value(cfg, key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {
std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}
}  // namespace

Pipeline::Pipeline(RunConfig cfg, std::ostream* log)
    : cfg_(std::move(cfg)), log_(log) {
  try {
    validate_run_config(cfg_);
  } catch (const std::exception& e) {
    throw StageError("config", e.what());
  }
  std::filesystem::create_directories(cfg_.output_dir);
  std::error_code ec;
  std::filesystem::remove(join_path(cfg_.output_dir, "FAILED"), ec);
  write_text_file(join_path(cfg_.output_dir, "config.resolved"),
                  serialize_run_config(cfg_));
}

void Pipeline::log(const std::string& message) {
  if (log_) *log_ << message << '\n';
}

template <typename Fn>
auto Pipeline::run_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;  // already attributed to an upstream stage
  } catch (const std::exception& e) {
    try {
      write_text_file(join_path(cfg_.output_dir, "FAILED"),
                      stage + ": " + e.what() + "\n");
    } catch (...) {
      // the marker is best-effort; the original error wins
    }
    throw StageError(stage, e.what());
  }
}

bool Pipeline::stage_cached(const std::string& artifact,
                            const std::string& meta_name,
                            const std::string& fingerprint) {
  const std::string artifact_path = join_path(cfg_.output_dir, artifact);
  const std::string meta_path = join_path(cfg_.output_dir, meta_name);
  if (!file_exists(artifact_path) || !file_exists(meta_path)) return false;
  return read_text_file(meta_path) == fingerprint;
}

void Pipeline::commit_stage(const std::string& meta_name,
                            const std::string& fingerprint) {
  write_text_file(join_path(cfg_.output_dir, meta_name), fingerprint);
}

std::string Pipeline::ingest_fingerprint() const {
  std::string s;
  s += "dataset=" + cfg_.dataset_path + "\n";
  s += "format=" + to_string(cfg_.format) + "\n";
  s += "filter-unique=" + bool_str(cfg_.filter_unique) + "\n";
  s += "sample-fraction=" + format_g17(cfg_.sample_fraction) + "\n";
  s += "sample-before-filter=" + bool_str(cfg_.sample_before_filter) + "\n";
  s += "sample-seed=" + std::to_string(cfg_.seed + 1) + "\n";
  return s;
}

std::string Pipeline::topics_fingerprint() const {
  std::string s = ingest_fingerprint();
  if (!cfg_.topics_file.empty()) {
    s += "topics-file=" + cfg_.topics_file + "\n";
    return s;
  }
  s += "topics=" + std::to_string(cfg_.topic_count) + "\n";
  s += "lda-iterations=" + std::to_string(cfg_.lda_iterations) + "\n";
  s += "topic-cutoff=" + format_g17(cfg_.topic_cutoff) + "\n";
  s += "lda-average-last=" + std::to_string(cfg_.lda_average_last) + "\n";
  s += "lda-train-only=" + bool_str(cfg_.lda_train_only) + "\n";
  if (cfg_.lda_train_only)
    s += "test-fraction=" + format_g17(cfg_.test_fraction) + "\n";
  s += "lda-seed=" + std::to_string(cfg_.seed + 2) + "\n";
  return s;
}

std::string Pipeline::networks_fingerprint() const {
  std::string s = topics_fingerprint();
  s += "test-fraction=" + format_g17(cfg_.test_fraction) + "\n";
  s += "sustain-r=" + format_g17(cfg_.sustain.r) + "\n";
  s += "sustain-beta=" + format_g17(cfg_.sustain.beta) + "\n";
  s += "sustain-eta=" + format_g17(cfg_.sustain.eta) + "\n";
  s += "sustain-tau=" + format_g17(cfg_.sustain.tau) + "\n";
  return s;
}

std::string Pipeline::recs_fingerprint(const std::string& algorithm) const {
  const int topn = std::max(20, cfg_.eval_k);
  std::string s;
  if (algorithm == "mp") {
    s = ingest_fingerprint();
  } else if (algorithm == "cf_u") {
    s = ingest_fingerprint();
    s += "cf-user-k=" + std::to_string(cfg_.cf_user_neighbors) + "\n";
  } else if (algorithm == "cf_r") {
    s = ingest_fingerprint();
    s += "cf-resource-k=" + std::to_string(cfg_.cf_resource_neighbors) + "\n";
  } else if (algorithm == "cb_t") {
    s = topics_fingerprint();
  } else if (algorithm == "wrmf") {
    s = ingest_fingerprint();
    s += "wrmf-factors=" + std::to_string(cfg_.wrmf_factors) + "\n";
    s += "wrmf-iterations=" + std::to_string(cfg_.wrmf_iterations) + "\n";
    s += "wrmf-reg=" + format_g17(cfg_.wrmf_reg) + "\n";
    s += "wrmf-conf-alpha=" + format_g17(cfg_.wrmf_conf_alpha) + "\n";
    s += "wrmf-seed=" + std::to_string(cfg_.seed + 3) + "\n";
  } else if (algorithm == "sustain_cf_u") {
    s = networks_fingerprint();
    s += "cf-user-k=" + std::to_string(cfg_.cf_user_neighbors) + "\n";
    s += "hybrid-alpha=" + format_g17(cfg_.hybrid_alpha) + "\n";
    s += "hybrid-candidates=" + std::to_string(cfg_.hybrid_candidates) + "\n";
    s += "hybrid-normalize=" + bool_str(cfg_.hybrid_normalize) + "\n";
  } else {
    throw std::invalid_argument("unknown algorithm: " + algorithm);
  }
  s += "test-fraction=" + format_g17(cfg_.test_fraction) + "\n";
  s += "topn=" + std::to_string(topn) + "\n";
  return s;
}

const Dataset& Pipeline::filtered() {
  if (filtered_) return *filtered_;
  run_stage("ingest", [&] {
    const std::string artifact = join_path(cfg_.output_dir, "filtered.tsv");
    const std::string fp = ingest_fingerprint();
    if (!stage_cached("filtered.tsv", "filtered.meta", fp)) {
      Dataset d = parse_posts(cfg_.dataset_path, cfg_.format);
      if (cfg_.sample_before_filter && cfg_.sample_fraction < 1.0)
        d = sample_users(d, cfg_.sample_fraction, cfg_.seed + 1);
      if (cfg_.filter_unique) d = filter_unique_resources(d);
      if (!cfg_.sample_before_filter && cfg_.sample_fraction < 1.0)
        d = sample_users(d, cfg_.sample_fraction, cfg_.seed + 1);
      if (d.empty())
        throw std::runtime_error("no posts remain after filtering");
      save_posts(artifact, d, PostFormat::TagPerLine);
      commit_stage("filtered.meta", fp);
      log("[ingest] wrote " + artifact);
    } else {
      log("[ingest] reusing cached " + artifact);
    }
    filtered_ = parse_posts(artifact, PostFormat::TagPerLine);
  });
  return *filtered_;
}

const SplitDataset& Pipeline::split() {
  if (split_) return *split_;
  const Dataset& d = filtered();
  run_stage("split",
            [&] { split_ = chronological_split(d, cfg_.test_fraction); });
  return *split_;
}

const InteractionMatrix& Pipeline::matrix() {
  if (matrix_) return *matrix_;
  const SplitDataset& sp = split();
  run_stage("split",
            [&] { matrix_ = InteractionMatrix::from_dataset(sp.train); });
  return *matrix_;
}

const TopicTable& Pipeline::topics() {
  if (topics_) return *topics_;
  if (!cfg_.topics_file.empty()) {
    run_stage("topics", [&] {
      topics_ = load_topic_table(cfg_.topics_file);
      log("[topics] loaded precomputed table " + cfg_.topics_file);
    });
    return *topics_;
  }
  // Resolve upstream stages before entering this stage so their errors
  // keep their own attribution.
  const Dataset& full = filtered();
  if (cfg_.lda_train_only) split();
  run_stage("topics", [&] {
    const std::string artifact = join_path(cfg_.output_dir, "topics.tsv");
    const std::string fp = topics_fingerprint();
    if (!stage_cached("topics.tsv", "topics.meta", fp)) {
      const Dataset& base = cfg_.lda_train_only ? split_->train : full;
      const TopicModel model =
          fit_lda(base, cfg_.topic_count, cfg_.lda_iterations, cfg_.seed + 2,
                  cfg_.lda_average_last);
      save_topic_table(artifact,
                       topic_table_from_model(model, cfg_.topic_cutoff));
      commit_stage("topics.meta", fp);
      log("[topics] wrote " + artifact);
    } else {
      log("[topics] reusing cached " + artifact);
    }
    topics_ = load_topic_table(artifact);
  });
  return *topics_;
}

const std::map<std::string, UserNetwork>& Pipeline::networks() {
  if (networks_) return *networks_;
  const TopicTable& table = topics();
  const SplitDataset& sp = split();
  run_stage("train-sustain", [&] {
    const std::string artifact = join_path(cfg_.output_dir, "networks.tsv");
    const std::string fp = networks_fingerprint();
    if (!stage_cached("networks.tsv", "networks.meta", fp)) {
      std::vector<std::string> users;
      users.reserve(sp.train.users().size());
      for (const auto& [user, idxs] : sp.train.users()) users.push_back(user);

      std::vector<UserNetwork> trained(users.size());
      parallel_for(users.size(), cfg_.threads, [&](std::size_t i) {
        const auto& idxs = sp.train.users().at(users[i]);
        std::vector<TopicVector> inputs;
        inputs.reserve(idxs.size());
        // Post indices are already in chronological (timestamp, post id)
        // order within a user.
        for (const std::size_t idx : idxs) {
          const auto row = table.rows.find(sp.train.posts()[idx].resource);
          if (row != table.rows.end()) inputs.push_back(row->second);
        }
        if (!inputs.empty()) trained[i] = train_user(inputs, cfg_.sustain);
      });

      std::map<std::string, UserNetwork> networks;
      for (std::size_t i = 0; i < users.size(); ++i)
        if (!trained[i].clusters.empty())
          networks[users[i]] = std::move(trained[i]);
      save_networks(artifact, networks);
      commit_stage("networks.meta", fp);
      log("[train-sustain] wrote " + artifact + " (" +
          std::to_string(networks.size()) + " networks)");
    } else {
      log("[train-sustain] reusing cached " + artifact);
    }
    networks_ = load_networks(artifact);
  });
  return *networks_;
}

std::map<std::string, ScoredList> Pipeline::compute_recommendations(
    const std::string& algorithm) {
  const SplitDataset& sp = split();
  const InteractionMatrix& m = matrix();
  const std::size_t topn = static_cast<std::size_t>(std::max(20, cfg_.eval_k));

  std::vector<std::string> users;
  users.reserve(sp.test.users().size());
  for (const auto& [user, idxs] : sp.test.users()) users.push_back(user);
  std::vector<ScoredList> lists(users.size());

  auto owned_set = [&](const std::string& user) {
    std::set<std::string> owned;
    const auto it = sp.train.users().find(user);
    if (it != sp.train.users().end())
      for (const std::size_t idx : it->second)
        owned.insert(sp.train.posts()[idx].resource);
    return owned;
  };

  if (algorithm == "mp") {
    const ScoredList global = most_popular(sp.train, m.resource_count());
    parallel_for(users.size(), cfg_.threads, [&](std::size_t i) {
      const auto owned = owned_set(users[i]);
      ScoredList list;
      for (const ScoredItem& item : global) {
        if (owned.count(item.resource)) continue;
        list.push_back(item);
        if (list.size() == topn) break;
      }
      lists[i] = std::move(list);
    });
  } else if (algorithm == "cf_u") {
    parallel_for(users.size(), cfg_.threads, [&](std::size_t i) {
      lists[i] = cf_user_scores(m, users[i], cfg_.cf_user_neighbors, topn);
    });
  } else if (algorithm == "cf_r") {
    const ResourceNeighborhoods cache =
        resource_neighborhoods(m, cfg_.cf_resource_neighbors);
    parallel_for(users.size(), cfg_.threads, [&](std::size_t i) {
      lists[i] = cf_resource_scores(m, cache, users[i], topn);
    });
  } else if (algorithm == "cb_t") {
    const TopicTable& table = topics();
    // Rank only resources present in the training matrix, like the other
    // recommenders.
    TopicTable train_table;
    train_table.dim = table.dim;
    for (const std::string& resource : m.resource_ids()) {
      const auto row = table.rows.find(resource);
      if (row != table.rows.end()) train_table.rows[resource] = row->second;
    }
    parallel_for(users.size(), cfg_.threads, [&](std::size_t i) {
      const UserTopicProfile profile =
          user_topic_profile(sp.train, users[i], table);
      lists[i] = cb_topic_scores(profile, train_table, owned_set(users[i]),
                                 topn);
    });
  } else if (algorithm == "wrmf") {
    std::vector<double> trace;
    const FactorModel model =
        train_wrmf(m, cfg_.wrmf_factors, cfg_.wrmf_iterations, cfg_.wrmf_reg,
                   cfg_.wrmf_conf_alpha, cfg_.seed + 3, &trace);
    save_factor_model(join_path(cfg_.output_dir, "wrmf_factors.tsv"), model);
    std::string trace_csv = "sweep,objective\n";
    for (std::size_t s = 0; s < trace.size(); ++s)
      trace_csv +=
          std::to_string(s + 1) + "," + format_fixed(trace[s], 6) + "\n";
    write_text_file(join_path(cfg_.output_dir, "wrmf_objective.csv"),
                    trace_csv);
    parallel_for(users.size(), cfg_.threads, [&](std::size_t i) {
      lists[i] = wrmf_scores(model, m, users[i], topn);
    });
  } else if (algorithm == "sustain_cf_u") {
    const TopicTable& table = topics();
    const auto& nets = networks();
    HybridConfig hybrid;
    hybrid.alpha = cfg_.hybrid_alpha;
    hybrid.candidate_count = cfg_.hybrid_candidates;
    hybrid.k = std::min(topn, cfg_.hybrid_candidates);
    hybrid.cf_neighbors = cfg_.cf_user_neighbors;
    hybrid.normalize = cfg_.hybrid_normalize;
    parallel_for(users.size(), cfg_.threads, [&](std::size_t i) {
      const auto net = nets.find(users[i]);
      if (net == nets.end()) return;  // no trainable history
      lists[i] =
          hybrid_recommend(m, users[i], net->second, table, cfg_.sustain,
                           hybrid);
    });
  } else {
    throw std::invalid_argument("unknown algorithm: " + algorithm);
  }

  std::map<std::string, ScoredList> recommendations;
  for (std::size_t i = 0; i < users.size(); ++i)
    recommendations[users[i]] = std::move(lists[i]);
  return recommendations;
}

const std::map<std::string, ScoredList>& Pipeline::recommendations(
    const std::string& algorithm) {
  const auto it = recs_.find(algorithm);
  if (it != recs_.end()) return it->second;

  // Resolve upstream stages first so their failures stay attributed.
  split();
  matrix();
  if (algorithm == "cb_t" || algorithm == "sustain_cf_u") topics();
  if (algorithm == "sustain_cf_u") networks();

  run_stage("recommend", [&] {
    const std::string name = "recs_" + algorithm + ".tsv";
    const std::string meta = "recs_" + algorithm + ".meta";
    const std::string artifact = join_path(cfg_.output_dir, name);
    const std::string fp = recs_fingerprint(algorithm);
    if (!stage_cached(name, meta, fp)) {
      save_user_recommendations(artifact, compute_recommendations(algorithm));
      commit_stage(meta, fp);
      log("[recommend] wrote " + artifact);
    } else {
      log("[recommend] reusing cached " + artifact);
    }
    recs_[algorithm] = load_user_recommendations(artifact);
  });
  return recs_.at(algorithm);
}

std::vector<MetricsReport> Pipeline::evaluate_all() {
  for (const std::string& algorithm : cfg_.algorithms)
    recommendations(algorithm);
  std::vector<MetricsReport> reports;
  run_stage("evaluate", [&] {
    for (const std::string& algorithm : cfg_.algorithms)
      reports.push_back(evaluate_lists(algorithm, recs_.at(algorithm), split(),
                                       cfg_.eval_k));
    save_metrics_csv(join_path(cfg_.output_dir, "metrics.csv"), reports);
    save_pr_curve_csv(join_path(cfg_.output_dir, "pr_curve.csv"), reports);
    log("[evaluate] wrote " + join_path(cfg_.output_dir, "metrics.csv"));
  });
  return reports;
}

std::vector<MetricsReport> run_pipeline(const RunConfig& cfg,
                                        std::ostream& out) {
  Pipeline pipeline(cfg, &out);
  const std::vector<MetricsReport> reports = pipeline.evaluate_all();

  char buf[160];
  const int k = cfg.eval_k;
  std::snprintf(buf, sizeof(buf), "%-14s %10s %10s %10s %10s\n", "algorithm",
                ("nDCG@" + std::to_string(k)).c_str(),
                ("MAP@" + std::to_string(k)).c_str(),
                ("R@" + std::to_string(k)).c_str(),
                ("P@" + std::to_string(k)).c_str());
  out << '\n' << buf;
  for (const MetricsReport& report : reports) {
    std::snprintf(buf, sizeof(buf), "%-14s %10.4f %10.4f %10.4f %10.4f\n",
                  algorithm_display_name(report.algorithm).c_str(),
                  report.ndcg, report.map, report.recall, report.precision);
    out << buf;
  }
  if (!reports.empty())
    out << "users evaluated: " << reports.front().user_count << "\n";
  return reports;
}

}  // namespace sustainrec
