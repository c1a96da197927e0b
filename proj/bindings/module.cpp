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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sustainrec/pipeline.hpp"

namespace py = pybind11;
using namespace sustainrec;

namespace {

using ScoredPairs = std::vector<std::pair<std::string, double>>;

ScoredPairs to_pairs(const ScoredList& list) {
  ScoredPairs out;
  out.reserve(list.size());
  for (const ScoredItem& item : list) out.emplace_back(item.resource, item.score);
  return out;
}

ScoredList from_pairs(const ScoredPairs& pairs) {
  ScoredList out;
  out.reserve(pairs.size());
  for (const auto& [resource, score] : pairs) out.push_back({resource, score});
  return out;
}

std::set<std::string> to_set(const std::vector<std::string>& items) {
  return {items.begin(), items.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Hybrid bookmark-recommender benchmark: per-user category-learning "
      "networks over topic vectors, blended with collaborative filtering.";

  py::class_<DatasetStats>(m, "DatasetStats")
      .def_readonly("posts", &DatasetStats::posts)
      .def_readonly("users", &DatasetStats::users)
      .def_readonly("resources", &DatasetStats::resources)
      .def_readonly("tags", &DatasetStats::tags)
      .def_readonly("tag_assignments", &DatasetStats::tag_assignments);

  py::class_<Post>(m, "Post")
      .def_readonly("user", &Post::user)
      .def_readonly("resource", &Post::resource)
      .def_readonly("tags", &Post::tags)
      .def_readonly("timestamp", &Post::timestamp)
      .def_readonly("post_id", &Post::post_id);

  py::class_<Dataset>(m, "Dataset")
      .def("stats", &Dataset::stats)
      .def("posts", &Dataset::posts)
      .def("users", &Dataset::users)
      .def("resources", &Dataset::resources)
      .def("empty", &Dataset::empty);

  py::class_<SplitDataset>(m, "SplitDataset")
      .def_readonly("train", &SplitDataset::train)
      .def_readonly("test", &SplitDataset::test);

  m.def(
      "parse_posts",
      [](const std::string& path, const std::string& format) {
        return parse_posts(path, post_format_from_string(format));
      },
      py::arg("path"), py::arg("format") = "tag-per-line");
  m.def(
      "parse_posts_text",
      [](const std::string& text, const std::string& format) {
        return parse_posts_text(text, post_format_from_string(format));
      },
      py::arg("text"), py::arg("format") = "tag-per-line");
  m.def(
      "save_posts",
      [](const std::string& path, const Dataset& d, const std::string& format) {
        save_posts(path, d, post_format_from_string(format));
      },
      py::arg("path"), py::arg("dataset"), py::arg("format") = "tag-per-line");
  m.def("filter_unique_resources", &filter_unique_resources, py::arg("dataset"));
  m.def("sample_users", &sample_users, py::arg("dataset"), py::arg("fraction"),
        py::arg("seed"));
  m.def("chronological_split", &chronological_split, py::arg("dataset"),
        py::arg("test_fraction"));

  py::class_<TopicModel>(m, "TopicModel")
      .def_readonly("topic_count", &TopicModel::topic_count)
      .def_readonly("alpha", &TopicModel::alpha)
      .def_readonly("beta", &TopicModel::beta)
      .def_readonly("vocabulary", &TopicModel::vocabulary)
      .def_readonly("resources", &TopicModel::resources)
      .def_readonly("doc_topic", &TopicModel::doc_topic)
      .def_readonly("topic_word", &TopicModel::topic_word)
      .def("resource_topics", &resource_topics, py::arg("resource_id"),
           py::arg("cutoff"));

  py::class_<TopicTable>(m, "TopicTable")
      .def(py::init([](int dim, const std::map<std::string, TopicVector>& rows) {
             TopicTable t;
             t.dim = dim;
             t.rows = rows;
             return t;
           }),
           py::arg("dim"), py::arg("rows"))
      .def_readonly("dim", &TopicTable::dim)
      .def_readonly("rows", &TopicTable::rows);

  m.def("fit_lda", &fit_lda, py::arg("dataset"), py::arg("topic_count"),
        py::arg("iterations"), py::arg("seed"), py::arg("average_last") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("apply_cutoff", &apply_cutoff, py::arg("row"), py::arg("cutoff"));
  m.def("topic_table_from_model", &topic_table_from_model, py::arg("model"),
        py::arg("cutoff"));
  m.def("save_topic_table", &save_topic_table, py::arg("path"),
        py::arg("table"));
  m.def("load_topic_table", &load_topic_table, py::arg("path"));

  py::class_<SustainParams>(m, "SustainParams")
      .def(py::init<>())
      .def(py::init([](double r, double beta, double eta, double tau) {
             return SustainParams{r, beta, eta, tau};
           }),
           py::arg("r") = 9.998, py::arg("beta") = 6.396,
           py::arg("eta") = 0.096, py::arg("tau") = 0.5)
      .def_readwrite("r", &SustainParams::r)
      .def_readwrite("beta", &SustainParams::beta)
      .def_readwrite("eta", &SustainParams::eta)
      .def_readwrite("tau", &SustainParams::tau);

  py::class_<UserNetwork>(m, "UserNetwork")
      .def_readonly("lambda_", &UserNetwork::lambda)
      .def_readonly("clusters", &UserNetwork::clusters)
      .def("dim", &UserNetwork::dim);

  py::class_<ActivationResult>(m, "ActivationResult")
      .def_readonly("winner", &ActivationResult::winner)
      .def_readonly("h_act", &ActivationResult::h_act)
      .def_readonly("h_out", &ActivationResult::h_out)
      .def_readonly("mu_winner", &ActivationResult::mu_winner);

  m.def("distances", &distances, py::arg("input"), py::arg("cluster_pos"));
  m.def("cluster_activation", &cluster_activation, py::arg("mu"),
        py::arg("lambda_"), py::arg("r"));
  m.def("winner_output", &winner_output, py::arg("activations"),
        py::arg("beta"));
  m.def("update_attention", &update_attention, py::arg("lambda_"),
        py::arg("mu_winner"), py::arg("eta"));
  m.def("update_winner_position", &update_winner_position,
        py::arg("cluster_pos"), py::arg("input"), py::arg("eta"));
  m.def("evaluate_network", &evaluate_network, py::arg("network"),
        py::arg("input"), py::arg("params"));
  m.def("train_user", &train_user, py::arg("inputs"), py::arg("params"));
  m.def("score_candidate", &score_candidate, py::arg("network"),
        py::arg("input"), py::arg("params"));

  py::class_<InteractionMatrix>(m, "InteractionMatrix")
      .def_static("from_dataset", &InteractionMatrix::from_dataset,
                  py::arg("train"))
      .def("user_count", &InteractionMatrix::user_count)
      .def("resource_count", &InteractionMatrix::resource_count)
      .def("user_ids", &InteractionMatrix::user_ids)
      .def("resource_ids", &InteractionMatrix::resource_ids)
      .def("user_items",
           [](const InteractionMatrix& m, const std::string& user) {
             const int u = m.user_index(user);
             if (u < 0) throw py::key_error(user);
             std::vector<std::string> items;
             for (const int r : m.user_items(u))
               items.push_back(m.resource_id(r));
             return items;
           },
           py::arg("user"));

  m.def(
      "cosine",
      [](std::vector<int> a, std::vector<int> b) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return cosine(a, b);
      },
      py::arg("a"), py::arg("b"),
      "Cosine similarity of two binary vectors given as index sets.");
  m.def(
      "cf_user_scores",
      [](const InteractionMatrix& m, const std::string& user, int k,
         std::size_t n) { return to_pairs(cf_user_scores(m, user, k, n)); },
      py::arg("matrix"), py::arg("user"), py::arg("k") = 20,
      py::arg("n_candidates") = 100);
  m.def(
      "cf_resource_scores",
      [](const InteractionMatrix& m, const std::string& user, int k,
         std::size_t n) { return to_pairs(cf_resource_scores(m, user, k, n)); },
      py::arg("matrix"), py::arg("user"), py::arg("k") = 20,
      py::arg("n_candidates") = 100);

  m.def(
      "most_popular",
      [](const Dataset& train, std::size_t n) {
        return to_pairs(most_popular(train, n));
      },
      py::arg("train"), py::arg("n"));
  py::class_<UserTopicProfile>(m, "UserTopicProfile")
      .def_readonly("user_id", &UserTopicProfile::user_id)
      .def_readonly("profile", &UserTopicProfile::profile);
  m.def("user_topic_profile", &user_topic_profile, py::arg("train"),
        py::arg("user"), py::arg("topics"));
  m.def("cosine_dense", &cosine_dense, py::arg("a"), py::arg("b"));
  m.def(
      "cb_topic_scores",
      [](const UserTopicProfile& profile, const TopicTable& resources,
         const std::vector<std::string>& owned, std::size_t n) {
        return to_pairs(cb_topic_scores(profile, resources, to_set(owned), n));
      },
      py::arg("profile"), py::arg("resources"), py::arg("owned"), py::arg("n"));

  py::class_<FactorModel>(m, "FactorModel")
      .def_readonly("factors", &FactorModel::factors)
      .def_readonly("reg", &FactorModel::reg)
      .def_readonly("conf_alpha", &FactorModel::conf_alpha)
      .def_readonly("users", &FactorModel::users)
      .def_readonly("resources", &FactorModel::resources);
  m.def(
      "train_wrmf",
      [](const InteractionMatrix& m, int factors, int iterations, double reg,
         double conf_alpha, std::uint64_t seed) {
        std::vector<double> trace;
        FactorModel model = train_wrmf(m, factors, iterations, reg, conf_alpha,
                                       seed, &trace);
        return std::make_pair(std::move(model), std::move(trace));
      },
      py::arg("matrix"), py::arg("factors"), py::arg("iterations"),
      py::arg("reg"), py::arg("conf_alpha"), py::arg("seed"),
      py::call_guard<py::gil_scoped_release>(),
      "Returns (model, per-sweep objective values).");
  m.def("wrmf_objective",
        py::overload_cast<const InteractionMatrix&, const FactorModel&>(
            &wrmf_objective),
        py::arg("matrix"), py::arg("model"));
  m.def(
      "wrmf_scores",
      [](const FactorModel& model, const InteractionMatrix& m,
         const std::string& user, std::size_t n) {
        return to_pairs(wrmf_scores(model, m, user, n));
      },
      py::arg("model"), py::arg("matrix"), py::arg("user"), py::arg("n"));

  py::class_<HybridConfig>(m, "HybridConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &HybridConfig::alpha)
      .def_readwrite("candidate_count", &HybridConfig::candidate_count)
      .def_readwrite("k", &HybridConfig::k)
      .def_readwrite("cf_neighbors", &HybridConfig::cf_neighbors)
      .def_readwrite("normalize", &HybridConfig::normalize);
  m.def(
      "normalize_scores",
      [](const ScoredPairs& list) {
        return to_pairs(normalize_scores(from_pairs(list)));
      },
      py::arg("list"));
  m.def(
      "hybrid_recommend",
      [](const InteractionMatrix& m, const std::string& user,
         const UserNetwork& net, const TopicTable& topics,
         const SustainParams& sustain, const HybridConfig& cfg) {
        return to_pairs(hybrid_recommend(m, user, net, topics, sustain, cfg));
      },
      py::arg("matrix"), py::arg("user"), py::arg("network"), py::arg("topics"),
      py::arg("sustain"), py::arg("config"));

  py::class_<PrPoint>(m, "PrPoint")
      .def_readonly("k", &PrPoint::k)
      .def_readonly("precision", &PrPoint::precision)
      .def_readonly("recall", &PrPoint::recall);
  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("algorithm", &MetricsReport::algorithm)
      .def_readonly("k", &MetricsReport::k)
      .def_readonly("user_count", &MetricsReport::user_count)
      .def_readonly("ndcg", &MetricsReport::ndcg)
      .def_readonly("map", &MetricsReport::map)
      .def_readonly("recall", &MetricsReport::recall)
      .def_readonly("precision", &MetricsReport::precision)
      .def_readonly("pr_curve", &MetricsReport::pr_curve);

  m.def(
      "precision_recall_at_k",
      [](const ScoredPairs& recommended, const std::vector<std::string>& rel,
         int k) {
        return precision_recall_at_k(from_pairs(recommended), to_set(rel), k);
      },
      py::arg("recommended"), py::arg("relevant"), py::arg("k"));
  m.def(
      "average_precision_at_k",
      [](const ScoredPairs& recommended, const std::vector<std::string>& rel,
         int k) {
        return average_precision_at_k(from_pairs(recommended), to_set(rel), k);
      },
      py::arg("recommended"), py::arg("relevant"), py::arg("k"));
  m.def(
      "ndcg_at_k",
      [](const ScoredPairs& recommended, const std::vector<std::string>& rel,
         int k) {
        return ndcg_at_k(from_pairs(recommended), to_set(rel), k);
      },
      py::arg("recommended"), py::arg("relevant"), py::arg("k"));
  m.def(
      "evaluate",
      [](const std::string& algorithm, const py::function& fn,
         const SplitDataset& split, int k) {
        Recommender recommender = [&fn](const std::string& user) {
          return from_pairs(fn(user).cast<ScoredPairs>());
        };
        return evaluate(algorithm, recommender, split, k);
      },
      py::arg("algorithm"), py::arg("recommender"), py::arg("split"),
      py::arg("k") = 20,
      "Evaluates a callable user -> [(resource, score), ...].");

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("dataset", &RunConfig::dataset_path)
      .def_property(
          "format",
          [](const RunConfig& c) { return to_string(c.format); },
          [](RunConfig& c, const std::string& v) {
            c.format = post_format_from_string(v);
          })
      .def_readwrite("filter_unique", &RunConfig::filter_unique)
      .def_readwrite("sample_fraction", &RunConfig::sample_fraction)
      .def_readwrite("sample_before_filter", &RunConfig::sample_before_filter)
      .def_readwrite("test_fraction", &RunConfig::test_fraction)
      .def_readwrite("topics", &RunConfig::topic_count)
      .def_readwrite("lda_iterations", &RunConfig::lda_iterations)
      .def_readwrite("topic_cutoff", &RunConfig::topic_cutoff)
      .def_readwrite("lda_average_last", &RunConfig::lda_average_last)
      .def_readwrite("lda_train_only", &RunConfig::lda_train_only)
      .def_readwrite("topics_file", &RunConfig::topics_file)
      .def_readwrite("sustain", &RunConfig::sustain)
      .def_readwrite("cf_user_k", &RunConfig::cf_user_neighbors)
      .def_readwrite("cf_resource_k", &RunConfig::cf_resource_neighbors)
      .def_readwrite("wrmf_factors", &RunConfig::wrmf_factors)
      .def_readwrite("wrmf_iterations", &RunConfig::wrmf_iterations)
      .def_readwrite("wrmf_reg", &RunConfig::wrmf_reg)
      .def_readwrite("wrmf_conf_alpha", &RunConfig::wrmf_conf_alpha)
      .def_readwrite("hybrid_alpha", &RunConfig::hybrid_alpha)
      .def_readwrite("hybrid_candidates", &RunConfig::hybrid_candidates)
      .def_readwrite("hybrid_normalize", &RunConfig::hybrid_normalize)
      .def_readwrite("eval_k", &RunConfig::eval_k)
      .def_readwrite("algorithms", &RunConfig::algorithms)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("threads", &RunConfig::threads);

  m.def("load_run_config", &load_run_config, py::arg("path"));
  m.def("serialize_run_config", &serialize_run_config, py::arg("config"));
  m.def(
      "run_pipeline",
      [](const RunConfig& cfg, bool verbose) {
        std::ostringstream sink;
        std::vector<MetricsReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_pipeline(cfg, sink);
        }
        if (verbose) py::print(sink.str());
        return reports;
      },
      py::arg("config"), py::arg("verbose") = false,
      "Runs every stage and returns the per-algorithm reports.");

  py::register_exception<StageError>(m, "StageError");
}
