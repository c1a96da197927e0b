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

#include "sustainrec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sustainrec/util.hpp"

namespace sustainrec {

namespace {
constexpr int kCurveMax = 20;

void check_metric_args(const std::set<std::string>& relevant, int k) {
  if (k < 1) throw std::invalid_argument("metrics: k must be >= 1");
  if (relevant.empty())
    throw std::invalid_argument("metrics: relevant set is empty");
}
}  // namespace

std::pair<double, double> precision_recall_at_k(
    const ScoredList& recommended, const std::set<std::string>& relevant,
    int k) {
  check_metric_args(relevant, k);
  const std::size_t depth =
      std::min<std::size_t>(recommended.size(), static_cast<std::size_t>(k));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i)
    if (relevant.count(recommended[i].resource)) ++hits;
  return {static_cast<double>(hits) / k,
          static_cast<double>(hits) / static_cast<double>(relevant.size())};
}

double average_precision_at_k(const ScoredList& recommended,
                              const std::set<std::string>& relevant, int k) {
  check_metric_args(relevant, k);
  const std::size_t depth =
      std::min<std::size_t>(recommended.size(), static_cast<std::size_t>(k));
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (!relevant.count(recommended[i].resource)) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  const std::size_t norm =
      std::min<std::size_t>(relevant.size(), static_cast<std::size_t>(k));
  return sum / static_cast<double>(norm);
}

double ndcg_at_k(const ScoredList& recommended,
                 const std::set<std::string>& relevant, int k) {
  check_metric_args(relevant, k);
  const std::size_t depth =
      std::min<std::size_t>(recommended.size(), static_cast<std::size_t>(k));
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i)
    if (relevant.count(recommended[i].resource))
      dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  const std::size_t ideal_hits =
      std::min<std::size_t>(relevant.size(), static_cast<std::size_t>(k));
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal_hits; ++i)
    idcg += 1.0 / std::log2(static_cast<double>(i + 2));
  return dcg / idcg;
}

namespace {

MetricsReport evaluate_impl(
    const std::string& algorithm,
    const std::function<const ScoredList&(const std::string&)>& lookup,
    const SplitDataset& split, int k) {
  MetricsReport report;
  report.algorithm = algorithm;
  report.k = k;
  report.pr_curve.resize(kCurveMax);
  for (int kk = 1; kk <= kCurveMax; ++kk) report.pr_curve[kk - 1].k = kk;

  for (const auto& [user, idxs] : split.test.users()) {
    std::set<std::string> relevant;
    for (const std::size_t idx : idxs)
      relevant.insert(split.test.posts()[idx].resource);
    const ScoredList& recs = lookup(user);

    report.ndcg += ndcg_at_k(recs, relevant, k);
    report.map += average_precision_at_k(recs, relevant, k);
    const auto [p, r] = precision_recall_at_k(recs, relevant, k);
    report.precision += p;
    report.recall += r;
    for (int kk = 1; kk <= kCurveMax; ++kk) {
      const auto [pk, rk] = precision_recall_at_k(recs, relevant, kk);
      report.pr_curve[kk - 1].precision += pk;
      report.pr_curve[kk - 1].recall += rk;
    }
    ++report.user_count;
  }
  if (report.user_count == 0)
    throw std::runtime_error("evaluate: no users with test posts");

  const double inv = 1.0 / static_cast<double>(report.user_count);
  report.ndcg *= inv;
  report.map *= inv;
  report.precision *= inv;
  report.recall *= inv;
  for (PrPoint& point : report.pr_curve) {
    point.precision *= inv;
    point.recall *= inv;
  }
  return report;
}

}  // namespace

MetricsReport evaluate(const std::string& algorithm, const Recommender& fn,
                       const SplitDataset& split, int k) {
  ScoredList scratch;
  auto lookup = [&](const std::string& user) -> const ScoredList& {
    scratch = fn(user);
    return scratch;
  };
  return evaluate_impl(algorithm, lookup, split, k);
}

MetricsReport evaluate_lists(
    const std::string& algorithm,
    const std::map<std::string, ScoredList>& recommendations,
    const SplitDataset& split, int k) {
  static const ScoredList kEmpty;
  auto lookup = [&](const std::string& user) -> const ScoredList& {
    const auto it = recommendations.find(user);
    return it == recommendations.end() ? kEmpty : it->second;
  };
  return evaluate_impl(algorithm, lookup, split, k);
}

void save_metrics_csv(const std::string& path,
                      const std::vector<MetricsReport>& reports) {
  std::string out = "algorithm,metric,k,value\n";
  for (const MetricsReport& r : reports) {
    const std::pair<const char*, double> rows[] = {{"ndcg", r.ndcg},
                                                   {"map", r.map},
                                                   {"recall", r.recall},
                                                   {"precision", r.precision}};
    for (const auto& [metric, value] : rows) {
      out += r.algorithm;
      out += ',';
      out += metric;
      out += ',';
      out += std::to_string(r.k);
      out += ',';
      out += format_fixed(value, 6);
      out += '\n';
    }
  }
  write_text_file(path, out);
}

void save_pr_curve_csv(const std::string& path,
                       const std::vector<MetricsReport>& reports) {
  std::string out = "algorithm,k,precision,recall\n";
  for (const MetricsReport& r : reports) {
    for (const PrPoint& point : r.pr_curve) {
      out += r.algorithm;
      out += ',';
      out += std::to_string(point.k);
      out += ',';
      out += format_fixed(point.precision, 6);
      out += ',';
      out += format_fixed(point.recall, 6);
      out += '\n';
    }
  }
  write_text_file(path, out);
}

}  // namespace sustainrec
