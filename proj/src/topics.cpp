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

#include "sustainrec/topics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sustainrec/util.hpp"

namespace sustainrec {

LdaGibbsSampler::LdaGibbsSampler(std::vector<std::vector<int>> docs,
                                 int vocab_size, int topic_count, double alpha,
                                 double beta, std::uint64_t seed)
    : docs_(std::move(docs)),
      vocab_size_(vocab_size),
      topic_count_(topic_count),
      alpha_(alpha),
      beta_(beta),
      rng_(seed) {
  if (topic_count_ < 1)
    throw std::invalid_argument("LdaGibbsSampler: topic_count must be >= 1");
  if (vocab_size_ < 1)
    throw std::invalid_argument("LdaGibbsSampler: empty vocabulary");

  doc_topic_count_.assign(docs_.size() * topic_count_, 0);
  topic_word_count_.assign(static_cast<std::size_t>(topic_count_) * vocab_size_,
                           0);
  topic_count_total_.assign(topic_count_, 0);
  cumulative_.assign(topic_count_, 0.0);

  assignments_.resize(docs_.size());
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    assignments_[d].resize(docs_[d].size());
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const int w = docs_[d][i];
      const int k = static_cast<int>(uniform_below(rng_, topic_count_));
      assignments_[d][i] = k;
      ++doc_topic_count_[d * topic_count_ + k];
      ++topic_word_count_[static_cast<std::size_t>(k) * vocab_size_ + w];
      ++topic_count_total_[k];
      ++total_tokens_;
    }
  }
}

std::int64_t LdaGibbsSampler::assigned_total() const {
  return std::accumulate(topic_count_total_.begin(), topic_count_total_.end(),
                         std::int64_t{0});
}

void LdaGibbsSampler::sweep() {
  const double vbeta = vocab_size_ * beta_;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    int* doc_counts = doc_topic_count_.data() + d * topic_count_;
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const int w = docs_[d][i];
      const int old_k = assignments_[d][i];
      --doc_counts[old_k];
      --topic_word_count_[static_cast<std::size_t>(old_k) * vocab_size_ + w];
      --topic_count_total_[old_k];

      double total = 0.0;
      for (int k = 0; k < topic_count_; ++k) {
        const double p =
            (topic_word_count_[static_cast<std::size_t>(k) * vocab_size_ + w] +
             beta_) /
            (topic_count_total_[k] + vbeta) * (doc_counts[k] + alpha_);
        total += p;
        cumulative_[k] = total;
      }
      const double u = uniform01(rng_) * total;
      int new_k = 0;
      while (new_k < topic_count_ - 1 && cumulative_[new_k] <= u) ++new_k;

      assignments_[d][i] = new_k;
      ++doc_counts[new_k];
      ++topic_word_count_[static_cast<std::size_t>(new_k) * vocab_size_ + w];
      ++topic_count_total_[new_k];
    }
  }
}

std::vector<std::vector<double>> LdaGibbsSampler::doc_topic_estimate() const {
  std::vector<std::vector<double>> theta(docs_.size());
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    const double denom = docs_[d].size() + topic_count_ * alpha_;
    theta[d].resize(topic_count_);
    for (int k = 0; k < topic_count_; ++k)
      theta[d][k] = (doc_topic_count_[d * topic_count_ + k] + alpha_) / denom;
  }
  return theta;
}

std::vector<std::vector<double>> LdaGibbsSampler::topic_word_estimate() const {
  std::vector<std::vector<double>> phi(topic_count_);
  const double vbeta = vocab_size_ * beta_;
  for (int k = 0; k < topic_count_; ++k) {
    phi[k].resize(vocab_size_);
    const double denom = topic_count_total_[k] + vbeta;
    for (int w = 0; w < vocab_size_; ++w)
      phi[k][w] =
          (topic_word_count_[static_cast<std::size_t>(k) * vocab_size_ + w] +
           beta_) /
          denom;
  }
  return phi;
}

TopicModel fit_lda(const Dataset& d, int topic_count, int iterations,
                   std::uint64_t seed, int average_last) {
  if (topic_count < 1)
    throw std::invalid_argument("fit_lda: topic_count must be >= 1");
  if (iterations < 1)
    throw std::invalid_argument("fit_lda: iterations must be >= 1");
  if (d.empty()) throw std::runtime_error("fit_lda: empty corpus");

  TopicModel model;
  model.topic_count = topic_count;
  model.alpha = 50.0 / topic_count;
  model.beta = 0.01;

  std::set<std::string> tag_set;
  for (const Post& p : d.posts()) tag_set.insert(p.tags.begin(), p.tags.end());
  model.vocabulary.assign(tag_set.begin(), tag_set.end());
  std::map<std::string, int> word_index;
  for (std::size_t w = 0; w < model.vocabulary.size(); ++w)
    word_index[model.vocabulary[w]] = static_cast<int>(w);

  std::vector<std::vector<int>> docs;
  docs.reserve(d.resources().size());
  std::int64_t total_assignments = 0;
  for (const auto& [resource, post_idxs] : d.resources()) {
    model.resource_index[resource] = model.resources.size();
    model.resources.push_back(resource);
    std::vector<int> doc;
    for (const std::size_t idx : post_idxs)
      for (const std::string& tag : d.posts()[idx].tags)
        doc.push_back(word_index.at(tag));
    std::sort(doc.begin(), doc.end());
    total_assignments += static_cast<std::int64_t>(doc.size());
    docs.push_back(std::move(doc));
  }
  if (topic_count > total_assignments)
    throw std::runtime_error("fit_lda: more topics than evidence");

  LdaGibbsSampler sampler(std::move(docs), static_cast<int>(tag_set.size()),
                          topic_count, model.alpha, model.beta, seed);

  const int averaged = std::min(std::max(average_last, 1), iterations);
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<double>> phi;
  for (int it = 0; it < iterations; ++it) {
    sampler.sweep();
    if (it < iterations - averaged) continue;
    auto t = sampler.doc_topic_estimate();
    auto p = sampler.topic_word_estimate();
    if (theta.empty()) {
      theta = std::move(t);
      phi = std::move(p);
    } else {
      for (std::size_t i = 0; i < theta.size(); ++i)
        for (std::size_t k = 0; k < theta[i].size(); ++k)
          theta[i][k] += t[i][k];
      for (std::size_t k = 0; k < phi.size(); ++k)
        for (std::size_t w = 0; w < phi[k].size(); ++w) phi[k][w] += p[k][w];
    }
  }
  if (averaged > 1) {
    const double inv = 1.0 / averaged;
    for (auto& row : theta)
      for (double& v : row) v *= inv;
    for (auto& row : phi)
      for (double& v : row) v *= inv;
  }
  model.doc_topic = std::move(theta);
  model.topic_word = std::move(phi);
  return model;
}

TopicVector apply_cutoff(const TopicVector& row, double cutoff) {
  TopicVector out(row);
  const std::size_t argmax = static_cast<std::size_t>(
      std::max_element(row.begin(), row.end()) - row.begin());
  for (double& v : out)
    if (v < cutoff) v = 0.0;
  out[argmax] = row[argmax];  // never drop the dominant topic
  return out;
}

TopicVector resource_topics(const TopicModel& m, const std::string& resource_id,
                            double cutoff) {
  const auto it = m.resource_index.find(resource_id);
  if (it == m.resource_index.end())
    throw std::out_of_range("resource_topics: unknown resource: " +
                            resource_id);
  return apply_cutoff(m.doc_topic[it->second], cutoff);
}

TopicTable topic_table_from_model(const TopicModel& m, double cutoff) {
  TopicTable table;
  table.dim = m.topic_count;
  for (const std::string& resource : m.resources)
    table.rows[resource] = resource_topics(m, resource, cutoff);
  return table;
}

void save_topic_table(const std::string& path, const TopicTable& table) {
  std::string out;
  for (const auto& [resource, row] : table.rows) {
    out += resource;
    out += '\t';
    bool first = true;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] == 0.0) continue;
      if (!first) out += ' ';
      out += std::to_string(k);
      out += ':';
      out += format_fixed(row[k], 6);
      first = false;
    }
    out += '\n';
  }
  write_text_file(path, out);
}

TopicTable load_topic_table(const std::string& path) {
  struct SparseRow {
    std::vector<std::pair<int, double>> entries;
  };
  std::map<std::string, SparseRow> sparse;
  int dim = 0;

  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split_view(line, '\t');
    if (cols.size() != 2 || cols[0].empty())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'resource \\t topic:prob ...'");
    SparseRow row;
    for (const auto pair : split_view(cols[1], ' ')) {
      if (pair.empty()) continue;
      const auto kv = split_view(pair, ':');
      std::int64_t topic = 0;
      double prob = 0.0;
      if (kv.size() != 2 || !parse_int64(kv[0], topic) || topic < 0 ||
          !parse_double(kv[1], prob) || prob < 0.0)
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": bad topic:probability pair '" +
                                 std::string(pair) + "'");
      row.entries.emplace_back(static_cast<int>(topic), prob);
      dim = std::max(dim, static_cast<int>(topic) + 1);
    }
    if (row.entries.empty())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": resource without topics");
    sparse[std::string(cols[0])] = std::move(row);
  }
  if (sparse.empty()) throw std::runtime_error(path + ": empty topic table");

  TopicTable table;
  table.dim = dim;
  for (const auto& [resource, row] : sparse) {
    TopicVector dense(dim, 0.0);
    for (const auto& [topic, prob] : row.entries) dense[topic] = prob;
    table.rows[resource] = std::move(dense);
  }
  return table;
}

}  // namespace sustainrec
