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

#include "sustainrec/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "sustainrec/util.hpp"

namespace sustainrec {

namespace {

/// Sorts (index, score) pairs into final list order and maps indices back
/// to resource ids, keeping at most n entries.
ScoredList finalize_candidates(std::vector<std::pair<int, double>> scored,
                               const InteractionMatrix& m, std::size_t n) {
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (scored.size() > n) scored.resize(n);
  ScoredList list;
  list.reserve(scored.size());
  for (const auto& [idx, score] : scored)
    list.push_back({m.resource_id(idx), score});
  return list;
}

/// Top-k (similarity desc, index asc) over all indices except `self`,
/// zero similarities included so the neighborhood always has k members
/// when enough entities exist.
std::vector<std::pair<int, double>> top_k_similar(
    const std::vector<double>& sims, int self, int k) {
  std::vector<std::pair<int, double>> order;
  order.reserve(sims.size());
  for (int i = 0; i < static_cast<int>(sims.size()); ++i)
    if (i != self) order.emplace_back(i, sims[i]);
  const std::size_t keep = std::min<std::size_t>(order.size(), k);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                    });
  order.resize(keep);
  return order;
}

}  // namespace

std::string serialize_scored_list(const ScoredList& list) {
  std::string out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out += std::to_string(i + 1);
    out += '\t';
    out += list[i].resource;
    out += '\t';
    out += format_fixed(list[i].score, 6);
    out += '\n';
  }
  return out;
}

void save_user_recommendations(
    const std::string& path,
    const std::map<std::string, ScoredList>& recommendations) {
  std::string out;
  for (const auto& [user, list] : recommendations) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      out += user;
      out += '\t';
      out += std::to_string(i + 1);
      out += '\t';
      out += list[i].resource;
      out += '\t';
      out += format_fixed(list[i].score, 6);
      out += '\n';
    }
    if (list.empty()) {
      // Keep users with empty lists visible so loads see them.
      out += user;
      out += "\t0\t-\t0.000000\n";
    }
  }
  write_text_file(path, out);
}

std::map<std::string, ScoredList> load_user_recommendations(
    const std::string& path) {
  std::map<std::string, ScoredList> recommendations;
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split_view(line, '\t');
    std::int64_t rank = 0;
    double score = 0.0;
    if (cols.size() != 4 || cols[0].empty() || !parse_int64(cols[1], rank) ||
        !parse_double(cols[3], score))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad recommendation row");
    auto& list = recommendations[std::string(cols[0])];
    if (rank == 0) continue;  // marker row for an empty list
    if (rank != static_cast<std::int64_t>(list.size()) + 1)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": ranks out of order");
    list.push_back({std::string(cols[2]), score});
  }
  return recommendations;
}

InteractionMatrix InteractionMatrix::from_dataset(const Dataset& train) {
  InteractionMatrix m;
  for (const auto& [user, idxs] : train.users()) {
    m.user_index_[user] = static_cast<int>(m.user_ids_.size());
    m.user_ids_.push_back(user);
  }
  for (const auto& [resource, idxs] : train.resources()) {
    m.resource_index_[resource] = static_cast<int>(m.resource_ids_.size());
    m.resource_ids_.push_back(resource);
  }
  m.rows_.resize(m.user_ids_.size());
  m.cols_.resize(m.resource_ids_.size());
  for (const Post& p : train.posts()) {
    const int u = m.user_index_.at(p.user);
    const int r = m.resource_index_.at(p.resource);
    m.rows_[u].push_back(r);
    m.cols_[r].push_back(u);
  }
  for (auto& row : m.rows_) std::sort(row.begin(), row.end());
  for (auto& col : m.cols_) std::sort(col.begin(), col.end());
  return m;
}

int InteractionMatrix::user_index(const std::string& user) const {
  const auto it = user_index_.find(user);
  return it == user_index_.end() ? -1 : it->second;
}

int InteractionMatrix::resource_index(const std::string& resource) const {
  const auto it = resource_index_.find(resource);
  return it == resource_index_.end() ? -1 : it->second;
}

double cosine(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t overlap = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++overlap;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(overlap) /
         std::sqrt(static_cast<double>(a.size()) *
                   static_cast<double>(b.size()));
}

ScoredList cf_user_scores(const InteractionMatrix& m, const std::string& user,
                          int k, std::size_t n_candidates) {
  if (k < 1) throw std::invalid_argument("cf_user_scores: k must be >= 1");
  const int u = m.user_index(user);
  if (u < 0) throw std::out_of_range("cf_user_scores: unknown user: " + user);
  const std::vector<int>& owned = m.user_items(u);
  if (owned.empty()) return {};

  // Overlap counts against every other user via the resource index.
  std::vector<int> overlap(m.user_count(), 0);
  for (const int r : owned)
    for (const int v : m.item_users(r)) ++overlap[v];

  std::vector<double> sims(m.user_count(), 0.0);
  for (std::size_t v = 0; v < m.user_count(); ++v) {
    if (static_cast<int>(v) == u || overlap[v] == 0 || m.user_items(v).empty())
      continue;
    sims[v] = overlap[v] /
              std::sqrt(static_cast<double>(owned.size()) *
                        static_cast<double>(m.user_items(v).size()));
  }
  const auto neighbors = top_k_similar(sims, u, k);

  std::vector<double> score(m.resource_count(), 0.0);
  std::vector<char> seen(m.resource_count(), 0);
  std::vector<char> owned_mask(m.resource_count(), 0);
  for (const int r : owned) owned_mask[r] = 1;
  for (const auto& [v, sim] : neighbors) {
    for (const int r : m.user_items(v)) {
      if (owned_mask[r]) continue;
      score[r] += sim;
      seen[r] = 1;
    }
  }

  std::vector<std::pair<int, double>> scored;
  for (std::size_t r = 0; r < m.resource_count(); ++r)
    if (seen[r]) scored.emplace_back(static_cast<int>(r), score[r]);
  return finalize_candidates(std::move(scored), m, n_candidates);
}

namespace {

/// Similarities of resource `r` to every other resource, via co-bookmark
/// counting over the user index.
std::vector<double> resource_similarities(const InteractionMatrix& m, int r) {
  std::vector<int> overlap(m.resource_count(), 0);
  for (const int v : m.item_users(r))
    for (const int c : m.user_items(v)) ++overlap[c];
  std::vector<double> sims(m.resource_count(), 0.0);
  const double deg = static_cast<double>(m.item_users(r).size());
  if (deg == 0.0) return sims;
  for (std::size_t c = 0; c < m.resource_count(); ++c) {
    if (static_cast<int>(c) == r || overlap[c] == 0) continue;
    sims[c] = overlap[c] /
              std::sqrt(deg * static_cast<double>(m.item_users(c).size()));
  }
  return sims;
}

}  // namespace

ResourceNeighborhoods resource_neighborhoods(const InteractionMatrix& m,
                                             int k) {
  if (k < 1)
    throw std::invalid_argument("resource_neighborhoods: k must be >= 1");
  ResourceNeighborhoods cache;
  cache.k = k;
  cache.neighbors.resize(m.resource_count());
  for (std::size_t r = 0; r < m.resource_count(); ++r)
    cache.neighbors[r] =
        top_k_similar(resource_similarities(m, static_cast<int>(r)),
                      static_cast<int>(r), k);
  return cache;
}

namespace {

ScoredList accumulate_resource_neighbors(
    const InteractionMatrix& m, int u,
    const std::function<const std::vector<std::pair<int, double>>&(int)>&
        neighbors_of,
    std::size_t n_candidates) {
  const std::vector<int>& owned = m.user_items(u);
  std::vector<double> score(m.resource_count(), 0.0);
  std::vector<char> seen(m.resource_count(), 0);
  std::vector<char> owned_mask(m.resource_count(), 0);
  for (const int r : owned) owned_mask[r] = 1;
  for (const int r : owned) {
    for (const auto& [c, sim] : neighbors_of(r)) {
      if (owned_mask[c]) continue;
      score[c] += sim;
      seen[c] = 1;
    }
  }
  std::vector<std::pair<int, double>> scored;
  for (std::size_t c = 0; c < m.resource_count(); ++c)
    if (seen[c]) scored.emplace_back(static_cast<int>(c), score[c]);
  return finalize_candidates(std::move(scored), m, n_candidates);
}

}  // namespace

ScoredList cf_resource_scores(const InteractionMatrix& m,
                              const std::string& user, int k,
                              std::size_t n_candidates) {
  if (k < 1) throw std::invalid_argument("cf_resource_scores: k must be >= 1");
  const int u = m.user_index(user);
  if (u < 0)
    throw std::out_of_range("cf_resource_scores: unknown user: " + user);
  if (m.user_items(u).empty()) return {};

  std::map<int, std::vector<std::pair<int, double>>> local;
  auto neighbors_of =
      [&](int r) -> const std::vector<std::pair<int, double>>& {
    auto it = local.find(r);
    if (it == local.end())
      it = local
               .emplace(r, top_k_similar(resource_similarities(m, r), r, k))
               .first;
    return it->second;
  };
  return accumulate_resource_neighbors(m, u, neighbors_of, n_candidates);
}

ScoredList cf_resource_scores(const InteractionMatrix& m,
                              const ResourceNeighborhoods& cache,
                              const std::string& user,
                              std::size_t n_candidates) {
  const int u = m.user_index(user);
  if (u < 0)
    throw std::out_of_range("cf_resource_scores: unknown user: " + user);
  if (m.user_items(u).empty()) return {};
  auto neighbors_of =
      [&](int r) -> const std::vector<std::pair<int, double>>& {
    return cache.neighbors[r];
  };
  return accumulate_resource_neighbors(m, u, neighbors_of, n_candidates);
}

}  // namespace sustainrec
