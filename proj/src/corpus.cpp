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

#include "sustainrec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "sustainrec/rng.hpp"
#include "sustainrec/util.hpp"

namespace sustainrec {

namespace {

bool canonical_less(const Post& a, const Post& b) {
  return std::tie(a.user, a.timestamp, a.resource) <
         std::tie(b.user, b.timestamp, b.resource);
}

/// Smallest integer >= fraction * n, guarded against the product landing
/// an ulp above an exact integer. Clamped to [1, n] for n >= 1.
std::size_t ceil_count(double fraction, std::size_t n) {
  const double raw = fraction * static_cast<double>(n);
  auto m = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  if (m < 1) m = 1;
  if (m > n) m = n;
  return m;
}

[[noreturn]] void parse_fail(const std::string& origin, std::size_t line_no,
                             const std::string& reason) {
  throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " +
                           reason);
}

}  // namespace

Dataset Dataset::from_posts(std::vector<Post> posts) {
  std::sort(posts.begin(), posts.end(), canonical_less);
  Dataset d;
  d.posts_ = std::move(posts);
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < d.posts_.size(); ++i) {
    const Post& p = d.posts_[i];
    if (p.tags.empty())
      throw std::runtime_error("post without tags: user=" + p.user +
                               " resource=" + p.resource);
    if (!seen.emplace(p.user, p.resource).second)
      throw std::runtime_error("duplicate (user, resource) pair: " + p.user +
                               ", " + p.resource);
    d.users_[p.user].push_back(i);
    d.resources_[p.resource].push_back(i);
  }
  return d;
}

DatasetStats Dataset::stats() const {
  DatasetStats s;
  s.posts = posts_.size();
  s.users = users_.size();
  s.resources = resources_.size();
  std::set<std::string> tags;
  for (const Post& p : posts_) {
    s.tag_assignments += p.tags.size();
    tags.insert(p.tags.begin(), p.tags.end());
  }
  s.tags = tags.size();
  return s;
}

PostFormat post_format_from_string(const std::string& name) {
  if (name == "tag-per-line") return PostFormat::TagPerLine;
  if (name == "packed") return PostFormat::PackedTags;
  throw std::invalid_argument("unknown post format: " + name +
                              " (expected tag-per-line or packed)");
}

std::string to_string(PostFormat format) {
  return format == PostFormat::TagPerLine ? "tag-per-line" : "packed";
}

Dataset parse_posts_text(const std::string& text, PostFormat format,
                         const std::string& origin) {
  struct Pending {
    std::int64_t timestamp;
    std::set<std::string> tags;
  };
  std::map<std::pair<std::string, std::string>, Pending> pending;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split_view(line, '\t');
    if (cols.size() != 4)
      parse_fail(origin, line_no,
                 "expected 4 tab-separated fields, got " +
                     std::to_string(cols.size()));
    if (cols[0].empty()) parse_fail(origin, line_no, "empty user id");
    if (cols[1].empty()) parse_fail(origin, line_no, "empty resource id");
    std::int64_t timestamp = 0;
    if (!parse_int64(cols[2], timestamp))
      parse_fail(origin, line_no,
                 "bad timestamp: '" + std::string(cols[2]) + "'");

    std::vector<std::string> tags;
    if (format == PostFormat::PackedTags) {
      for (const auto tag : split_view(cols[3], ',')) {
        if (tag.empty()) parse_fail(origin, line_no, "empty tag");
        tags.emplace_back(tag);
      }
    } else {
      if (cols[3].empty()) parse_fail(origin, line_no, "empty tag");
      tags.emplace_back(cols[3]);
    }

    const auto key = std::make_pair(std::string(cols[0]), std::string(cols[1]));
    auto it = pending.find(key);
    if (it == pending.end()) {
      Pending p{timestamp, {tags.begin(), tags.end()}};
      pending.emplace(key, std::move(p));
    } else if (timestamp < it->second.timestamp) {
      // Earlier occurrence of the same pair replaces the later one.
      it->second.timestamp = timestamp;
      it->second.tags = {tags.begin(), tags.end()};
    } else if (timestamp == it->second.timestamp) {
      it->second.tags.insert(tags.begin(), tags.end());
    }
  }

  if (pending.empty()) throw std::runtime_error(origin + ": empty dataset");

  std::vector<Post> posts;
  posts.reserve(pending.size());
  for (auto& [key, p] : pending) {
    Post post;
    post.user = key.first;
    post.resource = key.second;
    post.timestamp = p.timestamp;
    post.tags.assign(p.tags.begin(), p.tags.end());
    posts.push_back(std::move(post));
  }
  std::sort(posts.begin(), posts.end(), canonical_less);
  for (std::size_t i = 0; i < posts.size(); ++i)
    posts[i].post_id = static_cast<std::int64_t>(i);
  return Dataset::from_posts(std::move(posts));
}

Dataset parse_posts(const std::string& path, PostFormat format) {
  return parse_posts_text(read_text_file(path), format, path);
}

std::string serialize_posts(const Dataset& d, PostFormat format) {
  std::string out;
  for (const Post& p : d.posts()) {
    if (format == PostFormat::PackedTags) {
      out += p.user;
      out += '\t';
      out += p.resource;
      out += '\t';
      out += std::to_string(p.timestamp);
      out += '\t';
      for (std::size_t i = 0; i < p.tags.size(); ++i) {
        if (i) out += ',';
        out += p.tags[i];
      }
      out += '\n';
    } else {
      for (const std::string& tag : p.tags) {
        out += p.user;
        out += '\t';
        out += p.resource;
        out += '\t';
        out += std::to_string(p.timestamp);
        out += '\t';
        out += tag;
        out += '\n';
      }
    }
  }
  return out;
}

void save_posts(const std::string& path, const Dataset& d, PostFormat format) {
  write_text_file(path, serialize_posts(d, format));
}

Dataset filter_unique_resources(const Dataset& d) {
  std::vector<Post> kept;
  for (const Post& p : d.posts()) {
    // One post per (user, resource), so the index size is the number of
    // distinct users holding the resource.
    if (d.resources().at(p.resource).size() >= 2) kept.push_back(p);
  }
  return Dataset::from_posts(std::move(kept));
}

Dataset sample_users(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("sample_users: fraction must be in (0, 1]");
  if (fraction == 1.0 || d.empty()) return d;

  std::vector<std::string> ids;
  ids.reserve(d.users().size());
  for (const auto& [user, idxs] : d.users()) ids.push_back(user);

  const std::size_t keep = ceil_count(fraction, ids.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(uniform_below(rng, ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
  const std::set<std::string> selected(ids.begin(), ids.begin() + keep);

  std::vector<Post> kept;
  for (const Post& p : d.posts())
    if (selected.count(p.user)) kept.push_back(p);
  return Dataset::from_posts(std::move(kept));
}

SplitDataset chronological_split(const Dataset& d, double test_fraction) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
    throw std::invalid_argument(
        "chronological_split: test_fraction must be in (0, 1)");

  std::set<std::size_t> test_idx;
  for (const auto& [user, idxs] : d.users()) {
    const std::size_t n = idxs.size();
    if (n < 2) continue;  // single-post users train only
    std::vector<std::size_t> order(idxs);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Post& pa = d.posts()[a];
      const Post& pb = d.posts()[b];
      return std::tie(pa.timestamp, pa.post_id) <
             std::tie(pb.timestamp, pb.post_id);
    });
    const std::size_t m = ceil_count(test_fraction, n);
    for (std::size_t i = n - m; i < n; ++i) test_idx.insert(order[i]);
  }

  std::vector<Post> train_posts;
  std::vector<Post> test_posts;
  for (std::size_t i = 0; i < d.posts().size(); ++i) {
    if (test_idx.count(i))
      test_posts.push_back(d.posts()[i]);
    else
      train_posts.push_back(d.posts()[i]);
  }
  SplitDataset split;
  split.train = Dataset::from_posts(std::move(train_posts));
  split.test = Dataset::from_posts(std::move(test_posts));
  return split;
}

}  // namespace sustainrec
