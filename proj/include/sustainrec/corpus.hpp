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

#ifndef SUSTAINREC_CORPUS_HPP
#define SUSTAINREC_CORPUS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sustainrec {

/// One bookmarking event: a user attached a set of tags to a resource at
/// some time. (user, resource) pairs are unique within a Dataset; repeats
/// in a raw file are merged at parse time, keeping the earliest timestamp.
struct Post {
  std::string user;
  std::string resource;
  std::vector<std::string> tags;  // sorted, unique, non-empty
  std::int64_t timestamp = 0;
  std::int64_t post_id = 0;       // unique within a dataset
};

struct DatasetStats {
  std::size_t posts = 0;
  std::size_t users = 0;
  std::size_t resources = 0;
  std::size_t tags = 0;             // distinct tag strings
  std::size_t tag_assignments = 0;  // sum of tag-set sizes
};

/// Immutable post collection with per-user and per-resource indices.
/// Posts are kept in canonical order: (user, timestamp, resource).
class Dataset {
 public:
  Dataset() = default;

  /// Builds indices; sorts posts into canonical order. Throws on a post
  /// with an empty tag set or a duplicate (user, resource) pair.
  static Dataset from_posts(std::vector<Post> posts);

  const std::vector<Post>& posts() const { return posts_; }
  /// user id -> indices into posts(), ascending (so chronological per user
  /// up to same-timestamp ties, which canonical order breaks by resource).
  const std::map<std::string, std::vector<std::size_t>>& users() const {
    return users_;
  }
  const std::map<std::string, std::vector<std::size_t>>& resources() const {
    return resources_;
  }
  bool empty() const { return posts_.empty(); }
  DatasetStats stats() const;

 private:
  std::vector<Post> posts_;
  std::map<std::string, std::vector<std::size_t>> users_;
  std::map<std::string, std::vector<std::size_t>> resources_;
};

/// Accepted tab-separated layouts, both `user \t resource \t timestamp \t
/// <tags>`: one tag per line (lines sharing user/resource/timestamp merge
/// into one post), or all tags packed comma-separated into column 4.
enum class PostFormat { TagPerLine, PackedTags };

PostFormat post_format_from_string(const std::string& name);
std::string to_string(PostFormat format);

/// Parses and deduplicates a post log. Throws with the offending line
/// number on malformed input, and "empty dataset" when no posts remain.
Dataset parse_posts(const std::string& path, PostFormat format);
/// Same, over an in-memory buffer; `origin` names the source in errors.
Dataset parse_posts_text(const std::string& text, PostFormat format,
                         const std::string& origin = "<input>");

/// Canonical serialization: sorted by (user, timestamp, resource), tags
/// sorted within a post. Parsing the output reproduces the dataset.
std::string serialize_posts(const Dataset& d, PostFormat format);
void save_posts(const std::string& path, const Dataset& d, PostFormat format);

/// Drops every resource bookmarked by fewer than two distinct users
/// (users left without posts disappear with their posts). Idempotent.
Dataset filter_unique_resources(const Dataset& d);

/// Keeps ceil(fraction * |users|) users drawn uniformly without
/// replacement, with all their posts. fraction must lie in (0, 1].
Dataset sample_users(const Dataset& d, double fraction, std::uint64_t seed);

struct SplitDataset {
  Dataset train;
  Dataset test;
};

/// Per-user holdout of the most recent posts: for a user with n >= 2
/// posts the ceil(test_fraction * n) latest (timestamp order, post_id
/// tiebreak) go to test; single-post users stay entirely in train.
SplitDataset chronological_split(const Dataset& d, double test_fraction);

}  // namespace sustainrec

#endif  // SUSTAINREC_CORPUS_HPP
