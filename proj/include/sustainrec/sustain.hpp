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

#ifndef SUSTAINREC_SUSTAIN_HPP
#define SUSTAINREC_SUSTAIN_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sustainrec/topics.hpp"

namespace sustainrec {

/// SUSTAIN category-learning parameters. Defaults are the established
/// best-fitting values for unsupervised learning.
struct SustainParams {
  double r = 9.998;    // attentional focus; r = 0 weights dimensions equally
  double beta = 6.396; // cluster competition (lateral inhibition)
  double eta = 0.096;  // learning rate
  double tau = 0.5;    // cluster recruitment threshold
};

/// A user's trained network: per-dimension attention tunings and the
/// positions of the recruited clusters, all in topic space.
struct UserNetwork {
  std::vector<double> lambda;                 // attention, all > 0
  std::vector<std::vector<double>> clusters;  // positions in [0,1]^n
  std::size_t dim() const { return lambda.size(); }
};

/// Result of presenting one input to a network, read-only.
struct ActivationResult {
  std::size_t winner = 0;         // index of the most activated cluster
  double h_act = 0.0;             // winner's raw activation, in (0, 1]
  double h_out = 0.0;             // winner's output after inhibition
  std::vector<double> mu_winner;  // per-dimension distance to the winner
};

/// Per-dimension distance |input_i - cluster_i|.
std::vector<double> distances(const TopicVector& input,
                              const std::vector<double>& cluster_pos);

/// Attention-weighted receptive-field activation:
///   sum_i lambda_i^r exp(-lambda_i mu_i) / sum_i lambda_i^r.
double cluster_activation(const std::vector<double>& mu,
                          const std::vector<double>& lambda, double r);

/// Picks the most activated cluster (ties to the lowest index) and
/// applies lateral inhibition:
///   h_out = h_act^beta / sum_j act_j^beta * h_act.
std::pair<std::size_t, double> winner_output(
    const std::vector<double>& activations, double beta);

/// Attention update against the winner's distances:
///   lambda_i += eta * exp(-lambda_i mu_i) * (1 - lambda_i mu_i).
std::vector<double> update_attention(const std::vector<double>& lambda,
                                     const std::vector<double>& mu_winner,
                                     double eta);

/// Moves the winner toward the input: h_i += eta * (input_i - h_i).
std::vector<double> update_winner_position(
    const std::vector<double>& cluster_pos, const TopicVector& input,
    double eta);

/// Presents one input without mutating the network.
ActivationResult evaluate_network(const UserNetwork& net,
                                  const TopicVector& input,
                                  const SustainParams& params);

/// Single unsupervised pass over a user's chronologically ordered
/// training inputs. The first input seeds the first cluster; afterwards a
/// new cluster is recruited at the input whenever the winner's inhibited
/// output falls below tau, and attention plus the winner's position are
/// updated after every item.
UserNetwork train_user(const std::vector<TopicVector>& inputs,
                       const SustainParams& params);

/// Winner's inhibited output for a candidate; never recruits or updates.
double score_candidate(const UserNetwork& net, const TopicVector& input,
                       const SustainParams& params);

/// Versioned TSV dump (attention vector, then one row per cluster);
/// values round-trip exactly via 17 significant digits.
void save_networks(const std::string& path,
                   const std::map<std::string, UserNetwork>& networks);
std::map<std::string, UserNetwork> load_networks(const std::string& path);

}  // namespace sustainrec

#endif  // SUSTAINREC_SUSTAIN_HPP
