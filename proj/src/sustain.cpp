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

#include "sustainrec/sustain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sustainrec/util.hpp"

namespace sustainrec {

namespace {

void check_params(const SustainParams& p) {
  if (p.r < 0.0) throw std::invalid_argument("sustain: r must be >= 0");
  if (p.beta < 0.0) throw std::invalid_argument("sustain: beta must be >= 0");
  if (!(p.eta > 0.0) || !(p.eta < 1.0))
    throw std::invalid_argument("sustain: eta must be in (0, 1)");
  if (!(p.tau > 0.0) || !(p.tau < 1.0))
    throw std::invalid_argument("sustain: tau must be in (0, 1)");
}

}  // namespace

std::vector<double> distances(const TopicVector& input,
                              const std::vector<double>& cluster_pos) {
  if (input.size() != cluster_pos.size())
    throw std::invalid_argument("distances: dimension mismatch");
  std::vector<double> mu(input.size());
  for (std::size_t i = 0; i < input.size(); ++i)
    mu[i] = std::fabs(input[i] - cluster_pos[i]);
  return mu;
}

double cluster_activation(const std::vector<double>& mu,
                          const std::vector<double>& lambda, double r) {
  if (mu.size() != lambda.size())
    throw std::invalid_argument("cluster_activation: dimension mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double w = std::pow(lambda[i], r);
    num += w * std::exp(-lambda[i] * mu[i]);
    den += w;
  }
  if (!(den > 0.0))
    throw std::invalid_argument(
        "cluster_activation: attention weights sum to zero");
  return num / den;
}

std::pair<std::size_t, double> winner_output(
    const std::vector<double>& activations, double beta) {
  if (activations.empty())
    throw std::invalid_argument("winner_output: no activations");
  std::size_t m = 0;
  for (std::size_t j = 1; j < activations.size(); ++j)
    if (activations[j] > activations[m]) m = j;
  const double a_m = activations[m];
  if (!(a_m > 0.0))
    throw std::invalid_argument("winner_output: activations must be > 0");
  // h_act^beta / sum_j act^beta, computed relative to the winner so the
  // powers stay in (0, 1] and cannot underflow the numerator.
  double share = 0.0;
  for (const double a : activations) share += std::pow(a / a_m, beta);
  return {m, a_m / share};
}

std::vector<double> update_attention(const std::vector<double>& lambda,
                                     const std::vector<double>& mu_winner,
                                     double eta) {
  if (lambda.size() != mu_winner.size())
    throw std::invalid_argument("update_attention: dimension mismatch");
  std::vector<double> out(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double lm = lambda[i] * mu_winner[i];
    out[i] = lambda[i] + eta * std::exp(-lm) * (1.0 - lm);
  }
  return out;
}

std::vector<double> update_winner_position(
    const std::vector<double>& cluster_pos, const TopicVector& input,
    double eta) {
  if (cluster_pos.size() != input.size())
    throw std::invalid_argument("update_winner_position: dimension mismatch");
  std::vector<double> out(cluster_pos.size());
  for (std::size_t i = 0; i < cluster_pos.size(); ++i)
    out[i] = cluster_pos[i] + eta * (input[i] - cluster_pos[i]);
  return out;
}

ActivationResult evaluate_network(const UserNetwork& net,
                                  const TopicVector& input,
                                  const SustainParams& params) {
  if (net.clusters.empty())
    throw std::runtime_error("evaluate_network: untrained network");
  if (input.size() != net.dim())
    throw std::invalid_argument("evaluate_network: dimension mismatch");

  std::vector<double> activations(net.clusters.size());
  for (std::size_t j = 0; j < net.clusters.size(); ++j)
    activations[j] =
        cluster_activation(distances(input, net.clusters[j]), net.lambda,
                           params.r);
  const auto [winner, h_out] = winner_output(activations, params.beta);

  ActivationResult result;
  result.winner = winner;
  result.h_act = activations[winner];
  result.h_out = h_out;
  result.mu_winner = distances(input, net.clusters[winner]);
  return result;
}

UserNetwork train_user(const std::vector<TopicVector>& inputs,
                       const SustainParams& params) {
  check_params(params);
  if (inputs.empty())
    throw std::invalid_argument("train_user: no training inputs");
  const std::size_t n = inputs.front().size();
  if (n == 0) throw std::invalid_argument("train_user: zero-dimensional input");

  UserNetwork net;
  net.lambda.assign(n, 1.0);
  for (const TopicVector& input : inputs) {
    if (input.size() != n)
      throw std::invalid_argument("train_user: dimension mismatch");

    std::size_t winner;
    std::vector<double> mu_winner;
    if (net.clusters.empty()) {
      // The first item always seeds the first cluster.
      net.clusters.push_back(input);
      winner = 0;
      mu_winner.assign(n, 0.0);
    } else {
      ActivationResult res = evaluate_network(net, input, params);
      if (res.h_out < params.tau) {
        net.clusters.push_back(input);
        winner = net.clusters.size() - 1;
        mu_winner.assign(n, 0.0);
      } else {
        winner = res.winner;
        mu_winner = std::move(res.mu_winner);
      }
    }
    net.lambda = update_attention(net.lambda, mu_winner, params.eta);
    net.clusters[winner] =
        update_winner_position(net.clusters[winner], input, params.eta);
  }
  return net;
}

double score_candidate(const UserNetwork& net, const TopicVector& input,
                       const SustainParams& params) {
  return evaluate_network(net, input, params).h_out;
}

namespace {
constexpr const char* kNetworksHeader = "sustainrec-networks";
constexpr int kNetworksVersion = 1;

void append_row(std::string& out, const char* label,
                const std::vector<double>& values) {
  out += label;
  for (const double v : values) {
    out += '\t';
    out += format_g17(v);
  }
  out += '\n';
}
}  // namespace

void save_networks(const std::string& path,
                   const std::map<std::string, UserNetwork>& networks) {
  std::string out;
  out += kNetworksHeader;
  out += '\t';
  out += std::to_string(kNetworksVersion);
  out += '\n';
  for (const auto& [user, net] : networks) {
    out += "user\t" + user + '\t' + std::to_string(net.dim()) + '\t' +
           std::to_string(net.clusters.size()) + '\n';
    append_row(out, "lambda", net.lambda);
    for (const auto& cluster : net.clusters) append_row(out, "cluster", cluster);
  }
  write_text_file(path, out);
}

std::map<std::string, UserNetwork> load_networks(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& reason) -> std::runtime_error {
    return std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                              reason);
  };
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  auto parse_row = [&](const char* label, std::size_t dim,
                       std::vector<double>& out_values) {
    if (!next_line()) throw fail(std::string("missing ") + label + " row");
    const auto cols = split_view(line, '\t');
    if (cols.empty() || cols[0] != label || cols.size() != dim + 1)
      throw fail(std::string("expected ") + label + " row with " +
                 std::to_string(dim) + " values");
    out_values.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
      if (!parse_double(cols[i + 1], out_values[i]))
        throw fail("bad value '" + std::string(cols[i + 1]) + "'");
  };

  if (!next_line()) throw fail("empty network file");
  {
    const auto cols = split_view(line, '\t');
    std::int64_t version = 0;
    if (cols.size() != 2 || cols[0] != kNetworksHeader ||
        !parse_int64(cols[1], version) || version != kNetworksVersion)
      throw fail("unrecognized network file header");
  }

  std::map<std::string, UserNetwork> networks;
  while (next_line()) {
    const auto cols = split_view(line, '\t');
    std::int64_t dim = 0;
    std::int64_t cluster_count = 0;
    if (cols.size() != 4 || cols[0] != "user" || cols[1].empty() ||
        !parse_int64(cols[2], dim) || dim < 1 ||
        !parse_int64(cols[3], cluster_count) || cluster_count < 1)
      throw fail("expected 'user <id> <dim> <clusters>' row");
    UserNetwork net;
    parse_row("lambda", static_cast<std::size_t>(dim), net.lambda);
    net.clusters.resize(cluster_count);
    for (auto& cluster : net.clusters)
      parse_row("cluster", static_cast<std::size_t>(dim), cluster);
    networks[std::string(cols[1])] = std::move(net);
  }
  return networks;
}

}  // namespace sustainrec
