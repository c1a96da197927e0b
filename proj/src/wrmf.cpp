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

#include "sustainrec/wrmf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sustainrec/rng.hpp"
#include "sustainrec/util.hpp"

namespace sustainrec {

namespace {

/// Solves one ALS side: every row of `out` gets the exact minimizer of
/// the weighted least-squares subproblem against the fixed `other` side.
/// items(i) lists the observed columns of row i.
void solve_side(Eigen::MatrixXd& out, const Eigen::MatrixXd& other,
                const std::vector<std::vector<int>>& items, double reg,
                double conf_alpha) {
  const int f = static_cast<int>(other.cols());
  Eigen::MatrixXd gram = other.transpose() * other;
  gram.diagonal().array() += reg;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    Eigen::MatrixXd a = gram;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(f);
    for (const int j : items[i]) {
      const auto y = other.row(j);
      a.noalias() += conf_alpha * y.transpose() * y;
      b.noalias() += (1.0 + conf_alpha) * y.transpose();
    }
    out.row(i) = a.ldlt().solve(b).transpose();
  }
}

std::vector<std::vector<int>> gather_rows(const InteractionMatrix& m) {
  std::vector<std::vector<int>> rows(m.user_count());
  for (std::size_t u = 0; u < m.user_count(); ++u)
    rows[u] = m.user_items(static_cast<int>(u));
  return rows;
}

std::vector<std::vector<int>> gather_cols(const InteractionMatrix& m) {
  std::vector<std::vector<int>> cols(m.resource_count());
  for (std::size_t r = 0; r < m.resource_count(); ++r)
    cols[r] = m.item_users(static_cast<int>(r));
  return cols;
}

}  // namespace

FactorModel train_wrmf(const InteractionMatrix& m, int factors, int iterations,
                       double reg, double conf_alpha, std::uint64_t seed,
                       std::vector<double>* objective_trace) {
  if (m.user_count() == 0 || m.resource_count() == 0)
    throw std::runtime_error("train_wrmf: empty interaction matrix");
  if (factors < 1)
    throw std::invalid_argument("train_wrmf: factors must be >= 1");
  if (iterations < 1)
    throw std::invalid_argument("train_wrmf: iterations must be >= 1");
  if (!(reg > 0.0))
    throw std::invalid_argument("train_wrmf: reg must be > 0");
  if (conf_alpha < 0.0)
    throw std::invalid_argument("train_wrmf: conf_alpha must be >= 0");

  FactorModel model;
  model.factors = factors;
  model.reg = reg;
  model.conf_alpha = conf_alpha;
  model.users = m.user_ids();
  model.resources = m.resource_ids();

  const double scale = 0.01 / std::sqrt(static_cast<double>(factors));
  Rng rng(seed);
  model.user_factors.resize(m.user_count(), factors);
  model.resource_factors.resize(m.resource_count(), factors);
  for (Eigen::Index i = 0; i < model.user_factors.rows(); ++i)
    for (int j = 0; j < factors; ++j)
      model.user_factors(i, j) = uniform01(rng) * scale;
  for (Eigen::Index i = 0; i < model.resource_factors.rows(); ++i)
    for (int j = 0; j < factors; ++j)
      model.resource_factors(i, j) = uniform01(rng) * scale;

  const auto rows = gather_rows(m);
  const auto cols = gather_cols(m);
  for (int sweep = 0; sweep < iterations; ++sweep) {
    solve_side(model.user_factors, model.resource_factors, rows, reg,
               conf_alpha);
    solve_side(model.resource_factors, model.user_factors, cols, reg,
               conf_alpha);
    if (objective_trace)
      objective_trace->push_back(wrmf_objective(m, model));
  }
  return model;
}

double wrmf_objective(const InteractionMatrix& m, const Eigen::MatrixXd& X,
                      const Eigen::MatrixXd& Y, double reg, double conf_alpha) {
  // Split the sum into the all-cells unit-confidence part, which reduces
  // to the Gram matrix of Y, plus corrections on observed cells.
  const Eigen::MatrixXd gram = Y.transpose() * Y;
  double j = ((X * gram).cwiseProduct(X)).sum();
  for (std::size_t u = 0; u < m.user_count(); ++u) {
    for (const int r : m.user_items(static_cast<int>(u))) {
      const double d = X.row(static_cast<Eigen::Index>(u)).dot(Y.row(r));
      j += (1.0 + conf_alpha) * (1.0 - d) * (1.0 - d) - d * d;
    }
  }
  j += reg * (X.squaredNorm() + Y.squaredNorm());
  return j;
}

double wrmf_objective(const InteractionMatrix& m, const FactorModel& model) {
  return wrmf_objective(m, model.user_factors, model.resource_factors,
                        model.reg, model.conf_alpha);
}

ScoredList wrmf_scores(const FactorModel& model, const InteractionMatrix& m,
                       const std::string& user, std::size_t n) {
  const int u = m.user_index(user);
  if (u < 0) throw std::out_of_range("wrmf_scores: unknown user: " + user);

  std::vector<char> owned_mask(m.resource_count(), 0);
  for (const int r : m.user_items(u)) owned_mask[r] = 1;

  const Eigen::VectorXd scores =
      model.resource_factors * model.user_factors.row(u).transpose();
  std::vector<std::pair<int, double>> scored;
  scored.reserve(m.resource_count());
  for (std::size_t r = 0; r < m.resource_count(); ++r)
    if (!owned_mask[r])
      scored.emplace_back(static_cast<int>(r),
                          scores(static_cast<Eigen::Index>(r)));
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > n) scored.resize(n);

  ScoredList list;
  list.reserve(scored.size());
  for (const auto& [r, score] : scored)
    list.push_back({m.resource_id(r), score});
  return list;
}

void save_factor_model(const std::string& path, const FactorModel& model) {
  std::string out;
  auto dump = [&](const char* kind, const std::vector<std::string>& ids,
                  const Eigen::MatrixXd& factors) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out += kind;
      out += '\t';
      out += ids[i];
      for (int j = 0; j < model.factors; ++j) {
        out += '\t';
        out += format_g17(factors(static_cast<Eigen::Index>(i), j));
      }
      out += '\n';
    }
  };
  dump("user", model.users, model.user_factors);
  dump("resource", model.resources, model.resource_factors);
  write_text_file(path, out);
}

}  // namespace sustainrec
