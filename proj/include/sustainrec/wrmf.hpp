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

#ifndef SUSTAINREC_WRMF_HPP
#define SUSTAINREC_WRMF_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sustainrec/neighbors.hpp"

namespace sustainrec {

/// Latent factors of a weighted implicit-feedback factorization. Row
/// order matches the InteractionMatrix the model was trained on.
struct FactorModel {
  int factors = 0;
  double reg = 0.0;
  double conf_alpha = 0.0;
  std::vector<std::string> users;
  std::vector<std::string> resources;
  Eigen::MatrixXd user_factors;      // |U| x f
  Eigen::MatrixXd resource_factors;  // |R| x f
};

/// Alternating least squares on the weighted objective
///   J = sum_{u,r} c_ur (p_ur - x_u . y_r)^2 + reg (|X|^2 + |Y|^2)
/// with binary preference p and confidence c = 1 + conf_alpha * p. Each
/// row subproblem is solved exactly, so J never increases across sweeps.
/// `objective_trace`, when given, receives J after every sweep.
FactorModel train_wrmf(const InteractionMatrix& m, int factors, int iterations,
                       double reg, double conf_alpha, std::uint64_t seed,
                       std::vector<double>* objective_trace = nullptr);

/// Exact objective value for arbitrary factor matrices. The dense sum
/// over unobserved cells folds into the Gram matrix of Y, so the cost is
/// O(nnz * f + (|U| + f) * f^2).
double wrmf_objective(const InteractionMatrix& m, const Eigen::MatrixXd& X,
                      const Eigen::MatrixXd& Y, double reg, double conf_alpha);
double wrmf_objective(const InteractionMatrix& m, const FactorModel& model);

/// Dot-product ranking over the user's unowned resources.
ScoredList wrmf_scores(const FactorModel& model, const InteractionMatrix& m,
                       const std::string& user, std::size_t n);

/// TSV dump, one row per entity: `user|resource \t id \t v1 .. vf`.
void save_factor_model(const std::string& path, const FactorModel& model);

}  // namespace sustainrec

#endif  // SUSTAINREC_WRMF_HPP
