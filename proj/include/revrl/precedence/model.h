// Copyright 2026 The revrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REVRL_PRECEDENCE_MODEL_H_
#define REVRL_PRECEDENCE_MODEL_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "revrl/core/rng.h"
#include "revrl/core/trajectory.h"
#include "revrl/nn/dense_net.h"

namespace revrl {

struct BceResult {
  double loss = 0.0;
  double accuracy = 0.0;  // fraction of pairs with (psi > 1/2) == label
  Eigen::VectorXd grad;   // layout of PrecedenceModel::params()
};

// Siamese precedence classifier: a shared relu trunk embeds both
// observations, and a linear head maps the concatenated embeddings to the
// logit of "first comes before second".
class PrecedenceModel {
 public:
  PrecedenceModel() = default;
  PrecedenceModel(int obs_size, Rng& rng, std::vector<int> hidden = {64, 64},
                  bool zero_head = false);
  PrecedenceModel(DenseNet embedder, DenseNet head);

  int obs_size() const { return embedder_.input_size(); }
  int embedding_size() const { return embedder_.output_size(); }
  const DenseNet& embedder() const { return embedder_; }
  const DenseNet& head() const { return head_; }

  double psi(const Observation& x, const Observation& x2) const;
  // Column j of X and X2 is one pair.
  Eigen::VectorXd psi_batch(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X2) const;
  Eigen::MatrixXd embed(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd psi_from_embeddings(const Eigen::MatrixXd& E, const Eigen::MatrixXd& E2) const;

  // Mean binary cross-entropy against labels in {0, 1}, computed on logits.
  BceResult bce(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X2,
                const Eigen::VectorXd& labels) const;

  Eigen::Index parameter_count() const;
  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& p);

 private:
  DenseNet embedder_;
  DenseNet head_;
};

void save_precedence_model(std::ostream& out, const PrecedenceModel& m);
PrecedenceModel load_precedence_model(std::istream& in);

Eigen::MatrixXd stack_columns(const std::vector<const Observation*>& obs, int size);
Eigen::VectorXd to_vector(const Observation& obs);

}  // namespace revrl

#endif  // REVRL_PRECEDENCE_MODEL_H_
