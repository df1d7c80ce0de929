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

#include "revrl/precedence/model.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "revrl/nn/checkpoint.h"

namespace revrl {

namespace {

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

Eigen::VectorXd to_vector(const Observation& obs) {
  return Eigen::Map<const Eigen::VectorXd>(obs.data(), static_cast<Eigen::Index>(obs.size()));
}

Eigen::MatrixXd stack_columns(const std::vector<const Observation*>& obs, int size) {
  Eigen::MatrixXd m(size, static_cast<Eigen::Index>(obs.size()));
  for (std::size_t j = 0; j < obs.size(); ++j) {
    if (static_cast<int>(obs[j]->size()) != size) {
      throw std::invalid_argument("observation has length " + std::to_string(obs[j]->size()) +
                                  ", expected " + std::to_string(size));
    }
    m.col(static_cast<Eigen::Index>(j)) = to_vector(*obs[j]);
  }
  return m;
}

PrecedenceModel::PrecedenceModel(int obs_size, Rng& rng, std::vector<int> hidden,
                                 bool zero_head) {
  if (hidden.empty()) throw std::invalid_argument("PrecedenceModel: need a trunk layer");
  std::vector<int> sizes{obs_size};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  embedder_ = DenseNet::create(sizes, std::vector<Activation>(hidden.size(), Activation::kRelu), rng);
  head_ = DenseNet::create({2 * hidden.back(), 1}, {Activation::kIdentity}, rng);
  if (zero_head) head_.mutable_params().setZero();
}

PrecedenceModel::PrecedenceModel(DenseNet embedder, DenseNet head)
    : embedder_(std::move(embedder)), head_(std::move(head)) {
  if (head_.input_size() != 2 * embedder_.output_size() || head_.output_size() != 1) {
    throw std::invalid_argument("PrecedenceModel: head does not match the embedder");
  }
}

Eigen::MatrixXd PrecedenceModel::embed(const Eigen::MatrixXd& X) const {
  return embedder_.predict(X);
}

Eigen::VectorXd PrecedenceModel::psi_from_embeddings(const Eigen::MatrixXd& E,
                                                     const Eigen::MatrixXd& E2) const {
  if (E.cols() != E2.cols()) throw std::invalid_argument("psi: batch sizes differ");
  Eigen::MatrixXd cat(E.rows() + E2.rows(), E.cols());
  cat << E, E2;
  Eigen::RowVectorXd z = head_.predict(cat);
  return z.transpose().unaryExpr([](double v) { return sigmoid(v); });
}

Eigen::VectorXd PrecedenceModel::psi_batch(const Eigen::MatrixXd& X,
                                           const Eigen::MatrixXd& X2) const {
  return psi_from_embeddings(embed(X), embed(X2));
}

double PrecedenceModel::psi(const Observation& x, const Observation& x2) const {
  if (static_cast<int>(x.size()) != obs_size() || static_cast<int>(x2.size()) != obs_size()) {
    throw std::invalid_argument("psi: observation length does not match the trunk");
  }
  return psi_batch(to_vector(x), to_vector(x2))[0];
}

BceResult PrecedenceModel::bce(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X2,
                               const Eigen::VectorXd& labels) const {
  const Eigen::Index B = X.cols();
  if (X2.cols() != B || labels.size() != B || B == 0) {
    throw std::invalid_argument("bce: batch shapes");
  }
  const ForwardCache c1 = embedder_.forward(X);
  const ForwardCache c2 = embedder_.forward(X2);
  Eigen::MatrixXd cat(2 * embedding_size(), B);
  cat << c1.output, c2.output;
  const ForwardCache ch = head_.forward(cat);
  BceResult r;
  Eigen::MatrixXd dz(1, B);
  int correct = 0;
  for (Eigen::Index j = 0; j < B; ++j) {
    const double z = ch.output(0, j), y = labels[j];
    r.loss += softplus(z) - y * z;
    dz(0, j) = (sigmoid(z) - y) / static_cast<double>(B);
    correct += (z > 0) == (y > 0.5);
  }
  r.loss /= static_cast<double>(B);
  r.accuracy = static_cast<double>(correct) / static_cast<double>(B);
  if (!std::isfinite(r.loss)) throw std::runtime_error("precedence: non-finite loss");
  const BackwardResult bh = head_.backward(ch, dz, true);
  const Eigen::Index e = embedding_size();
  const BackwardResult b1 = embedder_.backward(c1, bh.input_grad.topRows(e));
  const BackwardResult b2 = embedder_.backward(c2, bh.input_grad.bottomRows(e));
  r.grad.resize(parameter_count());
  r.grad << b1.grad + b2.grad, bh.grad;
  return r;
}

Eigen::Index PrecedenceModel::parameter_count() const {
  return embedder_.parameter_count() + head_.parameter_count();
}

Eigen::VectorXd PrecedenceModel::params() const {
  Eigen::VectorXd p(parameter_count());
  p << embedder_.params(), head_.params();
  return p;
}

void PrecedenceModel::set_params(const Eigen::VectorXd& p) {
  if (p.size() != parameter_count()) throw std::invalid_argument("set_params: size");
  embedder_.mutable_params() = p.head(embedder_.parameter_count());
  head_.mutable_params() = p.tail(head_.parameter_count());
}

void save_precedence_model(std::ostream& out, const PrecedenceModel& m) {
  save_dense_net(out, m.embedder());
  save_dense_net(out, m.head());
}

PrecedenceModel load_precedence_model(std::istream& in) {
  DenseNet e = load_dense_net(in);
  DenseNet h = load_dense_net(in);
  return PrecedenceModel(std::move(e), std::move(h));
}

}  // namespace revrl
