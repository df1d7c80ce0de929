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

#ifndef REVRL_NN_DENSE_NET_H_
#define REVRL_NN_DENSE_NET_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "revrl/core/rng.h"

namespace revrl {

enum class Activation { kIdentity, kRelu, kSigmoid, kTanh };

std::string activation_name(Activation a);
Activation parse_activation(const std::string& name);

struct LayerSpec {
  int in = 0;
  int out = 0;
  Activation act = Activation::kIdentity;
};

// Activations of one forward pass, kept for the backward pass. Column j of
// every matrix belongs to sample j of the batch.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;  // input of layer i
  std::vector<Eigen::MatrixXd> pre;     // pre-activation of layer i
  Eigen::MatrixXd output;
  std::uint64_t version = 0;
};

struct BackwardResult {
  Eigen::VectorXd grad;        // same layout as DenseNet::params()
  Eigen::MatrixXd input_grad;  // empty unless requested
};

// Stack of affine layers, each followed by an elementwise activation.
//
// All parameters live in one flat vector: for each layer, the weight matrix
// (out x in, column-major) followed by the bias. A net with no layers is the
// identity map on its input size.
class DenseNet {
 public:
  DenseNet() = default;
  explicit DenseNet(int input_size);
  explicit DenseNet(std::vector<LayerSpec> layers);

  // sizes = {in, h1, ..., out}; acts has sizes.size() - 1 entries. Weights
  // are uniform with fan-in scaling (He bound for relu layers), biases zero;
  // the last layer's weights are multiplied by last_layer_scale.
  static DenseNet create(const std::vector<int>& sizes,
                         const std::vector<Activation>& acts, Rng& rng,
                         double last_layer_scale = 1.0);

  int input_size() const { return input_size_; }
  int output_size() const;
  std::size_t layer_count() const { return layers_.size(); }
  const LayerSpec& layer(std::size_t i) const { return layers_[i]; }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  Eigen::Index parameter_count() const { return params_.size(); }

  const Eigen::VectorXd& params() const { return params_; }
  // Any write access invalidates outstanding forward caches.
  Eigen::VectorXd& mutable_params();
  std::uint64_t version() const { return version_; }

  Eigen::Map<const Eigen::MatrixXd> weight(std::size_t i) const;
  Eigen::Map<const Eigen::VectorXd> bias(std::size_t i) const;
  // Positions of layer i's weight block and bias inside params().
  Eigen::Index weight_offset(std::size_t i) const { return offsets_.at(i); }
  Eigen::Index bias_offset(std::size_t i) const {
    return offsets_.at(i) + static_cast<Eigen::Index>(layers_[i].in) * layers_[i].out;
  }

  // Batched pass over the columns of `input`.
  ForwardCache forward(const Eigen::MatrixXd& input) const;
  Eigen::MatrixXd predict(const Eigen::MatrixXd& input) const;
  Eigen::VectorXd predict_one(const Eigen::VectorXd& input) const;

  // Reverse-mode gradients of sum_j <output_grad[:, j], output[:, j]>.
  // Throws std::logic_error if `cache` does not come from this parameter
  // state, std::invalid_argument on shape mismatch.
  BackwardResult backward(const ForwardCache& cache,
                          const Eigen::MatrixXd& output_grad,
                          bool want_input_grad = false) const;

  bool all_finite() const { return params_.allFinite(); }

 private:
  void layout();

  int input_size_ = 0;
  std::vector<LayerSpec> layers_;
  std::vector<Eigen::Index> offsets_;
  Eigen::VectorXd params_;
  std::uint64_t version_ = 0;
};

}  // namespace revrl

#endif  // REVRL_NN_DENSE_NET_H_
