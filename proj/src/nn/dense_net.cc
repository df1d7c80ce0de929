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

#include "revrl/nn/dense_net.h"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace revrl {

namespace {

std::uint64_t next_version() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

void activate(Activation act, Eigen::MatrixXd& m) {
  switch (act) {
    case Activation::kIdentity: break;
    case Activation::kRelu: m = m.cwiseMax(0.0); break;
    case Activation::kSigmoid:
      m = m.unaryExpr([](double z) {
        return z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                      : std::exp(z) / (1.0 + std::exp(z));
      });
      break;
    case Activation::kTanh: m = m.array().tanh().matrix(); break;
  }
}

}  // namespace

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
  }
  return "identity";
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "tanh") return Activation::kTanh;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

DenseNet::DenseNet(int input_size)
    : input_size_(input_size), version_(next_version()) {
  if (input_size <= 0) throw std::invalid_argument("DenseNet: input size");
}

DenseNet::DenseNet(std::vector<LayerSpec> layers)
    : layers_(std::move(layers)), version_(next_version()) {
  if (layers_.empty()) throw std::invalid_argument("DenseNet: no layers");
  input_size_ = layers_.front().in;
  layout();
}

void DenseNet::layout() {
  Eigen::Index total = 0;
  offsets_.clear();
  int prev = input_size_;
  for (const LayerSpec& l : layers_) {
    if (l.in != prev || l.in <= 0 || l.out <= 0) {
      throw std::invalid_argument("DenseNet: layer sizes do not chain");
    }
    offsets_.push_back(total);
    total += static_cast<Eigen::Index>(l.in) * l.out + l.out;
    prev = l.out;
  }
  params_ = Eigen::VectorXd::Zero(total);
}

DenseNet DenseNet::create(const std::vector<int>& sizes,
                          const std::vector<Activation>& acts, Rng& rng,
                          double last_layer_scale) {
  if (sizes.size() < 2 || acts.size() + 1 != sizes.size()) {
    throw std::invalid_argument("DenseNet::create: sizes/activations");
  }
  std::vector<LayerSpec> specs;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    specs.push_back({sizes[i], sizes[i + 1], acts[i]});
  }
  DenseNet net(std::move(specs));
  for (std::size_t i = 0; i < net.layers_.size(); ++i) {
    const LayerSpec& l = net.layers_[i];
    const double gain = l.act == Activation::kRelu ? std::sqrt(6.0)
                                                   : std::sqrt(3.0);
    double bound = gain / std::sqrt(static_cast<double>(l.in));
    if (i + 1 == net.layers_.size()) bound *= last_layer_scale;
    const Eigen::Index n = static_cast<Eigen::Index>(l.in) * l.out;
    for (Eigen::Index k = 0; k < n; ++k) {
      net.params_[net.offsets_[i] + k] = rng.uniform(-bound, bound);
    }
  }
  return net;
}

int DenseNet::output_size() const {
  return layers_.empty() ? input_size_ : layers_.back().out;
}

Eigen::VectorXd& DenseNet::mutable_params() {
  version_ = next_version();
  return params_;
}

Eigen::Map<const Eigen::MatrixXd> DenseNet::weight(std::size_t i) const {
  const LayerSpec& l = layers_.at(i);
  return {params_.data() + offsets_[i], l.out, l.in};
}

Eigen::Map<const Eigen::VectorXd> DenseNet::bias(std::size_t i) const {
  const LayerSpec& l = layers_.at(i);
  return {params_.data() + offsets_[i] + static_cast<Eigen::Index>(l.in) * l.out,
          l.out};
}

ForwardCache DenseNet::forward(const Eigen::MatrixXd& input) const {
  if (input.rows() != input_size_) {
    throw std::invalid_argument("DenseNet::forward: input has " +
                                std::to_string(input.rows()) +
                                " rows, expected " +
                                std::to_string(input_size_));
  }
  ForwardCache cache;
  cache.version = version_;
  cache.inputs.reserve(layers_.size());
  cache.pre.reserve(layers_.size());
  Eigen::MatrixXd a = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = weight(i) * a;
    z.colwise() += bias(i);
    cache.inputs.push_back(std::move(a));
    a = z;
    activate(layers_[i].act, a);
    cache.pre.push_back(std::move(z));
  }
  cache.output = std::move(a);
  return cache;
}

Eigen::MatrixXd DenseNet::predict(const Eigen::MatrixXd& input) const {
  if (input.rows() != input_size_) {
    throw std::invalid_argument("DenseNet::predict: input size mismatch");
  }
  Eigen::MatrixXd a = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = weight(i) * a;
    z.colwise() += bias(i);
    activate(layers_[i].act, z);
    a = std::move(z);
  }
  return a;
}

Eigen::VectorXd DenseNet::predict_one(const Eigen::VectorXd& input) const {
  if (input.size() != input_size_) {
    throw std::invalid_argument("DenseNet::predict: input size mismatch");
  }
  Eigen::VectorXd a = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::VectorXd z = weight(i) * a + bias(i);
    switch (layers_[i].act) {
      case Activation::kIdentity: break;
      case Activation::kRelu: z = z.cwiseMax(0.0); break;
      case Activation::kSigmoid: {
        Eigen::MatrixXd m = z;
        activate(Activation::kSigmoid, m);
        z = m;
        break;
      }
      case Activation::kTanh: z = z.array().tanh().matrix(); break;
    }
    a = std::move(z);
  }
  return a;
}

BackwardResult DenseNet::backward(const ForwardCache& cache,
                                  const Eigen::MatrixXd& output_grad,
                                  bool want_input_grad) const {
  if (cache.version != version_) {
    throw std::logic_error("DenseNet::backward: stale forward cache");
  }
  if (output_grad.rows() != cache.output.rows() ||
      output_grad.cols() != cache.output.cols()) {
    throw std::invalid_argument("DenseNet::backward: gradient shape");
  }
  BackwardResult out;
  out.grad = Eigen::VectorXd::Zero(params_.size());
  if (layers_.empty()) {
    if (want_input_grad) out.input_grad = output_grad;
    return out;
  }
  Eigen::MatrixXd delta = output_grad;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const LayerSpec& l = layers_[k];
    switch (l.act) {
      case Activation::kIdentity: break;
      case Activation::kRelu:
        delta = (cache.pre[k].array() > 0.0).select(delta, 0.0);
        break;
      case Activation::kSigmoid: {
        const Eigen::MatrixXd& y = k + 1 < layers_.size() ? cache.inputs[k + 1]
                                                          : cache.output;
        delta = delta.cwiseProduct((y.array() * (1.0 - y.array())).matrix());
        break;
      }
      case Activation::kTanh: {
        const Eigen::MatrixXd& y = k + 1 < layers_.size() ? cache.inputs[k + 1]
                                                          : cache.output;
        delta = delta.cwiseProduct((1.0 - y.array().square()).matrix());
        break;
      }
    }
    const Eigen::Index w_size = static_cast<Eigen::Index>(l.in) * l.out;
    Eigen::Map<Eigen::MatrixXd> dw(out.grad.data() + offsets_[k], l.out, l.in);
    Eigen::Map<Eigen::VectorXd> db(out.grad.data() + offsets_[k] + w_size,
                                   l.out);
    dw.noalias() = delta * cache.inputs[k].transpose();
    db = delta.rowwise().sum();
    if (k > 0 || want_input_grad) {
      Eigen::MatrixXd prev = weight(k).transpose() * delta;
      delta = std::move(prev);
    }
  }
  if (want_input_grad) out.input_grad = std::move(delta);
  return out;
}

}  // namespace revrl
