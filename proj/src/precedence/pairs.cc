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

#include "revrl/precedence/pairs.h"

#include <algorithm>
#include <stdexcept>

namespace revrl {

namespace {

std::size_t usable_length(const Trajectory& traj, bool use_final_obs) {
  return use_final_obs ? traj.observation_count() : traj.size();
}

}  // namespace

std::uint64_t admissible_pair_count(std::size_t length, int w) {
  if (length < 2 || w < 1) return 0;
  const std::uint64_t L = length;
  const std::uint64_t g = std::min<std::uint64_t>(static_cast<std::uint64_t>(w), L - 1);
  return g * L - g * (g + 1) / 2;
}

PrecedencePair sample_pair(const Trajectory& traj, int w, Rng& rng, bool use_final_obs) {
  if (w < 1) throw std::invalid_argument("sample_pair: window must be >= 1");
  const std::size_t L = usable_length(traj, use_final_obs);
  const std::uint64_t total = admissible_pair_count(L, w);
  if (total == 0) throw std::invalid_argument("sample_pair: trajectory shorter than 2");
  // Pairs are ordered by gap; gap g contributes L - g pairs.
  std::uint64_t k = rng.uniform_int(total);
  std::size_t gap = 1;
  while (k >= L - gap) {
    k -= L - gap;
    ++gap;
  }
  PrecedencePair p;
  p.t = static_cast<std::size_t>(k);
  p.gap = static_cast<int>(gap);
  const Observation* a = &traj.observation(p.t);
  const Observation* b = &traj.observation(p.t + gap);
  if (rng.bernoulli(0.5)) {
    p.first = a;
    p.second = b;
    p.label = 1;
  } else {
    p.first = b;
    p.second = a;
    p.label = 0;
  }
  return p;
}

PairSampler::PairSampler(int window, bool use_final_obs)
    : window_(window), use_final_obs_(use_final_obs) {
  if (window < 1) throw std::invalid_argument("PairSampler: window must be >= 1");
}

void PairSampler::refresh(const ReplayBuffer& buffer) {
  if (cached_buffer_ == &buffer && cached_version_ == buffer.version()) return;
  prefix_.resize(buffer.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    acc += admissible_pair_count(usable_length(buffer[i], use_final_obs_), window_);
    prefix_[i] = acc;
  }
  cached_buffer_ = &buffer;
  cached_version_ = buffer.version();
}

PairBatch PairSampler::sample(const ReplayBuffer& buffer, int batch_size, Rng& rng) {
  if (batch_size < 1) throw std::invalid_argument("PairSampler: batch size");
  refresh(buffer);
  if (prefix_.empty() || prefix_.back() == 0) {
    throw std::invalid_argument("PairSampler: buffer has no trajectory of length >= 2");
  }
  const int dim = static_cast<int>(buffer[0].steps.front().obs.size());
  PairBatch out;
  out.first.resize(dim, batch_size);
  out.second.resize(dim, batch_size);
  out.labels.resize(batch_size);
  for (int j = 0; j < batch_size; ++j) {
    const std::uint64_t k = rng.uniform_int(prefix_.back());
    const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), k);
    const Trajectory& traj = buffer[static_cast<std::size_t>(it - prefix_.begin())];
    const PrecedencePair p = sample_pair(traj, window_, rng, use_final_obs_);
    if (static_cast<int>(p.first->size()) != dim) {
      throw std::invalid_argument("PairSampler: inconsistent observation sizes");
    }
    out.first.col(j) = Eigen::Map<const Eigen::VectorXd>(p.first->data(), dim);
    out.second.col(j) = Eigen::Map<const Eigen::VectorXd>(p.second->data(), dim);
    out.labels[j] = p.label;
  }
  return out;
}

}  // namespace revrl
