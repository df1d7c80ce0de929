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

#include "revrl/nn/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace revrl {

double finite_difference_error(
    const std::function<double(const Eigen::VectorXd&)>& loss,
    const Eigen::VectorXd& theta, const Eigen::VectorXd& analytic,
    const std::vector<Eigen::Index>& coords, double h, long* skipped) {
  double diff2 = 0.0, a2 = 0.0, f2 = 0.0;
  Eigen::VectorXd probe = theta;
  for (Eigen::Index i : coords) {
    auto at = [&](double delta) {
      probe[i] = theta[i] + delta;
      double v = loss(probe);
      probe[i] = theta[i];
      return v;
    };
    const double fd = (at(h) - at(-h)) / (2 * h);
    const double fd2 = (at(2 * h) - at(-2 * h)) / (4 * h);
    const double scale = std::max({std::abs(fd), std::abs(fd2), 1e-6});
    if (std::abs(fd - fd2) > 1e-4 * scale) {
      if (skipped) ++*skipped;
      continue;
    }
    diff2 += (analytic[i] - fd) * (analytic[i] - fd);
    a2 += analytic[i] * analytic[i];
    f2 += fd * fd;
  }
  const double denom = std::sqrt(a2) + std::sqrt(f2);
  return denom > 1e-12 ? std::sqrt(diff2) / denom : std::sqrt(diff2);
}

std::vector<Eigen::Index> sample_coords(Eigen::Index n, Eigen::Index max_coords,
                                        Rng& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (n <= max_coords) return idx;
  for (Eigen::Index k = 0; k < max_coords; ++k) {
    const auto j = k + static_cast<Eigen::Index>(rng.uniform_int(n - k));
    std::swap(idx[k], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(max_coords));
  return idx;
}

GradCheckResult gradient_check(const std::vector<LayerSpec>& layers, int draws,
                               Rng& rng, Eigen::Index max_coords, double h) {
  GradCheckResult out;
  std::vector<int> sizes{layers.front().in};
  std::vector<Activation> acts;
  for (const LayerSpec& l : layers) {
    sizes.push_back(l.out);
    acts.push_back(l.act);
  }
  const int batch = 2;
  for (int d = 0; d < draws; ++d) {
    DenseNet net = DenseNet::create(sizes, acts, rng);
    // Random biases too, so the check does not depend on the zero init.
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
      const LayerSpec& l = net.layer(k);
      const Eigen::Index off = net.bias_offset(k);
      for (int j = 0; j < l.out; ++j) net.mutable_params()[off + j] = rng.uniform(-0.5, 0.5);
    }
    Eigen::MatrixXd x(net.input_size(), batch);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
    Eigen::MatrixXd c(net.output_size(), batch);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = rng.uniform(-1, 1);

    const BackwardResult br = net.backward(net.forward(x), c, true);

    DenseNet probe_net = net;
    auto param_loss = [&](const Eigen::VectorXd& theta) {
      probe_net.mutable_params() = theta;
      return (probe_net.predict(x).array() * c.array()).sum();
    };
    std::vector<Eigen::Index> coords = sample_coords(net.parameter_count(), max_coords, rng);
    double err = finite_difference_error(param_loss, net.params(), br.grad, coords, h,
                                         &out.coords_skipped);

    const Eigen::VectorXd x_flat = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    const Eigen::VectorXd gx_flat =
        Eigen::Map<const Eigen::VectorXd>(br.input_grad.data(), br.input_grad.size());
    auto input_loss = [&](const Eigen::VectorXd& xv) {
      Eigen::Map<const Eigen::MatrixXd> xm(xv.data(), x.rows(), x.cols());
      return (net.predict(Eigen::MatrixXd(xm)).array() * c.array()).sum();
    };
    std::vector<Eigen::Index> xcoords = sample_coords(x.size(), max_coords, rng);
    err = std::max(err, finite_difference_error(input_loss, x_flat, gx_flat, xcoords, h,
                                                &out.coords_skipped));
    out.coords_checked += static_cast<long>(coords.size() + xcoords.size());
    out.max_rel_error = std::max(out.max_rel_error, err);
    ++out.draws;
  }
  return out;
}

}  // namespace revrl
