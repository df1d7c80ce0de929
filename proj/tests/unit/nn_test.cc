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

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "revrl/core/rng.h"
#include "revrl/nn/adam.h"
#include "revrl/nn/checkpoint.h"
#include "revrl/nn/dense_net.h"
#include "revrl/nn/gradcheck.h"

using namespace revrl;

TEST_CASE("zero net with sigmoid head outputs one half") {
  DenseNet net({{3, 4, Activation::kRelu}, {4, 1, Activation::kSigmoid}});
  Eigen::VectorXd x(3);
  x << 5, -2, 7;
  CHECK(net.predict_one(x)[0] == 0.5);
}

TEST_CASE("empty net is the identity") {
  DenseNet net(3);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 5);
  CHECK(net.predict(x) == x);
  CHECK(net.parameter_count() == 0);
  ForwardCache c = net.forward(x);
  Eigen::MatrixXd g = Eigen::MatrixXd::Ones(3, 5);
  CHECK(net.backward(c, g, true).input_grad == g);
}

TEST_CASE("identity layer with unit weights passes input through") {
  DenseNet net({{2, 2, Activation::kIdentity}});
  Eigen::VectorXd& p = net.mutable_params();
  p << 1, 0, 0, 1, 0, 0;
  Eigen::VectorXd x(2);
  x << 3, -4;
  CHECK(net.predict_one(x) == x);
}

TEST_CASE("relu layer with identity weights") {
  DenseNet net({{2, 2, Activation::kRelu}});
  net.mutable_params() << 1, 0, 0, 1, 0, 0;
  Eigen::VectorXd x(2);
  x << -1, 2;
  Eigen::VectorXd y = net.predict_one(x);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 2.0);
}

TEST_CASE("dimension mismatch throws") {
  DenseNet net({{2, 1, Activation::kIdentity}});
  CHECK_THROWS_AS(net.predict_one(Eigen::VectorXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(net.forward(Eigen::MatrixXd::Zero(3, 1)), std::invalid_argument);
  CHECK_THROWS(DenseNet({{2, 3, Activation::kRelu}, {4, 1, Activation::kIdentity}}));
}

TEST_CASE("scalar linear gradient") {
  DenseNet net({{1, 1, Activation::kIdentity}});
  net.mutable_params() << 2.0, 0.0;
  Eigen::MatrixXd x(1, 1);
  x << 3.0;
  ForwardCache c = net.forward(x);
  BackwardResult r = net.backward(c, Eigen::MatrixXd::Ones(1, 1));
  CHECK(r.grad[0] == 3.0);
  CHECK(r.grad[1] == 1.0);
}

TEST_CASE("zero output gradient gives zero parameter gradient") {
  Rng rng(1);
  DenseNet net = DenseNet::create({4, 8, 2}, {Activation::kRelu, Activation::kTanh}, rng);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 3);
  ForwardCache c = net.forward(x);
  BackwardResult r = net.backward(c, Eigen::MatrixXd::Zero(2, 3));
  CHECK(r.grad.isZero(0.0));
}

TEST_CASE("stale cache is rejected") {
  Rng rng(1);
  DenseNet net = DenseNet::create({2, 2}, {Activation::kIdentity}, rng);
  ForwardCache c = net.forward(Eigen::MatrixXd::Ones(2, 1));
  net.mutable_params()[0] += 1.0;
  CHECK_THROWS_AS(net.backward(c, Eigen::MatrixXd::Ones(2, 1)), std::logic_error);
}

TEST_CASE("forward is bitwise deterministic") {
  Rng rng(2);
  DenseNet net = DenseNet::create({5, 16, 16, 3},
                                  {Activation::kRelu, Activation::kRelu, Activation::kSigmoid}, rng);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 7);
  Eigen::MatrixXd a = net.predict(x);
  Eigen::MatrixXd b = net.forward(x).output;
  CHECK(a == b);
  CHECK(net.predict_one(Eigen::VectorXd(x.col(2))) == Eigen::VectorXd(a.col(2)));
}

TEST_CASE("random two-layer net matches finite differences") {
  Rng rng(5);
  for (Activation head : {Activation::kIdentity, Activation::kSigmoid, Activation::kTanh}) {
    GradCheckResult r = gradient_check({{6, 10, Activation::kRelu}, {10, 3, head}}, 100, rng);
    CHECK(r.max_rel_error < 1e-4);
    CHECK(r.draws == 100);
  }
}

TEST_CASE("input gradient matches finite differences") {
  Rng rng(6);
  DenseNet net = DenseNet::create({3, 5, 1}, {Activation::kTanh, Activation::kSigmoid}, rng);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 1);
  BackwardResult r = net.backward(net.forward(x), Eigen::MatrixXd::Ones(1, 1), true);
  for (int i = 0; i < 3; ++i) {
    Eigen::MatrixXd xp = x, xm = x;
    xp(i, 0) += 1e-5;
    xm(i, 0) -= 1e-5;
    double fd = (net.predict(xp)(0, 0) - net.predict(xm)(0, 0)) / 2e-5;
    CHECK(r.input_grad(i, 0) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("first Adam step moves by lr times sign") {
  // m1 = (1-b1) g, v1 = (1-b2) g^2; bias correction gives m/v^0.5 = g/|g|,
  // so the step is lr * g / (|g| + eps).
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  AdamState st(3, cfg);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd g(3);
  g << 0.5, -2.0, 1e-3;
  adam_step(st, p, g);
  for (int i = 0; i < 3; ++i) {
    double expected = -0.01 * g[i] / (std::abs(g[i]) + 1e-8);
    CHECK(p[i] == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(st.step == 1);
}

TEST_CASE("zero gradient leaves parameters unchanged") {
  AdamState st(2, AdamConfig{});
  Eigen::VectorXd p(2);
  p << 1.5, -3;
  Eigen::VectorXd before = p;
  adam_step(st, p, Eigen::VectorXd::Zero(2));
  CHECK(p == before);
}

TEST_CASE("Adam on w squared shrinks w") {
  // A scalar run of the textbook recursion ends at w = 0.0155724853.
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  AdamState st(1, cfg);
  Eigen::VectorXd w(1);
  w << 1.0;
  for (int i = 0; i < 200; ++i) adam_step(st, w, 2.0 * w);
  CHECK(std::abs(w[0]) < 0.5);
  CHECK(w[0] == doctest::Approx(0.015572485317246587).epsilon(1e-9));
}

TEST_CASE("Adam rejects non-finite gradients and shape mismatch") {
  AdamState st(2, AdamConfig{});
  Eigen::VectorXd p = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd g(2);
  g << 1, std::nan("");
  CHECK_THROWS_AS(adam_step(st, p, g), std::runtime_error);
  CHECK_THROWS_AS(adam_step(st, p, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("Adam weight decay acts as L2 term") {
  AdamConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.weight_decay = 1e-4;
  AdamState st(1, cfg);
  Eigen::VectorXd p(1);
  p << 2.0;
  adam_step(st, p, Eigen::VectorXd::Zero(1));
  CHECK(p[0] == doctest::Approx(2.0 - 0.1 * 2e-4 / (2e-4 + 1e-8)).epsilon(1e-12));
}

TEST_CASE("gradient clipping") {
  Eigen::VectorXd g(2);
  g << 3, 4;
  CHECK(clip_grad_norm(g, 1.0) == 5.0);
  CHECK(g.norm() == doctest::Approx(1.0));
}

TEST_CASE("checkpoint round trip") {
  Rng rng(8);
  DenseNet net = DenseNet::create({4, 6, 2}, {Activation::kRelu, Activation::kSigmoid}, rng);
  std::stringstream buf;
  save_dense_net(buf, net);
  DenseNet back = load_dense_net(buf);
  CHECK(back.params() == net.params());
  CHECK(back.layer_count() == 2);
  CHECK(back.layer(1).act == Activation::kSigmoid);
  std::string text = buf.str();
  CHECK(text.rfind("revrl-dense-net 1\n", 0) == 0);
  std::stringstream truncated(text.substr(0, text.size() - 3));
  CHECK_THROWS(load_dense_net(truncated));
  std::stringstream empty_net;
  save_dense_net(empty_net, DenseNet(5));
  CHECK(load_dense_net(empty_net).input_size() == 5);
}

TEST_CASE("initialization bounds") {
  Rng rng(9);
  DenseNet net = DenseNet::create({64, 64, 1}, {Activation::kRelu, Activation::kIdentity}, rng, 0.01);
  CHECK(net.weight(0).cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 64));
  CHECK(net.weight(1).cwiseAbs().maxCoeff() <= 0.01 * std::sqrt(3.0 / 64));
  CHECK(net.bias(0).isZero(0.0));
}
