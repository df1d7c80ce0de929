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

#include "revrl/nn/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "revrl/core/io.h"

namespace revrl {

namespace {

constexpr const char* kMagic = "revrl-dense-net";
constexpr int kFormatVersion = 1;

void put_le(std::ostream& out, double d) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

double get_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw std::runtime_error("checkpoint: truncated parameter block");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint: truncated header");
  return line;
}

}  // namespace

void save_dense_net(std::ostream& out, const DenseNet& net) {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "input " << net.input_size() << '\n';
  out << "layers " << net.layer_count() << '\n';
  for (const LayerSpec& l : net.layers()) {
    out << l.in << ' ' << l.out << ' ' << activation_name(l.act) << '\n';
  }
  out << "params " << net.parameter_count() << '\n';
  for (Eigen::Index i = 0; i < net.parameter_count(); ++i) put_le(out, net.params()[i]);
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

DenseNet load_dense_net(std::istream& in) {
  std::istringstream magic(next_line(in));
  std::string word;
  int version = 0;
  magic >> word >> version;
  if (word != kMagic || version != kFormatVersion) {
    throw std::runtime_error("checkpoint: bad magic or version");
  }
  int input = 0;
  std::size_t n_layers = 0;
  {
    std::istringstream s(next_line(in));
    s >> word >> input;
    if (word != "input" || input <= 0) throw std::runtime_error("checkpoint: bad input line");
  }
  {
    std::istringstream s(next_line(in));
    s >> word >> n_layers;
    if (word != "layers") throw std::runtime_error("checkpoint: bad layers line");
  }
  std::vector<LayerSpec> specs;
  for (std::size_t i = 0; i < n_layers; ++i) {
    std::istringstream s(next_line(in));
    LayerSpec l;
    std::string act;
    s >> l.in >> l.out >> act;
    if (!s) throw std::runtime_error("checkpoint: bad layer line");
    l.act = parse_activation(act);
    specs.push_back(l);
  }
  DenseNet net = specs.empty() ? DenseNet(input) : DenseNet(std::move(specs));
  Eigen::Index n_params = 0;
  {
    std::istringstream s(next_line(in));
    s >> word >> n_params;
    if (word != "params" || n_params != net.parameter_count()) {
      throw std::runtime_error("checkpoint: parameter count mismatch");
    }
  }
  Eigen::VectorXd& p = net.mutable_params();
  for (Eigen::Index i = 0; i < n_params; ++i) p[i] = get_le(in);
  if (!net.all_finite()) throw std::runtime_error("checkpoint: non-finite parameters");
  return net;
}

void save_dense_net(const std::string& path, const DenseNet& net) {
  std::ostringstream buf(std::ios::binary);
  save_dense_net(buf, net);
  write_file_atomic(path, buf.str());
}

DenseNet load_dense_net(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  return load_dense_net(in);
}

}  // namespace revrl
