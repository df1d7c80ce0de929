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

#ifndef REVRL_NN_CHECKPOINT_H_
#define REVRL_NN_CHECKPOINT_H_

#include <iosfwd>
#include <string>

#include "revrl/nn/dense_net.h"

namespace revrl {

// Text header describing the layer stack, then the flat parameter vector as
// little-endian IEEE-754 doubles.
void save_dense_net(std::ostream& out, const DenseNet& net);
DenseNet load_dense_net(std::istream& in);

void save_dense_net(const std::string& path, const DenseNet& net);
DenseNet load_dense_net(const std::string& path);

}  // namespace revrl

#endif  // REVRL_NN_CHECKPOINT_H_
