// Copyright (c) the synrdp project authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYNRDP_DISTORTION_HPP_
#define SYNRDP_DISTORTION_HPP_

#include <cstddef>

#include "synrdp/distribution.hpp"

namespace synrdp {

// Non-negative per-pair distortion Delta(x, xhat). For square alphabets the
// diagonal must be zero (reference-measure convention: Delta = 0 iff x = xhat).
class DistortionMatrix {
 public:
  explicit DistortionMatrix(Matrix delta);

  std::size_t source_size() const { return delta_.size(); }
  std::size_t recon_size() const { return delta_[0].size(); }
  double at(std::size_t x, std::size_t xhat) const { return delta_[x][xhat]; }
  const Matrix& delta() const { return delta_; }

  static DistortionMatrix hamming(std::size_t n);

 private:
  Matrix delta_;
};

}  // namespace synrdp

#endif  // SYNRDP_DISTORTION_HPP_
