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

#include "synrdp/distortion.hpp"

#include <cmath>
#include <string>

#include "synrdp/error.hpp"

namespace synrdp {

DistortionMatrix::DistortionMatrix(Matrix delta) : delta_(std::move(delta)) {
  if (delta_.empty() || delta_[0].empty()) {
    throw ValidationError("distortion: matrix must be non-empty");
  }
  const std::size_t cols = delta_[0].size();
  for (std::size_t x = 0; x < delta_.size(); ++x) {
    if (delta_[x].size() != cols) throw ValidationError("distortion: ragged rows");
    for (std::size_t y = 0; y < cols; ++y) {
      if (!(delta_[x][y] >= 0.0) || !std::isfinite(delta_[x][y])) {
        throw ValidationError("distortion: entry (" + std::to_string(x) + "," +
                              std::to_string(y) + ") is negative or not finite");
      }
    }
  }
  if (delta_.size() == cols) {
    for (std::size_t x = 0; x < delta_.size(); ++x) {
      if (delta_[x][x] != 0.0) {
        throw ValidationError("distortion: diagonal entry " + std::to_string(x) +
                              " must be zero for square alphabets");
      }
    }
  }
}

DistortionMatrix DistortionMatrix::hamming(std::size_t n) {
  Matrix delta(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) delta[i][i] = 0.0;
  return DistortionMatrix(std::move(delta));
}

}  // namespace synrdp
