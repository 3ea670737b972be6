// Copyright (c) 2026 The tinyasr Authors. All Rights Reserved.
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

#include "tinyasr/rope.hpp"

#include <cmath>

#include "tinyasr/model.hpp"

namespace tinyasr {

void rotate_pairs(std::span<float> v, double position, double base) {
  const double dim = static_cast<double>(v.size());
  for (std::size_t i = 0; 2 * i + 1 < v.size(); ++i) {
    const double theta = std::pow(base, -2.0 * static_cast<double>(i) / dim);
    const double angle = position * theta;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double x0 = v[2 * i];
    const double x1 = v[2 * i + 1];
    v[2 * i] = static_cast<float>(x0 * c - x1 * s);
    v[2 * i + 1] = static_cast<float>(x0 * s + x1 * c);
  }
}

Matrix apply_rope(const Matrix& x, std::int64_t start_pos, double base) {
  if (x.cols % 2 != 0) {
    throw ModelError(ModelErrc::kInvalidArgument,
                     "rotary embedding needs an even head dimension, got " +
                         std::to_string(x.cols));
  }
  Matrix out = x;
  for (std::int64_t r = 0; r < out.rows; ++r) {
    rotate_pairs(out.row(r), static_cast<double>(start_pos + r), base);
  }
  return out;
}

}  // namespace tinyasr
