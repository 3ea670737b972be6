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

#pragma once

#include <cstdint>
#include <span>

#include "tinyasr/matrix.hpp"

namespace tinyasr {

/// Rotates each pair (v[2i], v[2i+1]) by position * base^(-2i/len(v)).
/// len(v) must be even.
void rotate_pairs(std::span<float> v, double position, double base);

/// Rotary embedding over a positions x head_dim matrix; row r is treated as
/// position start_pos + r. Throws ModelError(kInvalidArgument) for odd head_dim.
Matrix apply_rope(const Matrix& x, std::int64_t start_pos, double base);

}  // namespace tinyasr
