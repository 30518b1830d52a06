// Copyright 2026 The hymera Authors
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

#ifndef HYMERA_PERFECT_H
#define HYMERA_PERFECT_H

#include <string>
#include <vector>

#include "hymera/tensor.h"

namespace hymera {

struct BipartitionDefect {
    /// The smaller side; the map runs from these legs to the rest.
    std::vector<std::string> legs;
    /// ||M^dagger M - c I||_max / c, +inf when c vanishes.
    double defect = 0.0;
    double constant = 0.0;
};

struct PerfectCheckResult {
    std::string id;
    std::vector<BipartitionDefect> bipartitions;
    bool is_perfect = false;
};

/// Every bipartition with |A| <= |A^c| (balanced ones counted once) must be
/// proportional to an isometry from A to A^c. Throws TensorError for odd rank.
PerfectCheckResult perfect_check(const Tensor &t, double tol = 1e-10, const std::string &id = "");

/// T_{ijkl} = 1 iff k = i + j and l = i + 2j (mod 3).
Tensor ame_4_3();

/// O' = T O T^dagger with T read as a map from in_legs to the remaining legs.
/// Throws TensorError unless T^dagger T = I within tol, or if O has the wrong
/// size.
MatrixView push_operator(const MatrixView &op, const Tensor &t, const std::vector<std::string> &in_legs,
                         double tol = 1e-8);

}  // namespace hymera

#endif
