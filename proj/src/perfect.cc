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

#include "hymera/perfect.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

namespace hymera {

PerfectCheckResult perfect_check(const Tensor &t, double tol, const std::string &id) {
    const std::size_t n = t.rank();
    if (n == 0 || n % 2 != 0) throw TensorError("perfect-check needs an even, non-zero number of legs");
    if (n > 20) throw TensorError("perfect-check supports at most 20 legs");
    PerfectCheckResult r;
    r.id = id;
    r.is_perfect = true;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const auto k = static_cast<std::size_t>(std::popcount(mask));
        if (k > n / 2) continue;
        // Balanced cuts appear twice; keep the side holding the first leg.
        if (k == n / 2 && !(mask & 1u)) continue;
        std::vector<std::string> a, rest;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? a : rest).push_back(t.legs()[i]);
        const MatrixView m = matricize(t, rest, a);
        auto [gram, c] = gram_identity_fit(m);
        BipartitionDefect b;
        b.legs = a;
        b.constant = c;
        b.defect = c > 0.0 ? gram / c : std::numeric_limits<double>::infinity();
        if (!(b.defect <= tol)) r.is_perfect = false;
        r.bipartitions.push_back(std::move(b));
    }
    return r;
}

Tensor ame_4_3() {
    std::vector<cplx> d(81, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            const std::size_t k = (i + j) % 3, l = (i + 2 * j) % 3;
            d[((i * 3 + j) * 3 + k) * 3 + l] = 1.0;
        }
    }
    return Tensor({3, 3, 3, 3}, {"i", "j", "k", "l"}, std::move(d));
}

MatrixView push_operator(const MatrixView &op, const Tensor &t, const std::vector<std::string> &in_legs, double tol) {
    if (in_legs.empty() || in_legs.size() >= t.rank()) throw TensorError("push needs a proper, non-empty set of in legs");
    std::vector<std::string> out;
    for (const auto &l : t.legs()) {
        if (std::find(in_legs.begin(), in_legs.end(), l) == in_legs.end()) out.push_back(l);
    }
    const MatrixView m = matricize(t, out, in_legs);
    if (op.rows != m.cols || op.cols != m.cols) {
        throw TensorError("operator is " + std::to_string(op.rows) + "x" + std::to_string(op.cols) +
                          " but the in legs span dimension " + std::to_string(m.cols));
    }
    const MatrixView gram = matmul(adjoint(m), m);
    double defect = 0.0;
    for (std::size_t i = 0; i < gram.rows; ++i) {
        for (std::size_t j = 0; j < gram.cols; ++j) defect = std::max(defect, std::abs(gram(i, j) - cplx(i == j ? 1.0 : 0.0)));
    }
    if (defect > tol) throw TensorError("tensor is not an isometry on the given legs (defect " + std::to_string(defect) + ")");
    return matmul(matmul(m, op), adjoint(m));
}

}  // namespace hymera
