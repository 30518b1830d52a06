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

#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <random>

#include "hymera/constituents.h"
#include "hymera/io.h"

using namespace hymera;
using nlohmann::json;

namespace {

Tensor random_tensor(std::mt19937_64 &rng, std::vector<std::size_t> shape, std::vector<std::string> legs) {
    std::normal_distribution<double> g;
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    std::vector<cplx> d(n);
    for (auto &v : d) v = {g(rng), g(rng)};
    return Tensor(std::move(shape), std::move(legs), std::move(d));
}

// Brute force: for every leg pair and every singleton, sum_{rest} T T* must be
// c * delta on the chosen legs.
bool brute_force_perfect(const Tensor &t) {
    const std::size_t d = t.shape()[0];
    std::vector<std::vector<int>> cuts = {{0}, {1}, {2}, {3}, {0, 1}, {0, 2}, {0, 3}};
    for (const auto &cut : cuts) {
        const std::size_t k = cut.size();
        const std::size_t na = k == 1 ? d : d * d;
        std::vector<cplx> g(na * na, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t l = 0; l < d; ++l)
                    for (std::size_t m = 0; m < d; ++m) {
                        std::size_t idx[4] = {i, j, l, m};
                        for (std::size_t i2 = 0; i2 < d; ++i2)
                            for (std::size_t j2 = 0; j2 < d; ++j2) {
                                std::size_t idx2[4] = {i, j, l, m};
                                idx2[cut[0]] = i2;
                                if (k == 2) idx2[cut[1]] = j2;
                                else if (j2 != 0) continue;
                                std::size_t a = idx[cut[0]], b = idx2[cut[0]];
                                if (k == 2) {
                                    a = a * d + idx[cut[1]];
                                    b = b * d + idx2[cut[1]];
                                }
                                g[a * na + b] += t.at({idx2[0], idx2[1], idx2[2], idx2[3]}) *
                                                 std::conj(t.at({idx[0], idx[1], idx[2], idx[3]}));
                            }
                    }
        const cplx c = g[0];
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = 0; b < na; ++b)
                if (std::abs(g[a * na + b] - (a == b ? c : 0.0)) > 1e-12) return false;
    }
    return true;
}

}  // namespace

TEST(Perfect, AmeFourThree) {
    Tensor t = ame_4_3();
    auto r = perfect_check(t, 1e-10, "ame");
    EXPECT_TRUE(r.is_perfect);
    EXPECT_EQ(r.bipartitions.size(), 7u);
    EXPECT_TRUE(brute_force_perfect(t));
    for (const auto &b : r.bipartitions) EXPECT_DOUBLE_EQ(b.constant, b.legs.size() == 1 ? 3.0 : 1.0);
}

TEST(Perfect, ProductAndRandomFail) {
    std::vector<cplx> prod(16, 0.0);
    prod[0] = 1.0;
    Tensor p({2, 2, 2, 2}, {"a", "b", "c", "d"}, prod);
    EXPECT_FALSE(perfect_check(p).is_perfect);
    EXPECT_FALSE(brute_force_perfect(p));
    std::mt19937_64 rng(9);
    for (int k = 0; k < 20; ++k) {
        Tensor t = random_tensor(rng, {2, 2, 2, 2}, {"a", "b", "c", "d"});
        EXPECT_FALSE(perfect_check(t).is_perfect);
        EXPECT_FALSE(brute_force_perfect(t));
    }
}

TEST(Perfect, OddRankRejected) {
    EXPECT_THROW(perfect_check(Tensor::zeros({2, 2, 2}, {"a", "b", "c"})), TensorError);
}

TEST(Push, IdentityAndSpectrum) {
    ParameterSet p;
    p.set(1, 0.37);
    Tensor y = build_Y(p);
    auto id = identity_matrix(4);
    auto out = push_operator(id, y, {"c", "d"});
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(out(i, j) - cplx(i == j ? 1.0 : 0.0)), 0.0, 1e-12);

    // X on the first in-leg: involution with eigenvalues {1,1,-1,-1}.
    std::vector<cplx> x(16, 0.0);
    for (std::size_t i = 0; i < 4; ++i) x[i * 4 + (i ^ 2)] = 1.0;
    auto pushed = push_operator(MatrixView::from_rows(4, 4, x), y, {"c", "d"});
    auto ev = hermitian_eigenvalues(pushed, 1e-10);
    ASSERT_EQ(ev.size(), 4u);
    EXPECT_NEAR(ev[0], -1, 1e-10);
    EXPECT_NEAR(ev[1], -1, 1e-10);
    EXPECT_NEAR(ev[2], 1, 1e-10);
    EXPECT_NEAR(ev[3], 1, 1e-10);
    double fro = 0.0;
    for (auto v : pushed.data) fro += std::norm(v);
    EXPECT_NEAR(std::sqrt(fro), 2.0, 1e-8);
}

TEST(Push, RejectsNonIsometryAndBadSizes) {
    std::mt19937_64 rng(10);
    Tensor t = random_tensor(rng, {2, 2, 2, 2}, {"a", "b", "c", "d"});
    EXPECT_THROW(push_operator(identity_matrix(4), t, {"c", "d"}), TensorError);
    ParameterSet p;
    p.set(2, 0.2);
    EXPECT_THROW(push_operator(identity_matrix(2), build_R(p), {"c", "d"}), TensorError);
    EXPECT_THROW(push_operator(identity_matrix(4), build_R(p), {}), TensorError);
}

TEST(Io, TensorAndMatrixRoundTrip) {
    std::mt19937_64 rng(11);
    Tensor t = random_tensor(rng, {2, 3}, {"u", "v"});
    Tensor back = tensor_from_json(json::parse(tensor_to_json(t).dump()));
    EXPECT_EQ(back.legs(), t.legs());
    EXPECT_EQ(back.data(), t.data());
    auto m = MatrixView::from_rows(2, 2, {1.0, cplx(0, 2), 3.0, 4.0});
    EXPECT_EQ(matrix_from_json(matrix_to_json(m)).data, m.data);
    EXPECT_EQ(matrix_from_json(json::parse("[[1, [0, 2]], [3, 4]]")).data, m.data);
    EXPECT_THROW(matrix_from_json(json::parse("[[1, 2], [3]]")), IoError);
    EXPECT_THROW(tensor_from_json(json::parse(R"({"legs": ["a"], "shape": [2], "data": [1]})")), IoError);
}

TEST(Io, Params) {
    auto p = params_from_json(json::parse(R"({"theta1": 0.5, "theta7": -1})"));
    EXPECT_EQ(p.get(1), 0.5);
    EXPECT_EQ(p.get(7), -1.0);
    EXPECT_FALSE(p.has(2));
    EXPECT_EQ(params_to_json(p)["theta7"], -1.0);
    EXPECT_THROW(params_from_json(json::parse(R"({"theta10": 1})")), IoError);
    EXPECT_THROW(params_from_json(json::parse(R"({"phi": 1})")), IoError);
    EXPECT_THROW(params_from_json(json::parse(R"({"theta01": 1})")), IoError);
}
