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

#include "hymera/tensor.h"

#include <gtest/gtest.h>

#include <random>

using namespace hymera;

namespace {

Tensor random_tensor(std::mt19937_64 &rng, std::vector<std::size_t> shape, std::vector<std::string> legs) {
    std::normal_distribution<double> n;
    std::size_t size = 1;
    for (auto d : shape) size *= d;
    std::vector<cplx> data(size);
    for (auto &v : data) v = {n(rng), n(rng)};
    return Tensor(std::move(shape), std::move(legs), std::move(data));
}

std::vector<std::size_t> unflatten(std::size_t off, const std::vector<std::size_t> &shape) {
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t k = shape.size(); k-- > 0;) {
        idx[k] = off % shape[k];
        off /= shape[k];
    }
    return idx;
}

// Nested-loop contraction oracle over arbitrary pairings, all free legs
// enumerated by odometer.
Tensor naive_contract(const Tensor &x, const Tensor &y, const std::vector<std::pair<std::string, std::string>> &pairs) {
    std::vector<std::size_t> px, py, fx, fy;
    for (const auto &[a, b] : pairs) {
        px.push_back(x.leg_index(a));
        py.push_back(y.leg_index(b));
    }
    for (std::size_t k = 0; k < x.rank(); ++k)
        if (std::find(px.begin(), px.end(), k) == px.end()) fx.push_back(k);
    for (std::size_t k = 0; k < y.rank(); ++k)
        if (std::find(py.begin(), py.end(), k) == py.end()) fy.push_back(k);
    std::vector<std::size_t> out_shape, inner_shape;
    std::vector<std::string> out_legs;
    for (auto k : fx) {
        out_shape.push_back(x.shape()[k]);
        out_legs.push_back(x.legs()[k]);
    }
    for (auto k : fy) {
        out_shape.push_back(y.shape()[k]);
        out_legs.push_back(y.legs()[k]);
    }
    for (auto k : px) inner_shape.push_back(x.shape()[k]);
    std::size_t out_size = 1, inner_size = 1;
    for (auto d : out_shape) out_size *= d;
    for (auto d : inner_shape) inner_size *= d;
    std::vector<cplx> out(out_size);
    for (std::size_t o = 0; o < out_size; ++o) {
        auto oi = unflatten(o, out_shape);
        for (std::size_t i = 0; i < inner_size; ++i) {
            auto ii = unflatten(i, inner_shape);
            std::vector<std::size_t> xi(x.rank()), yi(y.rank());
            for (std::size_t k = 0; k < fx.size(); ++k) xi[fx[k]] = oi[k];
            for (std::size_t k = 0; k < fy.size(); ++k) yi[fy[k]] = oi[fx.size() + k];
            for (std::size_t k = 0; k < px.size(); ++k) {
                xi[px[k]] = ii[k];
                yi[py[k]] = ii[k];
            }
            out[o] += x.at(xi) * y.at(yi);
        }
    }
    return Tensor(out_shape, out_legs, out);
}

}  // namespace

TEST(Tensor, RejectsInconsistentConstruction) {
    EXPECT_THROW(Tensor({2, 2}, {"a"}, std::vector<cplx>(4)), TensorError);
    EXPECT_THROW(Tensor({2, 2}, {"a", "a"}, std::vector<cplx>(4)), TensorError);
    EXPECT_THROW(Tensor({2, 0}, {"a", "b"}, {}), TensorError);
    EXPECT_THROW(Tensor({2, 2}, {"a", "b"}, std::vector<cplx>(3)), TensorError);
}

TEST(Contract, IdentityComposition) {
    Tensor a = Tensor::identity(2, "u", "v");
    Tensor b = Tensor::identity(2, "v", "w");
    Tensor c = contract(a, b, {{"v", "v"}});
    ASSERT_EQ(c.legs(), (std::vector<std::string>{"u", "w"}));
    EXPECT_EQ(max_abs_diff(c, Tensor::identity(2, "u", "w")), 0.0);
}

TEST(Contract, MatchesTripleLoop) {
    std::mt19937_64 rng(11);
    Tensor x = random_tensor(rng, {2, 2, 2}, {"a", "b", "c"});
    Tensor y = random_tensor(rng, {2, 2, 2}, {"d", "e", "f"});
    Tensor z = contract(x, y, {{"b", "e"}});
    ASSERT_EQ(z.legs(), (std::vector<std::string>{"a", "c", "d", "f"}));
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t d = 0; d < 2; ++d)
                for (std::size_t f = 0; f < 2; ++f) {
                    cplx acc = 0.0;
                    for (std::size_t b = 0; b < 2; ++b) acc += x.at({a, b, c}) * y.at({d, b, f});
                    EXPECT_NEAR(std::abs(z.at({a, c, d, f}) - acc), 0.0, 1e-13);
                }
}

TEST(Contract, Bilinear) {
    std::mt19937_64 rng(12);
    Tensor x = random_tensor(rng, {2, 3, 2}, {"a", "b", "c"});
    Tensor x2 = random_tensor(rng, {2, 3, 2}, {"a", "b", "c"});
    Tensor y = random_tensor(rng, {3, 2}, {"p", "q"});
    cplx alpha(0.3, -1.2), beta(-2.0, 0.5);
    Tensor lhs = contract(axpby(alpha, x, beta, x2), y, {{"b", "p"}});
    Tensor rhs = axpby(alpha, contract(x, y, {{"b", "p"}}), beta, contract(x2, y, {{"b", "p"}}));
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
}

TEST(Contract, AgreesWithNestedLoopsUpToSixLegs) {
    std::mt19937_64 rng(13);
    const std::vector<std::string> xl = {"x0", "x1", "x2", "x3", "x4", "x5"};
    const std::vector<std::string> yl = {"y0", "y1", "y2", "y3", "y4", "y5"};
    for (std::size_t rx = 1; rx <= 6; ++rx) {
        for (std::size_t ry = 1; ry <= 6; ++ry) {
            std::size_t npairs = 1 + (rx * 7 + ry) % std::min(rx, ry);
            Tensor x = random_tensor(rng, std::vector<std::size_t>(rx, 2), {xl.begin(), xl.begin() + rx});
            Tensor y = random_tensor(rng, std::vector<std::size_t>(ry, 2), {yl.begin(), yl.begin() + ry});
            std::vector<std::pair<std::string, std::string>> pairs;
            for (std::size_t k = 0; k < npairs; ++k) pairs.emplace_back(xl[rx - 1 - k], yl[(k * 2) % ry]);
            std::sort(pairs.begin(), pairs.end(), [](auto &a, auto &b) { return a.second < b.second; });
            pairs.erase(std::unique(pairs.begin(), pairs.end(),
                                    [](auto &a, auto &b) { return a.second == b.second; }),
                        pairs.end());
            EXPECT_LE(max_abs_diff(contract(x, y, pairs), naive_contract(x, y, pairs)), 1e-12)
                << rx << "x" << ry;
        }
    }
}

TEST(Contract, RejectsBadPairings) {
    Tensor a = Tensor::zeros({2, 3}, {"a", "b"});
    Tensor b = Tensor::zeros({2, 2}, {"c", "d"});
    EXPECT_THROW(contract(a, b, {{"b", "c"}}), TensorError);
    EXPECT_THROW(contract(a, b, {{"a", "c"}, {"a", "d"}}), TensorError);
    EXPECT_THROW(contract(a, b, {{"a", "c"}, {"b", "c"}}), TensorError);
    EXPECT_THROW(contract(a, b, {{"z", "c"}}), TensorError);
}

TEST(Trace, SumsDiagonal) {
    std::vector<cplx> d = {1, 2, 3, 4};
    Tensor m({2, 2}, {"i", "j"}, d);
    Tensor t = trace(m, {{"i", "j"}});
    EXPECT_EQ(t.rank(), 0u);
    EXPECT_EQ(t.data()[0], cplx(5));
}

TEST(Matricize, ReproducesRowMajorLayout) {
    std::vector<cplx> d(16);
    for (std::size_t i = 0; i < 16; ++i) d[i] = static_cast<double>(i);
    Tensor t({2, 2, 2, 2}, {"a", "b", "c", "d"}, d);
    MatrixView m = matricize(t, {"a", "b"}, {"c", "d"});
    ASSERT_EQ(m.rows, 4u);
    ASSERT_EQ(m.cols, 4u);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(m(r, c), cplx(r * 4 + c));
}

TEST(Matricize, RoundTripIsBitExact) {
    std::mt19937_64 rng(21);
    Tensor t = random_tensor(rng, {2, 3, 2, 4}, {"a", "b", "c", "d"});
    for (auto [rows, cols] : std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>{
             {{"a", "b"}, {"c", "d"}}, {{"d", "a"}, {"c", "b"}}, {{}, {"b", "d", "a", "c"}}, {{"c"}, {"a", "b", "d"}}}) {
        Tensor back = dematricize(matricize(t, rows, cols));
        EXPECT_EQ(back.legs(), t.legs());
        EXPECT_EQ(back.shape(), t.shape());
        EXPECT_TRUE(back.data() == t.data());
    }
}

TEST(Matricize, MatchesExplicitIndexArithmetic) {
    std::mt19937_64 rng(22);
    Tensor t = random_tensor(rng, {2, 2, 2, 2}, {"a", "b", "c", "d"});
    MatrixView m = matricize(t, {"a", "c"}, {"b", "d"});
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c)
                for (std::size_t d = 0; d < 2; ++d) {
                    EXPECT_EQ(m(a * 2 + c, b * 2 + d), t.data()[((a * 2 + b) * 2 + c) * 2 + d]);
                }
}

TEST(Matricize, RejectsNonPartition) {
    Tensor t = Tensor::zeros({2, 2, 2}, {"a", "b", "c"});
    EXPECT_THROW(matricize(t, {"a"}, {"b"}), TensorError);
    EXPECT_THROW(matricize(t, {"a", "b"}, {"b", "c"}), TensorError);
    EXPECT_THROW(matricize(t, {"a", "b"}, {"c", "z"}), TensorError);
}

TEST(FuseSplit, AreInverse) {
    std::mt19937_64 rng(23);
    Tensor t = random_tensor(rng, {2, 3, 4}, {"a", "b", "c"});
    Tensor f = fuse(t, {"a", "c"}, "ac");
    EXPECT_EQ(f.legs(), (std::vector<std::string>{"ac", "b"}));
    EXPECT_EQ(f.dim("ac"), 8u);
    Tensor s = split(f, "ac", {"a", "c"}, {2, 4});
    EXPECT_EQ(max_abs_diff(s, t), 0.0);
}

TEST(Eigen, IdentityFour) {
    auto e = eigendecompose(identity_matrix(4), 1e-12);
    ASSERT_EQ(e.eigenvalues.size(), 4u);
    for (auto v : e.eigenvalues) EXPECT_NEAR(std::abs(v - cplx(1)), 0.0, 1e-14);
}

TEST(Eigen, DiagonalSortedByMagnitude) {
    auto m = MatrixView::from_rows(3, 3, {3, 0, 0, 0, -1, 0, 0, 0, 0.5});
    auto e = eigendecompose(m, 1e-12);
    EXPECT_NEAR(e.eigenvalues[0].real(), 3.0, 1e-14);
    EXPECT_NEAR(e.eigenvalues[1].real(), -1.0, 1e-14);
    EXPECT_NEAR(e.eigenvalues[2].real(), 0.5, 1e-14);
}

TEST(Eigen, RandomResidualBound) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> n;
    std::vector<cplx> d(64);
    for (auto &v : d) v = {n(rng), n(rng)};
    auto m = MatrixView::from_rows(8, 8, d);
    auto e = eigendecompose(m, 1e-8);
    for (std::size_t i = 0; i < 8; ++i) {
        auto v = e.eigenvector(i);
        double r = 0.0;
        for (std::size_t row = 0; row < 8; ++row) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < 8; ++c) acc += m(row, c) * v[c];
            r += std::norm(acc - e.eigenvalues[i] * v[row]);
        }
        EXPECT_LE(std::sqrt(r), 1e-8);
        if (i > 0) EXPECT_GE(std::abs(e.eigenvalues[i - 1]), std::abs(e.eigenvalues[i]));
    }
}

TEST(Eigen, RejectsNonSquare) {
    EXPECT_THROW(eigendecompose(MatrixView::from_rows(2, 3, std::vector<cplx>(6)), 1e-8), TensorError);
}

TEST(Unitarity, Defects) {
    EXPECT_EQ(unitarity_defect(identity_matrix(2)), 0.0);
    EXPECT_DOUBLE_EQ(unitarity_defect(MatrixView::from_rows(2, 2, {2, 0, 0, 2})), 3.0);
    EXPECT_THROW(unitarity_defect(MatrixView::from_rows(1, 2, {1, 0})), TensorError);
}

TEST(Hermitian, EigenvaluesAscending) {
    auto m = MatrixView::from_rows(2, 2, {2, cplx(0, 1), cplx(0, -1), 2});
    auto ev = hermitian_eigenvalues(m, 1e-12);
    EXPECT_NEAR(ev[0], 1.0, 1e-12);
    EXPECT_NEAR(ev[1], 3.0, 1e-12);
    EXPECT_THROW(hermitian_eigenvalues(MatrixView::from_rows(2, 2, {0, 1, 0, 0}), 1e-8), TensorError);
}
