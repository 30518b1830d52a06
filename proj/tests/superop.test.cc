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

#include "hymera/superop.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hymera/tiling.h"

using namespace hymera;

namespace {

MatrixView random_matrix(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<cplx> d(n * n);
    for (auto &v : d) v = {g(rng), g(rng)};
    return MatrixView::from_rows(n, n, d);
}

MatrixView random_state(std::mt19937_64 &rng, std::size_t n) {
    MatrixView a = random_matrix(rng, n);
    MatrixView r = matmul(a, adjoint(a));
    cplx tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += r(i, i);
    for (auto &v : r.data) v /= tr;
    return r;
}

const double kS54 = 2.0 + std::sqrt(3.0);

}  // namespace

TEST(Descending, TrivialConeIsIdentity) {
    auto op = build_descending(Bindings{}, load_cone_preset("trivial"));
    ASSERT_EQ(op.matrix.rows, 16u);
    EXPECT_EQ(op.hilbert_dim(), 4u);
    EXPECT_EQ(op.sites, 2);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(op.matrix(i, j), cplx(i == j ? 1.0 : 0.0));
}

TEST(Descending, ChannelInvariantsOnAllConesAndDecompositions) {
    std::mt19937_64 rng(100);
    for (const char *name : {"QR-54", "YQT-54", "YQS-54"}) {
        auto d = load_decomposition_preset(name);
        for (const char *cone : {"cone-a-54", "cone-b-54", "cone-c-54"}) {
            auto c = load_cone_preset(cone);
            for (int k = 0; k < 5; ++k) {
                auto op = build_descending(d, sample_parameters(rng), c);
                EXPECT_LE(trace_preservation_defect(op), 1e-8) << name << " " << cone;
                EXPECT_GE(choi_min_eigenvalue(op), -1e-8) << name << " " << cone;
                EXPECT_NEAR(spectral_radius(op), 1.0, 1e-6) << name << " " << cone;
                EXPECT_LE(unitality_defect(ascending(op)), 1e-8);
            }
        }
    }
}

TEST(Descending, DualityIdentity) {
    std::mt19937_64 rng(101);
    auto d = load_decomposition_preset("YQR", "54");
    auto op = build_descending(d, sample_parameters(rng), load_cone_preset("cone-a-54"));
    for (int k = 0; k < 20; ++k) {
        EXPECT_LE(duality_defect(op, random_matrix(rng, 4), random_state(rng, 4)), 1e-8);
    }
}

TEST(Descending, MiswiredConeIsRejected) {
    auto cone = load_cone_preset("cone-a-54");
    for (auto &n : cone.nodes) {
        if (n.id == "Gc") n.role = "U";
    }
    std::mt19937_64 rng(102);
    auto d = load_decomposition_preset("YQR", "54");
    ParameterSet p = sample_parameters(rng);
    p.set(2, 0.8);
    EXPECT_THROW(build_descending(d, p, cone), SuperopError);
}

TEST(Average, Basics) {
    std::mt19937_64 rng(103);
    auto d = load_decomposition_preset("YQR", "54");
    ParameterSet p = sample_parameters(rng);
    auto a = build_descending(d, p, load_cone_preset("cone-a-54"));
    auto b = build_descending(d, p, load_cone_preset("cone-b-54"));
    EXPECT_TRUE(average_superoperator({a}, {1.0}).matrix.data == a.matrix.data);
    auto same = average_superoperator({a, a}, {0.5, 0.5});
    for (std::size_t i = 0; i < a.matrix.data.size(); ++i) EXPECT_NEAR(std::abs(same.matrix.data[i] - a.matrix.data[i]), 0, 1e-15);
    auto mix = average_superoperator({a, b}, {0.3, 0.7});
    EXPECT_LE(trace_preservation_defect(mix), 1e-8);
    EXPECT_GE(choi_min_eigenvalue(mix), -1e-8);
    EXPECT_THROW(average_superoperator({a, b}, {0.5, 0.6}), SuperopError);
    EXPECT_THROW(average_superoperator({a, b}, {-0.5, 1.5}), SuperopError);
    EXPECT_THROW(average_superoperator({a}, {0.5, 0.5}), SuperopError);
}

TEST(Scaling, DimensionFormula) {
    EXPECT_EQ(scaling_dimension(1.0, kS54), 0.0);
    EXPECT_NEAR(scaling_dimension(1.0 / kS54, kS54), 1.0, 1e-14);
    EXPECT_NEAR(scaling_dimension(0.1, 3.732), 1.74843, 1e-5);
    EXPECT_TRUE(std::isinf(scaling_dimension(0.0, kS54)));
    EXPECT_THROW(scaling_dimension(0.5, 1.0), std::invalid_argument);
}

TEST(Scaling, SpectrumOfSampledMap) {
    std::mt19937_64 rng(104);
    auto d = load_decomposition_preset("YQT", "54");
    auto op = build_descending(d, sample_parameters(rng), load_cone_preset("cone-a-54"));
    auto spec = scaling_spectrum(op, kS54, 8);
    ASSERT_EQ(spec.dimensions.size(), 8u);
    EXPECT_NEAR(spec.dimensions[0], 0.0, 1e-6);
    for (std::size_t i = 1; i < 8; ++i) EXPECT_GE(spec.dimensions[i], spec.dimensions[i - 1]);
}

TEST(FixedPoint, NontrivialForRandomDraws) {
    std::mt19937_64 rng(105);
    auto d = load_decomposition_preset("YQR", "54");
    auto cone = load_cone_preset("cone-a-54");
    int nontrivial = 0;
    for (int k = 0; k < 20; ++k) {
        auto op = build_descending(d, sample_parameters(rng), cone);
        auto fp = fixed_point(op);
        cplx tr = 0.0;
        for (std::size_t i = 0; i < 4; ++i) tr += fp.rho(i, i);
        EXPECT_NEAR(std::abs(tr - 1.0), 0.0, 1e-10);
        if (nontrivial_spectrum_check(fp.rho)) ++nontrivial;
    }
    EXPECT_EQ(nontrivial, 20);
}

TEST(FixedPoint, TrivialMapKeepsMaximallyMixed) {
    auto op = build_descending(Bindings{}, load_cone_preset("trivial"));
    auto fp = fixed_point(op);
    EXPECT_TRUE(fp.converged);
    EXPECT_FALSE(nontrivial_spectrum_check(fp.rho));
}

TEST(Kac, IsingValues) {
    EXPECT_EQ(kac_dimension(4, 3, 2, 2), Rational::make(1, 16));
    EXPECT_EQ(2 * kac_dimension(4, 3, 2, 2), Rational::make(1, 8));
    EXPECT_EQ(kac_dimension(4, 3, 2, 1), Rational::make(1, 2));
    EXPECT_EQ(2 * kac_dimension(4, 3, 2, 1), Rational::make(1, 1));
    EXPECT_EQ(kac_dimension(4, 3, 1, 1), Rational::make(0, 1));
    EXPECT_EQ(kac_dimension(6, 5, 1, 1), Rational::make(0, 1));
}

TEST(Kac, TricriticalAndPotts) {
    EXPECT_EQ(kac_dimension(5, 4, 2, 2), Rational::make(3, 80));
    EXPECT_EQ(kac_dimension(5, 4, 1, 2), Rational::make(1, 10));
    EXPECT_EQ(kac_dimension(5, 4, 1, 3), Rational::make(3, 5));
    EXPECT_EQ(kac_dimension(6, 5, 2, 3), Rational::make(1, 15));
    EXPECT_EQ(kac_dimension(6, 5, 2, 1), Rational::make(2, 5));
}

TEST(Kac, SymmetryIsExact) {
    for (auto [p, q] : std::vector<std::pair<int, int>>{{4, 3}, {5, 4}, {6, 5}, {7, 6}, {7, 2}}) {
        for (const auto &e : kac_table(p, q)) EXPECT_EQ(e.h, kac_dimension(p, q, q - e.r, p - e.s));
    }
}

TEST(Kac, RejectsBadLabels) {
    EXPECT_THROW(kac_dimension(4, 3, 3, 1), std::invalid_argument);
    EXPECT_THROW(kac_dimension(4, 3, 1, 4), std::invalid_argument);
    EXPECT_THROW(kac_dimension(6, 4, 1, 1), std::invalid_argument);
}

TEST(CentralCharge, Synthetic) {
    EXPECT_DOUBLE_EQ(central_charge(std::log(4.0) / 6, std::log(2.0) / 6, 4, 2), 0.5);
    EXPECT_EQ(central_charge(0.3, 0.3, 4, 2), 0.0);
    EXPECT_THROW(central_charge(1, 1, 2, 2), std::invalid_argument);
}

TEST(CentralCharge, FromFixedPointIsFinite) {
    std::mt19937_64 rng(106);
    auto op = build_descending(load_decomposition_preset("YQR", "54"), sample_parameters(rng), load_cone_preset("cone-a-54"));
    auto rho2 = fixed_point(op).rho;
    auto rho1 = reduce_to_leading_sites(rho2, 2, 2, 1);
    double c = central_charge(von_neumann_entropy(rho2), von_neumann_entropy(rho1), 2, 1);
    EXPECT_TRUE(std::isfinite(c));
}

TEST(Correlation, Exponent) {
    ScalingSpectrum s;
    s.dimensions = {0.0, 0.125, 1.0};
    EXPECT_EQ(correlation_exponent(s, 1), 0.25);
    EXPECT_EQ(correlation_exponent(s, 2), 2.0);
    EXPECT_THROW(correlation_exponent(s, 0), std::invalid_argument);
    EXPECT_THROW(correlation_exponent(s, 3), std::invalid_argument);
}

// Two-point decay after L layers: distance s^L, amplitude |lambda_1|^(2L).
TEST(Correlation, MatchesPowerLawFit) {
    std::mt19937_64 rng(107);
    auto op = build_descending(load_decomposition_preset("YQR", "54"), sample_parameters(rng), load_cone_preset("cone-a-54"));
    auto spec = scaling_spectrum(op, kS54, 4);
    const double lam = std::abs(spec.eigenvalues[1]);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int L = 1; L <= 6; ++L) {
        double x = std::log(std::pow(kS54, L)), y = std::log(std::pow(lam, 2 * L));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (6 * sxy - sx * sy) / (6 * sxx - sx * sx);
    double expo = correlation_exponent(spec, 1);
    EXPECT_LE(std::abs(-slope - expo) / expo, 1e-6);
}
