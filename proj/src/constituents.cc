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

#include "hymera/constituents.h"

#include <bit>
#include <cmath>

namespace hymera {

namespace {

const std::vector<std::string> kLegs = {"a", "b", "c", "d"};

Tensor from_matrix(std::vector<cplx> m) { return Tensor({2, 2, 2, 2}, kLegs, std::move(m)); }

constexpr cplx I(0.0, 1.0);

// Shared antisymmetric pattern of the T and S families.
Tensor antisymmetric_form(double x, double y) {
    return from_matrix({0, -x, -y, 0,  //
                        x, 0, 0, -y,   //
                        y, 0, 0, x,    //
                        0, y, -x, 0});
}

}  // namespace

double ParameterSet::get(int index) const {
    auto it = theta.find(index);
    if (it == theta.end()) throw ParameterError("missing parameter theta" + std::to_string(index));
    return it->second;
}

Family family_from_string(const std::string &name) {
    if (name == "Y") return Family::Y;
    if (name == "R") return Family::R;
    if (name == "Q") return Family::Q;
    if (name == "T") return Family::T;
    if (name == "S") return Family::S;
    throw ParameterError("unknown constituent family '" + name + "'");
}

std::string to_string(Family f) {
    switch (f) {
        case Family::Y: return "Y";
        case Family::R: return "R";
        case Family::Q: return "Q";
        case Family::T: return "T";
        case Family::S: return "S";
    }
    return "?";
}

std::vector<int> family_parameters(Family f) {
    switch (f) {
        case Family::Y: return {1};
        case Family::R: return {2};
        case Family::Q: return {3, 4, 5};
        case Family::T: return {6, 7};
        case Family::S: return {8, 9};
    }
    return {};
}

Tensor build_Y(const ParameterSet &p) {
    const double t = p.get(1), c = std::cos(t), s = std::sin(t);
    return from_matrix({c, 0, 0, I * s,  //
                        0, s, I * c, 0,  //
                        0, I * c, s, 0,  //
                        I * s, 0, 0, c});
}

Tensor build_R(const ParameterSet &p) {
    const double t = p.get(2), c = std::cos(t), s = std::sin(t);
    return from_matrix({c, 0, 0, I * s,  //
                        0, c, I * s, 0,  //
                        0, I * s, c, 0,  //
                        I * s, 0, 0, c});
}

Tensor build_Q(const ParameterSet &p) {
    const double t3 = p.get(3), t4 = p.get(4), t5 = p.get(5);
    const double c3 = std::cos(t3), s3 = std::sin(t3), c5 = std::cos(t5), s5 = std::sin(t5);
    const cplx e = std::polar(1.0, t4), e2 = std::polar(1.0, 2.0 * t4);
    return from_matrix({c3, 0, 0, s3 * e,      //
                        0, c5, I * s5, 0,      //
                        0, I * s5, c5, 0,      //
                        s3 * e, 0, 0, -c3 * e2});
}

Tensor build_T(const ParameterSet &p) { return antisymmetric_form(std::atan(p.get(6)), std::cos(p.get(7))); }

Tensor build_S(const ParameterSet &p) { return antisymmetric_form(std::cosh(p.get(8)), std::cosh(p.get(9))); }

Tensor build(Family f, const ParameterSet &p) {
    switch (f) {
        case Family::Y: return build_Y(p);
        case Family::R: return build_R(p);
        case Family::Q: return build_Q(p);
        case Family::T: return build_T(p);
        case Family::S: return build_S(p);
    }
    throw ParameterError("unknown family");
}

double t_scalar_constant(double theta6, double theta7) {
    const double t = std::atan(theta6), c = std::cos(theta7);
    return t * t + c * c;
}

double s_scalar_constant(double theta8, double theta9) {
    const double a = std::cosh(theta8), b = std::cosh(theta9);
    return a * a + b * b;
}

double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ParameterSet sample_parameters(std::mt19937_64 &rng, const ThetaRanges &r) {
    ParameterSet p;
    for (int i = 1; i <= 9; ++i) {
        const double u = uniform01(rng);
        if (i == 6 || i == 8 || i == 9) {
            p.set(i, r.real_lo + (r.real_hi - r.real_lo) * u);
        } else {
            p.set(i, r.angle_lo + (r.angle_hi - r.angle_lo) * u);
        }
    }
    return p;
}

MatrixView vertical_matrix(const Tensor &t) {
    if (t.rank() != 4) throw TensorError("constituent tensors have four legs, got " + std::to_string(t.rank()));
    return matricize(t, {t.legs()[0], t.legs()[1]}, {t.legs()[2], t.legs()[3]});
}

MatrixView horizontal_matrix(const Tensor &t) {
    if (t.rank() != 4) throw TensorError("constituent tensors have four legs, got " + std::to_string(t.rank()));
    return matricize(t, {t.legs()[0], t.legs()[3]}, {t.legs()[1], t.legs()[2]});
}

ConstraintReport classify(const Tensor &t, double tol) {
    if (t.rank() != 4) throw TensorError("classify needs a four-leg tensor");
    for (auto d : t.shape()) {
        if (d != t.shape()[0]) throw TensorError("classify needs equal leg dimensions");
    }
    ConstraintReport r;
    const MatrixView v = vertical_matrix(t);
    r.vertical_defect = unitarity_defect(v);
    r.horizontal_defect = unitarity_defect(horizontal_matrix(t));

    auto [gram_defect, c] = gram_identity_fit(adjoint(v));
    if (gram_defect <= tol && c > tol) {
        r.scalar_constant = c;
        r.normalized_vertical_defect = unitarity_defect(vertical_matrix(scaled(t, 1.0 / std::sqrt(c))));
    } else {
        r.degenerate = c <= tol;
        r.normalized_vertical_defect = r.vertical_defect;
    }

    r.z2_symmetric = true;
    r.antisymmetric = true;
    for (std::size_t i = 0; i < v.rows; ++i) {
        for (std::size_t j = 0; j < v.cols; ++j) {
            if (std::popcount(i) % 2 != std::popcount(j) % 2 && v(i, j) != cplx(0.0)) r.z2_symmetric = false;
            if (std::abs(v(i, j) + v(j, i)) > tol) r.antisymmetric = false;
        }
    }
    return r;
}

Tensor zero_entry(const Tensor &t, std::size_t row, std::size_t col) {
    MatrixView v = vertical_matrix(t);
    if (row >= v.rows || col >= v.cols) throw TensorError("entry index out of range");
    v.data[row * v.cols + col] = 0.0;
    return dematricize(v);
}

}  // namespace hymera
