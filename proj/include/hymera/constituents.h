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

#ifndef HYMERA_CONSTITUENTS_H
#define HYMERA_CONSTITUENTS_H

#include <map>
#include <optional>
#include <random>
#include <string>

#include "hymera/tensor.h"

namespace hymera {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Free parameters theta_1..theta_9. theta_6, theta_8 and theta_9 are plain
/// reals fed to arctan/cosh; the others are angles.
struct ParameterSet {
    std::map<int, double> theta;

    double get(int index) const;
    bool has(int index) const { return theta.count(index) != 0; }
    ParameterSet &set(int index, double value) {
        theta[index] = value;
        return *this;
    }
};

enum class Family { Y, R, Q, T, S };

Family family_from_string(const std::string &name);
std::string to_string(Family f);
/// Parameter indices a family reads, e.g. Q -> {3,4,5}.
std::vector<int> family_parameters(Family f);

/// Four-leg constituents with legs "a","b","c","d", every leg of dimension 2.
/// The (ab|cd) matricization is the displayed 4x4 form.
Tensor build_Y(const ParameterSet &p);
Tensor build_R(const ParameterSet &p);
Tensor build_Q(const ParameterSet &p);
Tensor build_T(const ParameterSet &p);
Tensor build_S(const ParameterSet &p);
Tensor build(Family f, const ParameterSet &p);

/// Closed forms of M M^T for the antisymmetric families.
double t_scalar_constant(double theta6, double theta7);
double s_scalar_constant(double theta8, double theta9);

/// Sampling box for random parameter draws. Angles are theta_1..5 and
/// theta_7; reals are theta_6, theta_8, theta_9.
struct ThetaRanges {
    double angle_lo = 0.0;
    double angle_hi = 6.283185307179586;
    double real_lo = -5.0;
    double real_hi = 5.0;
};

/// Draws theta_1..theta_9 uniformly from the given ranges, in index order.
ParameterSet sample_parameters(std::mt19937_64 &rng, const ThetaRanges &ranges = {});
/// Uniform [0,1) double from the top 53 bits; stable across standard libraries.
double uniform01(std::mt19937_64 &rng);

struct ConstraintReport {
    double vertical_defect = 0.0;
    double horizontal_defect = 0.0;
    /// c in M M^dagger = c I for the vertical grouping, when it exists.
    std::optional<double> scalar_constant;
    /// Vertical defect of M / sqrt(c); equals vertical_defect when c is absent.
    double normalized_vertical_defect = 0.0;
    bool degenerate = false;
    bool z2_symmetric = false;
    bool antisymmetric = false;
};

/// Leg groupings used by classify: vertical (ab|cd), horizontal (ad|bc).
MatrixView vertical_matrix(const Tensor &t);
MatrixView horizontal_matrix(const Tensor &t);

ConstraintReport classify(const Tensor &t, double tol = 1e-10);

/// Copy of t with one entry of its vertical matricization set to zero.
Tensor zero_entry(const Tensor &t, std::size_t row, std::size_t col);

}  // namespace hymera

#endif
