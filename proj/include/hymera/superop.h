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

#ifndef HYMERA_SUPEROP_H
#define HYMERA_SUPEROP_H

#include <cstdint>
#include <string>
#include <vector>

#include "hymera/composition.h"
#include "hymera/tensor.h"

namespace hymera {

struct SuperopError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MapKind { Ascending, Descending };

/// Linear map on n-site density matrices. With vec(rho) row-major, the map is
/// vec(rho) -> matrix * vec(rho); for Kraus form sum_k K rho K^dagger the
/// matrix is sum_k K (x) conj(K).
struct Superoperator {
    int sites = 1;
    std::size_t site_dim = 2;
    MatrixView matrix;
    MapKind kind = MapKind::Descending;
    std::string cone_id;

    /// Dimension of the density matrices the map acts on.
    std::size_t hilbert_dim() const;
};

/// Contract a cone schema over the (normalized) composites. The cone's
/// outputs are [ket outs, bra outs, ket ins, bra ins]; the first half become
/// rows. Throws SuperopError if the result is not trace preserving within tol.
Superoperator build_descending(const Bindings &composites, const ContractionSchema &cone, double tol = 1e-8);
Superoperator build_descending(const Decomposition &d, const ParameterSet &p, const ContractionSchema &cone,
                               double tol = 1e-8);
ContractionSchema load_cone_preset(const std::string &name);

/// The dual map, matrix D^dagger.
Superoperator ascending(const Superoperator &descending);

MatrixView apply(const Superoperator &op, const MatrixView &rho);

double trace_preservation_defect(const Superoperator &op);
/// ||A(I) - I||_max.
double unitality_defect(const Superoperator &op);
/// Reshuffled Choi matrix C_{(a c),(b d)} = D_{(a b),(c d)}.
MatrixView choi_matrix(const Superoperator &op);
double choi_min_eigenvalue(const Superoperator &op);
/// |tr[O D(rho)] - tr[A(O) rho]|.
double duality_defect(const Superoperator &descending, const MatrixView &o, const MatrixView &rho);
double spectral_radius(const Superoperator &op, double tol = 1e-8);

/// Convex combination; weights must be >= 0 and sum to 1.
Superoperator average_superoperator(const std::vector<Superoperator> &ops, const std::vector<double> &weights);

struct ScalingSpectrum {
    std::vector<cplx> eigenvalues;
    /// -log|lambda| / log s; +inf for lambda = 0.
    std::vector<double> dimensions;
    double scale_factor = 0.0;
};

double scaling_dimension(cplx lambda, double s);
ScalingSpectrum scaling_spectrum(const Superoperator &op, double s, std::size_t k, double tol = 1e-8);

struct FixedPoint {
    MatrixView rho;
    int iterations = 0;
    bool converged = false;
};

/// Power iteration from the maximally mixed state.
FixedPoint fixed_point(const Superoperator &op, double tol = 1e-10, int max_iterations = 10000);

/// Trace out the trailing sites of a state on `sites` sites of dimension d.
MatrixView reduce_to_leading_sites(const MatrixView &rho, std::size_t d, int sites, int keep);
double von_neumann_entropy(const MatrixView &rho);

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    bool operator==(const Rational &) const = default;
};

Rational operator*(std::int64_t k, const Rational &r);

/// h_{r,s} of the minimal model M(p', q'), p' > q' >= 2 coprime.
Rational kac_dimension(int p_prime, int q_prime, int r, int s);

struct KacEntry {
    int r = 0;
    int s = 0;
    Rational h;
    /// 2h for spinless primaries.
    Rational delta;
};

std::vector<KacEntry> kac_table(int p_prime, int q_prime);

double central_charge(double s_n, double s_m, int n, int m);
double correlation_exponent(const ScalingSpectrum &spec, std::size_t alpha);

}  // namespace hymera

#endif
