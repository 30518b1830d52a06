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

#include <cmath>
#include <limits>
#include <numeric>

namespace hymera {

namespace {

std::size_t isqrt_exact(std::size_t v) {
    auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v))));
    return r * r == v ? r : 0;
}

}  // namespace

std::size_t Superoperator::hilbert_dim() const { return isqrt_exact(matrix.rows); }

Superoperator build_descending(const Bindings &composites, const ContractionSchema &cone, double tol) {
    Tensor t = compose(cone, composites);
    const auto names = cone.resolved_output_names();
    if (names.size() % 2 != 0) throw SuperopError("cone '" + cone.name + "' has an odd number of outputs");
    const std::vector<std::string> rows(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(names.size() / 2));
    const std::vector<std::string> cols(names.begin() + static_cast<std::ptrdiff_t>(names.size() / 2), names.end());

    Superoperator op;
    op.matrix = matricize(t, rows, cols);
    op.kind = MapKind::Descending;
    op.cone_id = cone.name;
    const std::size_t n = op.hilbert_dim();
    if (!op.matrix.square() || n == 0) {
        throw SuperopError("cone '" + cone.name + "' does not give a square map on density matrices");
    }
    auto attr = [&](const char *key, double fallback) {
        auto it = cone.attributes.find(key);
        return it == cone.attributes.end() ? fallback : it->second;
    };
    op.sites = static_cast<int>(attr("sites", 1));
    op.site_dim = static_cast<std::size_t>(attr("site_dim", static_cast<double>(n)));
    std::size_t expect = 1;
    for (int i = 0; i < op.sites; ++i) expect *= op.site_dim;
    if (expect != n) throw SuperopError("cone '" + cone.name + "' declares sites/site_dim inconsistent with its legs");

    const double defect = trace_preservation_defect(op);
    if (defect > tol) {
        throw SuperopError("cone '" + cone.name + "' is not trace preserving (defect " + std::to_string(defect) + ")");
    }
    return op;
}

Superoperator build_descending(const Decomposition &d, const ParameterSet &p, const ContractionSchema &cone,
                               double tol) {
    return build_descending(build_composites(d, p).tensors, cone, tol);
}

ContractionSchema load_cone_preset(const std::string &name) {
    const auto path = preset_dir() / "cones" / (name + ".json");
    if (!std::filesystem::exists(path)) throw CompositionError("unknown cone preset '" + name + "'");
    return load_schema(path);
}

Superoperator ascending(const Superoperator &descending) {
    Superoperator a = descending;
    a.matrix = adjoint(descending.matrix);
    a.kind = MapKind::Ascending;
    return a;
}

MatrixView apply(const Superoperator &op, const MatrixView &rho) {
    const std::size_t n = op.hilbert_dim();
    if (rho.rows != n || rho.cols != n) throw SuperopError("state dimension does not match the map");
    MatrixView v = MatrixView::from_rows(n * n, 1, rho.data);
    MatrixView out = matmul(op.matrix, v);
    return MatrixView::from_rows(n, n, out.data);
}

double trace_preservation_defect(const Superoperator &op) {
    const std::size_t n = op.hilbert_dim();
    double d = 0.0;
    for (std::size_t col = 0; col < n * n; ++col) {
        cplx acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) acc += op.matrix(a * n + a, col);
        const cplx want = (col / n == col % n) ? 1.0 : 0.0;
        d = std::max(d, std::abs(acc - want));
    }
    return d;
}

double unitality_defect(const Superoperator &op) {
    const std::size_t n = op.hilbert_dim();
    MatrixView out = apply(op, identity_matrix(n));
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::abs(out(i, j) - cplx(i == j ? 1.0 : 0.0)));
    return d;
}

MatrixView choi_matrix(const Superoperator &op) {
    const std::size_t n = op.hilbert_dim();
    std::vector<cplx> c(n * n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) c[(a * n + i) * n * n + (b * n + j)] = op.matrix(a * n + b, i * n + j);
    return MatrixView::from_rows(n * n, n * n, std::move(c));
}

double choi_min_eigenvalue(const Superoperator &op) {
    // Loose Hermiticity gate; a Hermiticity-breaking map is not CP anyway.
    return hermitian_eigenvalues(choi_matrix(op), 1e-8).front();
}

double duality_defect(const Superoperator &descending, const MatrixView &o, const MatrixView &rho) {
    const Superoperator asc = ascending(descending);
    const MatrixView d_rho = apply(descending, rho);
    const MatrixView a_o = apply(asc, o);
    cplx lhs = 0.0, rhs = 0.0;
    const std::size_t n = rho.rows;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            lhs += o(i, j) * d_rho(j, i);
            rhs += a_o(i, j) * rho(j, i);
        }
    return std::abs(lhs - rhs);
}

double spectral_radius(const Superoperator &op, double tol) {
    return std::abs(eigendecompose(op.matrix, tol).eigenvalues.front());
}

Superoperator average_superoperator(const std::vector<Superoperator> &ops, const std::vector<double> &weights) {
    if (ops.empty() || ops.size() != weights.size()) throw SuperopError("need one weight per superoperator");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw SuperopError("weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw SuperopError("weights must sum to 1");
    Superoperator out = ops.front();
    std::fill(out.matrix.data.begin(), out.matrix.data.end(), cplx(0.0));
    std::string ids;
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const auto &m = ops[k].matrix;
        if (m.rows != out.matrix.rows || m.cols != out.matrix.cols || ops[k].kind != out.kind) {
            throw SuperopError("cannot average superoperators of different shape or kind");
        }
        for (std::size_t i = 0; i < m.data.size(); ++i) out.matrix.data[i] += weights[k] * m.data[i];
        ids += (k ? "+" : "") + ops[k].cone_id;
    }
    out.cone_id = ids;
    return out;
}

double scaling_dimension(cplx lambda, double s) {
    if (!(s > 1.0)) throw std::invalid_argument("scale factor must exceed 1");
    const double mag = std::abs(lambda);
    if (mag == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(mag) / std::log(s);
}

ScalingSpectrum scaling_spectrum(const Superoperator &op, double s, std::size_t k, double tol) {
    if (!(s > 1.0)) throw std::invalid_argument("scale factor must exceed 1");
    EigenDecomposition e = eigendecompose(op.matrix, tol);
    ScalingSpectrum spec;
    spec.scale_factor = s;
    const std::size_t count = std::min(k, e.eigenvalues.size());
    for (std::size_t i = 0; i < count; ++i) {
        spec.eigenvalues.push_back(e.eigenvalues[i]);
        spec.dimensions.push_back(scaling_dimension(e.eigenvalues[i], s));
    }
    return spec;
}

FixedPoint fixed_point(const Superoperator &op, double tol, int max_iterations) {
    const std::size_t n = op.hilbert_dim();
    FixedPoint fp;
    fp.rho = identity_matrix(n);
    for (auto &v : fp.rho.data) v /= static_cast<double>(n);
    for (fp.iterations = 1; fp.iterations <= max_iterations; ++fp.iterations) {
        MatrixView next = apply(op, fp.rho);
        double diff = 0.0;
        for (std::size_t i = 0; i < next.data.size(); ++i) diff = std::max(diff, std::abs(next.data[i] - fp.rho.data[i]));
        fp.rho = std::move(next);
        if (diff < tol) {
            fp.converged = true;
            break;
        }
    }
    fp.iterations = std::min(fp.iterations, max_iterations);
    return fp;
}

MatrixView reduce_to_leading_sites(const MatrixView &rho, std::size_t d, int sites, int keep) {
    if (keep < 0 || keep > sites) throw SuperopError("cannot keep that many sites");
    std::size_t dk = 1, dt = 1;
    for (int i = 0; i < keep; ++i) dk *= d;
    for (int i = keep; i < sites; ++i) dt *= d;
    if (rho.rows != dk * dt || rho.cols != dk * dt) throw SuperopError("state dimension does not match site layout");
    std::vector<cplx> out(dk * dk);
    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j)
            for (std::size_t t = 0; t < dt; ++t) out[i * dk + j] += rho(i * dt + t, j * dt + t);
    return MatrixView::from_rows(dk, dk, std::move(out));
}

double von_neumann_entropy(const MatrixView &rho) {
    double s = 0.0;
    for (double l : hermitian_eigenvalues(rho, 1e-8)) {
        if (l > 1e-15) s -= l * std::log(l);
    }
    return s;
}

Rational Rational::make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    return {n / (g ? g : 1), d / (g ? g : 1)};
}

std::string Rational::str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

Rational operator*(std::int64_t k, const Rational &r) { return Rational::make(k * r.num, r.den); }

Rational kac_dimension(int p_prime, int q_prime, int r, int s) {
    if (!(p_prime > q_prime && q_prime >= 2) || std::gcd(p_prime, q_prime) != 1) {
        throw std::invalid_argument("minimal model needs coprime p' > q' >= 2");
    }
    if (r < 1 || r >= q_prime || s < 1 || s >= p_prime) {
        throw std::invalid_argument("Kac label (" + std::to_string(r) + "," + std::to_string(s) + ") out of range for M(" +
                                    std::to_string(p_prime) + "," + std::to_string(q_prime) + ")");
    }
    const std::int64_t a = static_cast<std::int64_t>(p_prime) * r - static_cast<std::int64_t>(q_prime) * s;
    const std::int64_t b = p_prime - q_prime;
    return Rational::make(a * a - b * b, 4LL * p_prime * q_prime);
}

std::vector<KacEntry> kac_table(int p_prime, int q_prime) {
    std::vector<KacEntry> t;
    for (int r = 1; r < q_prime; ++r)
        for (int s = 1; s < p_prime; ++s) {
            Rational h = kac_dimension(p_prime, q_prime, r, s);
            t.push_back({r, s, h, 2 * h});
        }
    return t;
}

double central_charge(double s_n, double s_m, int n, int m) {
    if (!(n > m && m >= 1)) throw std::invalid_argument("central charge needs n > m >= 1");
    return 3.0 * (s_n - s_m) / (std::log(static_cast<double>(n)) - std::log(static_cast<double>(m)));
}

double correlation_exponent(const ScalingSpectrum &spec, std::size_t alpha) {
    if (alpha < 1 || alpha >= spec.dimensions.size()) {
        throw std::invalid_argument("scaling index " + std::to_string(alpha) + " out of range");
    }
    return 2.0 * spec.dimensions[alpha];
}

}  // namespace hymera
