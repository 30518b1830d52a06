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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hymera {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t product(const std::vector<std::size_t> &dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> row_major_strides(const std::vector<std::size_t> &shape) {
    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t k = shape.size(); k-- > 1;) {
        strides[k - 1] = strides[k] * shape[k];
    }
    return strides;
}

std::string join(const std::vector<std::string> &v) {
    std::string out;
    for (const auto &s : v) {
        if (!out.empty()) out += ",";
        out += s;
    }
    return out;
}

Eigen::Map<const RowMat> as_eigen(const MatrixView &m) {
    return Eigen::Map<const RowMat>(m.data.data(), static_cast<Eigen::Index>(m.rows),
                                    static_cast<Eigen::Index>(m.cols));
}

MatrixView from_eigen(const RowMat &e, const MatrixView &like_rows, const MatrixView &like_cols) {
    MatrixView out;
    out.rows = static_cast<std::size_t>(e.rows());
    out.cols = static_cast<std::size_t>(e.cols());
    out.row_legs = like_rows.row_legs;
    out.row_dims = like_rows.row_dims;
    out.col_legs = like_cols.col_legs;
    out.col_dims = like_cols.col_dims;
    out.source_legs = out.row_legs;
    out.source_legs.insert(out.source_legs.end(), out.col_legs.begin(), out.col_legs.end());
    out.data.assign(e.data(), e.data() + e.size());
    return out;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<std::string> legs, std::vector<cplx> data)
    : shape_(std::move(shape)), legs_(std::move(legs)), data_(std::move(data)) {
    if (shape_.size() != legs_.size()) {
        throw TensorError("tensor has " + std::to_string(shape_.size()) + " dimensions but " +
                          std::to_string(legs_.size()) + " leg labels");
    }
    for (std::size_t d : shape_) {
        if (d == 0) throw TensorError("leg dimensions must be >= 1");
    }
    std::set<std::string> seen(legs_.begin(), legs_.end());
    if (seen.size() != legs_.size()) {
        throw TensorError("duplicate leg label in [" + join(legs_) + "]");
    }
    if (product(shape_) != data_.size()) {
        throw TensorError("shape product " + std::to_string(product(shape_)) + " != entry count " +
                          std::to_string(data_.size()));
    }
}

Tensor Tensor::zeros(std::vector<std::size_t> shape, std::vector<std::string> legs) {
    std::size_t n = product(shape);
    return Tensor(std::move(shape), std::move(legs), std::vector<cplx>(n));
}

Tensor Tensor::identity(std::size_t dim, std::string out_leg, std::string in_leg) {
    std::vector<cplx> d(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) d[i * dim + i] = 1.0;
    return Tensor({dim, dim}, {std::move(out_leg), std::move(in_leg)}, std::move(d));
}

Tensor Tensor::scalar(cplx value) { return Tensor({}, {}, {value}); }

std::size_t Tensor::leg_index(const std::string &leg) const {
    auto it = std::find(legs_.begin(), legs_.end(), leg);
    if (it == legs_.end()) throw TensorError("no leg '" + leg + "' in [" + join(legs_) + "]");
    return static_cast<std::size_t>(it - legs_.begin());
}

bool Tensor::has_leg(const std::string &leg) const {
    return std::find(legs_.begin(), legs_.end(), leg) != legs_.end();
}

cplx Tensor::at(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) throw TensorError("index rank mismatch");
    std::size_t off = 0;
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (index[k] >= shape_[k]) throw TensorError("index out of range");
        off = off * shape_[k] + index[k];
    }
    return data_[off];
}

Tensor Tensor::with_legs(std::vector<std::string> legs) const { return Tensor(shape_, std::move(legs), data_); }

Tensor Tensor::rename(const std::string &from, const std::string &to) const {
    auto legs = legs_;
    legs[leg_index(from)] = to;
    return Tensor(shape_, std::move(legs), data_);
}

MatrixView MatrixView::from_rows(std::size_t rows, std::size_t cols, std::vector<cplx> data) {
    if (rows * cols != data.size()) throw TensorError("matrix entry count mismatch");
    MatrixView m;
    m.rows = rows;
    m.cols = cols;
    m.row_legs = {"r"};
    m.col_legs = {"c"};
    m.row_dims = {rows};
    m.col_dims = {cols};
    m.source_legs = {"r", "c"};
    m.data = std::move(data);
    return m;
}

std::vector<cplx> EigenDecomposition::eigenvector(std::size_t i) const {
    if (i >= dimension) throw TensorError("eigenvector index out of range");
    return {eigenvectors.begin() + static_cast<std::ptrdiff_t>(i * dimension),
            eigenvectors.begin() + static_cast<std::ptrdiff_t>((i + 1) * dimension)};
}

Tensor permute(const Tensor &x, const std::vector<std::string> &order) {
    if (order.size() != x.rank()) throw TensorError("permutation rank mismatch");
    std::vector<std::size_t> src(order.size());
    std::set<std::string> seen;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (!seen.insert(order[k]).second) throw TensorError("leg '" + order[k] + "' repeated in permutation");
        src[k] = x.leg_index(order[k]);
    }
    bool trivial = true;
    for (std::size_t k = 0; k < src.size(); ++k) trivial = trivial && src[k] == k;
    if (trivial) return x;

    std::vector<std::size_t> shape(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) shape[k] = x.shape()[src[k]];
    auto in_strides = row_major_strides(x.shape());
    std::vector<std::size_t> stride(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) stride[k] = in_strides[src[k]];

    std::vector<cplx> out(x.size());
    std::vector<std::size_t> idx(order.size(), 0);
    std::size_t in_off = 0;
    const auto &in = x.data();
    for (std::size_t o = 0; o < out.size(); ++o) {
        out[o] = in[in_off];
        for (std::size_t k = order.size(); k-- > 0;) {
            if (++idx[k] < shape[k]) {
                in_off += stride[k];
                break;
            }
            in_off -= stride[k] * (shape[k] - 1);
            idx[k] = 0;
        }
    }
    return Tensor(std::move(shape), order, std::move(out));
}

Tensor contract(const Tensor &x, const Tensor &y, const std::vector<std::pair<std::string, std::string>> &pairs) {
    std::set<std::string> used_x, used_y;
    std::vector<std::string> px, py;
    for (const auto &[lx, ly] : pairs) {
        if (!used_x.insert(lx).second) throw TensorError("leg '" + lx + "' of the first tensor paired twice");
        if (!used_y.insert(ly).second) throw TensorError("leg '" + ly + "' of the second tensor paired twice");
        if (x.dim(lx) != y.dim(ly)) {
            throw TensorError("dimension mismatch pairing '" + lx + "' (" + std::to_string(x.dim(lx)) + ") with '" +
                              ly + "' (" + std::to_string(y.dim(ly)) + ")");
        }
        px.push_back(lx);
        py.push_back(ly);
    }
    std::vector<std::string> fx, fy;
    std::vector<std::size_t> out_shape;
    for (std::size_t k = 0; k < x.rank(); ++k) {
        if (!used_x.count(x.legs()[k])) {
            fx.push_back(x.legs()[k]);
            out_shape.push_back(x.shape()[k]);
        }
    }
    for (std::size_t k = 0; k < y.rank(); ++k) {
        if (!used_y.count(y.legs()[k])) {
            fy.push_back(y.legs()[k]);
            out_shape.push_back(y.shape()[k]);
        }
    }
    std::vector<std::string> out_legs = fx;
    out_legs.insert(out_legs.end(), fy.begin(), fy.end());

    std::vector<std::string> ox = fx;
    ox.insert(ox.end(), px.begin(), px.end());
    std::vector<std::string> oy = py;
    oy.insert(oy.end(), fy.begin(), fy.end());
    Tensor xp = permute(x, ox);
    Tensor yp = permute(y, oy);

    std::size_t inner = 1;
    for (const auto &l : px) inner *= x.dim(l);
    const auto m = static_cast<Eigen::Index>(x.size() / inner);
    const auto n = static_cast<Eigen::Index>(y.size() / inner);
    const auto k = static_cast<Eigen::Index>(inner);
    Eigen::Map<const RowMat> a(xp.data().data(), m, k);
    Eigen::Map<const RowMat> b(yp.data().data(), k, n);
    std::vector<cplx> out(static_cast<std::size_t>(m * n));
    Eigen::Map<RowMat> c(out.data(), m, n);
    c.noalias() = a * b;
    return Tensor(std::move(out_shape), std::move(out_legs), std::move(out));
}

Tensor trace(const Tensor &x, const std::vector<std::pair<std::string, std::string>> &pairs) {
    std::set<std::string> used;
    std::vector<std::string> first, second;
    for (const auto &[a, b] : pairs) {
        if (a == b || !used.insert(a).second || !used.insert(b).second) {
            throw TensorError("trace pairs must use distinct legs once each");
        }
        if (x.dim(a) != x.dim(b)) throw TensorError("trace dimension mismatch on '" + a + "','" + b + "'");
        first.push_back(a);
        second.push_back(b);
    }
    std::vector<std::string> free;
    std::vector<std::size_t> free_shape;
    for (std::size_t k = 0; k < x.rank(); ++k) {
        if (!used.count(x.legs()[k])) {
            free.push_back(x.legs()[k]);
            free_shape.push_back(x.shape()[k]);
        }
    }
    std::vector<std::string> order = free;
    order.insert(order.end(), first.begin(), first.end());
    order.insert(order.end(), second.begin(), second.end());
    Tensor p = permute(x, order);
    std::size_t inner = 1;
    for (const auto &l : first) inner *= x.dim(l);
    std::size_t outer = x.size() / (inner * inner);
    std::vector<cplx> out(outer);
    for (std::size_t o = 0; o < outer; ++o) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < inner; ++i) acc += p.data()[(o * inner + i) * inner + i];
        out[o] = acc;
    }
    return Tensor(std::move(free_shape), std::move(free), std::move(out));
}

Tensor fuse(const Tensor &x, const std::vector<std::string> &legs, const std::string &fused) {
    if (legs.empty()) throw TensorError("fuse needs at least one leg");
    std::set<std::string> group(legs.begin(), legs.end());
    if (group.size() != legs.size()) throw TensorError("fuse legs repeated");
    std::size_t anchor = x.leg_index(legs.front());
    std::vector<std::string> order;
    std::vector<std::string> new_legs;
    std::vector<std::size_t> new_shape;
    std::size_t fused_dim = 1;
    for (const auto &l : legs) fused_dim *= x.dim(l);
    for (std::size_t k = 0; k < x.rank(); ++k) {
        const auto &l = x.legs()[k];
        if (k == anchor) {
            order.insert(order.end(), legs.begin(), legs.end());
            new_legs.push_back(fused);
            new_shape.push_back(fused_dim);
        } else if (!group.count(l)) {
            order.push_back(l);
            new_legs.push_back(l);
            new_shape.push_back(x.shape()[k]);
        }
    }
    Tensor p = permute(x, order);
    return Tensor(std::move(new_shape), std::move(new_legs), p.data());
}

Tensor split(const Tensor &x, const std::string &leg, const std::vector<std::string> &parts,
             const std::vector<std::size_t> &dims) {
    if (parts.size() != dims.size() || parts.empty()) throw TensorError("split parts/dims mismatch");
    if (product(dims) != x.dim(leg)) throw TensorError("split dimensions do not multiply to leg dimension");
    std::size_t at = x.leg_index(leg);
    std::vector<std::string> legs;
    std::vector<std::size_t> shape;
    for (std::size_t k = 0; k < x.rank(); ++k) {
        if (k == at) {
            legs.insert(legs.end(), parts.begin(), parts.end());
            shape.insert(shape.end(), dims.begin(), dims.end());
        } else {
            legs.push_back(x.legs()[k]);
            shape.push_back(x.shape()[k]);
        }
    }
    return Tensor(std::move(shape), std::move(legs), x.data());
}

Tensor conj(const Tensor &x) {
    std::vector<cplx> d(x.data());
    for (auto &v : d) v = std::conj(v);
    return Tensor(x.shape(), x.legs(), std::move(d));
}

Tensor scaled(const Tensor &x, cplx factor) {
    std::vector<cplx> d(x.data());
    for (auto &v : d) v *= factor;
    return Tensor(x.shape(), x.legs(), std::move(d));
}

Tensor axpby(cplx a, const Tensor &x, cplx b, const Tensor &y) {
    Tensor yp = permute(y, x.legs());
    if (yp.shape() != x.shape()) throw TensorError("axpby shape mismatch");
    std::vector<cplx> d(x.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a * x.data()[i] + b * yp.data()[i];
    return Tensor(x.shape(), x.legs(), std::move(d));
}

double max_abs_diff(const Tensor &x, const Tensor &y) {
    Tensor yp = permute(y, x.legs());
    if (yp.shape() != x.shape()) throw TensorError("shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x.data()[i] - yp.data()[i]));
    return m;
}

double frobenius_norm(const Tensor &x) {
    double s = 0.0;
    for (const auto &v : x.data()) s += std::norm(v);
    return std::sqrt(s);
}

MatrixView matricize(const Tensor &x, const std::vector<std::string> &row_legs,
                     const std::vector<std::string> &col_legs) {
    std::set<std::string> all(row_legs.begin(), row_legs.end());
    for (const auto &l : col_legs) {
        if (!all.insert(l).second) throw TensorError("leg '" + l + "' appears in both row and column groups");
    }
    if (all.size() != row_legs.size() + col_legs.size() || all.size() != x.rank()) {
        throw TensorError("row/column legs [" + join(row_legs) + " | " + join(col_legs) +
                          "] do not partition [" + join(x.legs()) + "]");
    }
    std::vector<std::string> order = row_legs;
    order.insert(order.end(), col_legs.begin(), col_legs.end());
    Tensor p = permute(x, order);
    MatrixView m;
    m.row_legs = row_legs;
    m.col_legs = col_legs;
    for (const auto &l : row_legs) m.row_dims.push_back(x.dim(l));
    for (const auto &l : col_legs) m.col_dims.push_back(x.dim(l));
    m.rows = product(m.row_dims);
    m.cols = product(m.col_dims);
    m.source_legs = x.legs();
    m.data = p.data();
    return m;
}

Tensor dematricize(const MatrixView &m) {
    std::vector<std::string> legs = m.row_legs;
    legs.insert(legs.end(), m.col_legs.begin(), m.col_legs.end());
    std::vector<std::size_t> shape = m.row_dims;
    shape.insert(shape.end(), m.col_dims.begin(), m.col_dims.end());
    Tensor t(std::move(shape), std::move(legs), m.data);
    return m.source_legs.empty() ? t : permute(t, m.source_legs);
}

MatrixView matmul(const MatrixView &a, const MatrixView &b) {
    if (a.cols != b.rows) throw TensorError("matmul inner dimension mismatch");
    RowMat c = as_eigen(a) * as_eigen(b);
    return from_eigen(c, a, b);
}

MatrixView adjoint(const MatrixView &m) {
    RowMat c = as_eigen(m).adjoint();
    MatrixView out;
    out.rows = m.cols;
    out.cols = m.rows;
    out.row_legs = m.col_legs;
    out.row_dims = m.col_dims;
    out.col_legs = m.row_legs;
    out.col_dims = m.row_dims;
    out.source_legs = out.row_legs;
    out.source_legs.insert(out.source_legs.end(), out.col_legs.begin(), out.col_legs.end());
    out.data.assign(c.data(), c.data() + c.size());
    return out;
}

MatrixView identity_matrix(std::size_t n) {
    std::vector<cplx> d(n * n);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
    return MatrixView::from_rows(n, n, std::move(d));
}

double unitarity_defect(const MatrixView &m) {
    if (!m.square()) throw TensorError("unitarity_defect needs a square matrix");
    RowMat g = as_eigen(m) * as_eigen(m).adjoint();
    g -= RowMat::Identity(g.rows(), g.cols());
    return g.cwiseAbs().maxCoeff();
}

std::pair<double, double> gram_identity_fit(const MatrixView &m) {
    RowMat g = as_eigen(m).adjoint() * as_eigen(m);
    double c = g.diagonal().real().mean();
    g -= c * RowMat::Identity(g.rows(), g.cols());
    return {g.cwiseAbs().maxCoeff(), c};
}

EigenDecomposition eigendecompose(const MatrixView &m, double tol) {
    if (!m.square()) throw TensorError("eigendecompose needs a square matrix");
    const auto n = static_cast<Eigen::Index>(m.rows);
    Eigen::MatrixXcd a = as_eigen(m);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, true);
    if (solver.info() != Eigen::Success) throw EigenSolverError("complex eigensolver did not converge");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const auto &vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        double ai = std::abs(vals[i]), aj = std::abs(vals[j]);
        if (ai != aj) return ai > aj;
        return std::arg(vals[i]) < std::arg(vals[j]);
    });

    EigenDecomposition out;
    out.dimension = m.rows;
    out.eigenvalues.reserve(m.rows);
    out.eigenvectors.reserve(m.rows * m.rows);
    for (Eigen::Index idx : order) {
        cplx lambda = vals[idx];
        Eigen::VectorXcd v = solver.eigenvectors().col(idx);
        double norm = v.norm();
        if (norm > 0) v /= norm;
        double r = (a * v - lambda * v).norm();
        out.residual = std::max(out.residual, r);
        out.eigenvalues.push_back(lambda);
        for (Eigen::Index k = 0; k < n; ++k) out.eigenvectors.push_back(v[k]);
    }
    if (!(out.residual <= tol)) {
        throw EigenSolverError("eigen residual " + std::to_string(out.residual) + " exceeds tolerance");
    }
    return out;
}

double hermiticity_defect(const MatrixView &m) {
    if (!m.square()) throw TensorError("hermiticity check needs a square matrix");
    return (as_eigen(m) - as_eigen(m).adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> hermitian_eigenvalues(const MatrixView &m, double herm_tol) {
    double defect = hermiticity_defect(m);
    if (defect > herm_tol) throw TensorError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    Eigen::MatrixXcd a = as_eigen(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw EigenSolverError("Hermitian eigensolver did not converge");
    const auto &ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace hymera
