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

#ifndef HYMERA_TENSOR_H
#define HYMERA_TENSOR_H

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hymera {

using cplx = std::complex<double>;

/// Raised when a tensor operation is handed inconsistent legs, shapes or
/// matrices. Carries a human-readable message only.
struct TensorError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when the eigensolver fails to converge or its residual exceeds the
/// caller's tolerance.
struct EigenSolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense complex tensor with named legs.
///
/// Entries are stored row-major over the leg ordering: the leftmost leg varies
/// slowest. Leg labels are unique within one tensor and every dimension is at
/// least one. Instances are immutable after construction; all operations
/// return new values.
class Tensor {
   public:
    Tensor() = default;
    Tensor(std::vector<std::size_t> shape, std::vector<std::string> legs, std::vector<cplx> data);

    /// Zero-filled tensor.
    static Tensor zeros(std::vector<std::size_t> shape, std::vector<std::string> legs);
    /// Identity on a pair of legs of equal dimension (legs ordered out, in).
    static Tensor identity(std::size_t dim, std::string out_leg, std::string in_leg);
    /// Rank-0 tensor holding one value.
    static Tensor scalar(cplx value);

    const std::vector<std::size_t> &shape() const { return shape_; }
    const std::vector<std::string> &legs() const { return legs_; }
    const std::vector<cplx> &data() const { return data_; }
    std::size_t rank() const { return legs_.size(); }
    std::size_t size() const { return data_.size(); }

    /// Position of a leg label; throws if absent.
    std::size_t leg_index(const std::string &leg) const;
    bool has_leg(const std::string &leg) const;
    std::size_t dim(const std::string &leg) const { return shape_[leg_index(leg)]; }

    /// Entry at a multi-index given in leg order.
    cplx at(std::span<const std::size_t> index) const;
    cplx at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    /// Same data with legs renamed positionally.
    Tensor with_legs(std::vector<std::string> legs) const;
    /// Same data with a single leg renamed.
    Tensor rename(const std::string &from, const std::string &to) const;

   private:
    std::vector<std::size_t> shape_;
    std::vector<std::string> legs_;
    std::vector<cplx> data_;
};

/// A tensor reshaped into a matrix by grouping its legs into rows and columns.
/// `source_legs` remembers the original leg order so the view can be undone.
struct MatrixView {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::string> row_legs;
    std::vector<std::string> col_legs;
    std::vector<std::size_t> row_dims;
    std::vector<std::size_t> col_dims;
    std::vector<std::string> source_legs;
    std::vector<cplx> data;  // row-major, rows * cols entries

    cplx operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool square() const { return rows == cols; }

    /// Plain square matrix with synthetic legs "r" and "c" (used for operators
    /// that do not originate from a labelled tensor).
    static MatrixView from_rows(std::size_t rows, std::size_t cols, std::vector<cplx> data);
};

/// Eigenpairs of a square matrix, sorted by descending |lambda| and then by
/// ascending phase so degenerate magnitudes come out in a fixed order.
struct EigenDecomposition {
    std::vector<cplx> eigenvalues;
    /// Column-major n x n: column i is the unit eigenvector of eigenvalue i.
    std::vector<cplx> eigenvectors;
    std::size_t dimension = 0;
    /// max_i ||M v_i - lambda_i v_i||_2 over the returned pairs.
    double residual = 0.0;

    std::vector<cplx> eigenvector(std::size_t i) const;
};

/// Contract legs of `x` with legs of `y`. The result carries the unpaired legs
/// of x followed by the unpaired legs of y, both in original order.
Tensor contract(const Tensor &x, const Tensor &y,
                const std::vector<std::pair<std::string, std::string>> &pairs);

/// Sum over pairs of legs of a single tensor.
Tensor trace(const Tensor &x, const std::vector<std::pair<std::string, std::string>> &pairs);

/// Reorder legs; `order` must be a permutation of x.legs().
Tensor permute(const Tensor &x, const std::vector<std::string> &order);

/// Merge adjacent-after-permutation legs into one leg; the fused leg takes the
/// position of the first listed leg and the listed legs vary row-major inside it.
Tensor fuse(const Tensor &x, const std::vector<std::string> &legs, const std::string &fused);

/// Split one leg into several legs whose dimensions multiply to the original.
Tensor split(const Tensor &x, const std::string &leg, const std::vector<std::string> &parts,
             const std::vector<std::size_t> &dims);

Tensor conj(const Tensor &x);
Tensor scaled(const Tensor &x, cplx factor);
/// Entry-wise a*x + b*y; legs of y are matched to x by label.
Tensor axpby(cplx a, const Tensor &x, cplx b, const Tensor &y);
/// Largest absolute entry-wise difference; legs of y are matched by label.
double max_abs_diff(const Tensor &x, const Tensor &y);
double frobenius_norm(const Tensor &x);

MatrixView matricize(const Tensor &x, const std::vector<std::string> &row_legs,
                     const std::vector<std::string> &col_legs);
Tensor dematricize(const MatrixView &m);

/// Dense products on matrix views. Legs of the result are taken from the
/// outer factors.
MatrixView matmul(const MatrixView &a, const MatrixView &b);
MatrixView adjoint(const MatrixView &m);
MatrixView identity_matrix(std::size_t n);

/// ||M M^dagger - I||_max for a square matrix.
double unitarity_defect(const MatrixView &m);
/// ||M^dagger M - c I||_max with c the mean diagonal of M^dagger M, and c itself.
std::pair<double, double> gram_identity_fit(const MatrixView &m);

/// General complex eigendecomposition; rejects results whose residual exceeds tol.
EigenDecomposition eigendecompose(const MatrixView &m, double tol);
/// Eigenvalues of a Hermitian matrix in ascending order; throws if the
/// Hermiticity defect exceeds herm_tol.
std::vector<double> hermitian_eigenvalues(const MatrixView &m, double herm_tol);
double hermiticity_defect(const MatrixView &m);

}  // namespace hymera

#endif
