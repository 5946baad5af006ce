/*******************************************************************************
* Copyright 2026 The ICC Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/

#include "icc/pca.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "icc/error.hpp"

namespace icc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double sign_tolerance = 1e-12;

// Full spectrum in ascending eigenvalue order. Columns of `vectors` that are
// never selected may be left unset (see spectrum_from_svd).
struct Spectrum {
    VectorXd values;
    MatrixXd vectors;
};

Spectrum spectrum_from_covariance(const MatrixXd &centered) {
    const auto n = static_cast<double>(centered.cols());
    MatrixXd cov = centered * centered.transpose() / n;
    cov = (0.5 * (cov + cov.transpose())).eval();

    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw Error(Errc::eigen_failure, "symmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Fewer samples than dimensions: the covariance has rank < N, so its nonzero
// eigenpairs come from a thin SVD of the centered data, and the null space
// is filled with an orthonormal completion (eigenvalue 0). Only the first
// `null_needed` completion vectors are materialized.
Spectrum spectrum_from_svd(const MatrixXd &centered, Index retained) {
    const Index dim = centered.rows();
    const auto n = static_cast<double>(centered.cols());

    Eigen::BDCSVD<MatrixXd> svd(centered, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success)
        throw Error(Errc::eigen_failure, "SVD of centered samples did not converge");
    const VectorXd &sv = svd.singularValues();

    const double tol = sv.size() > 0
            ? sv(0) * static_cast<double>(std::max(dim, centered.cols()))
                    * std::numeric_limits<double>::epsilon()
            : 0.0;
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > tol && sv(rank) > 0.0)
        ++rank;

    const Index nulls = dim - rank;
    const Index null_needed = std::clamp<Index>(retained - rank, 0, nulls);

    Spectrum s;
    s.values = VectorXd::Zero(dim);
    s.vectors = MatrixXd::Zero(dim, dim);
    for (Index r = 0; r < rank; ++r) {
        const Index slot = dim - 1 - r; // ascending order: largest last
        s.values(slot) = sv(r) * sv(r) / n;
        s.vectors.col(slot) = svd.matrixU().col(r);
    }

    if (null_needed > 0) {
        MatrixXd range = svd.matrixU().leftCols(rank);
        MatrixXd pick = MatrixXd::Zero(dim, null_needed);
        for (Index t = 0; t < null_needed; ++t)
            pick(rank + t, t) = 1.0;
        if (rank > 0) {
            Eigen::HouseholderQR<MatrixXd> qr(range);
            pick = qr.householderQ() * pick;
        }
        s.vectors.leftCols(null_needed) = pick;
    }
    return s;
}

} // namespace

KernelBlock fit_block(const MatrixXd &samples, Index retained) {
    const Index dim = samples.rows();
    const Index count = samples.cols();
    if (count < 2)
        throw Error(Errc::too_few_samples,
                "PCA needs at least 2 samples, got " + std::to_string(count));
    if (retained < 1)
        throw Error(Errc::invalid_argument,
                "retained dimension must be positive, got " + std::to_string(retained));
    if (retained > dim)
        throw Error(Errc::k_too_large,
                "cannot retain " + std::to_string(retained) + " of "
                        + std::to_string(dim) + " components");

    KernelBlock block;
    block.input_dim = dim;
    block.retained_dim = retained;
    block.mean = samples.rowwise().mean();
    const MatrixXd centered = samples.colwise() - block.mean;
    block.total_variance = centered.squaredNorm() / static_cast<double>(count);

    const Spectrum spec = count >= dim ? spectrum_from_covariance(centered)
                                       : spectrum_from_svd(centered, retained);

    std::vector<Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), Index {0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return spec.values(a) > spec.values(b);
    });

    block.eigenvalues.resize(retained);
    block.basis.resize(dim, retained);
    block.selected_indices.resize(static_cast<std::size_t>(retained));
    for (Index c = 0; c < retained; ++c) {
        const Index t = order[static_cast<std::size_t>(c)];
        block.selected_indices[static_cast<std::size_t>(c)] = static_cast<std::uint32_t>(t);
        block.eigenvalues(c) = std::max(spec.values(t), 0.0);
        auto col = block.basis.col(c);
        col = spec.vectors.col(t);
        for (Index r = 0; r < dim; ++r) {
            if (std::abs(col(r)) > sign_tolerance) {
                if (col(r) < 0.0) col = -col;
                break;
            }
        }
    }
    return block;
}

KernelBlock fit_block(const std::vector<VectorXd> &samples, Index retained) {
    if (samples.empty())
        throw Error(Errc::too_few_samples, "PCA needs at least 2 samples, got 0");
    const Index dim = samples.front().size();
    MatrixXd m(dim, static_cast<Index>(samples.size()));
    for (std::size_t n = 0; n < samples.size(); ++n) {
        if (samples[n].size() != dim)
            throw Error(Errc::dim_mismatch,
                    "sample " + std::to_string(n) + " has length "
                            + std::to_string(samples[n].size()) + ", expected "
                            + std::to_string(dim));
        m.col(static_cast<Index>(n)) = samples[n];
    }
    return fit_block(m, retained);
}

VectorXd project(const KernelBlock &block, const VectorXd &f) {
    if (f.size() != block.input_dim)
        throw Error(Errc::dim_mismatch,
                "project: vector length " + std::to_string(f.size()) + ", block expects "
                        + std::to_string(block.input_dim));
    return block.basis.transpose() * f;
}

MatrixXd project_batch(const KernelBlock &block, const MatrixXd &f) {
    if (f.rows() != block.input_dim)
        throw Error(Errc::dim_mismatch,
                "project: batch rows " + std::to_string(f.rows()) + ", block expects "
                        + std::to_string(block.input_dim));
    return block.basis.transpose() * f;
}

VectorXd backproject(const KernelBlock &block, const VectorXd &g) {
    if (g.size() != block.retained_dim)
        throw Error(Errc::dim_mismatch,
                "backproject: vector length " + std::to_string(g.size())
                        + ", block retains " + std::to_string(block.retained_dim));
    return block.basis * g;
}

MatrixXd backproject_batch(const KernelBlock &block, const MatrixXd &g) {
    if (g.rows() != block.retained_dim)
        throw Error(Errc::dim_mismatch,
                "backproject: batch rows " + std::to_string(g.rows())
                        + ", block retains " + std::to_string(block.retained_dim));
    return block.basis * g;
}

double retained_variance(const KernelBlock &block) {
    // plain left-to-right sum, largest first
    double total = 0.0;
    for (Eigen::Index i = 0; i < block.eigenvalues.size(); ++i)
        total += block.eigenvalues(i);
    return total;
}

double orthonormality_error(const KernelBlock &block) {
    const MatrixXd gram = block.basis.transpose() * block.basis;
    return (gram - MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

} // namespace icc
