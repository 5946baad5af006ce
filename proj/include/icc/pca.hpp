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

#ifndef ICC_PCA_HPP
#define ICC_PCA_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace icc {

/// Truncated PCA basis of one local-cuboid position.
///
/// Columns of `basis` are unit eigenvectors of the (1/N, centered) sample
/// covariance ordered by descending eigenvalue. `selected_indices` records
/// the position of every retained eigenpair in the full spectrum as listed
/// in ascending eigenvalue order, i.e. the order a symmetric eigensolver
/// reports it; equal eigenvalues keep the lower index first.
///
/// Sign convention: the first component of each column whose magnitude
/// exceeds 1e-12 is positive.
struct KernelBlock {
    Eigen::Index input_dim = 0;
    Eigen::Index retained_dim = 0;
    Eigen::VectorXd mean;        // input_dim
    Eigen::VectorXd eigenvalues; // retained_dim, descending, >= 0
    Eigen::MatrixXd basis;       // input_dim x retained_dim
    std::vector<std::uint32_t> selected_indices;

    /// Trace of the sample covariance. Known right after fitting; not part of
    /// the model file, so absent on loaded kernels.
    std::optional<double> total_variance;

    friend bool operator==(const KernelBlock &a, const KernelBlock &b) {
        return a.input_dim == b.input_dim && a.retained_dim == b.retained_dim
                && a.mean == b.mean && a.eigenvalues == b.eigenvalues
                && a.basis == b.basis && a.selected_indices == b.selected_indices;
    }
};

/// Fits a block from samples stored as the columns of `samples` (V x N).
///
/// Errors: TooFewSamples (N < 2), KTooLarge (K > V), InvalidArgument (K < 1),
/// EigenFailure.
KernelBlock fit_block(const Eigen::MatrixXd &samples, Eigen::Index retained);

KernelBlock fit_block(const std::vector<Eigen::VectorXd> &samples, Eigen::Index retained);

/// g = B^T f. The mean is not subtracted.
Eigen::VectorXd project(const KernelBlock &block, const Eigen::VectorXd &f);

/// Column-wise project for a V x N batch.
Eigen::MatrixXd project_batch(const KernelBlock &block, const Eigen::MatrixXd &f);

/// f = pinv(B^T) g, which is B g for orthonormal columns.
Eigen::VectorXd backproject(const KernelBlock &block, const Eigen::VectorXd &g);

Eigen::MatrixXd backproject_batch(const KernelBlock &block, const Eigen::MatrixXd &g);

double retained_variance(const KernelBlock &block);

/// max |B^T B - I|
double orthonormality_error(const KernelBlock &block);

} // namespace icc

#endif // ICC_PCA_HPP
