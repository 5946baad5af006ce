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

#ifndef ICC_CLASSIFIER_HPP
#define ICC_CLASSIFIER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace icc {

/// Gaussian MAP classifier with a shared (pooled) covariance.
///
/// With a common covariance the log-joint ln p(x|C_m)P(C_m) differs between
/// classes only by w_m x + b_m, where
///
///     w_m = mu_m^T S^-1,   b_m = -1/2 mu_m^T S^-1 mu_m + ln(n_m / N).
///
/// S is the prior-weighted pooled covariance plus a ridge of
/// 1e-6 * trace / D on the diagonal; the stored `pooled_cov` is that
/// regularized matrix, so the weights can be re-derived from the model.
struct LdaModel {
    std::vector<std::string> labels; // sorted; index order breaks ties
    std::vector<std::uint32_t> counts;
    std::uint32_t total = 0;
    Eigen::VectorXd priors;     // M
    Eigen::MatrixXd means;      // M x D, one row per class
    Eigen::MatrixXd pooled_cov; // D x D
    Eigen::MatrixXd weights;    // M x D
    Eigen::VectorXd biases;     // M

    /// Not serialized; filled by fit_lda.
    double ridge = 0.0;
    double condition_number = 0.0;

    Eigen::Index feature_dim() const { return means.cols(); }
    std::size_t class_count() const { return labels.size(); }

    friend bool operator==(const LdaModel &a, const LdaModel &b) {
        return a.labels == b.labels && a.counts == b.counts && a.total == b.total
                && a.priors == b.priors && a.means == b.means
                && a.pooled_cov == b.pooled_cov && a.weights == b.weights
                && a.biases == b.biases;
    }
};

/// Condition numbers above this are reported by the CLI as a warning.
inline constexpr double ill_conditioned_threshold = 1e12;

/// `features` holds one sample per column (D x N).
/// Errors: SingleClass, EmptyClass, DimMismatch.
LdaModel fit_lda(const Eigen::MatrixXd &features, const std::vector<std::string> &labels);

/// As above with an explicit class list; a listed class without samples
/// raises EmptyClass.
LdaModel fit_lda(const Eigen::MatrixXd &features, const std::vector<std::string> &labels,
        const std::vector<std::string> &classes);

/// Per-class means, counts and the pooled covariance before the ridge.
struct PooledStatistics {
    std::vector<std::string> labels;
    std::vector<std::uint32_t> counts;
    Eigen::MatrixXd means;      // M x D
    Eigen::MatrixXd pooled_cov; // D x D, sum_m (n_m / N) Sigma_m
};

PooledStatistics pooled_statistics(
        const Eigen::MatrixXd &features, const std::vector<std::string> &labels);

/// Rebuilds priors, weights and biases from labels, counts, means and the
/// (already regularized) pooled covariance. Used by fit_lda and the loader.
void derive_discriminant(LdaModel &model);

Eigen::VectorXd score(const LdaModel &model, const Eigen::VectorXd &x);

/// Index into model.labels of the best class; ties go to the lower index.
std::size_t predict_index(const LdaModel &model, const Eigen::VectorXd &x);

const std::string &predict(const LdaModel &model, const Eigen::VectorXd &x);

/// Softmax of the scores.
Eigen::VectorXd posterior(const LdaModel &model, const Eigen::VectorXd &x);

/// The k best classes with their posterior probabilities. Throws KOutOfRange.
std::vector<std::pair<std::string, double>> top_k(
        const LdaModel &model, const Eigen::VectorXd &x, std::size_t k);

/// Class indices in ranking order (descending score, ties by index).
std::vector<std::size_t> ranking(const LdaModel &model, const Eigen::VectorXd &x);

} // namespace icc

#endif // ICC_CLASSIFIER_HPP
