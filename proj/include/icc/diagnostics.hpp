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

#ifndef ICC_DIAGNOSTICS_HPP
#define ICC_DIAGNOSTICS_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "icc/pipeline.hpp"

namespace icc {

/// Pearson correlation of the columns of an N x D feature matrix.
///
/// Entries involving a zero-variance column are set to NaN and the column is
/// listed in `zero_variance`; such entries are skipped by max_off_diagonal.
struct CorrelationResult {
    Eigen::MatrixXd matrix;
    std::vector<Eigen::Index> zero_variance;
};

/// Throws TooFewSamples when N < 2.
CorrelationResult correlation_matrix(const Eigen::MatrixXd &features);

/// Largest |rho_ij| over i != j within [begin, end), ignoring NaN entries.
double max_off_diagonal(const Eigen::MatrixXd &corr, Eigen::Index begin, Eigen::Index end);
double max_off_diagonal(const Eigen::MatrixXd &corr);

struct FeatureMoments {
    std::string group; // class label, or "all"
    Eigen::Index feature = 0;
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0; // population (1/N) standard deviation
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double skewness_se = 0.0;
    double kurtosis_se = 0.0;
    bool degenerate = false; // zero variance; no moments or fit emitted
    double hist_lo = 0.0;
    double hist_hi = 0.0;
    std::vector<std::size_t> histogram;

    /// |skew| <= 4 SE and |excess kurtosis| <= 4 SE.
    bool within_gaussian_bands() const;
};

inline constexpr std::size_t gaussianity_bins = 64;

/// Per-feature moment statistics of an N x D feature matrix, optionally per
/// class. Throws GroupTooSmall when a reported group has fewer than 8 rows.
std::vector<FeatureMoments> gaussianity_report(const Eigen::MatrixXd &features,
        const std::optional<std::vector<std::string>> &labels = std::nullopt);

struct SpectrumEntry {
    std::size_t channel = 0;
    std::size_t stage = 0; // 1-based
    std::size_t block_row = 0;
    std::size_t block_col = 0;
    Eigen::VectorXd eigenvalues;
    double retained = 0.0;
    std::optional<double> fraction; // retained / total, when the total is known
};

/// Fractions are known for freshly fitted blocks and for any block that
/// keeps its full spectrum (retained_dim == input_dim).
std::vector<SpectrumEntry> eigenspectrum_report(const TransformModel &model);

void write_correlation_csv(std::ostream &out, const CorrelationResult &corr);
void write_gaussianity_csv(std::ostream &out, const std::vector<FeatureMoments> &report);
void write_eigenspectrum_csv(std::ostream &out, const std::vector<SpectrumEntry> &report);

} // namespace icc

#endif // ICC_DIAGNOSTICS_HPP
