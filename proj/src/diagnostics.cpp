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

#include "icc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "icc/error.hpp"

namespace icc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

CorrelationResult correlation_matrix(const MatrixXd &features) {
    const Index n = features.rows();
    const Index d = features.cols();
    if (n < 2)
        throw Error(Errc::too_few_samples,
                "correlation needs at least 2 samples, got " + std::to_string(n));

    const MatrixXd centered = features.rowwise() - features.colwise().mean();
    const MatrixXd cross = centered.transpose() * centered;

    CorrelationResult out;
    VectorXd norm(d);
    for (Index j = 0; j < d; ++j)
        norm(j) = std::sqrt(cross(j, j));
    // spread at roundoff level relative to the widest column counts as none
    const double floor = d > 0 ? 1e-10 * norm.maxCoeff() : 0.0;
    for (Index j = 0; j < d; ++j) {
        if (!(norm(j) > floor)) {
            norm(j) = 0.0;
            out.zero_variance.push_back(j);
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.matrix.resize(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            if (!(norm(i) > 0.0) || !(norm(j) > 0.0))
                out.matrix(i, j) = nan;
            else if (i == j)
                out.matrix(i, j) = 1.0;
            else
                out.matrix(i, j) = std::clamp(cross(i, j) / (norm(i) * norm(j)), -1.0, 1.0);
        }
    }
    return out;
}

double max_off_diagonal(const MatrixXd &corr, Index begin, Index end) {
    double worst = 0.0;
    for (Index i = begin; i < end; ++i)
        for (Index j = begin; j < end; ++j)
            if (i != j && !std::isnan(corr(i, j))) worst = std::max(worst, std::abs(corr(i, j)));
    return worst;
}

double max_off_diagonal(const MatrixXd &corr) {
    return max_off_diagonal(corr, 0, corr.rows());
}

bool FeatureMoments::within_gaussian_bands() const {
    return !degenerate && std::abs(skewness) <= 4.0 * skewness_se
            && std::abs(excess_kurtosis) <= 4.0 * kurtosis_se;
}

namespace {

FeatureMoments column_moments(const VectorXd &col, const std::string &group, Index feature) {
    FeatureMoments m;
    m.group = group;
    m.feature = feature;
    m.count = static_cast<std::size_t>(col.size());
    const double n = static_cast<double>(col.size());

    m.mean = col.mean();
    const VectorXd c = col.array() - m.mean;
    const double m2 = c.squaredNorm() / n;
    m.stddev = std::sqrt(m2);
    m.skewness_se = std::sqrt(6.0 * n * (n - 1.0) / ((n - 2.0) * (n + 1.0) * (n + 3.0)));
    m.kurtosis_se = 2.0 * m.skewness_se * std::sqrt((n * n - 1.0) / ((n - 3.0) * (n + 5.0)));

    if (!(m.stddev > 1e-12 * std::max(1.0, std::abs(m.mean)))) {
        m.degenerate = true;
        return m;
    }
    const double m3 = c.array().cube().sum() / n;
    const double m4 = c.array().square().square().sum() / n;
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;

    m.hist_lo = col.minCoeff();
    m.hist_hi = col.maxCoeff();
    m.histogram.assign(gaussianity_bins, 0);
    const double width = (m.hist_hi - m.hist_lo) / static_cast<double>(gaussianity_bins);
    for (Index i = 0; i < col.size(); ++i) {
        auto b = static_cast<std::size_t>((col(i) - m.hist_lo) / width);
        ++m.histogram[std::min(b, gaussianity_bins - 1)];
    }
    return m;
}

void append_group(std::vector<FeatureMoments> &out, const MatrixXd &rows,
        const std::string &group) {
    if (rows.rows() < 8)
        throw Error(Errc::group_too_small,
                "group '" + group + "' has " + std::to_string(rows.rows())
                        + " samples; at least 8 are needed");
    for (Index j = 0; j < rows.cols(); ++j)
        out.push_back(column_moments(rows.col(j), group, j));
}

} // namespace

std::vector<FeatureMoments> gaussianity_report(
        const MatrixXd &features, const std::optional<std::vector<std::string>> &labels) {
    std::vector<FeatureMoments> out;
    if (!labels) {
        append_group(out, features, "all");
        return out;
    }
    if (labels->size() != static_cast<std::size_t>(features.rows()))
        throw Error(Errc::dim_mismatch, "gaussianity_report: one label per row required");

    std::map<std::string, std::vector<Index>> groups;
    for (std::size_t i = 0; i < labels->size(); ++i)
        groups[(*labels)[i]].push_back(static_cast<Index>(i));
    for (const auto &[label, idx] : groups)
        append_group(out, features(idx, Eigen::all), label);
    return out;
}

std::vector<SpectrumEntry> eigenspectrum_report(const TransformModel &model) {
    std::vector<SpectrumEntry> out;
    for (std::size_t c = 0; c < model.kernels.size(); ++c) {
        for (std::size_t p = 0; p < model.kernels[c].size(); ++p) {
            const auto &stage = model.kernels[c][p];
            for (std::size_t q = 0; q < stage.blocks.size(); ++q) {
                const auto &blk = stage.blocks[q];
                SpectrumEntry e;
                e.channel = c;
                e.stage = p + 1;
                e.block_row = q / stage.cols;
                e.block_col = q % stage.cols;
                e.eigenvalues = blk.eigenvalues;
                e.retained = retained_variance(blk);
                std::optional<double> total = blk.total_variance;
                if (!total && blk.retained_dim == blk.input_dim) total = e.retained;
                if (total) e.fraction = *total > 0.0 ? std::min(1.0, e.retained / *total) : 1.0;
                out.push_back(std::move(e));
            }
        }
    }
    return out;
}

void write_correlation_csv(std::ostream &out, const CorrelationResult &corr) {
    out << "i,j,rho\n";
    out.precision(17);
    for (Index i = 0; i < corr.matrix.rows(); ++i)
        for (Index j = 0; j < corr.matrix.cols(); ++j)
            out << i << ',' << j << ',' << corr.matrix(i, j) << '\n';
}

void write_gaussianity_csv(std::ostream &out, const std::vector<FeatureMoments> &report) {
    out << "group,feature,count,mean,std,skewness,excess_kurtosis,skewness_se,kurtosis_se,"
           "degenerate,within_bands,hist_lo,hist_hi,histogram\n";
    out.precision(10);
    for (const auto &m : report) {
        out << m.group << ',' << m.feature << ',' << m.count << ',' << m.mean << ','
            << m.stddev << ',';
        if (m.degenerate)
            out << ",,";
        else
            out << m.skewness << ',' << m.excess_kurtosis << ',';
        out << m.skewness_se << ',' << m.kurtosis_se << ',' << (m.degenerate ? 1 : 0) << ','
            << (m.within_gaussian_bands() ? 1 : 0) << ',' << m.hist_lo << ',' << m.hist_hi
            << ',';
        for (std::size_t b = 0; b < m.histogram.size(); ++b)
            out << (b ? ";" : "") << m.histogram[b];
        out << '\n';
    }
}

void write_eigenspectrum_csv(std::ostream &out, const std::vector<SpectrumEntry> &report) {
    out << "channel,stage,block_row,block_col,retained_dim,retained_variance,fraction,"
           "eigenvalues\n";
    out.precision(12);
    for (const auto &e : report) {
        out << e.channel << ',' << e.stage << ',' << e.block_row << ',' << e.block_col << ','
            << e.eigenvalues.size() << ',' << e.retained << ',';
        if (e.fraction) out << *e.fraction;
        out << ',';
        for (Index k = 0; k < e.eigenvalues.size(); ++k)
            out << (k ? ";" : "") << e.eigenvalues(k);
        out << '\n';
    }
}

} // namespace icc
