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

#include "icc/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "icc/error.hpp"

namespace icc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

PooledStatistics pooled_statistics(
        const MatrixXd &features, const std::vector<std::string> &labels) {
    if (static_cast<std::size_t>(features.cols()) != labels.size())
        throw Error(Errc::dim_mismatch,
                std::to_string(features.cols()) + " feature vectors but "
                        + std::to_string(labels.size()) + " labels");

    std::map<std::string, std::size_t> index;
    for (const auto &l : labels) {
        if (l.empty()) throw Error(Errc::invalid_argument, "empty class label");
        index.emplace(l, 0);
    }
    if (index.size() < 2)
        throw Error(Errc::single_class,
                "discriminant needs at least 2 classes, got " + std::to_string(index.size()));

    PooledStatistics st;
    for (auto &[label, idx] : index) {
        idx = st.labels.size();
        st.labels.push_back(label);
    }
    const auto classes = static_cast<Index>(st.labels.size());
    const Index dim = features.rows();
    st.counts.assign(st.labels.size(), 0);
    st.means = MatrixXd::Zero(classes, dim);

    std::vector<std::size_t> cls(labels.size());
    for (std::size_t n = 0; n < labels.size(); ++n) {
        cls[n] = index.at(labels[n]);
        ++st.counts[cls[n]];
        st.means.row(static_cast<Index>(cls[n])) += features.col(static_cast<Index>(n)).transpose();
    }
    for (Index m = 0; m < classes; ++m)
        st.means.row(m) /= static_cast<double>(st.counts[static_cast<std::size_t>(m)]);

    // sum_m (n_m/N) * (1/n_m) sum_{x in m} (x - mu_m)(x - mu_m)^T
    MatrixXd centered(dim, features.cols());
    for (std::size_t n = 0; n < labels.size(); ++n)
        centered.col(static_cast<Index>(n)) = features.col(static_cast<Index>(n))
                - st.means.row(static_cast<Index>(cls[n])).transpose();
    st.pooled_cov = centered * centered.transpose() / static_cast<double>(features.cols());
    st.pooled_cov = (0.5 * (st.pooled_cov + st.pooled_cov.transpose())).eval();
    return st;
}

void derive_discriminant(LdaModel &model) {
    const auto classes = static_cast<Index>(model.labels.size());
    Eigen::LLT<MatrixXd> llt(model.pooled_cov);
    if (llt.info() != Eigen::Success)
        throw Error(Errc::eigen_failure, "pooled covariance is not positive definite");

    model.priors.resize(classes);
    for (Index m = 0; m < classes; ++m)
        model.priors(m) = static_cast<double>(model.counts[static_cast<std::size_t>(m)])
                / static_cast<double>(model.total);

    const MatrixXd solved = llt.solve(model.means.transpose()); // D x M
    model.weights = solved.transpose();
    model.biases.resize(classes);
    for (Index m = 0; m < classes; ++m)
        model.biases(m) = -0.5 * model.means.row(m).dot(solved.col(m)) + std::log(model.priors(m));
}

namespace {

LdaModel fit_from_statistics(PooledStatistics st) {
    LdaModel model;
    model.labels = std::move(st.labels);
    model.counts = std::move(st.counts);
    model.total = std::accumulate(model.counts.begin(), model.counts.end(), std::uint32_t {0});
    model.means = std::move(st.means);

    const auto dim = static_cast<double>(model.means.cols());
    const double trace = st.pooled_cov.trace();
    model.ridge = trace > 0.0 ? 1e-6 * trace / dim : 1e-6;
    model.pooled_cov = std::move(st.pooled_cov);
    model.pooled_cov.diagonal().array() += model.ridge;

    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(model.pooled_cov, Eigen::EigenvaluesOnly);
    const VectorXd &ev = eig.eigenvalues();
    model.condition_number = ev(0) > 0.0 ? ev(ev.size() - 1) / ev(0)
                                         : std::numeric_limits<double>::infinity();

    derive_discriminant(model);
    return model;
}

} // namespace

LdaModel fit_lda(const MatrixXd &features, const std::vector<std::string> &labels) {
    return fit_from_statistics(pooled_statistics(features, labels));
}

LdaModel fit_lda(const MatrixXd &features, const std::vector<std::string> &labels,
        const std::vector<std::string> &classes) {
    for (const auto &c : classes)
        if (std::find(labels.begin(), labels.end(), c) == labels.end())
            throw Error(Errc::empty_class, "class '" + c + "' has no training samples");
    for (const auto &l : labels)
        if (std::find(classes.begin(), classes.end(), l) == classes.end())
            throw Error(Errc::invalid_argument, "label '" + l + "' is not a declared class");
    return fit_lda(features, labels);
}

VectorXd score(const LdaModel &model, const VectorXd &x) {
    if (x.size() != model.feature_dim())
        throw Error(Errc::dim_mismatch,
                "score: feature length " + std::to_string(x.size()) + ", model expects "
                        + std::to_string(model.feature_dim()));
    return model.weights * x + model.biases;
}

std::vector<std::size_t> ranking(const LdaModel &model, const VectorXd &x) {
    const VectorXd s = score(model, x);
    std::vector<std::size_t> order(model.labels.size());
    std::iota(order.begin(), order.end(), std::size_t {0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s(static_cast<Index>(a)) > s(static_cast<Index>(b));
    });
    return order;
}

std::size_t predict_index(const LdaModel &model, const VectorXd &x) {
    const VectorXd s = score(model, x);
    std::size_t best = 0;
    for (Index m = 1; m < s.size(); ++m)
        if (s(m) > s(static_cast<Index>(best))) best = static_cast<std::size_t>(m);
    return best;
}

const std::string &predict(const LdaModel &model, const VectorXd &x) {
    return model.labels[predict_index(model, x)];
}

VectorXd posterior(const LdaModel &model, const VectorXd &x) {
    const VectorXd s = score(model, x);
    VectorXd p = (s.array() - s.maxCoeff()).exp();
    return p / p.sum();
}

std::vector<std::pair<std::string, double>> top_k(
        const LdaModel &model, const VectorXd &x, std::size_t k) {
    if (k < 1 || k > model.labels.size())
        throw Error(Errc::k_out_of_range,
                "top_k: k=" + std::to_string(k) + " outside [1, "
                        + std::to_string(model.labels.size()) + "]");
    const VectorXd p = posterior(model, x);
    const auto order = ranking(model, x);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(k);
    for (std::size_t r = 0; r < k; ++r)
        out.emplace_back(model.labels[order[r]], p(static_cast<Index>(order[r])));
    return out;
}

} // namespace icc
