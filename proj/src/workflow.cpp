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

#include "icc/workflow.hpp"

#include <algorithm>
#include <chrono>

#include "icc/error.hpp"

namespace icc {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

TrainResult train(const std::vector<LabeledImage> &set, const PipelineSpec &spec, bool augment) {
    const auto t0 = Clock::now();
    const auto &data = augment ? augment_flips(set) : set;

    std::vector<Image> images;
    std::vector<std::string> labels;
    images.reserve(data.size());
    labels.reserve(data.size());
    for (const auto &li : data) {
        images.push_back(li.image);
        labels.push_back(li.label);
    }

    TrainResult r;
    r.transform = fit(images, spec);
    r.classifier = fit_lda(forward_batch(r.transform, images), labels);
    r.image_count = data.size();
    r.seconds = since(t0);
    return r;
}

double EvalResult::accuracy() const {
    if (predictions.empty()) return 0.0;
    std::size_t hit = 0;
    for (const auto &p : predictions)
        hit += !p.ranked.empty() && p.ranked.front().label == p.truth;
    return static_cast<double>(hit) / static_cast<double>(predictions.size());
}

EvalResult evaluate(const TransformModel &transform, const LdaModel &classifier,
        const std::vector<LabeledImage> &set, std::vector<std::size_t> ks) {
    if (static_cast<Eigen::Index>(transform.spec.feature_dim()) != classifier.feature_dim())
        throw Error(Errc::dim_mismatch, "classifier and transform feature dims differ");
    const auto t0 = Clock::now();

    if (ks.empty()) ks.push_back(1);
    for (auto &k : ks)
        k = std::clamp<std::size_t>(k, 1, classifier.class_count());
    const std::size_t depth = *std::max_element(ks.begin(), ks.end());

    std::vector<Image> images;
    images.reserve(set.size());
    for (const auto &li : set)
        images.push_back(li.image);
    const Eigen::MatrixXd features = forward_batch(transform, images);

    EvalResult r;
    r.ks = ks;
    r.topk_accuracy.assign(ks.size(), 0.0);
    for (std::size_t n = 0; n < set.size(); ++n) {
        Prediction p;
        p.truth = set[n].label;
        for (auto &[label, prob] : top_k(classifier, features.col(static_cast<Eigen::Index>(n)), depth))
            p.ranked.push_back({label, prob});
        const auto hit = std::find_if(p.ranked.begin(), p.ranked.end(),
                [&](const Candidate &c) { return c.label == p.truth; });
        const auto rank = static_cast<std::size_t>(hit - p.ranked.begin()); // 0-based
        for (std::size_t i = 0; i < ks.size(); ++i)
            if (hit != p.ranked.end() && rank < ks[i]) r.topk_accuracy[i] += 1.0;
        r.predictions.push_back(std::move(p));
    }
    if (!set.empty())
        for (auto &a : r.topk_accuracy)
            a /= static_cast<double>(set.size());
    r.seconds = since(t0);
    return r;
}

} // namespace icc
