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

#ifndef ICC_WORKFLOW_HPP
#define ICC_WORKFLOW_HPP

#include <string>
#include <vector>

#include "icc/classifier.hpp"
#include "icc/dataset.hpp"
#include "icc/pipeline.hpp"

namespace icc {

// Training and evaluation over already loaded (and preprocessed) images.

struct TrainResult {
    TransformModel transform;
    LdaModel classifier;
    std::size_t image_count = 0; // after augmentation
    double seconds = 0.0;
};

TrainResult train(const std::vector<LabeledImage> &set, const PipelineSpec &spec, bool augment);

struct Candidate {
    std::string label;
    double probability = 0.0;
};

struct Prediction {
    std::string truth;
    std::vector<Candidate> ranked; // best first, max(ks) entries
};

struct EvalResult {
    std::vector<std::size_t> ks;
    std::vector<double> topk_accuracy; // parallel to ks
    std::vector<Prediction> predictions;
    double seconds = 0.0;

    double accuracy() const;
};

/// Top-k accuracies for every k in `ks` (each clamped to the class count).
EvalResult evaluate(const TransformModel &transform, const LdaModel &classifier,
        const std::vector<LabeledImage> &set, std::vector<std::size_t> ks);

} // namespace icc

#endif // ICC_WORKFLOW_HPP
