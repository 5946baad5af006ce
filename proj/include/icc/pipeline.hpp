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

#ifndef ICC_PIPELINE_HPP
#define ICC_PIPELINE_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "icc/cuboid.hpp"
#include "icc/pca.hpp"

namespace icc {

/// One transform stage. The local cuboid depth is not free: it is the
/// previous stage's retained count (1 for the image itself).
struct StageSpec {
    std::size_t block_rows = 0;
    std::size_t block_cols = 0;
    std::size_t retained = 0;

    friend bool operator==(const StageSpec &, const StageSpec &) = default;
};

struct PipelineSpec {
    std::size_t rows = 0; // I
    std::size_t cols = 0; // J
    std::size_t channels = 1;
    std::vector<StageSpec> stages;

    std::size_t final_retained() const { return stages.empty() ? 0 : stages.back().retained; }
    std::size_t feature_dim() const { return channels * final_retained(); }

    /// Global cuboid dims after `stage` stages (0 = input image).
    Dims stage_dims(std::size_t stage) const;

    friend bool operator==(const PipelineSpec &, const PipelineSpec &) = default;
};

struct SpecViolation {
    std::size_t stage = 0; // 1-based; 0 for whole-pipeline problems
    std::string message;
};

/// Returns every violation of the tiling and retention constraints; an
/// empty result means the spec is usable.
std::vector<SpecViolation> validate_spec(const PipelineSpec &spec);

/// Spec text format:
///
///     # comment
///     dims I J channels C
///     l_i l_j retained
///     ...
///
/// Throws ParseError with the line number.
PipelineSpec parse_spec(const std::string &text);
PipelineSpec load_spec(const std::filesystem::path &path);
std::string format_spec(const PipelineSpec &spec);

/// Kernels of one stage for one channel: an I^p x J^p grid of blocks.
struct StageKernels {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<KernelBlock> blocks; // row-major

    const KernelBlock &at(std::size_t a, std::size_t b) const { return blocks[a * cols + b]; }

    friend bool operator==(const StageKernels &, const StageKernels &) = default;
};

/// Trained multi-stage transform. `kernels[c][p]` holds stage p + 1 of
/// colour channel c; channels are fitted independently.
struct TransformModel {
    PipelineSpec spec;
    std::vector<std::vector<StageKernels>> kernels;

    friend bool operator==(const TransformModel &, const TransformModel &) = default;
};

/// One image as a set of I x J x 1 planes (R, G, B order for colour).
struct Image {
    std::vector<Cuboid> planes;

    friend bool operator==(const Image &, const Image &) = default;
};

/// Final-stage coefficients, one K^P-vector per channel.
struct FeatureVector {
    std::vector<Eigen::VectorXd> channels;

    /// Channels concatenated in order.
    Eigen::VectorXd flat() const;
    static FeatureVector split(const Eigen::VectorXd &flat, std::size_t channels);
};

/// Fits all stages of every channel on the training images.
/// Errors: SpecInvalid, TooFewSamples, DimMismatch.
TransformModel fit(const std::vector<Image> &images, const PipelineSpec &spec);

FeatureVector forward(const TransformModel &model, const Image &image);

/// Batched forward; column n is the flat feature vector of images[n].
Eigen::MatrixXd forward_batch(const TransformModel &model, const std::vector<Image> &images);

/// Raw reconstruction (before brightness compensation and equalization).
Image inverse(const TransformModel &model, const FeatureVector &features);

std::vector<Image> inverse_batch(const TransformModel &model, const Eigen::MatrixXd &features);

} // namespace icc

#endif // ICC_PIPELINE_HPP
