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

#ifndef ICC_SYNTHETIC_HPP
#define ICC_SYNTHETIC_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "icc/dataset.hpp"

namespace icc {

/// Procedural "face-like" classes: each class is a fixed arrangement of
/// coloured Gaussian blobs; samples jitter blob positions and amplitudes
/// and add pixel noise.
struct BlobDatasetOptions {
    std::size_t classes = 10;
    std::size_t train_per_class = 50;
    std::size_t test_per_class = 20;
    std::size_t rows = 64;
    std::size_t cols = 64;
    std::size_t channels = 3;
    std::size_t blobs_per_class = 6;
    double position_jitter = 1.5; // pixels
    double amplitude_jitter = 0.08;
    double pixel_noise = 8.0;
    std::uint64_t seed = 7;
};

struct BlobDataset {
    std::vector<LabeledImage> train;
    std::vector<LabeledImage> test;
};

/// Raw images in [0, 255]; labels are "class00", "class01", ...
BlobDataset make_blob_dataset(const BlobDatasetOptions &opt);

/// Independent uniform pixels in [0, 255].
Image random_image(std::size_t rows, std::size_t cols, std::size_t channels, std::mt19937_64 &rng);

} // namespace icc

#endif // ICC_SYNTHETIC_HPP
