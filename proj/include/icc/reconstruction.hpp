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

#ifndef ICC_RECONSTRUCTION_HPP
#define ICC_RECONSTRUCTION_HPP

#include <vector>

#include <Eigen/Core>

#include "icc/cuboid.hpp"
#include "icc/pipeline.hpp"

namespace icc {

/// A compressed image: per channel the final-stage coefficients and the
/// brightness gap needed to finish the reconstruction without the original.
struct CompressedRecord {
    struct Channel {
        double brightness_gap = 0.0;
        Eigen::VectorXd coefficients;

        friend bool operator==(const Channel &, const Channel &) = default;
    };
    std::vector<Channel> channels;

    friend bool operator==(const CompressedRecord &, const CompressedRecord &) = default;
};

/// Mean of (original - raw_recon) over all entries.
double brightness_gap(const Cuboid &original, const Cuboid &raw_recon);

/// Histogram equalization onto [0, 255].
///
/// Inputs are clamped to [0, 255] and binned to the nearest of `levels`
/// evenly spaced values; a bin with cumulative fraction c maps to
/// round(c * (levels - 1)) * 255 / (levels - 1). Outputs therefore sit on
/// the same level grid, which makes the mapping idempotent.
Cuboid equalize_histogram(const Cuboid &img, int levels = 256);

/// equalize_histogram(clamp(raw + h, 0, 255)).
Cuboid finalize_reconstruction(const Cuboid &raw, double h);

/// 100 * sqrt(sum (a - b)^2) / count with intensities scaled by 1/255.
double percent_deviation(const Cuboid &original, const Cuboid &recovered);

/// Same metric over all planes of an image.
double percent_deviation(const Image &original, const Image &recovered);

/// (I * J) / K^P.
double compression_ratio(const PipelineSpec &spec);

/// Runs forward + inverse and records the brightness gap of each channel.
CompressedRecord compress(const TransformModel &model, const Image &image);

/// Rebuilds a viewable image from a record (inverse + finalize per channel).
Image decompress(const TransformModel &model, const CompressedRecord &record);

} // namespace icc

#endif // ICC_RECONSTRUCTION_HPP
