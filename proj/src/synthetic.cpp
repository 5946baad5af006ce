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

#include "icc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace icc {

namespace {

struct Blob {
    double row = 0.0;
    double col = 0.0;
    double sigma = 1.0;
    std::vector<double> amplitude; // per channel
};

Image render(const std::vector<Blob> &blobs, const BlobDatasetOptions &opt, std::mt19937_64 &rng) {
    std::normal_distribution<double> jitter(0.0, opt.position_jitter);
    std::normal_distribution<double> gain(1.0, opt.amplitude_jitter);
    std::normal_distribution<double> noise(0.0, opt.pixel_noise);

    Image img;
    img.planes.assign(opt.channels, Cuboid({opt.rows, opt.cols, 1}));
    for (auto &p : img.planes)
        for (auto &v : p.values())
            v = 20.0;

    for (const auto &b : blobs) {
        const double r0 = b.row + jitter(rng);
        const double c0 = b.col + jitter(rng);
        const double g = gain(rng);
        const double inv = 1.0 / (2.0 * b.sigma * b.sigma);
        for (std::size_t i = 0; i < opt.rows; ++i) {
            for (std::size_t j = 0; j < opt.cols; ++j) {
                const double dr = static_cast<double>(i) - r0;
                const double dc = static_cast<double>(j) - c0;
                const double w = g * std::exp(-(dr * dr + dc * dc) * inv);
                for (std::size_t c = 0; c < opt.channels; ++c)
                    img.planes[c](i, j, 0) += w * b.amplitude[c];
            }
        }
    }
    for (auto &p : img.planes)
        for (auto &v : p.values())
            v = std::clamp(v + noise(rng), 0.0, 255.0);
    return img;
}

} // namespace

BlobDataset make_blob_dataset(const BlobDatasetOptions &opt) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> pos_r(0.15 * static_cast<double>(opt.rows),
            0.85 * static_cast<double>(opt.rows));
    std::uniform_real_distribution<double> pos_c(0.15 * static_cast<double>(opt.cols),
            0.85 * static_cast<double>(opt.cols));
    const double scale = static_cast<double>(std::min(opt.rows, opt.cols)) / 64.0;
    std::uniform_real_distribution<double> sigma(4.0 * scale, 10.0 * scale);
    std::uniform_real_distribution<double> amp(60.0, 180.0);

    BlobDataset ds;
    for (std::size_t k = 0; k < opt.classes; ++k) {
        std::vector<Blob> blobs(opt.blobs_per_class);
        for (auto &b : blobs) {
            b.row = pos_r(rng);
            b.col = pos_c(rng);
            b.sigma = sigma(rng);
            for (std::size_t c = 0; c < opt.channels; ++c)
                b.amplitude.push_back(amp(rng));
        }
        char label[32];
        std::snprintf(label, sizeof label, "class%02zu", k);
        for (std::size_t n = 0; n < opt.train_per_class; ++n)
            ds.train.push_back({label, render(blobs, opt, rng)});
        for (std::size_t n = 0; n < opt.test_per_class; ++n)
            ds.test.push_back({label, render(blobs, opt, rng)});
    }
    return ds;
}

Image random_image(std::size_t rows, std::size_t cols, std::size_t channels, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> pixel(0.0, 255.0);
    Image img;
    for (std::size_t c = 0; c < channels; ++c) {
        Cuboid p({rows, cols, 1});
        for (auto &v : p.values())
            v = pixel(rng);
        img.planes.push_back(std::move(p));
    }
    return img;
}

} // namespace icc
