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

#include "icc/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "icc/error.hpp"

namespace icc {

namespace {

void require_same_dims(const Cuboid &a, const Cuboid &b, const char *what) {
    if (a.dims() != b.dims())
        throw Error(Errc::dim_mismatch, std::string(what) + ": cuboid dims differ");
}

} // namespace

double brightness_gap(const Cuboid &original, const Cuboid &raw_recon) {
    require_same_dims(original, raw_recon, "brightness_gap");
    double sum = 0.0;
    auto a = original.values();
    auto b = raw_recon.values();
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += a[i] - b[i];
    return sum / static_cast<double>(a.size());
}

Cuboid equalize_histogram(const Cuboid &img, int levels) {
    if (levels < 2)
        throw Error(Errc::invalid_argument, "equalize_histogram needs at least 2 levels");
    const double top = static_cast<double>(levels - 1);
    const double step = 255.0 / top;

    auto src = img.values();
    std::vector<int> bins(src.size());
    std::vector<std::size_t> hist(static_cast<std::size_t>(levels), 0);
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double v = std::clamp(src[i], 0.0, 255.0);
        const int b = static_cast<int>(std::lround(v / step));
        bins[i] = b;
        ++hist[static_cast<std::size_t>(b)];
    }

    std::vector<double> map(static_cast<std::size_t>(levels));
    std::size_t cumulative = 0;
    const auto total = static_cast<double>(src.size());
    for (std::size_t b = 0; b < hist.size(); ++b) {
        cumulative += hist[b];
        map[b] = std::round(static_cast<double>(cumulative) / total * top) * step;
    }

    Cuboid out(img.dims());
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[i] = map[static_cast<std::size_t>(bins[i])];
    return out;
}

Cuboid finalize_reconstruction(const Cuboid &raw, double h) {
    Cuboid shifted(raw.dims());
    auto src = raw.values();
    auto dst = shifted.values();
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[i] = std::clamp(src[i] + h, 0.0, 255.0);
    return equalize_histogram(shifted);
}

double percent_deviation(const Cuboid &original, const Cuboid &recovered) {
    require_same_dims(original, recovered, "percent_deviation");
    double sq = 0.0;
    auto a = original.values();
    auto b = recovered.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (a[i] - b[i]) / 255.0;
        sq += d * d;
    }
    return 100.0 * std::sqrt(sq) / static_cast<double>(a.size());
}

double percent_deviation(const Image &original, const Image &recovered) {
    if (original.planes.size() != recovered.planes.size())
        throw Error(Errc::dim_mismatch, "percent_deviation: channel counts differ");
    double sq = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < original.planes.size(); ++c) {
        require_same_dims(original.planes[c], recovered.planes[c], "percent_deviation");
        auto a = original.planes[c].values();
        auto b = recovered.planes[c].values();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = (a[i] - b[i]) / 255.0;
            sq += d * d;
        }
        count += a.size();
    }
    return 100.0 * std::sqrt(sq) / static_cast<double>(count);
}

double compression_ratio(const PipelineSpec &spec) {
    if (spec.final_retained() == 0)
        throw Error(Errc::spec_invalid, "compression_ratio: pipeline has no stages");
    return static_cast<double>(spec.rows * spec.cols)
            / static_cast<double>(spec.final_retained());
}

CompressedRecord compress(const TransformModel &model, const Image &image) {
    const FeatureVector fv = forward(model, image);
    const Image raw = inverse(model, fv);
    CompressedRecord rec;
    for (std::size_t c = 0; c < fv.channels.size(); ++c)
        rec.channels.push_back({brightness_gap(image.planes[c], raw.planes[c]), fv.channels[c]});
    return rec;
}

Image decompress(const TransformModel &model, const CompressedRecord &record) {
    const std::size_t per = model.spec.final_retained();
    if (record.channels.size() != model.spec.channels)
        throw Error(Errc::dim_mismatch,
                "record has " + std::to_string(record.channels.size())
                        + " channels, model expects " + std::to_string(model.spec.channels));
    FeatureVector fv;
    for (const auto &ch : record.channels) {
        if (static_cast<std::size_t>(ch.coefficients.size()) != per)
            throw Error(Errc::dim_mismatch,
                    "record holds " + std::to_string(ch.coefficients.size())
                            + " coefficients per channel, model expects "
                            + std::to_string(per));
        fv.channels.push_back(ch.coefficients);
    }
    Image raw = inverse(model, fv);
    for (std::size_t c = 0; c < raw.planes.size(); ++c)
        raw.planes[c] = finalize_reconstruction(raw.planes[c], record.channels[c].brightness_gap);
    return raw;
}

} // namespace icc
