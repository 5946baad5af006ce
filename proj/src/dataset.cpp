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

#include "icc/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "icc/error.hpp"
#include "icc/reconstruction.hpp"

namespace icc {

namespace fs = std::filesystem;

namespace {

std::string lower_ext(const fs::path &p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
            [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

bool supported_ext(const std::string &ext) {
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

// Splits one CSV record; fields may be double-quoted with "" escapes.
std::vector<std::string> split_csv(const std::string &line, std::size_t lineno) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else {
            fields.back() += ch;
        }
    }
    if (quoted)
        throw Error(Errc::parse_error,
                "manifest line " + std::to_string(lineno) + ": unterminated quote");
    return fields;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

Manifest parse_manifest(const std::string &text, const fs::path &base_dir) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::set<fs::path> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;

        auto fields = split_csv(line, lineno);
        if (!header_seen) {
            if (fields.size() != 2 || trim(fields[0]) != "path" || trim(fields[1]) != "label")
                throw Error(Errc::parse_error,
                        "manifest line " + std::to_string(lineno)
                                + ": expected header 'path,label'");
            header_seen = true;
            continue;
        }
        if (fields.size() != 2)
            throw Error(Errc::parse_error,
                    "manifest line " + std::to_string(lineno) + ": expected 2 fields, got "
                            + std::to_string(fields.size()));
        const std::string path = trim(fields[0]);
        const std::string label = trim(fields[1]);
        if (path.empty() || label.empty())
            throw Error(Errc::parse_error,
                    "manifest line " + std::to_string(lineno) + ": empty path or label");

        fs::path p(path);
        if (p.is_relative()) p = base_dir / p;
        p = p.lexically_normal();
        if (!seen.insert(p).second)
            throw Error(Errc::duplicate_path,
                    "manifest line " + std::to_string(lineno) + ": duplicate path " + path);
        m.entries.push_back({std::move(p), label});
    }
    if (!header_seen)
        throw Error(Errc::parse_error, "manifest line 1: expected header 'path,label'");
    return m;
}

Manifest load_manifest(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::missing_file, "cannot open manifest " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), path.parent_path());
}

Image load_image(const fs::path &path, std::size_t rows, std::size_t cols,
        std::size_t channels) {
    if (channels != 1 && channels != 3)
        throw Error(Errc::invalid_argument, "channels must be 1 or 3");
    if (!supported_ext(lower_ext(path)))
        throw Error(Errc::unsupported_format,
                "unsupported image format: " + path.string() + " (PNG, PGM or PPM expected)");
    if (!fs::exists(path)) throw Error(Errc::missing_file, "image not found: " + path.string());

    cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (raw.empty()) throw Error(Errc::decode_error, "cannot decode image " + path.string());

    cv::Mat img;
    const double scale = raw.depth() == CV_16U ? 1.0 / 257.0 : 1.0;
    if (raw.depth() != CV_8U && raw.depth() != CV_16U)
        throw Error(Errc::decode_error, "unsupported sample depth in " + path.string());
    raw.convertTo(img, CV_64F, scale);

    std::vector<cv::Mat> bgr;
    cv::split(img, bgr);
    if (bgr.size() == 4) bgr.pop_back(); // alpha
    if (bgr.size() != 1 && bgr.size() != 3)
        throw Error(Errc::decode_error,
                "unsupported channel count " + std::to_string(bgr.size()) + " in "
                        + path.string());
    if (channels == 1 && bgr.size() == 3) {
        // ITU-R BT.601 luma, as in OpenCV's BGR2GRAY
        cv::Mat grey = 0.114 * bgr[0] + 0.587 * bgr[1] + 0.299 * bgr[2];
        bgr.assign(1, grey);
    }
    cv::merge(bgr, img);

    if (static_cast<std::size_t>(img.rows) != rows || static_cast<std::size_t>(img.cols) != cols)
        cv::resize(img, img, cv::Size(static_cast<int>(cols), static_cast<int>(rows)), 0, 0,
                cv::INTER_LINEAR);

    std::vector<cv::Mat> split;
    cv::split(img, split);
    Image out;
    const Dims dims {rows, cols, 1};
    auto to_plane = [&](const cv::Mat &m) {
        Cuboid plane(dims);
        for (std::size_t i = 0; i < rows; ++i) {
            const double *src = m.ptr<double>(static_cast<int>(i));
            for (std::size_t j = 0; j < cols; ++j)
                plane(i, j, 0) = std::clamp(src[j], 0.0, 255.0);
        }
        return plane;
    };
    if (split.size() == 1) {
        Cuboid grey = to_plane(split[0]);
        out.planes.assign(channels, grey);
    } else {
        // OpenCV stores B, G, R
        for (int c = 2; c >= 0; --c)
            out.planes.push_back(to_plane(split[static_cast<std::size_t>(c)]));
    }
    return out;
}

void write_image(const fs::path &path, const Image &image) {
    if (image.planes.empty()) throw Error(Errc::invalid_argument, "write_image: no planes");
    if (!supported_ext(lower_ext(path)))
        throw Error(Errc::unsupported_format, "unsupported output format: " + path.string());
    const Dims d = image.planes.front().dims();
    std::vector<cv::Mat> planes;
    for (auto it = image.planes.rbegin(); it != image.planes.rend(); ++it) {
        cv::Mat m(static_cast<int>(d.rows), static_cast<int>(d.cols), CV_8U);
        for (std::size_t i = 0; i < d.rows; ++i)
            for (std::size_t j = 0; j < d.cols; ++j)
                m.at<std::uint8_t>(static_cast<int>(i), static_cast<int>(j))
                        = static_cast<std::uint8_t>(
                                std::lround(std::clamp((*it)(i, j, 0), 0.0, 255.0)));
        planes.push_back(std::move(m));
    }
    cv::Mat merged;
    cv::merge(planes, merged);
    if (!cv::imwrite(path.string(), merged))
        throw Error(Errc::io_error, "cannot write image " + path.string());
}

Image preprocess(const Image &image) {
    Image out;
    out.planes.reserve(image.planes.size());
    for (const auto &p : image.planes)
        out.planes.push_back(equalize_histogram(p));
    return out;
}

Image flip_horizontal(const Image &image) {
    Image out = image;
    for (auto &p : out.planes) {
        const Dims d = p.dims();
        for (std::size_t i = 0; i < d.rows; ++i)
            for (std::size_t j = 0; j < d.cols / 2; ++j)
                for (std::size_t k = 0; k < d.depth; ++k)
                    std::swap(p(i, j, k), p(i, d.cols - 1 - j, k));
    }
    return out;
}

std::vector<LabeledImage> augment_flips(const std::vector<LabeledImage> &set) {
    std::vector<LabeledImage> out = set;
    out.reserve(2 * set.size());
    for (const auto &li : set)
        out.push_back({li.label, flip_horizontal(li.image)});
    return out;
}

std::vector<LabeledImage> load_dataset(const Manifest &manifest, const PipelineSpec &spec) {
    std::vector<LabeledImage> out;
    out.reserve(manifest.entries.size());
    for (const auto &e : manifest.entries)
        out.push_back({e.label, preprocess(load_image(e.path, spec.rows, spec.cols, spec.channels))});
    return out;
}

} // namespace icc
