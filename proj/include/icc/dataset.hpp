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

#ifndef ICC_DATASET_HPP
#define ICC_DATASET_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "icc/pipeline.hpp"

namespace icc {

struct ManifestEntry {
    std::filesystem::path path;
    std::string label;
};

/// `path,label` listing of a train or test set.
struct Manifest {
    std::vector<ManifestEntry> entries;
};

/// Parses a manifest CSV (header `path,label`, LF or CRLF, optional double
/// quotes). Relative paths resolve against the manifest's directory.
/// Errors: ParseError / DuplicatePath naming the line, MissingFile when the
/// manifest itself cannot be opened.
Manifest load_manifest(const std::filesystem::path &path);
Manifest parse_manifest(const std::string &text, const std::filesystem::path &base_dir);

struct LabeledImage {
    std::string label;
    Image image;
};

/// Decodes a PNG / PGM / PPM file, bilinearly resizes it to rows x cols
/// (skipped when the size already matches) and splits it into R, G, B
/// planes, or one grey plane when channels == 1. Grey files are replicated
/// into three planes when channels == 3.
/// Errors: MissingFile, UnsupportedFormat, DecodeError.
Image load_image(const std::filesystem::path &path, std::size_t rows, std::size_t cols,
        std::size_t channels);

/// Writes planes rounded to 8 bits; the format follows the file extension.
void write_image(const std::filesystem::path &path, const Image &image);

/// Per-channel histogram equalization.
Image preprocess(const Image &image);

Image flip_horizontal(const Image &image);

/// Originals followed by their horizontal mirrors (2N images).
std::vector<LabeledImage> augment_flips(const std::vector<LabeledImage> &set);

/// Loads and preprocesses every manifest entry.
std::vector<LabeledImage> load_dataset(const Manifest &manifest, const PipelineSpec &spec);

} // namespace icc

#endif // ICC_DATASET_HPP
