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

#ifndef ICC_SERIALIZATION_HPP
#define ICC_SERIALIZATION_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "icc/classifier.hpp"
#include "icc/pipeline.hpp"
#include "icc/reconstruction.hpp"

namespace icc {

/*
 Model file "ICCM", version 1. Every integer is unsigned 32-bit and every
 real an IEEE-754 double, both little-endian, unless noted.

   "ICCM"  u16 version  crc32(payload)
   payload:
     channels  stage_count  { l_i l_j retained } * stage_count
     for channel, stage, block (row-major):
       V  K  selected_indices[K]  mean[V]  eigenvalues[K]  basis[V*K]
                                           (column-major, descending eigenvalue)
     D  M  { u32 length, UTF-8 bytes } * M  N
     { n_m  mu_m[D] } * M
     pooled_cov[D*D]  weights[M*D] (class-major)  biases[M]

 The input size is not stored: I and J are the products of the stage side
 lengths. A transform without a classifier is written with D = M = N = 0.

 Feature file "ICCF", version 1:

   "ICCF"  u16 version  u8 channels  u32 K
   { f64 brightness_gap  f64 coefficients[K] } * channels
*/

inline constexpr std::uint16_t model_format_version = 1;
inline constexpr std::uint16_t feature_format_version = 1;

struct ModelBundle {
    TransformModel transform;
    std::optional<LdaModel> classifier;
};

std::vector<std::uint8_t> encode_model(const TransformModel &transform,
        const std::optional<LdaModel> &classifier);

/// Errors: BadMagic, VersionUnsupported, ChecksumMismatch, TruncatedFile,
/// ParseError for structurally inconsistent content.
ModelBundle decode_model(std::span<const std::uint8_t> bytes);

void save_model(const std::filesystem::path &path, const TransformModel &transform,
        const std::optional<LdaModel> &classifier);
ModelBundle load_model(const std::filesystem::path &path);

std::vector<std::uint8_t> encode_features(const CompressedRecord &record);
CompressedRecord decode_features(std::span<const std::uint8_t> bytes);

void save_features(const std::filesystem::path &path, const CompressedRecord &record);
CompressedRecord load_features(const std::filesystem::path &path);

} // namespace icc

#endif // ICC_SERIALIZATION_HPP
