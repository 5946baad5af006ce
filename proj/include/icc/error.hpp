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

#ifndef ICC_ERROR_HPP
#define ICC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace icc {

enum class Errc {
    invalid_argument,
    // cuboid-core
    non_divisible_side_length,
    inconsistent_block_dims,
    length_mismatch,
    ragged_grid,
    // pca-kernels / pipeline
    too_few_samples,
    k_too_large,
    eigen_failure,
    dim_mismatch,
    spec_invalid,
    // classifier
    single_class,
    empty_class,
    k_out_of_range,
    // diagnostics
    zero_variance_feature,
    group_too_small,
    // dataset-io
    parse_error,
    duplicate_path,
    missing_file,
    decode_error,
    unsupported_format,
    bad_magic,
    version_unsupported,
    checksum_mismatch,
    truncated_file,
    io_error,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above, so
/// callers (the CLI in particular) can branch on the kind of failure.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace icc

#endif // ICC_ERROR_HPP
