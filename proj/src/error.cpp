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

#include "icc/error.hpp"

namespace icc {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::non_divisible_side_length: return "NonDivisibleSideLength";
        case Errc::inconsistent_block_dims: return "InconsistentBlockDims";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::ragged_grid: return "RaggedGrid";
        case Errc::too_few_samples: return "TooFewSamples";
        case Errc::k_too_large: return "KTooLarge";
        case Errc::eigen_failure: return "EigenFailure";
        case Errc::dim_mismatch: return "DimMismatch";
        case Errc::spec_invalid: return "SpecInvalid";
        case Errc::single_class: return "SingleClass";
        case Errc::empty_class: return "EmptyClass";
        case Errc::k_out_of_range: return "KOutOfRange";
        case Errc::zero_variance_feature: return "ZeroVarianceFeature";
        case Errc::group_too_small: return "GroupTooSmall";
        case Errc::parse_error: return "ParseError";
        case Errc::duplicate_path: return "DuplicatePath";
        case Errc::missing_file: return "MissingFile";
        case Errc::decode_error: return "DecodeError";
        case Errc::unsupported_format: return "UnsupportedFormat";
        case Errc::bad_magic: return "BadMagic";
        case Errc::version_unsupported: return "VersionUnsupported";
        case Errc::checksum_mismatch: return "ChecksumMismatch";
        case Errc::truncated_file: return "TruncatedFile";
        case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

} // namespace icc
