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

#include "icc/serialization.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include <zlib.h>

#include "icc/error.hpp"

namespace icc {

namespace fs = std::filesystem;

namespace {

using Eigen::Index;

constexpr std::uint8_t model_magic[4] = {'I', 'C', 'C', 'M'};
constexpr std::uint8_t feature_magic[4] = {'I', 'C', 'C', 'F'};

class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) {
        for (int s = 0; s < 16; s += 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void u32(std::uint32_t v) {
        for (int s = 0; s < 32; s += 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void u32(std::size_t v) {
        if (v > std::numeric_limits<std::uint32_t>::max())
            throw Error(Errc::invalid_argument, "value does not fit in 32 bits");
        u32(static_cast<std::uint32_t>(v));
    }
    void u32(Index v) { u32(static_cast<std::size_t>(v)); }
    void f64(double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int s = 0; s < 64; s += 8)
            buf_.push_back(static_cast<std::uint8_t>(bits >> s));
    }
    template <typename Derived>
    void f64s(const Eigen::DenseBase<Derived> &m) {
        // column-major traversal
        for (Index c = 0; c < m.cols(); ++c)
            for (Index r = 0; r < m.rows(); ++r)
                f64(m(r, c));
    }
    void bytes(const std::uint8_t *p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }

    std::vector<std::uint8_t> &buffer() { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t position() const { return pos_; }

    void need(std::size_t n, const char *what) const {
        if (remaining() < n)
            throw Error(Errc::truncated_file,
                    std::string("file ends inside ") + what + " (need " + std::to_string(n)
                            + " bytes at offset " + std::to_string(pos_) + ", "
                            + std::to_string(remaining()) + " left)");
    }
    std::uint8_t u8(const char *what) {
        need(1, what);
        return bytes_[pos_++];
    }
    std::uint16_t u16(const char *what) {
        need(2, what);
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i)
            v = static_cast<std::uint16_t>(v | (bytes_[pos_ + i] << (8 * i)));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32(const char *what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    double f64(const char *what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }
    Eigen::MatrixXd matrix(Index rows, Index cols, const char *what) {
        need(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * 8, what);
        Eigen::MatrixXd m(rows, cols);
        for (Index c = 0; c < cols; ++c)
            for (Index r = 0; r < rows; ++r)
                m(r, c) = f64(what);
        return m;
    }
    Eigen::VectorXd vector(Index n, const char *what) {
        need(static_cast<std::size_t>(n) * 8, what);
        Eigen::VectorXd v(n);
        for (Index i = 0; i < n; ++i)
            v(i) = f64(what);
        return v;
    }
    std::string string(std::size_t n, const char *what) {
        need(n, what);
        std::string s(reinterpret_cast<const char *>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void check_header(ByteReader &in, const std::uint8_t (&magic)[4], std::uint16_t version,
        const char *kind) {
    in.need(4, "magic");
    for (std::uint8_t m : magic)
        if (in.u8("magic") != m)
            throw Error(Errc::bad_magic, std::string("not an ") + kind + " file (bad magic)");
    const std::uint16_t v = in.u16("version");
    if (v != version)
        throw Error(Errc::version_unsupported,
                std::string(kind) + " version " + std::to_string(v) + " is not supported");
}

[[noreturn]] void inconsistent(const std::string &msg) {
    throw Error(Errc::parse_error, "inconsistent model file: " + msg);
}

std::vector<std::uint8_t> read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::missing_file, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path &path, const std::vector<std::uint8_t> &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
    out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

void encode_classifier(ByteWriter &w, const std::optional<LdaModel> &lda) {
    if (!lda) {
        w.u32(std::uint32_t {0});
        w.u32(std::uint32_t {0});
        w.u32(std::uint32_t {0});
        return;
    }
    const Index d = lda->feature_dim();
    w.u32(d);
    w.u32(lda->labels.size());
    for (const auto &l : lda->labels) {
        w.u32(l.size());
        w.bytes(reinterpret_cast<const std::uint8_t *>(l.data()), l.size());
    }
    w.u32(lda->total);
    for (std::size_t m = 0; m < lda->labels.size(); ++m) {
        w.u32(lda->counts[m]);
        w.f64s(lda->means.row(static_cast<Index>(m)).transpose());
    }
    w.f64s(lda->pooled_cov);
    for (Index m = 0; m < lda->weights.rows(); ++m)
        w.f64s(lda->weights.row(m).transpose());
    w.f64s(lda->biases);
}

std::optional<LdaModel> decode_classifier(ByteReader &in) {
    const Index d = in.u32("classifier dimension");
    const std::uint32_t classes = in.u32("class count");
    std::vector<std::string> labels;
    for (std::uint32_t m = 0; m < classes; ++m) {
        const std::uint32_t len = in.u32("label length");
        labels.push_back(in.string(len, "label"));
    }
    const std::uint32_t total = in.u32("sample count");
    if (d == 0 && classes == 0) {
        if (total != 0) inconsistent("classifier without classes has samples");
        return std::nullopt;
    }
    if (d == 0 || classes < 2) inconsistent("classifier needs D > 0 and at least 2 classes");

    LdaModel lda;
    lda.labels = std::move(labels);
    lda.total = total;
    lda.means.resize(classes, d);
    std::uint64_t sum = 0;
    for (std::uint32_t m = 0; m < classes; ++m) {
        lda.counts.push_back(in.u32("class count"));
        sum += lda.counts.back();
        lda.means.row(m) = in.vector(d, "class mean").transpose();
    }
    if (sum != total) inconsistent("class counts do not sum to N");
    lda.pooled_cov = in.matrix(d, d, "pooled covariance");
    lda.weights.resize(classes, d);
    for (std::uint32_t m = 0; m < classes; ++m)
        lda.weights.row(m) = in.vector(d, "weights").transpose();
    lda.biases = in.vector(classes, "biases");
    lda.priors.resize(classes);
    for (std::uint32_t m = 0; m < classes; ++m)
        lda.priors(m) = static_cast<double>(lda.counts[m]) / static_cast<double>(total);
    return lda;
}

ModelBundle decode_model_payload(ByteReader &in);

} // namespace

std::vector<std::uint8_t> encode_model(
        const TransformModel &transform, const std::optional<LdaModel> &classifier) {
    const auto &spec = transform.spec;
    if (classifier && classifier->feature_dim() != static_cast<Index>(spec.feature_dim()))
        throw Error(Errc::dim_mismatch, "classifier dimension does not match the transform");

    ByteWriter payload;
    payload.u32(spec.channels);
    payload.u32(spec.stages.size());
    for (const auto &s : spec.stages) {
        payload.u32(s.block_rows);
        payload.u32(s.block_cols);
        payload.u32(s.retained);
    }
    for (const auto &channel : transform.kernels) {
        for (const auto &stage : channel) {
            for (const auto &blk : stage.blocks) {
                payload.u32(blk.input_dim);
                payload.u32(blk.retained_dim);
                for (auto t : blk.selected_indices)
                    payload.u32(t);
                payload.f64s(blk.mean);
                payload.f64s(blk.eigenvalues);
                payload.f64s(blk.basis);
            }
        }
    }
    encode_classifier(payload, classifier);

    const auto &body = payload.buffer();
    const auto crc = static_cast<std::uint32_t>(
            crc32(0L, body.data(), static_cast<uInt>(body.size())));

    ByteWriter out;
    out.bytes(model_magic, 4);
    out.u16(model_format_version);
    out.u32(crc);
    out.bytes(body.data(), body.size());
    return std::move(out.buffer());
}

ModelBundle decode_model(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    check_header(in, model_magic, model_format_version, "ICCM");
    const std::uint32_t crc = in.u32("checksum");
    const auto payload = in.rest();
    const bool crc_ok = crc
            == static_cast<std::uint32_t>(
                    crc32(0L, payload.data(), static_cast<uInt>(payload.size())));
    try {
        ModelBundle bundle = decode_model_payload(in);
        if (!crc_ok) throw Error(Errc::checksum_mismatch, "ICCM payload checksum mismatch");
        return bundle;
    } catch (const Error &e) {
        // A corrupted payload usually surfaces as a structural error first.
        if (e.code() == Errc::parse_error && !crc_ok)
            throw Error(Errc::checksum_mismatch,
                    std::string("ICCM payload checksum mismatch (") + e.what() + ")");
        throw;
    }
}

namespace {

ModelBundle decode_model_payload(ByteReader &in) {
    ModelBundle bundle;
    auto &spec = bundle.transform.spec;
    spec.channels = in.u32("channel count");
    const std::uint32_t stage_count = in.u32("stage count");
    if (spec.channels != 1 && spec.channels != 3) inconsistent("channels must be 1 or 3");
    if (stage_count == 0) inconsistent("no stages");
    in.need(std::size_t {stage_count} * 12, "stage table");
    spec.rows = 1;
    spec.cols = 1;
    for (std::uint32_t p = 0; p < stage_count; ++p) {
        StageSpec s;
        s.block_rows = in.u32("l_i");
        s.block_cols = in.u32("l_j");
        s.retained = in.u32("retained");
        spec.rows *= s.block_rows;
        spec.cols *= s.block_cols;
        spec.stages.push_back(s);
    }
    if (!validate_spec(spec).empty()) inconsistent("stage table is not a valid pipeline");

    bundle.transform.kernels.resize(spec.channels);
    for (auto &channel : bundle.transform.kernels) {
        channel.resize(stage_count);
        for (std::size_t p = 0; p < stage_count; ++p) {
            const Dims out = spec.stage_dims(p + 1);
            const std::size_t depth = p == 0 ? 1 : spec.stages[p - 1].retained;
            const auto dim = static_cast<Index>(
                    spec.stages[p].block_rows * spec.stages[p].block_cols * depth);
            const auto kept = static_cast<Index>(spec.stages[p].retained);

            auto &stage = channel[p];
            stage.rows = out.rows;
            stage.cols = out.cols;
            stage.blocks.resize(out.rows * out.cols);
            for (auto &blk : stage.blocks) {
                blk.input_dim = in.u32("block V");
                blk.retained_dim = in.u32("block K");
                if (blk.input_dim != dim || blk.retained_dim != kept)
                    inconsistent("block dims disagree with the stage table");
                in.need(static_cast<std::size_t>(kept) * 4, "selected indices");
                for (Index k = 0; k < kept; ++k)
                    blk.selected_indices.push_back(in.u32("selected index"));
                blk.mean = in.vector(dim, "block mean");
                blk.eigenvalues = in.vector(kept, "eigenvalues");
                blk.basis = in.matrix(dim, kept, "basis");
            }
        }
    }
    bundle.classifier = decode_classifier(in);
    if (bundle.classifier
            && bundle.classifier->feature_dim() != static_cast<Index>(spec.feature_dim()))
        inconsistent("classifier dimension does not match the transform");
    if (in.remaining() != 0)
        inconsistent(std::to_string(in.remaining()) + " trailing bytes");
    return bundle;
}

} // namespace

void save_model(const fs::path &path, const TransformModel &transform,
        const std::optional<LdaModel> &classifier) {
    write_file(path, encode_model(transform, classifier));
}

ModelBundle load_model(const fs::path &path) {
    const auto bytes = read_file(path);
    return decode_model(bytes);
}

std::vector<std::uint8_t> encode_features(const CompressedRecord &record) {
    if (record.channels.empty() || record.channels.size() > 255)
        throw Error(Errc::invalid_argument, "record must have 1..255 channels");
    const Index k = record.channels.front().coefficients.size();
    for (const auto &ch : record.channels)
        if (ch.coefficients.size() != k)
            throw Error(Errc::dim_mismatch, "channels hold different coefficient counts");

    ByteWriter w;
    w.bytes(feature_magic, 4);
    w.u16(feature_format_version);
    w.u8(static_cast<std::uint8_t>(record.channels.size()));
    w.u32(k);
    for (const auto &ch : record.channels) {
        w.f64(ch.brightness_gap);
        w.f64s(ch.coefficients);
    }
    return std::move(w.buffer());
}

CompressedRecord decode_features(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    check_header(in, feature_magic, feature_format_version, "ICCF");
    const std::uint8_t channels = in.u8("channel count");
    const Index k = in.u32("coefficient count");
    CompressedRecord rec;
    for (std::uint8_t c = 0; c < channels; ++c) {
        CompressedRecord::Channel ch;
        ch.brightness_gap = in.f64("brightness gap");
        ch.coefficients = in.vector(k, "coefficients");
        rec.channels.push_back(std::move(ch));
    }
    if (in.remaining() != 0)
        throw Error(Errc::parse_error,
                "ICCF file has " + std::to_string(in.remaining()) + " trailing bytes");
    return rec;
}

void save_features(const fs::path &path, const CompressedRecord &record) {
    write_file(path, encode_features(record));
}

CompressedRecord load_features(const fs::path &path) {
    const auto bytes = read_file(path);
    return decode_features(bytes);
}

} // namespace icc
