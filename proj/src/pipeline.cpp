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

#include "icc/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "icc/error.hpp"

namespace icc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string join_violations(const std::vector<SpecViolation> &vs) {
    std::string out;
    for (const auto &v : vs) {
        if (!out.empty()) out += "; ";
        out += "stage " + std::to_string(v.stage) + ": " + v.message;
    }
    return out;
}

void check_images(const std::vector<Image> &images, const PipelineSpec &spec) {
    const Dims expect {spec.rows, spec.cols, 1};
    for (std::size_t n = 0; n < images.size(); ++n) {
        const auto &planes = images[n].planes;
        if (planes.size() != spec.channels)
            throw Error(Errc::dim_mismatch,
                    "image " + std::to_string(n) + " has " + std::to_string(planes.size())
                            + " channels, pipeline expects "
                            + std::to_string(spec.channels));
        for (const auto &p : planes)
            if (p.dims() != expect)
                throw Error(Errc::dim_mismatch,
                        "image " + std::to_string(n) + " plane is "
                                + std::to_string(p.dims().rows) + "x"
                                + std::to_string(p.dims().cols) + "x"
                                + std::to_string(p.dims().depth) + ", pipeline expects "
                                + std::to_string(spec.rows) + "x"
                                + std::to_string(spec.cols) + "x1");
    }
}

// Per-image block grids of one stage, gathered so that block position q
// becomes a V x N matrix of flattened local cuboids.
MatrixXd gather_block(const std::vector<BlockGrid> &grids, std::size_t q) {
    const auto dim = static_cast<Index>(grids.front().blocks[q].size());
    MatrixXd f(dim, static_cast<Index>(grids.size()));
    for (std::size_t n = 0; n < grids.size(); ++n)
        f.col(static_cast<Index>(n)) = flatten(grids[n].blocks[q]);
    return f;
}

std::vector<VectorGrid> empty_coefficient_grids(std::size_t count, std::size_t rows,
        std::size_t cols) {
    std::vector<VectorGrid> out(count);
    for (auto &g : out) {
        g.rows = rows;
        g.cols = cols;
        g.cells.resize(rows * cols);
    }
    return out;
}

// One forward stage over a batch of global cuboids. When `fitted` is null
// the kernels are fitted on the batch and appended to `fit_out`.
std::vector<Cuboid> forward_stage(const std::vector<Cuboid> &current, const StageSpec &stage,
        const StageKernels *fitted, StageKernels *fit_out) {
    std::vector<BlockGrid> grids;
    grids.reserve(current.size());
    for (const auto &g : current)
        grids.push_back(partition(g, stage.block_rows, stage.block_cols));

    const std::size_t rows = grids.front().rows;
    const std::size_t cols = grids.front().cols;
    auto coeffs = empty_coefficient_grids(current.size(), rows, cols);
    if (fit_out) {
        fit_out->rows = rows;
        fit_out->cols = cols;
        fit_out->blocks.clear();
        fit_out->blocks.reserve(rows * cols);
    }

    for (std::size_t q = 0; q < rows * cols; ++q) {
        const MatrixXd f = gather_block(grids, q);
        const KernelBlock *block = nullptr;
        if (fitted) {
            block = &fitted->blocks[q];
        } else {
            fit_out->blocks.push_back(fit_block(f, static_cast<Index>(stage.retained)));
            block = &fit_out->blocks.back();
        }
        const MatrixXd g = project_batch(*block, f);
        for (std::size_t n = 0; n < current.size(); ++n)
            coeffs[n].cells[q] = g.col(static_cast<Index>(n));
    }

    std::vector<Cuboid> next;
    next.reserve(current.size());
    for (const auto &c : coeffs)
        next.push_back(spectral_stack(c));
    return next;
}

std::vector<Cuboid> inverse_stage(const std::vector<Cuboid> &current, const StageSpec &stage,
        std::size_t prev_depth, const StageKernels &kernels) {
    std::vector<VectorGrid> coeffs;
    coeffs.reserve(current.size());
    for (const auto &g : current)
        coeffs.push_back(spectral_unstack(g));

    const Dims local {stage.block_rows, stage.block_cols, prev_depth};
    std::vector<BlockGrid> grids(current.size());
    for (auto &g : grids) {
        g.rows = kernels.rows;
        g.cols = kernels.cols;
        g.blocks.resize(kernels.rows * kernels.cols);
    }

    const auto count = static_cast<Index>(current.size());
    for (std::size_t q = 0; q < kernels.blocks.size(); ++q) {
        const auto &block = kernels.blocks[q];
        MatrixXd g(block.retained_dim, count);
        for (Index n = 0; n < count; ++n)
            g.col(n) = coeffs[static_cast<std::size_t>(n)].cells[q];
        const MatrixXd f = backproject_batch(block, g);
        for (Index n = 0; n < count; ++n)
            grids[static_cast<std::size_t>(n)].blocks[q] = unflatten(f.col(n), local);
    }

    std::vector<Cuboid> prev;
    prev.reserve(current.size());
    for (const auto &g : grids)
        prev.push_back(assemble(g));
    return prev;
}

std::vector<Cuboid> channel_planes(const std::vector<Image> &images, std::size_t c) {
    std::vector<Cuboid> out;
    out.reserve(images.size());
    for (const auto &img : images)
        out.push_back(img.planes[c]);
    return out;
}

} // namespace

Dims PipelineSpec::stage_dims(std::size_t stage) const {
    Dims d {rows, cols, 1};
    for (std::size_t p = 0; p < stage && p < stages.size(); ++p) {
        d.rows /= stages[p].block_rows;
        d.cols /= stages[p].block_cols;
        d.depth = stages[p].retained;
    }
    return d;
}

std::vector<SpecViolation> validate_spec(const PipelineSpec &spec) {
    std::vector<SpecViolation> out;
    if (spec.rows == 0 || spec.cols == 0)
        out.push_back({0, "input dims must be positive"});
    if (spec.channels != 1 && spec.channels != 3)
        out.push_back({0, "channels must be 1 or 3, got " + std::to_string(spec.channels)});
    if (spec.stages.empty()) {
        out.push_back({0, "pipeline has no stages"});
        return out;
    }

    std::size_t rows = spec.rows;
    std::size_t cols = spec.cols;
    std::size_t depth = 1;
    bool rows_ok = rows > 0;
    bool cols_ok = cols > 0;
    for (std::size_t p = 0; p < spec.stages.size(); ++p) {
        const auto &s = spec.stages[p];
        const std::size_t idx = p + 1;
        if (s.block_rows == 0 || s.block_cols == 0 || s.retained == 0) {
            out.push_back({idx, "side lengths and retained count must be positive"});
            rows_ok = rows_ok && s.block_rows != 0;
            cols_ok = cols_ok && s.block_cols != 0;
        }
        if (rows_ok && s.block_rows != 0) {
            if (rows % s.block_rows != 0) {
                out.push_back({idx, "l_i=" + std::to_string(s.block_rows)
                                            + " does not divide " + std::to_string(rows)
                                            + " rows (NonDivisibleSideLength)"});
                rows_ok = false;
            } else {
                rows /= s.block_rows;
            }
        }
        if (cols_ok && s.block_cols != 0) {
            if (cols % s.block_cols != 0) {
                out.push_back({idx, "l_j=" + std::to_string(s.block_cols)
                                            + " does not divide " + std::to_string(cols)
                                            + " cols (NonDivisibleSideLength)"});
                cols_ok = false;
            } else {
                cols /= s.block_cols;
            }
        }
        const std::size_t volume = s.block_rows * s.block_cols * depth;
        if (s.retained > volume)
            out.push_back({idx, "retained " + std::to_string(s.retained)
                                        + " exceeds local cuboid volume "
                                        + std::to_string(volume)});
        depth = s.retained;
    }
    if (rows_ok && rows != 1)
        out.push_back({0, "product of l_i does not equal I (" + std::to_string(rows)
                                  + " rows remain after the last stage)"});
    if (cols_ok && cols != 1)
        out.push_back({0, "product of l_j does not equal J (" + std::to_string(cols)
                                  + " cols remain after the last stage)"});
    return out;
}

PipelineSpec parse_spec(const std::string &text) {
    PipelineSpec spec;
    bool have_header = false;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string &msg) {
        throw Error(Errc::parse_error, "spec line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::istringstream fields(line);
        if (!have_header) {
            std::string dims_kw, channels_kw;
            long long i = 0, j = 0, c = 0;
            if (!(fields >> dims_kw >> i >> j >> channels_kw >> c) || dims_kw != "dims"
                    || channels_kw != "channels")
                fail("expected 'dims I J channels C'");
            if (i <= 0 || j <= 0 || c <= 0) fail("dims and channels must be positive");
            spec.rows = static_cast<std::size_t>(i);
            spec.cols = static_cast<std::size_t>(j);
            spec.channels = static_cast<std::size_t>(c);
            have_header = true;
        } else {
            long long li = 0, lj = 0, k = 0;
            if (!(fields >> li >> lj >> k)) fail("expected 'l_i l_j retained'");
            if (li <= 0 || lj <= 0 || k <= 0) fail("stage values must be positive");
            spec.stages.push_back({static_cast<std::size_t>(li),
                    static_cast<std::size_t>(lj), static_cast<std::size_t>(k)});
        }
        std::string extra;
        if (fields >> extra) fail("unexpected trailing token '" + extra + "'");
    }
    if (!have_header) {
        lineno = 0;
        fail("missing 'dims I J channels C' header");
    }
    return spec;
}

PipelineSpec load_spec(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, "cannot open spec file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string format_spec(const PipelineSpec &spec) {
    std::ostringstream out;
    out << "dims " << spec.rows << ' ' << spec.cols << " channels " << spec.channels << '\n';
    for (const auto &s : spec.stages)
        out << s.block_rows << ' ' << s.block_cols << ' ' << s.retained << '\n';
    return out.str();
}

VectorXd FeatureVector::flat() const {
    Index total = 0;
    for (const auto &c : channels)
        total += c.size();
    VectorXd out(total);
    Index at = 0;
    for (const auto &c : channels) {
        out.segment(at, c.size()) = c;
        at += c.size();
    }
    return out;
}

FeatureVector FeatureVector::split(const VectorXd &flat, std::size_t channels) {
    if (channels == 0 || flat.size() % static_cast<Index>(channels) != 0)
        throw Error(Errc::dim_mismatch,
                "feature length " + std::to_string(flat.size()) + " is not a multiple of "
                        + std::to_string(channels) + " channels");
    const Index per = flat.size() / static_cast<Index>(channels);
    FeatureVector fv;
    for (std::size_t c = 0; c < channels; ++c)
        fv.channels.push_back(flat.segment(static_cast<Index>(c) * per, per));
    return fv;
}

TransformModel fit(const std::vector<Image> &images, const PipelineSpec &spec) {
    if (auto vs = validate_spec(spec); !vs.empty())
        throw Error(Errc::spec_invalid, "invalid pipeline spec: " + join_violations(vs));
    if (images.size() < 2)
        throw Error(Errc::too_few_samples,
                "fitting needs at least 2 images, got " + std::to_string(images.size()));
    check_images(images, spec);

    TransformModel model;
    model.spec = spec;
    model.kernels.resize(spec.channels);
    for (std::size_t c = 0; c < spec.channels; ++c) {
        auto current = channel_planes(images, c);
        auto &stages = model.kernels[c];
        stages.resize(spec.stages.size());
        for (std::size_t p = 0; p < spec.stages.size(); ++p)
            current = forward_stage(current, spec.stages[p], nullptr, &stages[p]);
    }
    return model;
}

MatrixXd forward_batch(const TransformModel &model, const std::vector<Image> &images) {
    const auto &spec = model.spec;
    check_images(images, spec);
    const auto per = static_cast<Index>(spec.final_retained());
    MatrixXd out(static_cast<Index>(spec.feature_dim()), static_cast<Index>(images.size()));
    if (images.empty()) return out;
    for (std::size_t c = 0; c < spec.channels; ++c) {
        auto current = channel_planes(images, c);
        for (std::size_t p = 0; p < spec.stages.size(); ++p)
            current = forward_stage(current, spec.stages[p], &model.kernels[c][p], nullptr);
        for (std::size_t n = 0; n < images.size(); ++n) {
            auto v = current[n].values();
            out.col(static_cast<Index>(n)).segment(static_cast<Index>(c) * per, per)
                    = Eigen::Map<const VectorXd>(v.data(), per);
        }
    }
    return out;
}

FeatureVector forward(const TransformModel &model, const Image &image) {
    const MatrixXd f = forward_batch(model, {image});
    return FeatureVector::split(f.col(0), model.spec.channels);
}

std::vector<Image> inverse_batch(const TransformModel &model, const MatrixXd &features) {
    const auto &spec = model.spec;
    if (features.rows() != static_cast<Index>(spec.feature_dim()))
        throw Error(Errc::dim_mismatch,
                "feature length " + std::to_string(features.rows()) + ", model expects "
                        + std::to_string(spec.feature_dim()));
    const auto count = static_cast<std::size_t>(features.cols());
    const auto per = static_cast<Index>(spec.final_retained());
    const Dims top {1, 1, spec.final_retained()};

    std::vector<Image> out(count);
    for (auto &img : out)
        img.planes.resize(spec.channels);
    for (std::size_t c = 0; c < spec.channels; ++c) {
        std::vector<Cuboid> current;
        current.reserve(count);
        for (std::size_t n = 0; n < count; ++n)
            current.push_back(unflatten(
                    features.col(static_cast<Index>(n)).segment(static_cast<Index>(c) * per, per),
                    top));
        for (std::size_t p = spec.stages.size(); p-- > 0;) {
            const std::size_t prev_depth = p == 0 ? 1 : spec.stages[p - 1].retained;
            current = inverse_stage(current, spec.stages[p], prev_depth, model.kernels[c][p]);
        }
        for (std::size_t n = 0; n < count; ++n)
            out[n].planes[c] = std::move(current[n]);
    }
    return out;
}

Image inverse(const TransformModel &model, const FeatureVector &features) {
    auto imgs = inverse_batch(model, features.flat());
    return std::move(imgs.front());
}

} // namespace icc
