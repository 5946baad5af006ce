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

#include "icc/cuboid.hpp"

#include <algorithm>
#include <string>

#include "icc/error.hpp"

namespace icc {

namespace {

std::string dims_str(const Dims &d) {
    return std::to_string(d.rows) + "x" + std::to_string(d.cols) + "x"
            + std::to_string(d.depth);
}

} // namespace

Cuboid::Cuboid(Dims dims) : dims_(dims), data_(dims.volume(), 0.0) {
    if (dims.rows == 0 || dims.cols == 0 || dims.depth == 0)
        throw Error(Errc::invalid_argument,
                "cuboid dims must be positive, got " + dims_str(dims));
}

Cuboid::Cuboid(Dims dims, std::vector<double> data)
    : dims_(dims), data_(std::move(data)) {
    if (dims.rows == 0 || dims.cols == 0 || dims.depth == 0)
        throw Error(Errc::invalid_argument,
                "cuboid dims must be positive, got " + dims_str(dims));
    if (data_.size() != dims.volume())
        throw Error(Errc::length_mismatch,
                "cuboid " + dims_str(dims) + " needs " + std::to_string(dims.volume())
                        + " values, got " + std::to_string(data_.size()));
}

BlockGrid partition(const Cuboid &g, std::size_t block_rows, std::size_t block_cols) {
    const Dims &d = g.dims();
    if (block_rows == 0 || block_cols == 0 || d.rows % block_rows != 0
            || d.cols % block_cols != 0)
        throw Error(Errc::non_divisible_side_length,
                "local side lengths (" + std::to_string(block_rows) + ","
                        + std::to_string(block_cols) + ") do not tile "
                        + dims_str(d));

    BlockGrid grid;
    grid.rows = d.rows / block_rows;
    grid.cols = d.cols / block_cols;
    grid.blocks.reserve(grid.rows * grid.cols);

    const Dims bd {block_rows, block_cols, d.depth};
    const std::size_t run = block_cols * d.depth; // contiguous span per block row
    for (std::size_t a = 0; a < grid.rows; ++a) {
        for (std::size_t b = 0; b < grid.cols; ++b) {
            Cuboid block(bd);
            auto dst = block.values().begin();
            for (std::size_t i = 0; i < block_rows; ++i) {
                auto src = g.values().begin()
                        + static_cast<std::ptrdiff_t>(
                                g.offset(a * block_rows + i, b * block_cols, 0));
                dst = std::copy_n(src, run, dst);
            }
            grid.blocks.push_back(std::move(block));
        }
    }
    return grid;
}

Cuboid assemble(const BlockGrid &grid) {
    if (grid.rows == 0 || grid.cols == 0 || grid.blocks.size() != grid.rows * grid.cols)
        throw Error(Errc::inconsistent_block_dims,
                "block grid " + std::to_string(grid.rows) + "x"
                        + std::to_string(grid.cols) + " holds "
                        + std::to_string(grid.blocks.size()) + " blocks");
    const Dims bd = grid.blocks.front().dims();
    for (const auto &blk : grid.blocks)
        if (blk.dims() != bd)
            throw Error(Errc::inconsistent_block_dims,
                    "block " + dims_str(blk.dims()) + " differs from " + dims_str(bd));

    Cuboid g({grid.rows * bd.rows, grid.cols * bd.cols, bd.depth});
    const std::size_t run = bd.cols * bd.depth;
    for (std::size_t a = 0; a < grid.rows; ++a) {
        for (std::size_t b = 0; b < grid.cols; ++b) {
            auto src = grid.at(a, b).values().begin();
            for (std::size_t i = 0; i < bd.rows; ++i) {
                auto dst = g.values().begin()
                        + static_cast<std::ptrdiff_t>(
                                g.offset(a * bd.rows + i, b * bd.cols, 0));
                std::copy_n(src, run, dst);
                src += static_cast<std::ptrdiff_t>(run);
            }
        }
    }
    return g;
}

Eigen::VectorXd flatten(const Cuboid &local) {
    auto v = local.values();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Cuboid unflatten(const Eigen::VectorXd &v, Dims dims) {
    if (static_cast<std::size_t>(v.size()) != dims.volume())
        throw Error(Errc::length_mismatch,
                "cannot reshape a " + std::to_string(v.size()) + "-vector to "
                        + dims_str(dims));
    return Cuboid(dims, std::vector<double>(v.data(), v.data() + v.size()));
}

Cuboid spectral_stack(const VectorGrid &coeffs) {
    if (coeffs.rows == 0 || coeffs.cols == 0
            || coeffs.cells.size() != coeffs.rows * coeffs.cols)
        throw Error(Errc::ragged_grid, "coefficient grid is not rectangular");
    const auto depth = static_cast<std::size_t>(coeffs.cells.front().size());
    for (const auto &c : coeffs.cells)
        if (static_cast<std::size_t>(c.size()) != depth)
            throw Error(Errc::ragged_grid,
                    "coefficient vectors of length " + std::to_string(c.size())
                            + " and " + std::to_string(depth) + " in one grid");

    // Row-major (i, j, k) layout makes the stacked cuboid the concatenation
    // of the cell vectors in grid order.
    Cuboid g({coeffs.rows, coeffs.cols, depth});
    auto dst = g.values().begin();
    for (const auto &c : coeffs.cells)
        dst = std::copy(c.data(), c.data() + c.size(), dst);
    return g;
}

VectorGrid spectral_unstack(const Cuboid &g) {
    const Dims &d = g.dims();
    VectorGrid grid;
    grid.rows = d.rows;
    grid.cols = d.cols;
    grid.cells.reserve(d.rows * d.cols);
    const auto depth = static_cast<Eigen::Index>(d.depth);
    for (std::size_t a = 0; a < d.rows; ++a)
        for (std::size_t b = 0; b < d.cols; ++b)
            grid.cells.emplace_back(
                    Eigen::Map<const Eigen::VectorXd>(&g.values()[g.offset(a, b, 0)], depth));
    return grid;
}

} // namespace icc
