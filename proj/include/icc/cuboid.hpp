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

#ifndef ICC_CUBOID_HPP
#define ICC_CUBOID_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace icc {

/// Extent of a cuboid: two spatial axes (rows, cols) and one spectral axis.
struct Dims {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t depth = 0;

    std::size_t volume() const noexcept { return rows * cols * depth; }
    friend bool operator==(const Dims &, const Dims &) = default;
};

/// Dense 3-D tensor of doubles stored row-major: i, then j, then k.
///
/// At stage 0 the entries are pixel intensities in [0, 255]; after a
/// transform stage they are unbounded PCA coefficients.
class Cuboid {
public:
    Cuboid() = default;
    explicit Cuboid(Dims dims);
    Cuboid(Dims dims, std::vector<double> data);

    const Dims &dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return (i * dims_.cols + j) * dims_.depth + k;
    }
    double &operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
        return data_[offset(i, j, k)];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return data_[offset(i, j, k)];
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    friend bool operator==(const Cuboid &, const Cuboid &) = default;

private:
    Dims dims_;
    std::vector<double> data_;
};

/// Non-overlapping tiling of a cuboid into equally sized local cuboids.
struct BlockGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Cuboid> blocks; // row-major, rows * cols entries

    const Cuboid &at(std::size_t a, std::size_t b) const { return blocks[a * cols + b]; }
    Cuboid &at(std::size_t a, std::size_t b) { return blocks[a * cols + b]; }
};

/// Rectangular grid of coefficient vectors, one per spatial position.
struct VectorGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Eigen::VectorXd> cells; // row-major

    const Eigen::VectorXd &at(std::size_t a, std::size_t b) const { return cells[a * cols + b]; }
    Eigen::VectorXd &at(std::size_t a, std::size_t b) { return cells[a * cols + b]; }
};

// Cuts `g` into (rows / block_rows) x (cols / block_cols) blocks of full
// spectral depth. Throws NonDivisibleSideLength.
BlockGrid partition(const Cuboid &g, std::size_t block_rows, std::size_t block_cols);

// Inverse of partition. Throws InconsistentBlockDims.
Cuboid assemble(const BlockGrid &grid);

Eigen::VectorXd flatten(const Cuboid &local);

// Throws LengthMismatch when v.size() != dims.volume().
Cuboid unflatten(const Eigen::VectorXd &v, Dims dims);

// Places each vector of the grid along the spectral axis. Throws RaggedGrid.
Cuboid spectral_stack(const VectorGrid &coeffs);

VectorGrid spectral_unstack(const Cuboid &g);

} // namespace icc

#endif // ICC_CUBOID_HPP
