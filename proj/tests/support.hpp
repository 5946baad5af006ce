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


#ifndef ICC_TESTS_SUPPORT_HPP
#define ICC_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "icc/cuboid.hpp"
#include "icc/error.hpp"
#include "icc/pipeline.hpp"

namespace icc::test {

// Code of the icc::Error thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<Errc> thrown(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return std::nullopt;
}

template <class F>
std::string thrown_message(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.what();
    }
    return {};
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Cuboid random_cuboid(Dims d, std::mt19937_64 &g, double lo = 0.0, double hi = 255.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Cuboid c(d);
    for (auto &v : c.values())
        v = u(g);
    return c;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64 &g) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i)
            m(i, j) = n(g);
    return m;
}

inline Image random_image(std::size_t rows, std::size_t cols, std::size_t channels,
        std::mt19937_64 &g) {
    Image img;
    for (std::size_t c = 0; c < channels; ++c)
        img.planes.push_back(random_cuboid({rows, cols, 1}, g));
    return img;
}

inline double max_abs_diff(const Cuboid &a, const Cuboid &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

// Covariance with 1/N normalization, written out longhand.
inline Eigen::MatrixXd covariance_oracle(const Eigen::MatrixXd &x) {
    const auto v = x.rows();
    const auto n = x.cols();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(v);
    for (Eigen::Index s = 0; s < n; ++s)
        for (Eigen::Index a = 0; a < v; ++a)
            mean(a) += x(a, s) / static_cast<double>(n);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(v, v);
    for (Eigen::Index s = 0; s < n; ++s)
        for (Eigen::Index a = 0; a < v; ++a)
            for (Eigen::Index b = 0; b < v; ++b)
                r(a, b) += (x(a, s) - mean(a)) * (x(b, s) - mean(b)) / static_cast<double>(n);
    return r;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string &tag) {
        std::random_device rd;
        path = std::filesystem::temp_directory_path()
                / ("icc_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

} // namespace icc::test

#endif // ICC_TESTS_SUPPORT_HPP
