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


#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "icc/pca.hpp"
#include "support.hpp"

using namespace icc;
using icc::test::thrown;

namespace {

Eigen::MatrixXd worked_samples() {
    Eigen::MatrixXd x(2, 4);
    x << 3, 1, -3, -1,
         1, 3, -1, -3;
    return x;
}

double max_abs(const Eigen::MatrixXd &m) { return m.cwiseAbs().maxCoeff(); }

// Random samples with a spread-out spectrum; `rank` < V gives a degenerate tail.
Eigen::MatrixXd spread_samples(Eigen::Index v, Eigen::Index n, Eigen::Index rank,
        std::mt19937_64 &g) {
    const Eigen::MatrixXd mix = test::random_matrix(v, rank, g);
    Eigen::MatrixXd z = test::random_matrix(rank, n, g);
    for (Eigen::Index r = 0; r < rank; ++r)
        z.row(r) *= std::pow(1.6, static_cast<double>(rank - r));
    Eigen::MatrixXd x = mix * z;
    x.colwise() += Eigen::VectorXd::Constant(v, 3.0);
    return x;
}

} // namespace

TEST_CASE("worked 2x2 example") {
    const auto x = worked_samples();
    const Eigen::MatrixXd r = test::covariance_oracle(x);
    CHECK(r(0, 0) == doctest::Approx(5.0));
    CHECK(r(0, 1) == doctest::Approx(3.0));
    CHECK(r(1, 1) == doctest::Approx(5.0));

    const auto blk = fit_block(x, 1);
    CHECK(blk.input_dim == 2);
    CHECK(blk.retained_dim == 1);
    CHECK(max_abs(blk.mean) == 0.0);
    REQUIRE(blk.eigenvalues.size() == 1);
    CHECK(blk.eigenvalues(0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(blk.basis(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(blk.basis(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    // spectrum in ascending order is {2, 8}
    CHECK(blk.selected_indices == std::vector<std::uint32_t> {1});
    CHECK(retained_variance(blk) == doctest::Approx(8.0).epsilon(1e-12));
    REQUIRE(blk.total_variance);
    CHECK(*blk.total_variance == doctest::Approx(10.0).epsilon(1e-12));

    const auto g = project(blk, Eigen::Vector2d(3, 1));
    CHECK(g(0) == doctest::Approx(4.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(g(0) == doctest::Approx(2.8284).epsilon(1e-4));

    const auto full = fit_block(x, 2);
    CHECK(full.eigenvalues(0) == doctest::Approx(8.0));
    CHECK(full.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(full.selected_indices == std::vector<std::uint32_t> {1, 0});
    // first nonzero component positive
    CHECK(full.basis(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(full.basis(1, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)));

    const std::vector<Eigen::VectorXd> list {Eigen::Vector2d(3, 1), Eigen::Vector2d(1, 3),
            Eigen::Vector2d(-3, -1), Eigen::Vector2d(-1, -3)};
    CHECK(fit_block(list, 1) == blk);
}

TEST_CASE("fit_block errors") {
    CHECK(thrown([] { fit_block(Eigen::MatrixXd::Zero(3, 1), 1); }) == Errc::too_few_samples);
    CHECK(thrown([] { fit_block(std::vector<Eigen::VectorXd> {}, 1); }) == Errc::too_few_samples);
    CHECK(thrown([] { fit_block(Eigen::MatrixXd::Zero(3, 4), 4); }) == Errc::k_too_large);
    CHECK(thrown([] { fit_block(Eigen::MatrixXd::Zero(3, 4), 0); }) == Errc::invalid_argument);
    CHECK(thrown([] {
        fit_block(std::vector<Eigen::VectorXd> {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)},
                1);
    }) == Errc::dim_mismatch);
}

TEST_CASE("identical samples give a deterministic zero-spectrum kernel") {
    Eigen::MatrixXd x(4, 6);
    x.colwise() = Eigen::Vector4d(1, 2, 3, 4);
    const auto a = fit_block(x, 3);
    const auto b = fit_block(x, 3);
    CHECK(a == b);
    CHECK(max_abs(a.eigenvalues) == 0.0);
    CHECK(orthonormality_error(a) <= 1e-12);
    CHECK(a.mean == Eigen::Vector4d(1, 2, 3, 4));
    // ties go to the lower position in the ascending list
    CHECK(a.selected_indices == std::vector<std::uint32_t> {0, 1, 2});
}

TEST_CASE("project and backproject") {
    auto g = test::rng(21);
    const auto x = spread_samples(6, 40, 6, g);
    const auto full = fit_block(x, 6);
    const auto part = fit_block(x, 3);

    CHECK(max_abs(project(part, Eigen::VectorXd::Zero(6))) == 0.0);
    CHECK(max_abs(backproject(part, Eigen::VectorXd::Zero(3))) == 0.0);
    CHECK(thrown([&] { project(part, Eigen::VectorXd::Zero(5)); }) == Errc::dim_mismatch);
    CHECK(thrown([&] { backproject(part, Eigen::VectorXd::Zero(4)); }) == Errc::dim_mismatch);

    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::VectorXd f = 50.0 * test::random_matrix(6, 1, g);
        const Eigen::VectorXd gf = project(full, f);
        CHECK(std::abs(gf.norm() - f.norm()) <= 1e-10 * std::max(1.0, f.norm()));
        CHECK(max_abs(backproject(full, gf) - f) <= 1e-10 * std::max(1.0, f.norm()));

        const Eigen::VectorXd gp = project(part, f);
        CHECK(max_abs(gp - part.basis.transpose() * f) <= 1e-12 * f.norm());
        const Eigen::VectorXd fhat = backproject(part, gp);
        // residual orthogonal to span(B)
        CHECK(max_abs(part.basis.transpose() * (f - fhat)) <= 1e-9);
        // B*g agrees with a generic pseudo-inverse of B^T
        const Eigen::MatrixXd pinv
                = Eigen::MatrixXd(part.basis.transpose()).completeOrthogonalDecomposition().pseudoInverse();
        CHECK(max_abs(pinv * gp - fhat) <= 1e-9 * std::max(1.0, f.norm()));
    }

    const Eigen::MatrixXd batch = test::random_matrix(6, 5, g);
    const Eigen::MatrixXd gb = project_batch(part, batch);
    const Eigen::MatrixXd fb = backproject_batch(part, gb);
    for (Eigen::Index n = 0; n < 5; ++n) {
        CHECK(max_abs(gb.col(n) - project(part, Eigen::VectorXd(batch.col(n)))) <= 1e-12);
        CHECK(max_abs(fb.col(n) - backproject(part, Eigen::VectorXd(gb.col(n)))) <= 1e-12);
    }
}

TEST_CASE("retained variance is monotone in K and reaches the trace") {
    auto g = test::rng(8);
    const auto x = spread_samples(5, 30, 5, g);
    const double trace = test::covariance_oracle(x).trace();
    double prev = 0.0;
    for (Eigen::Index k = 1; k <= 5; ++k) {
        const double rv = retained_variance(fit_block(x, k));
        CHECK(rv >= prev);
        prev = rv;
    }
    CHECK(prev == doctest::Approx(trace).epsilon(1e-9));
}

TEST_CASE("kernel invariants over random instances") {
    auto g = test::rng(1234);
    // both solver routes: N >= V and N < V, with and without rank deficiency
    const Eigen::Index cases[][4] = {{6, 50, 6, 3}, {8, 20, 8, 8}, {12, 5, 5, 12},
            {30, 10, 10, 7}, {16, 16, 4, 16}, {40, 3, 3, 40}, {10, 200, 10, 1}};
    for (const auto &c : cases) {
        const auto x = spread_samples(c[0], c[1], c[2], g);
        const auto blk = fit_block(x, c[3]);
        const Eigen::MatrixXd r = test::covariance_oracle(x);
        CAPTURE(c[0]);
        CAPTURE(c[1]);

        CHECK(orthonormality_error(blk) <= 1e-10);
        CHECK(max_abs(blk.basis.transpose() * blk.basis
                      - Eigen::MatrixXd::Identity(c[3], c[3]))
                <= 1e-10);
        for (Eigen::Index t = 0; t < blk.retained_dim; ++t) {
            const double lam = blk.eigenvalues(t);
            CHECK(lam >= 0.0);
            if (t > 0) CHECK(blk.eigenvalues(t - 1) >= lam);
            CHECK((r * blk.basis.col(t) - lam * blk.basis.col(t)).norm()
                    <= 1e-8 * std::max(1.0, lam));
            // sign convention
            for (Eigen::Index a = 0; a < blk.input_dim; ++a) {
                if (std::abs(blk.basis(a, t)) > 1e-12) {
                    CHECK(blk.basis(a, t) > 0.0);
                    break;
                }
            }
        }
        CHECK(*blk.total_variance == doctest::Approx(r.trace()).epsilon(1e-9));
        auto idx = blk.selected_indices;
        std::sort(idx.begin(), idx.end());
        CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
        CHECK(idx.back() < static_cast<std::uint32_t>(blk.input_dim));
    }
}

TEST_CASE("truncation keeps the best K-subset of eigenvalues") {
    auto g = test::rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index v = 2 + trial % 5; // 2..6
        const auto x = spread_samples(v, 4 + trial % 9, std::min<Eigen::Index>(v, 2 + trial % 4), g);
        // independent spectrum
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(test::covariance_oracle(x));
        const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
        for (Eigen::Index k = 1; k <= v; ++k) {
            double best = 0.0;
            for (unsigned mask = 0; mask < (1u << v); ++mask) {
                if (std::popcount(mask) != k) continue;
                double s = 0.0;
                for (Eigen::Index a = 0; a < v; ++a)
                    if (mask & (1u << a)) s += lam(a);
                best = std::max(best, s);
            }
            const double rv = retained_variance(fit_block(x, k));
            CHECK(rv == doctest::Approx(best).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("projected training samples are decorrelated") {
    auto g = test::rng(99);
    for (const Eigen::Index n : {40, 12}) {
        const auto x = spread_samples(10, n, 10, g);
        const auto blk = fit_block(x, 6);
        const Eigen::MatrixXd gx = project_batch(blk, x);
        const Eigen::MatrixXd c = test::covariance_oracle(gx);
        const double top = c.diagonal().maxCoeff();
        Eigen::MatrixXd off = c;
        off.diagonal().setZero();
        CHECK(max_abs(off) <= 1e-8 * top);
    }
}
