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


#ifndef ICC_TESTS_FIXTURES_HPP
#define ICC_TESTS_FIXTURES_HPP

#include "icc/classifier.hpp"
#include "icc/pipeline.hpp"
#include "icc/reconstruction.hpp"

namespace icc::test {

// Reference contents of data/tiny.iccm and data/tiny.iccf. Every value is
// exactly representable so the files can be checked by eye in a hex dump.

inline TransformModel tiny_transform() {
    TransformModel t;
    t.spec = {1, 2, 1, {{1, 2, 1}}};
    KernelBlock b;
    b.input_dim = 2;
    b.retained_dim = 1;
    b.mean = Eigen::Vector2d(0.5, -0.25);
    b.eigenvalues = Eigen::VectorXd::Constant(1, 8.0);
    b.basis = Eigen::MatrixXd(2, 1);
    b.basis << 0.6, 0.8;
    b.selected_indices = {1};
    t.kernels = {{StageKernels {1, 1, {b}}}};
    return t;
}

inline LdaModel tiny_classifier() {
    LdaModel m;
    m.labels = {"A", "B\xC3\xA9"}; // "Bé"
    m.counts = {3, 1};
    m.total = 4;
    m.priors = Eigen::Vector2d(0.75, 0.25);
    m.means = Eigen::MatrixXd(2, 1);
    m.means << 1.0, 5.0;
    m.pooled_cov = Eigen::MatrixXd::Constant(1, 1, 2.0);
    m.weights = Eigen::MatrixXd(2, 1);
    m.weights << 0.5, 2.5;
    m.biases = Eigen::Vector2d(-1.5, -7.5);
    return m;
}

inline CompressedRecord tiny_record() {
    CompressedRecord r;
    r.channels.push_back({-0.5, Eigen::VectorXd::Constant(1, 2.0)});
    return r;
}

} // namespace icc::test

#endif // ICC_TESTS_FIXTURES_HPP
