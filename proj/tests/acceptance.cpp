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


// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is nonzero if any criterion fails.
//
// Criterion 8 needs user-supplied face crops. Point ICC_LFW_DIR at a
// directory holding lfw19_{train,test}.csv and lfw158_{train,test}.csv
// manifests; without it the criterion is reported as SKIP.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "icc/classifier.hpp"
#include "icc/dataset.hpp"
#include "icc/diagnostics.hpp"
#include "icc/pca.hpp"
#include "icc/pipeline.hpp"
#include "icc/reconstruction.hpp"
#include "icc/serialization.hpp"
#include "icc/synthetic.hpp"
#include "icc/workflow.hpp"

using namespace icc;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double c1_max_deviation_pct = 1e-3;
constexpr double c1_max_seconds = 10.0;
constexpr std::size_t c2_min_images = 200;
constexpr double c2_max_orthonormality = 1e-10;
constexpr double c3_max_correlation = 1e-5;
constexpr int c4_problems = 200;
constexpr double c4_max_gap_spread = 1e-9;
constexpr double c6_tol_45 = 0.01;
constexpr double c6_tol_136 = 0.05;
constexpr double c7_min_top1 = 0.95;
constexpr double c7_max_seconds = 5.0;
constexpr double c8_target_19 = 0.9761, c8_tol_19 = 0.03;
constexpr double c8_target_158 = 0.8491, c8_tol_158 = 0.04;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char *status, const std::string &detail) {
    std::printf("criterion %2d: %-4s %s\n", id, status, detail.c_str());
    std::fflush(stdout);
}

void verdict(int id, bool ok, const std::string &detail) {
    if (!ok) ++failures;
    report(id, ok ? "PASS" : "FAIL", detail);
}

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void guarded(std::initializer_list<int> ids, const std::function<void()> &body) {
    try {
        body();
    } catch (const std::exception &e) {
        for (int id : ids)
            verdict(id, false, std::string("exception: ") + e.what());
    }
}

PipelineSpec setting3(std::size_t kp) {
    return {64, 64, 3, {{8, 8, 16}, {4, 4, 64}, {2, 2, kp}}};
}

std::vector<Image> images_of(const std::vector<LabeledImage> &set) {
    std::vector<Image> out;
    for (const auto &li : set)
        out.push_back(li.image);
    return out;
}

std::vector<LabeledImage> preprocessed(std::vector<LabeledImage> set) {
    for (auto &li : set)
        li.image = preprocess(li.image);
    return set;
}

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64 &g) {
    std::normal_distribution<double> n(0.0, 1.0);
    MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i)
            m(i, j) = n(g);
    return m;
}

void criterion1() {
    std::mt19937_64 rng(101);
    std::vector<Image> imgs;
    for (int n = 0; n < 100; ++n)
        imgs.push_back(random_image(64, 64, 3, rng));
    const PipelineSpec full {64, 64, 3, {{8, 8, 64}, {4, 4, 1024}, {2, 2, 4096}}};

    const auto t0 = Clock::now();
    const auto model = fit(imgs, full);
    const MatrixXd features = forward_batch(model, imgs);
    const auto back = inverse_batch(model, features);
    const double secs = seconds_since(t0);

    double worst = 0.0;
    for (std::size_t n = 0; n < imgs.size(); ++n)
        worst = std::max(worst, percent_deviation(imgs[n], back[n]));
    verdict(1, worst <= c1_max_deviation_pct && secs <= c1_max_seconds,
            fmt("lossless roundtrip, 100 random 64x64x3 images, 12288 features: max deviation "
                "%.3e%% (<= %.0e%%), fit+forward+inverse %.2f s (<= %.0f s)",
                    worst, c1_max_deviation_pct, secs, c1_max_seconds));
}

void criteria2and3() {
    BlobDatasetOptions opt;
    opt.train_per_class = 40; // 400 images >= 4 * 90
    opt.test_per_class = 0;
    opt.seed = 202;
    const auto set = preprocessed(make_blob_dataset(opt).train);
    const auto imgs = images_of(set);
    const auto spec = setting3(90);
    const auto model = fit(imgs, spec);

    double worst = 0.0;
    std::size_t blocks = 0;
    for (const auto &ch : model.kernels)
        for (const auto &st : ch)
            for (const auto &b : st.blocks) {
                worst = std::max(worst, orthonormality_error(b));
                ++blocks;
            }
    verdict(2, imgs.size() >= c2_min_images && worst <= c2_max_orthonormality,
            fmt("kernel orthonormality over %zu blocks, Setting 3 fit on %zu images: "
                "max |B'B - I| = %.3e (<= %.0e)",
                    blocks, imgs.size(), worst, c2_max_orthonormality));

    const MatrixXd fm = forward_batch(model, imgs).transpose();
    const auto corr = correlation_matrix(fm);
    const auto per = static_cast<Eigen::Index>(spec.final_retained());
    double worst_corr = 0.0;
    for (Eigen::Index c = 0; c < 3; ++c)
        worst_corr = std::max(worst_corr, max_off_diagonal(corr.matrix, c * per, (c + 1) * per));
    const bool enough = imgs.size() >= 4 * spec.final_retained();
    verdict(3, enough && corr.zero_variance.empty() && worst_corr < c3_max_correlation,
            fmt("final-feature decorrelation, N=%zu, K^P=%zu: max per-channel off-diagonal "
                "%.3e (< %.0e), zero-variance features %zu",
                    imgs.size(), spec.final_retained(), worst_corr, c3_max_correlation,
                    corr.zero_variance.size()));
}

// Random rotation times axis scales in [0.5, 2].
MatrixXd well_conditioned(int d, std::mt19937_64 &g) {
    const MatrixXd q = gaussian(d, d, g).householderQr().householderQ();
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    VectorXd s(d);
    for (int i = 0; i < d; ++i)
        s(i) = scale(g);
    return q * s.asDiagonal();
}

VectorXd log_joint(const LdaModel &model, const VectorXd &x) {
    Eigen::FullPivLU<MatrixXd> lu(model.pooled_cov);
    const MatrixXd inv = lu.inverse();
    const double log_det = std::log(std::abs(lu.determinant()));
    const auto d = static_cast<double>(x.size());
    VectorXd out(model.means.rows());
    for (Eigen::Index m = 0; m < out.size(); ++m) {
        const VectorXd diff = x - model.means.row(m).transpose();
        out(m) = -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * log_det
                - 0.5 * diff.dot(inv * diff) + std::log(model.priors(m));
    }
    return out;
}

void criterion4() {
    std::mt19937_64 g(404);
    std::uniform_int_distribution<int> dim(1, 8), cls(2, 5);
    long agree = 0, total = 0;
    double spread = 0.0;
    for (int t = 0; t < c4_problems; ++t) {
        const int d = dim(g), m = cls(g);
        const int n = std::uniform_int_distribution<int>(std::max(2 * m, d + m), 200)(g);
        const MatrixXd mix = well_conditioned(d, g);
        const MatrixXd centers = 2.0 * gaussian(d, m, g);
        MatrixXd x(d, n);
        std::vector<std::string> labels;
        for (int i = 0; i < n; ++i) {
            const int c = i < m ? i : static_cast<int>(g() % static_cast<unsigned>(m));
            x.col(i) = centers.col(c) + mix * gaussian(d, 1, g);
            labels.push_back("c" + std::to_string(c));
        }
        const auto model = fit_lda(x, labels);
        for (int q = 0; q < 25; ++q) {
            const VectorXd probe = 3.0 * gaussian(d, 1, g);
            const VectorXd lj = log_joint(model, probe);
            Eigen::Index best = 0;
            for (Eigen::Index k = 1; k < lj.size(); ++k)
                if (lj(k) > lj(best)) best = k;
            agree += static_cast<Eigen::Index>(predict_index(model, probe)) == best;
            ++total;
            const VectorXd gap = score(model, probe) - lj;
            spread = std::max(spread, gap.maxCoeff() - gap.minCoeff());
        }
    }
    verdict(4, agree == total && spread <= c4_max_gap_spread,
            fmt("MAP oracle over %d problems (D<=8, M<=5, N<=200): %ld/%ld predictions agree, "
                "max spread of score - log-joint %.3e (<= %.0e)",
                    c4_problems, agree, total, spread, c4_max_gap_spread));
}

void criterion5() {
    std::mt19937_64 g(505);
    int cases = 0, exact = 0;
    double worst_rel = 0.0;
    for (int t = 0; t < 300; ++t) {
        const int v = 1 + t % 6;
        const int n = 2 + static_cast<int>(g() % 12);
        MatrixXd x = gaussian(v, n, g);
        for (int r = 0; r < v; ++r)
            x.row(r) *= 1.0 + static_cast<double>(g() % 5);
        const VectorXd all = fit_block(x, v).eigenvalues; // descending
        for (int k = 1; k <= v; ++k) {
            double best = -1.0;
            for (unsigned mask = 0; mask < (1u << v); ++mask) {
                if (std::popcount(mask) != k) continue;
                double s = 0.0;
                for (int a = 0; a < v; ++a)
                    if (mask & (1u << a)) s += all(a);
                best = std::max(best, s);
            }
            const double rv = retained_variance(fit_block(x, k));
            ++cases;
            exact += rv == best;
            worst_rel = std::max(worst_rel, std::abs(rv - best) / std::max(1.0, best));
        }
    }
    verdict(5, exact == cases,
            fmt("truncation optimality, V<=6, every K: %d/%d retained variances equal the "
                "best K-subset exactly (max rel diff %.1e)",
                    exact, cases, worst_rel));
}

void criterion6() {
    const double r90 = compression_ratio(setting3(90));
    const double r30 = compression_ratio(setting3(30));
    verdict(6, std::abs(r90 - 45.51) <= c6_tol_45 && std::abs(r30 - 136.53) <= c6_tol_136,
            fmt("compression ratio 64x64, K^P=90: %.4f (45.51 +- %.2f); K^P=30: %.4f "
                "(136.53 +- %.2f)",
                    r90, c6_tol_45, r30, c6_tol_136));
}

struct SyntheticRun {
    TrainResult trained;
    EvalResult eval;
    std::vector<LabeledImage> test;
};

SyntheticRun criterion7() {
    BlobDatasetOptions opt; // 10 classes, 50 train / 20 test, 64x64x3
    const auto ds = make_blob_dataset(opt);
    SyntheticRun run;
    const auto train_set = preprocessed(ds.train);
    run.test = preprocessed(ds.test);
    run.trained = train(train_set, setting3(45), false);
    run.eval = evaluate(run.trained.transform, run.trained.classifier, run.test, {1, 3, 5});
    const double top1 = run.eval.topk_accuracy[0], top3 = run.eval.topk_accuracy[1];
    verdict(7, top1 >= c7_min_top1 && top3 >= top1 && run.trained.seconds <= c7_max_seconds,
            fmt("synthetic 10-class, 500 train / 200 test, Setting 3 K^P=45: top-1 %.2f%% "
                "(>= %.0f%%), top-3 %.2f%%, train %.2f s (<= %.0f s)",
                    100 * top1, 100 * c7_min_top1, 100 * top3, run.trained.seconds,
                    c7_max_seconds));
    return run;
}

bool topk_monotone(const EvalResult &r) {
    return r.topk_accuracy.size() == 3 && r.topk_accuracy[0] <= r.topk_accuracy[1]
            && r.topk_accuracy[1] <= r.topk_accuracy[2];
}

std::vector<EvalResult> criterion8() {
    std::vector<EvalResult> runs;
    const char *dir = std::getenv("ICC_LFW_DIR");
    if (!dir || !*dir) {
        report(8, "SKIP", "optional face-crop reproduction: ICC_LFW_DIR not set");
        return runs;
    }
    const fs::path root(dir);
    const struct {
        const char *name;
        double target, tol;
    } sets[] = {{"lfw19", c8_target_19, c8_tol_19}, {"lfw158", c8_target_158, c8_tol_158}};
    bool ok = true;
    std::string detail = "face crops, Setting 3 K^P=90, flip augmentation:";
    for (const auto &s : sets) {
        const auto spec = setting3(90);
        const auto train_set
                = load_dataset(load_manifest(root / (std::string(s.name) + "_train.csv")), spec);
        const auto test_set
                = load_dataset(load_manifest(root / (std::string(s.name) + "_test.csv")), spec);
        const auto trained = train(train_set, spec, true);
        auto r = evaluate(trained.transform, trained.classifier, test_set, {1, 3, 5});
        const double top1 = r.topk_accuracy[0];
        ok = ok && std::abs(top1 - s.target) <= s.tol;
        detail += fmt(" %s %zu classes top-1 %.2f%% (%.2f +- %.0f), train %.2f s, test %.2f s;",
                s.name, trained.classifier.class_count(), 100 * top1, 100 * s.target,
                100 * s.tol, trained.seconds, r.seconds);
        runs.push_back(std::move(r));
    }
    verdict(8, ok, detail);
    return runs;
}

void criterion9(const std::vector<const EvalResult *> &runs) {
    bool ok = !runs.empty();
    std::string detail = "top-k monotonicity (exact):";
    for (const auto *r : runs) {
        ok = ok && topk_monotone(*r);
        detail += fmt(" top-1 %.4f <= top-3 %.4f <= top-5 %.4f;", r->topk_accuracy[0],
                r->topk_accuracy[1], r->topk_accuracy[2]);
    }
    verdict(9, ok, detail);
}

void criterion10(const SyntheticRun &run) {
    const auto &t = run.trained;
    const auto bytes = encode_model(t.transform, t.classifier);
    const auto back = decode_model(bytes);
    const bool model_ok = back.transform == t.transform && back.classifier
            && *back.classifier == t.classifier
            && encode_model(back.transform, back.classifier) == bytes;

    const auto rec = compress(t.transform, run.test.front().image);
    const auto fbytes = encode_features(rec);
    const bool feat_ok = decode_features(fbytes) == rec;

    const fs::path data = ICC_TEST_DATA;
    auto read = [](const fs::path &p) {
        std::ifstream in(p, std::ios::binary);
        return std::vector<std::uint8_t>(
                std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };
    const auto golden = decode_model(read(data / "tiny.iccm"));
    const bool golden_model = golden.transform == test::tiny_transform() && golden.classifier
            && *golden.classifier == test::tiny_classifier();
    const bool golden_feat = decode_features(read(data / "tiny.iccf")) == test::tiny_record();

    verdict(10, model_ok && feat_ok && golden_model && golden_feat,
            fmt("serialization: ICCM roundtrip (%zu bytes) %s, ICCF roundtrip %s, golden ICCM "
                "%s, golden ICCF %s",
                    bytes.size(), model_ok ? "bit-identical" : "DIFFERS",
                    feat_ok ? "bit-identical" : "DIFFERS", golden_model ? "ok" : "MISMATCH",
                    golden_feat ? "ok" : "MISMATCH"));
}

} // namespace

int main() {
    guarded({1}, criterion1);
    guarded({2, 3}, criteria2and3);
    guarded({4}, criterion4);
    guarded({5}, criterion5);
    guarded({6}, criterion6);

    SyntheticRun run;
    bool have_run = false;
    guarded({7}, [&] {
        run = criterion7();
        have_run = true;
    });
    std::vector<EvalResult> lfw;
    guarded({8}, [&] { lfw = criterion8(); });

    std::vector<const EvalResult *> runs;
    if (have_run) runs.push_back(&run.eval);
    for (const auto &r : lfw)
        runs.push_back(&r);
    guarded({9}, [&] { criterion9(runs); });
    if (have_run)
        guarded({10}, [&] { criterion10(run); });
    else
        verdict(10, false, "no trained model to serialize");

    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
