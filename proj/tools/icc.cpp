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

// icc: train / eval / compress / reconstruct / inspect front end.
//
// Exit codes: 0 success, 1 invalid pipeline spec, 2 data or model errors.
// Diagnostics go to stderr; CSV goes to stdout or the requested files.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "icc/classifier.hpp"
#include "icc/dataset.hpp"
#include "icc/diagnostics.hpp"
#include "icc/error.hpp"
#include "icc/pipeline.hpp"
#include "icc/reconstruction.hpp"
#include "icc/serialization.hpp"
#include "icc/synthetic.hpp"
#include "icc/workflow.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_spec = 1;
constexpr int exit_data = 2;

struct TrainArgs {
    std::string manifest, spec, out;
    bool augment = false;
    std::size_t channels = 0;
};

struct EvalArgs {
    std::string manifest, model, candidates;
    std::vector<std::size_t> top {1, 3, 5};
};

struct CompressArgs {
    std::string image, model, out;
};

struct ReconstructArgs {
    std::string features, model, out, original;
};

struct InspectArgs {
    std::string model, manifest, out_dir;
};

struct SynthArgs {
    std::string out_dir;
    std::size_t classes = 10, train = 50, test = 20, size = 64, channels = 3;
    std::uint64_t seed = 7;
};

void metric(std::ostream &out, const std::string &name, double value) {
    out << name << ',' << std::setprecision(10) << value << '\n';
}

icc::ModelBundle load_classifier_model(const std::string &path) {
    auto bundle = icc::load_model(path);
    if (!bundle.classifier)
        throw icc::Error(icc::Errc::dim_mismatch, "model " + path + " has no classifier");
    return bundle;
}

int cmd_train(const TrainArgs &a) {
    icc::PipelineSpec spec = icc::load_spec(a.spec);
    if (a.channels != 0) spec.channels = a.channels;
    if (auto vs = icc::validate_spec(spec); !vs.empty()) {
        std::cerr << "icc train: invalid pipeline spec " << a.spec << '\n';
        for (const auto &v : vs)
            std::cerr << "  stage " << v.stage << ": " << v.message << '\n';
        return exit_spec;
    }

    const auto set = icc::load_dataset(icc::load_manifest(a.manifest), spec);
    std::cerr << "icc train: " << set.size() << " images loaded"
              << (a.augment ? ", flip augmentation on" : "") << '\n';
    const auto result = icc::train(set, spec, a.augment);
    if (result.classifier.condition_number > icc::ill_conditioned_threshold)
        std::cerr << "icc train: warning: pooled covariance is ill-conditioned (condition "
                  << result.classifier.condition_number << " after ridge)\n";
    icc::save_model(a.out, result.transform, result.classifier);

    std::cout << "metric,value\n";
    metric(std::cout, "train_images", static_cast<double>(result.image_count));
    metric(std::cout, "classes", static_cast<double>(result.classifier.class_count()));
    metric(std::cout, "feature_dim", static_cast<double>(spec.feature_dim()));
    metric(std::cout, "compression_ratio", icc::compression_ratio(spec));
    metric(std::cout, "train_seconds", result.seconds);
    return 0;
}

int cmd_eval(const EvalArgs &a) {
    const auto bundle = load_classifier_model(a.model);
    const auto set = icc::load_dataset(icc::load_manifest(a.manifest), bundle.transform.spec);
    const auto r = icc::evaluate(bundle.transform, *bundle.classifier, set, a.top);

    std::cout << "metric,value\n";
    metric(std::cout, "test_images", static_cast<double>(set.size()));
    metric(std::cout, "accuracy", r.accuracy());
    metric(std::cout, "test_seconds", r.seconds);
    std::cout << "\nrank,accuracy\n";
    for (std::size_t i = 0; i < r.ks.size(); ++i)
        std::cout << r.ks[i] << ',' << std::setprecision(10) << r.topk_accuracy[i] << '\n';

    if (!a.candidates.empty()) {
        std::ofstream out(a.candidates);
        if (!out) throw icc::Error(icc::Errc::io_error, "cannot write " + a.candidates);
        out << "image,truth,rank,label,probability\n";
        for (std::size_t n = 0; n < r.predictions.size(); ++n) {
            const auto &p = r.predictions[n];
            for (std::size_t k = 0; k < p.ranked.size(); ++k)
                out << n << ',' << p.truth << ',' << k + 1 << ',' << p.ranked[k].label << ','
                    << std::setprecision(10) << p.ranked[k].probability << '\n';
        }
    }
    return 0;
}

int cmd_compress(const CompressArgs &a) {
    const auto bundle = icc::load_model(a.model);
    const auto &spec = bundle.transform.spec;
    const icc::Image img
            = icc::preprocess(icc::load_image(a.image, spec.rows, spec.cols, spec.channels));
    const auto rec = icc::compress(bundle.transform, img);
    icc::save_features(a.out, rec);

    std::cout << "metric,value\n";
    metric(std::cout, "channels", static_cast<double>(spec.channels));
    metric(std::cout, "coefficients_per_channel", static_cast<double>(spec.final_retained()));
    for (std::size_t c = 0; c < rec.channels.size(); ++c)
        metric(std::cout, "brightness_gap_" + std::to_string(c), rec.channels[c].brightness_gap);
    std::ostringstream ratio;
    ratio << std::fixed << std::setprecision(2) << icc::compression_ratio(spec);
    std::cerr << "icc compress: compression ratio " << ratio.str() << ":1\n";
    metric(std::cout, "compression_ratio", icc::compression_ratio(spec));
    return 0;
}

int cmd_reconstruct(const ReconstructArgs &a) {
    const auto bundle = icc::load_model(a.model);
    const auto rec = icc::load_features(a.features);
    const icc::Image out = icc::decompress(bundle.transform, rec);
    icc::write_image(a.out, out);

    std::cout << "metric,value\n";
    if (!a.original.empty()) {
        const auto &spec = bundle.transform.spec;
        const icc::Image orig = icc::preprocess(
                icc::load_image(a.original, spec.rows, spec.cols, spec.channels));
        metric(std::cout, "percent_deviation", icc::percent_deviation(orig, out));
    }
    metric(std::cout, "compression_ratio", icc::compression_ratio(bundle.transform.spec));
    return 0;
}

void emit(const std::string &out_dir, const std::string &name,
        const std::function<void(std::ostream &)> &write) {
    if (out_dir.empty()) {
        std::cout << "# " << name << '\n';
        write(std::cout);
        std::cout << '\n';
        return;
    }
    const fs::path p = fs::path(out_dir) / name;
    std::ofstream out(p);
    if (!out) throw icc::Error(icc::Errc::io_error, "cannot write " + p.string());
    write(out);
    std::cerr << "icc inspect: wrote " << p.string() << '\n';
}

int cmd_inspect(const InspectArgs &a) {
    const auto bundle = icc::load_model(a.model);
    if (!a.out_dir.empty()) fs::create_directories(a.out_dir);

    const auto spectrum = icc::eigenspectrum_report(bundle.transform);
    emit(a.out_dir, "eigenspectrum.csv",
            [&](std::ostream &o) { icc::write_eigenspectrum_csv(o, spectrum); });
    if (a.manifest.empty()) return 0;

    const auto &spec = bundle.transform.spec;
    const auto set = icc::load_dataset(icc::load_manifest(a.manifest), spec);
    std::vector<icc::Image> images;
    std::vector<std::string> labels;
    for (const auto &li : set) {
        images.push_back(li.image);
        labels.push_back(li.label);
    }
    const Eigen::MatrixXd fm = icc::forward_batch(bundle.transform, images).transpose();
    const auto corr = icc::correlation_matrix(fm);
    const auto per = static_cast<Eigen::Index>(spec.final_retained());

    emit(a.out_dir, "correlation_summary.csv", [&](std::ostream &o) {
        o << "scope,max_off_diagonal,zero_variance_features\n";
        o << std::setprecision(6) << std::scientific;
        for (std::size_t c = 0; c < spec.channels; ++c) {
            const auto begin = static_cast<Eigen::Index>(c) * per;
            std::size_t zeros = 0;
            for (auto z : corr.zero_variance)
                zeros += z >= begin && z < begin + per;
            o << "channel" << c << ',' << icc::max_off_diagonal(corr.matrix, begin, begin + per)
              << ',' << zeros << '\n';
        }
        o << "all," << icc::max_off_diagonal(corr.matrix) << ',' << corr.zero_variance.size()
          << '\n';
    });
    if (!a.out_dir.empty())
        emit(a.out_dir, "correlation_matrix.csv",
                [&](std::ostream &o) { icc::write_correlation_csv(o, corr); });

    if (fm.rows() >= 8) {
        std::map<std::string, std::size_t> sizes;
        for (const auto &l : labels)
            ++sizes[l];
        bool per_class = true;
        for (const auto &[l, n] : sizes)
            per_class = per_class && n >= 8;
        auto report = icc::gaussianity_report(fm);
        if (per_class) {
            auto by_class = icc::gaussianity_report(fm, labels);
            report.insert(report.end(), by_class.begin(), by_class.end());
        } else {
            std::cerr << "icc inspect: some classes have fewer than 8 images; "
                         "gaussianity reported for the whole set only\n";
        }
        emit(a.out_dir, "gaussianity.csv",
                [&](std::ostream &o) { icc::write_gaussianity_csv(o, report); });
    } else {
        std::cerr << "icc inspect: fewer than 8 images; gaussianity report skipped\n";
    }
    return 0;
}

int cmd_synth(const SynthArgs &a) {
    icc::BlobDatasetOptions opt;
    opt.classes = a.classes;
    opt.train_per_class = a.train;
    opt.test_per_class = a.test;
    opt.rows = opt.cols = a.size;
    opt.channels = a.channels;
    opt.seed = a.seed;
    const auto ds = icc::make_blob_dataset(opt);

    const fs::path root(a.out_dir);
    fs::create_directories(root / "images");
    const char *ext = a.channels == 3 ? ".ppm" : ".pgm";
    auto write_set = [&](const std::vector<icc::LabeledImage> &set, const std::string &name) {
        std::ofstream csv(root / (name + ".csv"));
        csv << "path,label\n";
        for (std::size_t n = 0; n < set.size(); ++n) {
            const std::string file = "images/" + name + "_" + std::to_string(n) + ext;
            icc::write_image(root / file, set[n].image);
            csv << file << ',' << set[n].label << '\n';
        }
    };
    write_set(ds.train, "train");
    write_set(ds.test, "test");
    std::cerr << "icc synth: wrote " << ds.train.size() << " train and " << ds.test.size()
              << " test images to " << root.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app {"Multi-stage PCA compression and Gaussian discriminant classification"};
    app.require_subcommand(1);

    TrainArgs ta;
    auto *train = app.add_subcommand("train", "fit transform kernels and the classifier");
    train->add_option("--manifest", ta.manifest, "training manifest (path,label CSV)")->required();
    train->add_option("--spec", ta.spec, "pipeline spec file")->required();
    train->add_option("--out", ta.out, "output model file (.iccm)")->required();
    train->add_flag("--augment", ta.augment, "add horizontally flipped copies");
    train->add_option("--channels", ta.channels, "override the spec channel count")
            ->check(CLI::IsMember({1, 3}));

    EvalArgs ea;
    auto *eval = app.add_subcommand("eval", "classify a labelled set and report top-k accuracy");
    eval->add_option("--manifest", ea.manifest, "test manifest")->required();
    eval->add_option("--model", ea.model, "model file")->required();
    eval->add_option("--top", ea.top, "ranks to report (default 1 3 5)")
            ->check(CLI::PositiveNumber);
    eval->add_option("--candidates", ea.candidates, "write ranked candidates per image to CSV");

    CompressArgs ca;
    auto *compress = app.add_subcommand("compress", "store an image as reduced features");
    compress->add_option("--image", ca.image, "input image")->required();
    compress->add_option("--model", ca.model, "model file")->required();
    compress->add_option("--out", ca.out, "output feature file (.iccf)")->required();

    ReconstructArgs ra;
    auto *reconstruct = app.add_subcommand("reconstruct", "rebuild an image from features");
    reconstruct->add_option("--features", ra.features, "feature file")->required();
    reconstruct->add_option("--model", ra.model, "model file")->required();
    reconstruct->add_option("--out", ra.out, "output image (.png/.pgm/.ppm)")->required();
    reconstruct->add_option("--report-deviation", ra.original,
            "original image; prints the percent deviation");

    InspectArgs ia;
    auto *inspect = app.add_subcommand("inspect", "eigenspectrum and feature diagnostics");
    inspect->add_option("--model", ia.model, "model file")->required();
    inspect->add_option("--features-from", ia.manifest,
            "manifest whose features are checked for correlation and gaussianity");
    inspect->add_option("--out-dir", ia.out_dir, "write CSV reports here instead of stdout");

    SynthArgs sa;
    auto *synth = app.add_subcommand("synth", "generate a synthetic blob dataset");
    synth->add_option("--out-dir", sa.out_dir, "output directory")->required();
    synth->add_option("--classes", sa.classes, "number of classes");
    synth->add_option("--train-per-class", sa.train, "training images per class");
    synth->add_option("--test-per-class", sa.test, "test images per class");
    synth->add_option("--size", sa.size, "image side length");
    synth->add_option("--channels", sa.channels)->check(CLI::IsMember({1, 3}));
    synth->add_option("--seed", sa.seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return cmd_train(ta);
        if (*eval) return cmd_eval(ea);
        if (*compress) return cmd_compress(ca);
        if (*reconstruct) return cmd_reconstruct(ra);
        if (*inspect) return cmd_inspect(ia);
        if (*synth) return cmd_synth(sa);
    } catch (const icc::Error &e) {
        std::cerr << "icc: " << icc::errc_name(e.code()) << ": " << e.what() << '\n';
        return e.code() == icc::Errc::spec_invalid ? exit_spec : exit_data;
    } catch (const std::exception &e) {
        std::cerr << "icc: " << e.what() << '\n';
        return exit_data;
    }
    return 0;
}
