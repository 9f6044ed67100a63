// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gscodec/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gscodec/ply_io.hpp"

namespace gscodec::pipeline {

namespace fs = std::filesystem;

namespace {

std::uint64_t file_size(const std::string& path) {
    std::error_code ec;
    auto s = fs::file_size(path, ec);
    if (ec) throw IoError("cannot stat " + path);
    return static_cast<std::uint64_t>(s);
}

// Removes rows whose activated opacity falls below the threshold.
std::size_t prune_cloud(GaussianCloud& cloud, double min_opacity) {
    std::vector<std::uint32_t> kept;
    kept.reserve(cloud.count);
    for (std::size_t i = 0; i < cloud.count; ++i) {
        double sigma = 1.0 / (1.0 + std::exp(-static_cast<double>(cloud.logit_opacity[i])));
        if (sigma >= min_opacity) kept.push_back(static_cast<std::uint32_t>(i));
    }
    if (kept.size() == cloud.count) return 0;
    auto filter = [&kept](std::vector<float>& v, std::size_t dim) {
        std::vector<float> out(kept.size() * dim);
        for (std::size_t j = 0; j < kept.size(); ++j)
            std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(kept[j] * dim), dim,
                        out.begin() + static_cast<std::ptrdiff_t>(j * dim));
        v = std::move(out);
    };
    const std::size_t removed = cloud.count - kept.size();
    filter(cloud.position, kPositionDim);
    filter(cloud.log_scale, kScaleDim);
    filter(cloud.rotation, kRotationDim);
    filter(cloud.logit_opacity, kOpacityDim);
    filter(cloud.color_dc, kColorDcDim);
    filter(cloud.color_sh, kColorShDim);
    cloud.count = kept.size();
    return removed;
}

void write_bytes_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("failed writing " + path);
}

CompressReport finish_encode(const GaussianCloud& cloud, const vq::CloudCodebooks& books,
                             const CompressOptions& options, const std::string& input_ply,
                             const std::string& output_cgs, std::uint64_t pruned) {
    auto bytes = codec::encode_bytes(cloud, books, options.policy, options.flags);
    write_bytes_file(output_cgs, bytes);

    CompressReport report;
    report.input_bytes = file_size(input_ply);
    report.output_bytes = bytes.size();
    report.ratio = report.output_bytes
                       ? static_cast<double>(report.input_bytes) / report.output_bytes
                       : 0.0;
    report.gaussians = cloud.count;
    report.pruned = pruned;

    codec::ContainerParams params;
    params.count = cloud.count;
    params.policy = options.policy;
    params.flags = options.flags;
    for (ParamGroup g : kAllGroups) {
        auto i = static_cast<std::size_t>(g);
        params.shapes[i].dim = static_cast<std::uint16_t>(group_dim(g));
        params.shapes[i].k =
            (options.flags.drop_sh && g == ParamGroup::SH) ? 0 : books[g].k;
    }
    report.sections = codec::compute_layout(params);
    return report;
}

}  // namespace

CompressReport compress_file(const std::string& input_ply, const std::string& output_cgs,
                             const CompressOptions& options) {
    GaussianCloud cloud = ply::read_ply_file(input_ply);
    std::uint64_t pruned = 0;
    if (options.prune_min_opacity > 0.0)
        pruned = prune_cloud(cloud, options.prune_min_opacity);
    if (cloud.count == 0) throw ValueError("compress: no Gaussians left to encode");

    vq::VqConfig cfg = options.vq;
    vq::CloudCodebooks books;
    for (ParamGroup g : kAllGroups) {
        if (options.flags.drop_sh && g == ParamGroup::SH) continue;
        vq::VqConfig per = cfg;
        per.seed = cfg.seed + static_cast<std::uint64_t>(g) * 0x9e3779b97f4a7c15ull;
        std::uint32_t k = std::min<std::uint64_t>(cfg.k_for(g), cloud.count);
        books[g] = vq::lloyd(group_view(cloud, g), k, per);
    }
    return finish_encode(cloud, books, options, input_ply, output_cgs, pruned);
}

void decompress_file(const std::string& input_cgs, const std::string& output_ply) {
    std::ifstream is(input_cgs, std::ios::binary);
    if (!is) throw IoError("cannot open " + input_cgs);
    codec::DecodedContainer dec = codec::decode(is);
    ply::write_ply_file(output_ply, dec.cloud);
}

InspectReport inspect_file(const std::string& input_cgs) {
    std::ifstream is(input_cgs, std::ios::binary);
    if (!is) throw IoError("cannot open " + input_cgs);
    codec::DecodedContainer dec = codec::decode(is);

    InspectReport report;
    report.params = dec.params;
    report.sections = codec::compute_layout(dec.params);
    report.packed = codec::memory_breakdown(dec.params, codec::IndexAccounting::Packed);
    report.unpacked32 = codec::memory_breakdown(dec.params, codec::IndexAccounting::Unpacked32);
    for (ParamGroup g : kAllGroups) {
        if (dec.books[g].k == 0) {
            report.stats.emplace_back();
            continue;
        }
        report.stats.push_back(metrics::codebook_stats(dec.books[g]));
    }
    return report;
}

CompressReport assign_file(const std::string& input_ply, const std::string& frozen_cgs,
                           const std::string& output_cgs, const CompressOptions& options) {
    GaussianCloud cloud = ply::read_ply_file(input_ply);
    std::uint64_t pruned = 0;
    if (options.prune_min_opacity > 0.0)
        pruned = prune_cloud(cloud, options.prune_min_opacity);
    if (cloud.count == 0) throw ValueError("assign: no Gaussians left to encode");

    std::ifstream is(frozen_cgs, std::ios::binary);
    if (!is) throw IoError("cannot open " + frozen_cgs);
    codec::DecodedContainer frozen = codec::decode(is);

    CompressOptions opts = options;
    opts.flags = frozen.params.flags;  // container geometry follows the donor
    vq::CloudCodebooks books = frozen.books;
    if (opts.flags.drop_sh) books[ParamGroup::SH] = vq::Codebook{};
    for (ParamGroup g : kAllGroups) {
        if (opts.flags.drop_sh && g == ParamGroup::SH) continue;
        vq::Codebook& cb = books[g];
        ConstMatView cents{cb.centroids.data(), cb.k, cb.dim};
        cb.assignments.resize(cloud.count);
        vq::assign(group_view(cloud, g), cents, cb.assignments, nullptr, options.vq.threads);
    }
    return finish_encode(cloud, books, opts, input_ply, output_cgs, pruned);
}

Train2DReport train2d_run(const Train2DOptions& options, const std::string& checkpoint_path,
                          const std::string& trace_csv_path,
                          const std::string& render_png_path) {
    Image target;
    if (!options.target_png.empty()) {
        target = read_png(options.target_png);
    } else {
        // Self-supervised toy problem: the target is a render of a hidden
        // synthetic scene.
        splat2d::Splat2DScene hidden = splat2d::make_synthetic_scene(
            options.synth_gaussians, options.width, options.height, options.seed + 1);
        target = splat2d::render(hidden, options.width, options.height);
    }

    splat2d::Splat2DScene init = splat2d::make_synthetic_scene(
        options.fit_gaussians, target.width, target.height, options.seed);
    splat2d::Vq2DConfig vq_cfg = options.vq;
    vq_cfg.seed = options.seed;

    std::vector<Image> targets{target};
    splat2d::TrainResult result = splat2d::train(targets, init, options.schedule, vq_cfg,
                                                 options.optimizer, options.trace_every);

    if (!checkpoint_path.empty()) splat2d::save_scene(checkpoint_path, result.scene, result.books);
    if (!trace_csv_path.empty()) splat2d::write_trace_csv(trace_csv_path, result.trace);
    if (!render_png_path.empty()) {
        const splat2d::Splat2DScene* final_scene = &result.scene;
        splat2d::Splat2DScene quantized;
        if (result.books) {
            quantized = splat2d::quantize_view(result.scene, *result.books);
            final_scene = &quantized;
        }
        write_png(render_png_path, splat2d::render(*final_scene, target.width, target.height));
    }

    Train2DReport report;
    report.final_psnr = result.final_psnr;
    report.final_count = result.scene.count;
    report.iterations = options.schedule.total_iters;
    return report;
}

EvalReport eval_dirs(const std::string& dir_a, const std::string& dir_b) {
    auto list_pngs = [](const std::string& dir) {
        if (!fs::is_directory(dir)) throw IoError(dir + " is not a directory");
        std::vector<std::string> names;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".png")
                names.push_back(e.path().filename().string());
        std::sort(names.begin(), names.end());
        return names;
    };
    auto names_a = list_pngs(dir_a);
    auto names_b = list_pngs(dir_b);
    if (names_a != names_b)
        throw ValueError("eval: directories do not contain the same image set");
    if (names_a.empty()) throw ValueError("eval: no .png files found");

    std::vector<Image> a, b;
    for (const auto& n : names_a) {
        a.push_back(read_png((fs::path(dir_a) / n).string()));
        b.push_back(read_png((fs::path(dir_b) / n).string()));
    }
    EvalReport report;
    report.names = names_a;
    report.quality = metrics::quality_report(a, b);
    return report;
}

}  // namespace gscodec::pipeline
