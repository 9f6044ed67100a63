// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gscodec/codec.hpp"
#include "gscodec/metrics.hpp"
#include "gscodec/splat2d.hpp"

namespace gscodec::pipeline {

// File-level operations behind the CLI subcommands. Kept in the library so
// integration tests exercise the same paths the tool runs.

struct CompressOptions {
    vq::VqConfig vq;
    codec::ResidualPolicy policy;  // defaults: position 16-bit, opacity 8-bit
    codec::ContainerFlags flags;
    double prune_min_opacity = 0.0;  // 0 disables the pruning pre-pass
    bool quiet = false;
};

struct CompressReport {
    std::uint64_t input_bytes = 0;
    std::uint64_t output_bytes = 0;
    double ratio = 0.0;  // input / output
    std::uint64_t gaussians = 0;
    std::uint64_t pruned = 0;
    codec::SectionSizes sections;
};

CompressReport compress_file(const std::string& input_ply, const std::string& output_cgs,
                             const CompressOptions& options);

void decompress_file(const std::string& input_cgs, const std::string& output_ply);

struct InspectReport {
    codec::ContainerParams params;
    codec::SectionSizes sections;
    codec::BreakdownReport packed;
    codec::BreakdownReport unpacked32;
    std::vector<metrics::CodebookStats> stats;  // per group, dc/sh/scale/rot
};

InspectReport inspect_file(const std::string& input_cgs);

/// Re-encodes a cloud against the frozen codebooks of an existing container
/// (centroids reused, assignments recomputed).
CompressReport assign_file(const std::string& input_ply, const std::string& frozen_cgs,
                           const std::string& output_cgs, const CompressOptions& options);

struct Train2DOptions {
    std::string target_png;      // empty = synthetic self-supervised target
    std::size_t synth_gaussians = 50;
    std::size_t width = 64;
    std::size_t height = 64;
    std::size_t fit_gaussians = 120;
    splat2d::QatSchedule schedule;
    splat2d::Vq2DConfig vq;
    splat2d::OptimizerConfig optimizer;
    std::uint64_t seed = 0;
    std::uint32_t trace_every = 50;
    bool quiet = false;
};

struct Train2DReport {
    double final_psnr = 0.0;
    std::uint64_t final_count = 0;
    std::uint32_t iterations = 0;
};

Train2DReport train2d_run(const Train2DOptions& options, const std::string& checkpoint_path,
                          const std::string& trace_csv_path,
                          const std::string& render_png_path = "");

struct EvalReport {
    std::vector<std::string> names;
    metrics::QualityReport quality;
};

/// Compares same-named PNG files in two directories.
EvalReport eval_dirs(const std::string& dir_a, const std::string& dir_b);

}  // namespace gscodec::pipeline
