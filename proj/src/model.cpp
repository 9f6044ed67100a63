// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gscodec/model.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace gscodec {

GaussianCloud GaussianCloud::zeros(std::size_t n) {
    GaussianCloud c;
    c.count = n;
    c.position.assign(n * kPositionDim, 0.0f);
    c.log_scale.assign(n * kScaleDim, 0.0f);
    c.rotation.assign(n * kRotationDim, 0.0f);
    c.logit_opacity.assign(n * kOpacityDim, 0.0f);
    c.color_dc.assign(n * kColorDcDim, 0.0f);
    c.color_sh.assign(n * kColorShDim, 0.0f);
    return c;
}

const char* group_name(ParamGroup g) {
    switch (g) {
        case ParamGroup::ColorDC: return "color_dc";
        case ParamGroup::SH: return "color_sh";
        case ParamGroup::Scale: return "scale";
        case ParamGroup::Rotation: return "rotation";
    }
    return "?";
}

ConstMatView group_view(const GaussianCloud& cloud, ParamGroup group) {
    switch (group) {
        case ParamGroup::ColorDC: return {cloud.color_dc.data(), cloud.count, kColorDcDim};
        case ParamGroup::SH: return {cloud.color_sh.data(), cloud.count, kColorShDim};
        case ParamGroup::Scale: return {cloud.log_scale.data(), cloud.count, kScaleDim};
        case ParamGroup::Rotation: return {cloud.rotation.data(), cloud.count, kRotationDim};
    }
    return {};
}

MatView group_view(GaussianCloud& cloud, ParamGroup group) {
    switch (group) {
        case ParamGroup::ColorDC: return {cloud.color_dc.data(), cloud.count, kColorDcDim};
        case ParamGroup::SH: return {cloud.color_sh.data(), cloud.count, kColorShDim};
        case ParamGroup::Scale: return {cloud.log_scale.data(), cloud.count, kScaleDim};
        case ParamGroup::Rotation: return {cloud.rotation.data(), cloud.count, kRotationDim};
    }
    return {};
}

namespace {

void check_field(std::vector<ValidationIssue>& issues, const std::vector<float>& v,
                 std::size_t count, std::size_t dim, const char* name) {
    if (v.size() != count * dim) {
        issues.push_back({name, 0, ValidationIssue::Kind::ShapeMismatch,
                          std::string(name) + ": expected " + std::to_string(count * dim) +
                              " values, got " + std::to_string(v.size())});
        return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            issues.push_back({name, i / dim, ValidationIssue::Kind::NonFinite,
                              std::string(name) + ": non-finite value at row " +
                                  std::to_string(i / dim) + ", column " + std::to_string(i % dim)});
            break;
        }
    }
}

}  // namespace

std::vector<ValidationIssue> validate(const GaussianCloud& cloud) {
    std::vector<ValidationIssue> issues;
    check_field(issues, cloud.position, cloud.count, kPositionDim, "position");
    check_field(issues, cloud.log_scale, cloud.count, kScaleDim, "log_scale");
    check_field(issues, cloud.rotation, cloud.count, kRotationDim, "rotation");
    check_field(issues, cloud.logit_opacity, cloud.count, kOpacityDim, "logit_opacity");
    check_field(issues, cloud.color_dc, cloud.count, kColorDcDim, "color_dc");
    check_field(issues, cloud.color_sh, cloud.count, kColorShDim, "color_sh");
    return issues;
}

namespace {

void copy_block(std::vector<float>& dst, ConstMatView src, std::size_t count, std::size_t dim,
                const char* name) {
    if (src.rows != count || src.cols != dim)
        throw DimensionError(std::string("assemble: ") + name + " has shape " +
                             std::to_string(src.rows) + "x" + std::to_string(src.cols) +
                             ", expected " + std::to_string(count) + "x" + std::to_string(dim));
    dst.assign(src.data, src.data + count * dim);
}

}  // namespace

GaussianCloud assemble(std::size_t count, ConstMatView position, ConstMatView logit_opacity,
                       ConstMatView color_dc, ConstMatView color_sh, ConstMatView scale,
                       ConstMatView rotation) {
    GaussianCloud c;
    c.count = count;
    copy_block(c.position, position, count, kPositionDim, "position");
    copy_block(c.logit_opacity, logit_opacity, count, kOpacityDim, "logit_opacity");
    copy_block(c.color_dc, color_dc, count, kColorDcDim, "color_dc");
    copy_block(c.color_sh, color_sh, count, kColorShDim, "color_sh");
    copy_block(c.log_scale, scale, count, kScaleDim, "log_scale");
    copy_block(c.rotation, rotation, count, kRotationDim, "rotation");
    return c;
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GSCODEC_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_chunks(std::size_t num_chunks, unsigned threads,
                     const std::function<void(std::size_t)>& fn) {
    if (num_chunks == 0) return;
    unsigned t = resolve_threads(threads);
    if (t <= 1 || num_chunks == 1) {
        for (std::size_t c = 0; c < num_chunks; ++c) fn(c);
        return;
    }
    if (t > num_chunks) t = static_cast<unsigned>(num_chunks);
    std::vector<std::thread> workers;
    workers.reserve(t);
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    for (unsigned w = 0; w < t; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t c = w; c < num_chunks; c += t) fn(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : workers) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gscodec
