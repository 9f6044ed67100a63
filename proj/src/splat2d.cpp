// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gscodec/splat2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "gscodec/metrics.hpp"
#include "gscodec/simd/kernels.hpp"
#include "gscodec/wire.hpp"

namespace gscodec::splat2d {

namespace {

inline float sigmoid(float x) {
    return 1.0f / (1.0f + std::exp(-x));
}

// Per-Gaussian values derived once per pass.
struct Derived {
    float sigma, cos_a, sin_a, inv1, inv2;  // inv = 1 / s^2 (pre-activated)
    float color[3];                          // clamped
    float mu_x, mu_y;
};

Derived derive(const Splat2DScene& s, std::size_t i) {
    Derived d;
    d.sigma = sigmoid(s.logit_opacity[i]);
    d.cos_a = std::cos(s.angle[i]);
    d.sin_a = std::sin(s.angle[i]);
    d.inv1 = std::exp(-2.0f * s.log_scale[i * 2 + 0]);
    d.inv2 = std::exp(-2.0f * s.log_scale[i * 2 + 1]);
    for (int c = 0; c < 3; ++c) {
        float raw = s.color[i * 3 + c];
        d.color[c] = raw < 0.0f ? 0.0f : (raw > 1.0f ? 1.0f : raw);
    }
    d.mu_x = s.position[i * 2 + 0];
    d.mu_y = s.position[i * 2 + 1];
    return d;
}

struct Bbox {
    std::ptrdiff_t x0, x1, y0, y1;  // inclusive
    bool empty;
};

// Pixel rectangle that can hold alpha >= kAlphaCutoff (conservative, +1 px
// margin). With cutoffs disabled, the whole canvas.
Bbox bbox_of(const Derived& d, std::size_t w, std::size_t h, bool alpha_cutoff) {
    const auto sw = static_cast<std::ptrdiff_t>(w);
    const auto sh = static_cast<std::ptrdiff_t>(h);
    if (!alpha_cutoff) return {0, sw - 1, 0, sh - 1, w == 0 || h == 0};
    const float lim = 255.0f * d.sigma;
    if (lim <= 1.0f) return {0, -1, 0, -1, true};  // alpha can never reach 1/255
    const float r2 = 2.0f * std::log(lim);
    const float s1_sq = 1.0f / d.inv1;
    const float s2_sq = 1.0f / d.inv2;
    const float cov_xx = d.cos_a * d.cos_a * s1_sq + d.sin_a * d.sin_a * s2_sq;
    const float cov_yy = d.sin_a * d.sin_a * s1_sq + d.cos_a * d.cos_a * s2_sq;
    const float ex = std::sqrt(r2 * cov_xx) + 1.0f;
    const float ey = std::sqrt(r2 * cov_yy) + 1.0f;
    Bbox b;
    b.x0 = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::floor(d.mu_x - ex)));
    b.x1 = std::min<std::ptrdiff_t>(sw - 1, static_cast<std::ptrdiff_t>(std::ceil(d.mu_x + ex)));
    b.y0 = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::floor(d.mu_y - ey)));
    b.y1 = std::min<std::ptrdiff_t>(sh - 1, static_cast<std::ptrdiff_t>(std::ceil(d.mu_y + ey)));
    b.empty = b.x0 > b.x1 || b.y0 > b.y1;
    return b;
}

struct TapeEntry {
    std::uint32_t pixel;
    std::uint32_t gauss;
    float alpha;
    float t_before;
};

Image render_impl(const Splat2DScene& scene, std::size_t w, std::size_t h,
                  const RenderOptions& opt, std::vector<TapeEntry>* tape) {
    Image out(w, h);
    std::vector<float> trans(w * h, 1.0f);
    for (std::size_t i = 0; i < scene.count; ++i) {
        const Derived d = derive(scene, i);
        const Bbox b = bbox_of(d, w, h, opt.alpha_cutoff);
        if (b.empty) continue;
        for (std::ptrdiff_t y = b.y0; y <= b.y1; ++y) {
            for (std::ptrdiff_t x = b.x0; x <= b.x1; ++x) {
                const std::size_t p = static_cast<std::size_t>(y) * w + x;
                const float t = trans[p];
                if (opt.transmittance_stop && t < kTransmittanceStop) continue;
                const float dx = (static_cast<float>(x) + 0.5f) - d.mu_x;
                const float dy = (static_cast<float>(y) + 0.5f) - d.mu_y;
                const float u1 = d.cos_a * dx + d.sin_a * dy;
                const float u2 = -d.sin_a * dx + d.cos_a * dy;
                const float e = 0.5f * (u1 * u1 * d.inv1 + u2 * u2 * d.inv2);
                const float alpha = d.sigma * std::exp(-e);
                if (opt.alpha_cutoff && alpha < kAlphaCutoff) continue;
                if (tape)
                    tape->push_back({static_cast<std::uint32_t>(p),
                                     static_cast<std::uint32_t>(i), alpha, t});
                float* px = out.pixels.data() + p * 3;
                const float w_i = alpha * t;
                px[0] += d.color[0] * w_i;
                px[1] += d.color[1] * w_i;
                px[2] += d.color[2] * w_i;
                trans[p] = t * (1.0f - alpha);
            }
        }
    }
    return out;
}

}  // namespace

Splat2DScene Splat2DScene::zeros(std::size_t m) {
    Splat2DScene s;
    s.count = m;
    s.position.assign(m * 2, 0.0f);
    s.log_scale.assign(m * 2, 0.0f);
    s.angle.assign(m, 0.0f);
    s.logit_opacity.assign(m, 0.0f);
    s.color.assign(m * 3, 0.0f);
    return s;
}

ConstMatView group_view(const Splat2DScene& scene, Group2D g) {
    switch (g) {
        case Group2D::Color: return {scene.color.data(), scene.count, 3};
        case Group2D::Scale: return {scene.log_scale.data(), scene.count, 2};
        case Group2D::Angle: return {scene.angle.data(), scene.count, 1};
    }
    return {};
}

MatView group_view(Splat2DScene& scene, Group2D g) {
    switch (g) {
        case Group2D::Color: return {scene.color.data(), scene.count, 3};
        case Group2D::Scale: return {scene.log_scale.data(), scene.count, 2};
        case Group2D::Angle: return {scene.angle.data(), scene.count, 1};
    }
    return {};
}

Splat2DScene quantize_view(const Splat2DScene& scene, const Codebooks2D& books) {
    Splat2DScene out = scene;
    for (Group2D g : kAllGroups2D) {
        const vq::Codebook& cb = books[g];
        if (cb.assignments.size() != scene.count)
            throw DimensionError("quantize_view: assignment count mismatch");
        if (cb.dim != group2d_dim(g)) throw DimensionError("quantize_view: codebook dim mismatch");
        MatView dst = group_view(out, g);
        ConstMatView cents{cb.centroids.data(), cb.k, cb.dim};
        for (std::size_t i = 0; i < scene.count; ++i)
            std::memcpy(dst.row(i), cents.row(cb.assignments[i]), cb.dim * sizeof(float));
    }
    return out;
}

Image render(const Splat2DScene& scene, std::size_t width, std::size_t height,
             const RenderOptions& options) {
    return render_impl(scene, width, height, options, nullptr);
}

Gradients Gradients::zeros(std::size_t m) {
    Gradients g;
    g.position.assign(m * 2, 0.0f);
    g.log_scale.assign(m * 2, 0.0f);
    g.angle.assign(m, 0.0f);
    g.logit_opacity.assign(m, 0.0f);
    g.color.assign(m * 3, 0.0f);
    return g;
}

void Gradients::add_scaled(const Gradients& other, float factor) {
    auto axpy = [factor](std::vector<float>& dst, const std::vector<float>& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
    };
    axpy(position, other.position);
    axpy(log_scale, other.log_scale);
    axpy(angle, other.angle);
    axpy(logit_opacity, other.logit_opacity);
    axpy(color, other.color);
}

Gradients render_backward(const Splat2DScene& scene, std::size_t width, std::size_t height,
                          const Image& image_grad, const RenderOptions& options) {
    if (image_grad.width != width || image_grad.height != height)
        throw DimensionError("render_backward: image_grad shape mismatch");

    std::vector<TapeEntry> tape;
    render_impl(scene, width, height, options, &tape);

    std::vector<Derived> derived(scene.count);
    for (std::size_t i = 0; i < scene.count; ++i) derived[i] = derive(scene, i);

    Gradients g = Gradients::zeros(scene.count);
    // Suffix color: what compositing accumulates behind the current entry,
    // relative to the transmittance just after it.
    std::vector<float> suffix(width * height * 3, 0.0f);

    for (auto it = tape.rbegin(); it != tape.rend(); ++it) {
        const TapeEntry& e = *it;
        const std::size_t i = e.gauss;
        const Derived& d = derived[i];
        const float* gp = image_grad.pixels.data() + static_cast<std::size_t>(e.pixel) * 3;
        float* sfx = suffix.data() + static_cast<std::size_t>(e.pixel) * 3;

        // d loss / d alpha = sum_ch g_ch * T * (c_ch - suffix_ch).
        float dl_dalpha = 0.0f;
        for (int c = 0; c < 3; ++c) dl_dalpha += gp[c] * e.t_before * (d.color[c] - sfx[c]);

        // Color gradient passes straight through the [0,1] clamp; training
        // would otherwise pin any channel that drifts outside the range.
        const float wi = e.alpha * e.t_before;
        for (int c = 0; c < 3; ++c) g.color[i * 3 + c] += gp[c] * wi;

        const std::size_t px = e.pixel % width;
        const std::size_t py = e.pixel / width;
        const float dx = (static_cast<float>(px) + 0.5f) - d.mu_x;
        const float dy = (static_cast<float>(py) + 0.5f) - d.mu_y;
        const float u1 = d.cos_a * dx + d.sin_a * dy;
        const float u2 = -d.sin_a * dx + d.cos_a * dy;
        const float e_val = 0.5f * (u1 * u1 * d.inv1 + u2 * u2 * d.inv2);
        const float gauss = std::exp(-e_val);

        g.logit_opacity[i] += dl_dalpha * gauss * d.sigma * (1.0f - d.sigma);

        const float dl_de = -dl_dalpha * e.alpha;
        g.log_scale[i * 2 + 0] += dl_de * (-u1 * u1 * d.inv1);
        g.log_scale[i * 2 + 1] += dl_de * (-u2 * u2 * d.inv2);
        g.angle[i] += dl_de * (u1 * u2 * (d.inv1 - d.inv2));
        const float de_dx = d.cos_a * d.inv1 * u1 - d.sin_a * d.inv2 * u2;
        const float de_dy = d.sin_a * d.inv1 * u1 + d.cos_a * d.inv2 * u2;
        g.position[i * 2 + 0] += dl_de * (-de_dx);
        g.position[i * 2 + 1] += dl_de * (-de_dy);

        for (int c = 0; c < 3; ++c)
            sfx[c] = d.color[c] * e.alpha + (1.0f - e.alpha) * sfx[c];
    }
    return g;
}

LossResult loss(const Image& rendered, const Image& target,
                std::span<const float> logit_opacity, double reg_lambda) {
    if (!rendered.same_shape(target)) throw DimensionError("loss: image shapes differ");
    LossResult r;
    const std::size_t n = rendered.size();
    r.image_grad = Image(rendered.width, rendered.height);

    double l1_sum = 0.0;
    const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const float diff = rendered.pixels[i] - target.pixels[i];
        l1_sum += std::fabs(static_cast<double>(diff));
        float s = diff > 0.0f ? 1.0f : (diff < 0.0f ? -1.0f : 0.0f);
        r.image_grad.pixels[i] = 0.8f * s * static_cast<float>(inv_n);
    }
    r.l1 = l1_sum * inv_n;

    Image ssim_grad;
    r.ssim = metrics::ssim_with_grad(rendered, target, ssim_grad);
    for (std::size_t i = 0; i < n; ++i)
        r.image_grad.pixels[i] += -0.2f * ssim_grad.pixels[i];

    r.reg_logit_grad.resize(logit_opacity.size());
    for (std::size_t i = 0; i < logit_opacity.size(); ++i) {
        const float s = sigmoid(logit_opacity[i]);
        r.reg += static_cast<double>(s);
        r.reg_logit_grad[i] = static_cast<float>(reg_lambda) * s * (1.0f - s);
    }
    r.total = 0.8 * r.l1 + 0.2 * (1.0 - r.ssim) + reg_lambda * r.reg;
    return r;
}

std::uint32_t QatSchedule::qat_start_iter() const {
    return static_cast<std::uint32_t>(std::llround(qat_start * total_iters));
}

std::uint32_t QatSchedule::assign_until_iter() const {
    return static_cast<std::uint32_t>(std::llround(assign_until * total_iters));
}

bool QatSchedule::reg_active(std::uint32_t step) const {
    const auto lo = static_cast<std::uint32_t>(std::llround(reg_start * total_iters));
    const auto hi = static_cast<std::uint32_t>(std::llround(reg_end * total_iters));
    return step >= lo && step < hi;
}

void QatSchedule::check() const {
    if (qat_start < 0.0 || qat_start > assign_until || assign_until > 1.0)
        throw ValueError("QatSchedule: need 0 <= qat_start <= assign_until <= 1");
    if (reg_start > reg_end) throw ValueError("QatSchedule: need reg_start <= reg_end");
    if (min_opacity <= 0.0 || min_opacity >= 1.0)
        throw ValueError("QatSchedule: min_opacity must be in (0, 1)");
}

AdamState AdamState::zeros(std::size_t m) {
    AdamState a;
    a.m_position.assign(m * 2, 0.0f);
    a.v_position.assign(m * 2, 0.0f);
    a.m_scale.assign(m * 2, 0.0f);
    a.v_scale.assign(m * 2, 0.0f);
    a.m_angle.assign(m, 0.0f);
    a.v_angle.assign(m, 0.0f);
    a.m_opacity.assign(m, 0.0f);
    a.v_opacity.assign(m, 0.0f);
    a.m_color.assign(m * 3, 0.0f);
    a.v_color.assign(m * 3, 0.0f);
    return a;
}

namespace {

void adam_update(std::vector<float>& param, const std::vector<float>& grad, std::vector<float>& m,
                 std::vector<float>& v, float lr, const OptimizerConfig& c, float bc1, float bc2) {
    for (std::size_t i = 0; i < param.size(); ++i) {
        m[i] = c.beta1 * m[i] + (1.0f - c.beta1) * grad[i];
        v[i] = c.beta2 * v[i] + (1.0f - c.beta2) * grad[i] * grad[i];
        const float mhat = m[i] / bc1;
        const float vhat = v[i] / bc2;
        param[i] -= lr * mhat / (std::sqrt(vhat) + c.eps);
    }
}

Codebooks2D init_books(const Splat2DScene& scene, const Vq2DConfig& cfg) {
    Codebooks2D books;
    for (Group2D g : kAllGroups2D) {
        vq::VqConfig per;
        per.lloyd_iters = cfg.init_lloyd_iters;
        per.init = cfg.init;
        per.seed = cfg.seed + static_cast<std::uint64_t>(g) * 0x9e3779b97f4a7c15ull;
        per.threads = 1;
        books[g] = vq::lloyd(group_view(scene, g), cfg.k_for(g), per);
    }
    return books;
}

}  // namespace

StepResult ste_step(Splat2DScene& scene, std::optional<Codebooks2D>& books, AdamState& adam,
                    const QatSchedule& schedule, const Vq2DConfig& vq_config,
                    const OptimizerConfig& opt, std::uint32_t step,
                    std::span<const Image> targets) {
    if (targets.empty()) throw ValueError("ste_step: need at least one target");
    schedule.check();
    const std::size_t w = targets[0].width, h = targets[0].height;

    StepResult result;
    const bool qat_active = step >= schedule.qat_start_iter();
    if (qat_active && !books) books = init_books(scene, vq_config);
    result.used_quantized = qat_active;

    const Splat2DScene* eval_scene = &scene;
    Splat2DScene quantized;
    if (qat_active) {
        quantized = quantize_view(scene, *books);
        eval_scene = &quantized;
    }

    Image rendered = render(*eval_scene, w, h);

    // Data terms averaged over targets; the opacity regularizer is a single
    // model-level term.
    Image total_grad(w, h);
    double l1 = 0.0, ssim_val = 0.0, data_loss = 0.0;
    const float inv_t = 1.0f / static_cast<float>(targets.size());
    std::vector<float> reg_grad;
    double reg_sum = 0.0;
    for (const Image& target : targets) {
        LossResult lr = loss(rendered, target, eval_scene->logit_opacity, 0.0);
        for (std::size_t i = 0; i < total_grad.size(); ++i)
            total_grad.pixels[i] += inv_t * lr.image_grad.pixels[i];
        l1 += lr.l1;
        ssim_val += lr.ssim;
        data_loss += lr.total;
        reg_sum = lr.reg;
    }
    l1 /= static_cast<double>(targets.size());
    ssim_val /= static_cast<double>(targets.size());
    data_loss /= static_cast<double>(targets.size());

    const bool reg_on = schedule.reg_active(step);
    const double lambda = reg_on ? schedule.reg_lambda : 0.0;
    result.l1 = l1;
    result.ssim = ssim_val;
    result.reg = reg_sum;
    result.loss = data_loss + lambda * reg_sum;

    // Gradients are taken at the quantized parameters and copied unchanged
    // onto the shadow parameters (straight-through estimator).
    Gradients g = render_backward(*eval_scene, w, h, total_grad);

    if (reg_on && schedule.reg_lambda != 0.0) {
        // Opacity penalty folded into the data gradient. Under Adam a
        // persistent bias dominates exactly the Gaussians whose fit gradient
        // has decayed to noise, which is what drives them transparent.
        for (std::size_t i = 0; i < scene.count; ++i) {
            const float s = sigmoid(eval_scene->logit_opacity[i]);
            g.logit_opacity[i] += static_cast<float>(schedule.reg_lambda) * s * (1.0f - s);
        }
    }

    adam.t += 1;
    const float bc1 = 1.0f - std::pow(opt.beta1, static_cast<float>(adam.t));
    const float bc2 = 1.0f - std::pow(opt.beta2, static_cast<float>(adam.t));
    float lr_pos = opt.lr_position;
    if (opt.position_lr_decay != 1.0f && schedule.total_iters > 0) {
        const float progress = static_cast<float>(step) / static_cast<float>(schedule.total_iters);
        lr_pos *= std::pow(opt.position_lr_decay, progress);
    }
    adam_update(scene.position, g.position, adam.m_position, adam.v_position, lr_pos,
                opt, bc1, bc2);
    adam_update(scene.log_scale, g.log_scale, adam.m_scale, adam.v_scale, opt.lr_scale, opt, bc1,
                bc2);
    adam_update(scene.angle, g.angle, adam.m_angle, adam.v_angle, opt.lr_angle, opt, bc1, bc2);
    adam_update(scene.logit_opacity, g.logit_opacity, adam.m_opacity, adam.v_opacity,
                opt.lr_opacity, opt, bc1, bc2);
    adam_update(scene.color, g.color, adam.m_color, adam.v_color, opt.lr_color, opt, bc1, bc2);

    if (qat_active) {
        vq::AssignSchedule as{schedule.assign_every, schedule.assign_until_iter()};
        bool refreshed = false;
        for (Group2D grp : kAllGroups2D)
            refreshed = vq::qat_update((*books)[grp], group_view(scene, grp), step, as, 1);
        result.refreshed_assignments = refreshed;
    }

    {
        const double m = metrics::mse(rendered, targets[0]);
        result.psnr = m == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(1.0 / m);
    }
    return result;
}

std::vector<std::uint32_t> prune(Splat2DScene& scene, double min_opacity) {
    if (min_opacity <= 0.0 || min_opacity >= 1.0)
        throw ValueError("prune: min_opacity must be in (0, 1)");
    std::vector<std::uint32_t> kept;
    kept.reserve(scene.count);
    for (std::size_t i = 0; i < scene.count; ++i)
        if (static_cast<double>(sigmoid(scene.logit_opacity[i])) >= min_opacity)
            kept.push_back(static_cast<std::uint32_t>(i));
    if (kept.size() == scene.count) return kept;

    auto filter = [&kept](std::vector<float>& v, std::size_t dim) {
        std::vector<float> out(kept.size() * dim);
        for (std::size_t j = 0; j < kept.size(); ++j)
            std::memcpy(out.data() + j * dim, v.data() + static_cast<std::size_t>(kept[j]) * dim,
                        dim * sizeof(float));
        v = std::move(out);
    };
    filter(scene.position, 2);
    filter(scene.log_scale, 2);
    filter(scene.angle, 1);
    filter(scene.logit_opacity, 1);
    filter(scene.color, 3);
    scene.count = kept.size();
    return kept;
}

std::vector<std::uint32_t> prune_all(Splat2DScene& scene, std::optional<Codebooks2D>& books,
                                     AdamState& adam, double min_opacity) {
    const std::size_t before = scene.count;
    std::vector<std::uint32_t> kept = prune(scene, min_opacity);
    if (kept.size() == before) return kept;

    if (books) {
        for (Group2D g : kAllGroups2D) {
            auto& assign = (*books)[g].assignments;
            std::vector<std::uint32_t> out(kept.size());
            for (std::size_t j = 0; j < kept.size(); ++j) out[j] = assign[kept[j]];
            assign = std::move(out);
        }
    }
    auto filter = [&kept](std::vector<float>& v, std::size_t dim) {
        std::vector<float> out(kept.size() * dim);
        for (std::size_t j = 0; j < kept.size(); ++j)
            std::memcpy(out.data() + j * dim, v.data() + static_cast<std::size_t>(kept[j]) * dim,
                        dim * sizeof(float));
        v = std::move(out);
    };
    filter(adam.m_position, 2);
    filter(adam.v_position, 2);
    filter(adam.m_scale, 2);
    filter(adam.v_scale, 2);
    filter(adam.m_angle, 1);
    filter(adam.v_angle, 1);
    filter(adam.m_opacity, 1);
    filter(adam.v_opacity, 1);
    filter(adam.m_color, 3);
    filter(adam.v_color, 3);
    return kept;
}

TrainResult train(std::span<const Image> targets, const Splat2DScene& init,
                  const QatSchedule& schedule, const Vq2DConfig& vq_config,
                  const OptimizerConfig& opt, std::uint32_t trace_every) {
    if (targets.empty()) throw ValueError("train: need at least one target");
    schedule.check();

    TrainResult out;
    out.scene = init;
    AdamState adam = AdamState::zeros(init.count);
    if (trace_every == 0) trace_every = 50;

    for (std::uint32_t step = 0; step < schedule.total_iters; ++step) {
        StepResult r =
            ste_step(out.scene, out.books, adam, schedule, vq_config, opt, step, targets);
        if (step % trace_every == 0)
            out.trace.push_back({step, r.loss, r.psnr, out.scene.count});
        if (schedule.prune_every > 0 && step > 0 && step % schedule.prune_every == 0 &&
            schedule.reg_active(step))
            prune_all(out.scene, out.books, adam, schedule.min_opacity);
    }
    // Scheduled pruning stops with the regularizer; one final prune clears
    // whatever it drove transparent.
    prune_all(out.scene, out.books, adam, schedule.min_opacity);

    const Splat2DScene* final_scene = &out.scene;
    Splat2DScene quantized;
    if (out.books) {
        quantized = quantize_view(out.scene, *out.books);
        final_scene = &quantized;
    }
    Image final_render = render(*final_scene, targets[0].width, targets[0].height);
    out.final_psnr = metrics::psnr(final_render, targets[0]);
    out.trace.push_back({schedule.total_iters, 0.0, out.final_psnr, out.scene.count});
    return out;
}

Splat2DScene make_synthetic_scene(std::size_t m, std::size_t width, std::size_t height,
                                  std::uint64_t seed) {
    Rng rng(seed);
    Splat2DScene s = Splat2DScene::zeros(m);
    const double max_scale = std::max(2.5, static_cast<double>(std::min(width, height)) / 12.0);
    for (std::size_t i = 0; i < m; ++i) {
        s.position[i * 2 + 0] = static_cast<float>(rng.uniform(0.05, 0.95) * width);
        s.position[i * 2 + 1] = static_cast<float>(rng.uniform(0.05, 0.95) * height);
        s.log_scale[i * 2 + 0] = static_cast<float>(std::log(rng.uniform(1.2, max_scale)));
        s.log_scale[i * 2 + 1] = static_cast<float>(std::log(rng.uniform(1.2, max_scale)));
        s.angle[i] = static_cast<float>(rng.uniform(0.0, 3.14159265358979323846));
        const double p = rng.uniform(0.35, 0.9);
        s.logit_opacity[i] = static_cast<float>(std::log(p / (1.0 - p)));
        for (int c = 0; c < 3; ++c)
            s.color[i * 3 + c] = static_cast<float>(rng.uniform(0.08, 0.92));
    }
    return s;
}

namespace {
constexpr char kSceneMagic[4] = {'S', '2', 'D', '1'};
}

void save_scene(const std::string& path, const Splat2DScene& scene,
                const std::optional<Codebooks2D>& books) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(kSceneMagic, 4);
    wire::write_le<std::uint16_t>(os, 1);
    wire::write_le<std::uint16_t>(os, books ? 1 : 0);
    wire::write_le<std::uint64_t>(os, scene.count);
    wire::write_f32_span(os, scene.position);
    wire::write_f32_span(os, scene.log_scale);
    wire::write_f32_span(os, scene.angle);
    wire::write_f32_span(os, scene.logit_opacity);
    wire::write_f32_span(os, scene.color);
    if (books) {
        for (Group2D g : kAllGroups2D) {
            const vq::Codebook& cb = (*books)[g];
            wire::write_le<std::uint32_t>(os, cb.k);
            wire::write_le<std::uint16_t>(os, static_cast<std::uint16_t>(cb.dim));
            wire::write_f32_span(os, cb.centroids);
            for (std::uint32_t a : cb.assignments) wire::write_le<std::uint32_t>(os, a);
        }
    }
    if (!os) throw IoError("failed writing " + path);
}

LoadedScene load_scene(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kSceneMagic, 4) != 0)
        throw ParseError(path + " is not a scene checkpoint");
    const std::uint16_t version = wire::read_le<std::uint16_t>(is);
    if (version != 1) throw ParseError("unsupported scene checkpoint version");
    const std::uint16_t flags = wire::read_le<std::uint16_t>(is);
    const std::uint64_t count = wire::read_le<std::uint64_t>(is);

    LoadedScene out;
    out.scene = Splat2DScene::zeros(static_cast<std::size_t>(count));
    wire::read_f32_span(is, out.scene.position);
    wire::read_f32_span(is, out.scene.log_scale);
    wire::read_f32_span(is, out.scene.angle);
    wire::read_f32_span(is, out.scene.logit_opacity);
    wire::read_f32_span(is, out.scene.color);
    if (flags & 1) {
        Codebooks2D books;
        for (Group2D g : kAllGroups2D) {
            vq::Codebook& cb = books[g];
            cb.k = wire::read_le<std::uint32_t>(is);
            cb.dim = wire::read_le<std::uint16_t>(is);
            if (cb.dim != group2d_dim(g)) throw ParseError("scene checkpoint: codebook dim mismatch");
            cb.centroids.resize(static_cast<std::size_t>(cb.k) * cb.dim);
            wire::read_f32_span(is, cb.centroids);
            cb.assignments.resize(static_cast<std::size_t>(count));
            for (auto& a : cb.assignments) a = wire::read_le<std::uint32_t>(is);
        }
        out.books = std::move(books);
    }
    return out;
}

void write_trace_csv(const std::string& path, std::span<const TraceRow> trace) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << "iter,loss,psnr,count\n";
    char buf[128];
    for (const TraceRow& r : trace) {
        std::snprintf(buf, sizeof(buf), "%u,%.9g,%.9g,%llu\n", r.iter, r.loss, r.psnr,
                      static_cast<unsigned long long>(r.count));
        os << buf;
    }
    if (!os) throw IoError("failed writing " + path);
}

}  // namespace gscodec::splat2d
