// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gscodec/image.hpp"
#include "gscodec/vq.hpp"

namespace gscodec::splat2d {

/// Toy 2D Gaussian scene. Parameters are stored pre-activation: scale as
/// log-std-dev (pixels), opacity as a logit, color raw (clamped to [0,1] at
/// render time). Covariance is R(angle) * diag(exp(log_scale))^2 * R(angle)^T.
struct Splat2DScene {
    std::size_t count = 0;
    std::vector<float> position;       // M x 2, pixel coordinates
    std::vector<float> log_scale;      // M x 2
    std::vector<float> angle;          // M, radians
    std::vector<float> logit_opacity;  // M
    std::vector<float> color;          // M x 3

    static Splat2DScene zeros(std::size_t m);
    bool operator==(const Splat2DScene&) const = default;
};

/// The quantizable 2D parameter groups; position and opacity always train
/// directly.
enum class Group2D : std::uint8_t { Color = 0, Scale = 1, Angle = 2 };
inline constexpr std::array<Group2D, 3> kAllGroups2D = {Group2D::Color, Group2D::Scale,
                                                        Group2D::Angle};

constexpr std::size_t group2d_dim(Group2D g) {
    switch (g) {
        case Group2D::Color: return 3;
        case Group2D::Scale: return 2;
        case Group2D::Angle: return 1;
    }
    return 0;
}

ConstMatView group_view(const Splat2DScene& scene, Group2D g);
MatView group_view(Splat2DScene& scene, Group2D g);

struct Codebooks2D {
    std::array<vq::Codebook, 3> books;  // indexed by Group2D

    vq::Codebook& operator[](Group2D g) { return books[static_cast<std::size_t>(g)]; }
    const vq::Codebook& operator[](Group2D g) const {
        return books[static_cast<std::size_t>(g)];
    }
};

/// Scene whose group blocks are replaced by their assigned centroids.
Splat2DScene quantize_view(const Splat2DScene& scene, const Codebooks2D& books);

struct RenderOptions {
    // Contributions with alpha < 1/255 are skipped and compositing stops
    // once transmittance drops below 1e-4. exact() disables both, which the
    // gradient tests use to keep the function smooth.
    bool alpha_cutoff = true;
    bool transmittance_stop = true;

    static RenderOptions exact() { return {false, false}; }
};

inline constexpr float kAlphaCutoff = 1.0f / 255.0f;
inline constexpr float kTransmittanceStop = 1e-4f;

/// Front-to-back alpha compositing in Gaussian index order (the 2D stand-in
/// for a depth sort), black background.
Image render(const Splat2DScene& scene, std::size_t width, std::size_t height,
             const RenderOptions& options = {});

struct Gradients {
    std::vector<float> position;       // M x 2
    std::vector<float> log_scale;      // M x 2
    std::vector<float> angle;          // M
    std::vector<float> logit_opacity;  // M
    std::vector<float> color;          // M x 3

    static Gradients zeros(std::size_t m);
    void add_scaled(const Gradients& other, float factor);
};

/// Analytic d(sum image_grad * image)/d(parameters) for the same inputs as
/// the matching render call.
Gradients render_backward(const Splat2DScene& scene, std::size_t width, std::size_t height,
                          const Image& image_grad, const RenderOptions& options = {});

struct LossResult {
    double total = 0.0;  // 0.8*l1 + 0.2*(1 - ssim) + reg_lambda * sum(sigma)
    double l1 = 0.0;
    double ssim = 0.0;
    double reg = 0.0;                    // sum of activated opacities
    Image image_grad;                    // d total / d rendered image
    std::vector<float> reg_logit_grad;   // reg_lambda * sigma * (1 - sigma)
};

LossResult loss(const Image& rendered, const Image& target,
                std::span<const float> logit_opacity, double reg_lambda);

/// Training schedule. Fractions are of total_iters; the paper-scale schedule
/// (20K/25K/15K..20K of 30K) maps to 2/3, 5/6 and 1/2..2/3.
struct QatSchedule {
    std::uint32_t total_iters = 3000;
    double qat_start = 2.0 / 3.0;
    std::uint32_t assign_every = 100;
    double assign_until = 5.0 / 6.0;
    double reg_lambda = 5e-4;  // desk-scale default, calibrated for the count/quality trade-off
    double reg_start = 1.0 / 2.0;
    double reg_end = 2.0 / 3.0;
    std::uint32_t prune_every = 1000;
    double min_opacity = 0.005;

    std::uint32_t qat_start_iter() const;
    std::uint32_t assign_until_iter() const;
    bool reg_active(std::uint32_t step) const;
    void check() const;
};

struct Vq2DConfig {
    std::uint32_t k_color = 4096;
    std::uint32_t k_scale = 4096;
    std::uint32_t k_angle = 4096;
    std::uint32_t init_lloyd_iters = 10;
    vq::InitMethod init = vq::InitMethod::KMeansPlusPlus;
    std::uint64_t seed = 0;

    std::uint32_t k_for(Group2D g) const {
        switch (g) {
            case Group2D::Color: return k_color;
            case Group2D::Scale: return k_scale;
            case Group2D::Angle: return k_angle;
        }
        return 0;
    }
};

/// Adam with per-class learning rates. The position rate decays
/// exponentially to lr_position * position_lr_decay over the run, mirroring
/// stock splatting trainers.
struct OptimizerConfig {
    float lr_position = 0.3f;
    float lr_scale = 0.02f;
    float lr_angle = 0.02f;
    float lr_opacity = 0.02f;
    float lr_color = 0.02f;
    float position_lr_decay = 0.01f;  // final/initial ratio; 1 disables
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float eps = 1e-8f;
};

struct AdamState {
    std::vector<float> m_position, v_position;
    std::vector<float> m_scale, v_scale;
    std::vector<float> m_angle, v_angle;
    std::vector<float> m_opacity, v_opacity;
    std::vector<float> m_color, v_color;
    std::uint64_t t = 0;

    static AdamState zeros(std::size_t m);
};

struct StepResult {
    double loss = 0.0;
    double l1 = 0.0;
    double ssim = 0.0;
    double reg = 0.0;
    double psnr = 0.0;  // of this step's render against the first target
    bool used_quantized = false;
    bool refreshed_assignments = false;
};

/// One training iteration: forward (quantized view once QAT is active),
/// backward, straight-through copy of the gradients onto the shadow
/// parameters, one Adam step, then the decoupled codebook refresh.
StepResult ste_step(Splat2DScene& scene, std::optional<Codebooks2D>& books, AdamState& adam,
                    const QatSchedule& schedule, const Vq2DConfig& vq_config,
                    const OptimizerConfig& opt, std::uint32_t step,
                    std::span<const Image> targets);

/// Removes rows with sigmoid(logit_opacity) < min_opacity from every column.
/// Returns the kept row indices (ascending).
std::vector<std::uint32_t> prune(Splat2DScene& scene, double min_opacity);

/// prune() plus consistent row removal from codebook assignments and
/// optimizer state.
std::vector<std::uint32_t> prune_all(Splat2DScene& scene, std::optional<Codebooks2D>& books,
                                     AdamState& adam, double min_opacity);

struct TraceRow {
    std::uint32_t iter = 0;
    double loss = 0.0;
    double psnr = 0.0;
    std::uint64_t count = 0;
};

struct TrainResult {
    Splat2DScene scene;
    std::optional<Codebooks2D> books;
    std::vector<TraceRow> trace;
    double final_psnr = 0.0;
};

TrainResult train(std::span<const Image> targets, const Splat2DScene& init,
                  const QatSchedule& schedule, const Vq2DConfig& vq_config,
                  const OptimizerConfig& opt = {}, std::uint32_t trace_every = 50);

/// Random over-complete scene on a width x height canvas.
Splat2DScene make_synthetic_scene(std::size_t m, std::size_t width, std::size_t height,
                                  std::uint64_t seed);

// Versioned checkpoint (.s2d), little-endian; stores the scene and, when
// present, the three group codebooks.
void save_scene(const std::string& path, const Splat2DScene& scene,
                const std::optional<Codebooks2D>& books);
struct LoadedScene {
    Splat2DScene scene;
    std::optional<Codebooks2D> books;
};
LoadedScene load_scene(const std::string& path);

void write_trace_csv(const std::string& path, std::span<const TraceRow> trace);

}  // namespace gscodec::splat2d
