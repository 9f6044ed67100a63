// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "gscodec/pipeline.hpp"

using nlohmann::json;
namespace gp = gscodec::pipeline;

namespace {

// Exit codes: 0 ok, 2 usage, 3 I/O, 4 malformed input, 5 invalid value.
constexpr int kExitIo = 3;
constexpr int kExitParse = 4;
constexpr int kExitValue = 5;

gscodec::ParamGroup parse_group(const std::string& name) {
    if (name == "dc") return gscodec::ParamGroup::ColorDC;
    if (name == "sh") return gscodec::ParamGroup::SH;
    if (name == "scale") return gscodec::ParamGroup::Scale;
    if (name == "rot") return gscodec::ParamGroup::Rotation;
    throw gscodec::ValueError("unknown group '" + name + "' (expected dc|sh|scale|rot)");
}

json sections_json(const gscodec::codec::SectionSizes& s) {
    return json{{"header", s.header},
                {"codebooks", s.codebooks},
                {"rle_counts", s.rle_counts},
                {"packed_indices", s.packed_indices},
                {"residuals", s.residuals},
                {"total", s.total()}};
}

json breakdown_json(const gscodec::codec::BreakdownReport& b) {
    return json{{"accounting",
                 b.accounting == gscodec::codec::IndexAccounting::Packed ? "packed" : "unpacked32"},
                {"header_bytes", b.header_bytes},
                {"codebook_bytes", b.codebook_bytes},
                {"index_bytes", b.index_bytes},
                {"residual_bytes", b.residual_bytes},
                {"total_bytes", b.total_bytes},
                {"non_quantized_fraction", b.non_quantized_fraction},
                {"index_share_of_quantized", b.index_share_of_quantized}};
}

struct GlobalFlags {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool quiet = false;
    bool as_json = false;
};

void add_compress_flags(CLI::App* cmd, gp::CompressOptions& opt, std::string& rle_group) {
    cmd->add_option("--k-dc", opt.vq.k_dc, "Codebook size for the color DC group");
    cmd->add_option("--k-sh", opt.vq.k_sh, "Codebook size for the SH group");
    cmd->add_option("--k-scale", opt.vq.k_scale, "Codebook size for the scale group");
    cmd->add_option("--k-rot", opt.vq.k_rot, "Codebook size for the rotation group");
    auto* all = cmd->add_option_function<std::uint32_t>(
        "--k-all",
        [&opt](std::uint32_t k) {
            opt.vq.k_dc = opt.vq.k_sh = opt.vq.k_scale = opt.vq.k_rot = k;
        },
        "One codebook size for all groups");
    all->trigger_on_parse();
    cmd->add_option("--lloyd-iters", opt.vq.lloyd_iters, "Lloyd iterations per group")
        ->capture_default_str();
    cmd->add_option_function<std::string>(
           "--init",
           [&opt](const std::string& v) {
               if (v == "kpp")
                   opt.vq.init = gscodec::vq::InitMethod::KMeansPlusPlus;
               else if (v == "random")
                   opt.vq.init = gscodec::vq::InitMethod::RandomSample;
               else
                   throw CLI::ValidationError("--init", "expected kpp or random");
           },
           "Codebook init: kpp|random")
        ->default_str("kpp");
    cmd->add_option("--position-bits", opt.policy.position_bits,
                    "Position residual bits (0 = float32)")
        ->capture_default_str();
    cmd->add_option("--opacity-bits", opt.policy.opacity_bits,
                    "Opacity residual bits (0 = float32)")
        ->capture_default_str();
    cmd->add_flag("--drop-sh", opt.flags.drop_sh, "Omit the SH codebook and index stream");
    cmd->add_option("--rle-group", rle_group, "Group stored as run lengths: dc|sh|scale|rot")
        ->capture_default_str();
    cmd->add_option("--prune-min-opacity", opt.prune_min_opacity,
                    "Drop Gaussians below this activated opacity before encoding");
}

void print_compress_report(const gp::CompressReport& r, const GlobalFlags& g) {
    if (g.as_json) {
        json j{{"input_bytes", r.input_bytes}, {"output_bytes", r.output_bytes},
               {"ratio", r.ratio},             {"gaussians", r.gaussians},
               {"pruned", r.pruned},           {"sections", sections_json(r.sections)}};
        std::cout << j.dump(2) << "\n";
    } else if (!g.quiet) {
        std::printf("gaussians: %llu (pruned %llu)\n",
                    static_cast<unsigned long long>(r.gaussians),
                    static_cast<unsigned long long>(r.pruned));
        std::printf("input:  %llu bytes\n", static_cast<unsigned long long>(r.input_bytes));
        std::printf("output: %llu bytes\n", static_cast<unsigned long long>(r.output_bytes));
        std::printf("compression ratio: %.2fx\n", r.ratio);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"K-means vector-quantization codec for Gaussian splat models"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0 = auto, env GSCODEC_THREADS)");
    app.add_flag("--quiet", g.quiet, "Suppress progress output");
    app.add_flag("--json", g.as_json, "Emit machine-readable JSON reports");

    // compress
    auto* c_cmd = app.add_subcommand("compress", "PLY -> .cgs with per-group K-means codebooks");
    std::string c_in, c_out, c_rle = "rot";
    gp::CompressOptions c_opt;
    c_cmd->add_option("input", c_in, "Input .ply")->required();
    c_cmd->add_option("output", c_out, "Output .cgs")->required();
    add_compress_flags(c_cmd, c_opt, c_rle);

    // decompress
    auto* d_cmd = app.add_subcommand("decompress", ".cgs -> PLY");
    std::string d_in, d_out;
    d_cmd->add_option("input", d_in, "Input .cgs")->required();
    d_cmd->add_option("output", d_out, "Output .ply")->required();

    // inspect
    auto* i_cmd = app.add_subcommand("inspect", "Memory breakdown and codebook statistics");
    std::string i_in;
    i_cmd->add_option("input", i_in, "Input .cgs")->required();

    // eval
    auto* e_cmd = app.add_subcommand("eval", "PSNR/SSIM between two image directories");
    std::string e_a, e_b;
    e_cmd->add_option("dir_a", e_a, "Reference image directory")->required();
    e_cmd->add_option("dir_b", e_b, "Comparison image directory")->required();

    // train2d
    auto* t_cmd = app.add_subcommand("train2d", "Train the toy 2D splatting model with QAT");
    gp::Train2DOptions t_opt;
    std::string t_ckpt = "scene.s2d", t_trace = "trace.csv", t_render;
    t_cmd->add_option("--target", t_opt.target_png, "Target PNG (default: synthetic scene)");
    t_cmd->add_option("--width", t_opt.width, "Synthetic target width")->capture_default_str();
    t_cmd->add_option("--height", t_opt.height, "Synthetic target height")->capture_default_str();
    t_cmd->add_option("--synth-gaussians", t_opt.synth_gaussians,
                      "Gaussians in the hidden synthetic target scene")
        ->capture_default_str();
    t_cmd->add_option("--gaussians", t_opt.fit_gaussians, "Gaussians in the fitted scene")
        ->capture_default_str();
    t_cmd->add_option("--iters", t_opt.schedule.total_iters, "Training iterations")
        ->capture_default_str();
    t_cmd->add_option("--qat-start", t_opt.schedule.qat_start,
                      "Fraction of iterations before quantization-aware training");
    t_cmd->add_option("--assign-every", t_opt.schedule.assign_every,
                      "Assignment refresh period (iterations)");
    t_cmd->add_option("--assign-until", t_opt.schedule.assign_until,
                      "Fraction after which assignments stay frozen");
    t_cmd->add_option("--reg-lambda", t_opt.schedule.reg_lambda, "Opacity regularizer weight")
        ->capture_default_str();
    t_cmd->add_option("--reg-start", t_opt.schedule.reg_start, "Regularizer window start fraction");
    t_cmd->add_option("--reg-end", t_opt.schedule.reg_end, "Regularizer window end fraction");
    t_cmd->add_option("--prune-every", t_opt.schedule.prune_every, "Pruning period (iterations)");
    t_cmd->add_option("--min-opacity", t_opt.schedule.min_opacity, "Pruning threshold")
        ->capture_default_str();
    t_cmd->add_option("--k-color", t_opt.vq.k_color, "Color codebook size");
    t_cmd->add_option("--k-scale", t_opt.vq.k_scale, "Scale codebook size");
    t_cmd->add_option("--k-angle", t_opt.vq.k_angle, "Angle codebook size");
    t_cmd->add_option("--checkpoint", t_ckpt, "Output scene checkpoint")->capture_default_str();
    t_cmd->add_option("--trace", t_trace, "Output metrics CSV")->capture_default_str();
    t_cmd->add_option("--render", t_render, "Optional final render PNG");
    t_cmd->add_option("--trace-every", t_opt.trace_every, "Trace row period")
        ->capture_default_str();

    // assign
    auto* a_cmd = app.add_subcommand("assign", "Encode a PLY against frozen codebooks");
    std::string a_in, a_frozen, a_out, a_rle = "rot";
    gp::CompressOptions a_opt;
    a_cmd->add_option("input", a_in, "Input .ply")->required();
    a_cmd->add_option("frozen", a_frozen, "Container providing the frozen codebooks")->required();
    a_cmd->add_option("output", a_out, "Output .cgs")->required();
    a_cmd->add_option("--position-bits", a_opt.policy.position_bits,
                      "Position residual bits (0 = float32)")
        ->capture_default_str();
    a_cmd->add_option("--opacity-bits", a_opt.policy.opacity_bits,
                      "Opacity residual bits (0 = float32)")
        ->capture_default_str();
    a_cmd->add_option("--prune-min-opacity", a_opt.prune_min_opacity,
                      "Drop Gaussians below this activated opacity before encoding");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_cmd) {
            c_opt.vq.seed = g.seed;
            c_opt.vq.threads = g.threads;
            c_opt.quiet = g.quiet;
            c_opt.flags.rle_group = parse_group(c_rle);
            auto r = gp::compress_file(c_in, c_out, c_opt);
            print_compress_report(r, g);
        } else if (*d_cmd) {
            gp::decompress_file(d_in, d_out);
            if (!g.quiet && !g.as_json) std::printf("wrote %s\n", d_out.c_str());
        } else if (*i_cmd) {
            auto r = gp::inspect_file(i_in);
            if (g.as_json) {
                json books = json::array();
                const char* names[4] = {"color_dc", "color_sh", "scale", "rotation"};
                for (std::size_t i = 0; i < 4; ++i) {
                    const auto& s = r.stats[i];
                    books.push_back(json{{"group", names[i]},
                                         {"k", r.params.shapes[i].k},
                                         {"dim", r.params.shapes[i].dim},
                                         {"max_share", s.max_share},
                                         {"entropy_bits", s.entropy_bits},
                                         {"entropy_coded_bytes", s.entropy_coded_bytes}});
                }
                json j{{"count", r.params.count},
                       {"drop_sh", r.params.flags.drop_sh},
                       {"position_bits", r.params.policy.position_bits},
                       {"opacity_bits", r.params.policy.opacity_bits},
                       {"sections", sections_json(r.sections)},
                       {"breakdown_packed", breakdown_json(r.packed)},
                       {"breakdown_unpacked32", breakdown_json(r.unpacked32)},
                       {"codebooks", books}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::printf("gaussians: %llu\n", static_cast<unsigned long long>(r.params.count));
                std::cout << gscodec::metrics::format_breakdown(r.packed);
                std::cout << gscodec::metrics::format_breakdown(r.unpacked32);
                const char* names[4] = {"color_dc", "color_sh", "scale", "rotation"};
                for (std::size_t i = 0; i < 4; ++i) {
                    if (r.params.shapes[i].k == 0) {
                        std::printf("%-9s dropped\n", names[i]);
                        continue;
                    }
                    std::printf("%-9s k=%-6u entropy %.3f bits  max-share %.2f%%  "
                                "entropy-coded %.0f bytes\n",
                                names[i], r.params.shapes[i].k, r.stats[i].entropy_bits,
                                100.0 * r.stats[i].max_share, r.stats[i].entropy_coded_bytes);
                }
            }
        } else if (*e_cmd) {
            auto r = gp::eval_dirs(e_a, e_b);
            if (g.as_json) {
                json per = json::array();
                for (std::size_t i = 0; i < r.names.size(); ++i)
                    per.push_back(json{{"name", r.names[i]},
                                       {"psnr", r.quality.psnr_per_image[i]},
                                       {"ssim", r.quality.ssim_per_image[i]}});
                json j{{"images", per},
                       {"psnr_mean", r.quality.psnr_mean},
                       {"psnr_am", r.quality.psnr_am},
                       {"ssim_mean", r.quality.ssim_mean}};
                std::cout << j.dump(2) << "\n";
            } else {
                for (std::size_t i = 0; i < r.names.size(); ++i)
                    std::printf("%-24s psnr %8.3f  ssim %.5f\n", r.names[i].c_str(),
                                r.quality.psnr_per_image[i], r.quality.ssim_per_image[i]);
                std::printf("mean psnr %.3f dB | psnr-am %.3f dB | mean ssim %.5f\n",
                            r.quality.psnr_mean, r.quality.psnr_am, r.quality.ssim_mean);
            }
        } else if (*t_cmd) {
            t_opt.seed = g.seed;
            t_opt.quiet = g.quiet;
            auto r = gp::train2d_run(t_opt, t_ckpt, t_trace, t_render);
            if (g.as_json) {
                json j{{"final_psnr", r.final_psnr},
                       {"final_count", r.final_count},
                       {"iterations", r.iterations}};
                std::cout << j.dump(2) << "\n";
            } else if (!g.quiet) {
                std::printf("final psnr %.3f dB, %llu gaussians after %u iterations\n",
                            r.final_psnr, static_cast<unsigned long long>(r.final_count),
                            r.iterations);
            }
        } else if (*a_cmd) {
            a_opt.vq.seed = g.seed;
            a_opt.vq.threads = g.threads;
            a_opt.quiet = g.quiet;
            auto r = gp::assign_file(a_in, a_frozen, a_out, a_opt);
            print_compress_report(r, g);
        }
    } catch (const gscodec::IoError& e) {
        std::cerr << "gscodec: " << e.what() << "\n";
        return kExitIo;
    } catch (const gscodec::TruncatedError& e) {
        std::cerr << "gscodec: " << e.what() << "\n";
        return kExitParse;
    } catch (const gscodec::ParseError& e) {
        std::cerr << "gscodec: " << e.what() << "\n";
        return kExitParse;
    } catch (const gscodec::Error& e) {
        std::cerr << "gscodec: " << e.what() << "\n";
        return kExitValue;
    } catch (const std::exception& e) {
        std::cerr << "gscodec: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
