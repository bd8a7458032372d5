// Generates the bundled grayscale test corpus: ten deterministic 128x128
// images with smooth, natural-image statistics (gentle gradients, soft blobs,
// low-frequency waves, blurred texture). Prints rate/quality stats for each
// image so the corpus can be checked against the codec's operating point.
//
// Usage: gen_corpus <output-dir>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "dajc/adc_rle.hpp"
#include "dajc/jpeg_core.hpp"
#include "dajc/nonideal.hpp"
#include "dajc/sc_sim.hpp"
#include "dajc/stream.hpp"

namespace {

constexpr int kSize = 128;

struct Recipe {
    double mean;
    double grad_x, grad_y, grad_xy;  // total span in grey levels across the frame
    int n_blobs;
    double blob_amp;
    double sin_amp;
    int sin_fx, sin_fy;  // cycles across the frame
    double texture_amp;  // std of the blurred-noise texture
    double disk_amp, disk_r, disk_edge;
};

double unit(std::uint64_t seed, std::uint64_t k) {
    return static_cast<double>(dajc::rng::splitmix64_at(seed, k) >> 11) * 0x1.0p-53;
}

std::vector<double> blurred_noise(std::uint64_t seed, int radius, int passes) {
    std::vector<double> f(kSize * kSize);
    for (int i = 0; i < kSize * kSize; ++i) {
        f[static_cast<std::size_t>(i)] =
            dajc::rng::gaussian_at(seed, static_cast<std::uint64_t>(i));
    }
    std::vector<double> tmp(f.size());
    auto blur_axis = [&](bool horizontal) {
        for (int y = 0; y < kSize; ++y) {
            for (int x = 0; x < kSize; ++x) {
                double acc = 0.0;
                for (int d = -radius; d <= radius; ++d) {
                    int xx = horizontal ? std::clamp(x + d, 0, kSize - 1) : x;
                    int yy = horizontal ? y : std::clamp(y + d, 0, kSize - 1);
                    acc += f[static_cast<std::size_t>(yy * kSize + xx)];
                }
                tmp[static_cast<std::size_t>(y * kSize + x)] =
                    acc / static_cast<double>(2 * radius + 1);
            }
        }
        f.swap(tmp);
    };
    for (int p = 0; p < passes; ++p) {
        blur_axis(true);
        blur_axis(false);
    }
    // Normalize to unit std so recipes can scale it directly.
    double sum = 0.0, sum2 = 0.0;
    for (double v : f) {
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / static_cast<double>(f.size());
    const double stddev =
        std::sqrt(std::max(sum2 / static_cast<double>(f.size()) - mean * mean, 1e-12));
    for (double& v : f) v = (v - mean) / stddev;
    return f;
}

dajc::Frame synthesize(int k, const Recipe& r) {
    const std::uint64_t seed = 40000 + static_cast<std::uint64_t>(k) * 97;
    std::vector<double> field(kSize * kSize, 0.0);

    for (int y = 0; y < kSize; ++y) {
        for (int x = 0; x < kSize; ++x) {
            const double u = x / 127.0 - 0.5;
            const double v = y / 127.0 - 0.5;
            field[static_cast<std::size_t>(y * kSize + x)] =
                r.mean + r.grad_x * u + r.grad_y * v + r.grad_xy * u * v;
        }
    }

    for (int b = 0; b < r.n_blobs; ++b) {
        const std::uint64_t bs = seed + 13 + static_cast<std::uint64_t>(b);
        const double cx = 20.0 + unit(bs, 0) * (kSize - 40);
        const double cy = 20.0 + unit(bs, 1) * (kSize - 40);
        const double sigma = 18.0 + unit(bs, 2) * 16.0;
        const double amp = r.blob_amp * (0.6 + 0.8 * unit(bs, 3)) * (b % 2 == 0 ? 1.0 : -1.0);
        for (int y = 0; y < kSize; ++y) {
            for (int x = 0; x < kSize; ++x) {
                const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                field[static_cast<std::size_t>(y * kSize + x)] +=
                    amp * std::exp(-d2 / (2.0 * sigma * sigma));
            }
        }
    }

    if (r.sin_amp > 0.0) {
        const double phase = 2.0 * std::numbers::pi * unit(seed + 7, 0);
        for (int y = 0; y < kSize; ++y) {
            for (int x = 0; x < kSize; ++x) {
                const double arg =
                    2.0 * std::numbers::pi * (r.sin_fx * x + r.sin_fy * y) / kSize + phase;
                field[static_cast<std::size_t>(y * kSize + x)] += r.sin_amp * std::sin(arg);
            }
        }
    }

    if (r.disk_amp != 0.0) {
        const double cx = 40.0 + unit(seed + 9, 0) * (kSize - 80);
        const double cy = 40.0 + unit(seed + 9, 1) * (kSize - 80);
        for (int y = 0; y < kSize; ++y) {
            for (int x = 0; x < kSize; ++x) {
                const double d = std::hypot(x - cx, y - cy);
                const double s = std::clamp((d - r.disk_r) / r.disk_edge, 0.0, 1.0);
                field[static_cast<std::size_t>(y * kSize + x)] +=
                    r.disk_amp * 0.5 * (1.0 + std::cos(std::numbers::pi * s));
            }
        }
    }

    if (r.texture_amp > 0.0) {
        const auto tex = blurred_noise(seed + 3, 5, 3);
        for (std::size_t i = 0; i < field.size(); ++i) {
            field[i] += r.texture_amp * tex[i];
        }
    }

    dajc::Frame img = dajc::make_image(kSize, kSize);
    for (std::size_t i = 0; i < field.size(); ++i) {
        img.pixels[i] =
            static_cast<std::uint8_t>(std::clamp(std::round(field[i]), 0.0, 255.0));
    }
    return img;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
        return 1;
    }
    const std::string out_dir = argv[1];

    const Recipe recipes[10] = {
        // mean  gx    gy    gxy  nb amp   sin  fx fy  tex   disk
        {120.0, 28.0, 18.0, 6.0, 1, 20.0, 0.0, 0, 0, 2.0, 0.0, 0.0, 1.0},
        {135.0, -20.0, 26.0, 0.0, 0, 0.0, 7.0, 1, 0, 2.5, 0.0, 0.0, 1.0},
        {128.0, 14.0, -14.0, 8.0, 2, 18.0, 0.0, 0, 0, 2.0, 0.0, 0.0, 1.0},
        {140.0, 10.0, 12.0, 0.0, 0, 0.0, 0.0, 0, 0, 3.5, 0.0, 0.0, 1.0},
        {118.0, 16.0, -10.0, 0.0, 0, 0.0, 0.0, 0, 0, 2.0, 20.0, 34.0, 26.0},
        {126.0, -12.0, 8.0, 10.0, 1, 16.0, 8.0, 1, 1, 2.0, 0.0, 0.0, 1.0},
        {132.0, 20.0, 10.0, -8.0, 3, 13.0, 0.0, 0, 0, 2.0, 0.0, 0.0, 1.0},
        {122.0, 8.0, -16.0, 0.0, 0, 0.0, 6.0, 0, 1, 3.0, 0.0, 0.0, 1.0},
        {138.0, -14.0, -12.0, 6.0, 1, 15.0, 0.0, 0, 0, 2.0, 16.0, 28.0, 22.0},
        {125.0, 24.0, 14.0, 0.0, 0, 0.0, 6.0, 1, 0, 2.5, 0.0, 0.0, 1.0},
    };

    const dajc::PipelineConfig cfg = dajc::default_pipeline_config();
    const dajc::AdcConfig adc = dajc::adc_config_for_rails(cfg.v_min, cfg.v_max);
    const dajc::DctBasis basis = dajc::build_dct_basis();
    const dajc::QuantTable q = dajc::q50_table();

    dajc::EnergyReport total;
    dajc::EnergyReport first5;
    double min_psnr = 1e9, min_ref_psnr = 1e9, min_ratio = 1e9;

    std::printf("%-16s %9s %11s %8s %10s %10s\n", "image", "fraction", "tokens/blk",
                "ratio", "psnr(dB)", "ref(dB)");
    for (int k = 0; k < 10; ++k) {
        const dajc::Frame img = synthesize(k, recipes[k]);
        char name[64];
        std::snprintf(name, sizeof(name), "corpus_%02d.pgm", k);
        dajc::save_pgm(img, out_dir + "/" + name);

        dajc::EncodeOptions options;
        options.seed = 42;
        const dajc::FrameEncodeResult enc = dajc::encode_frame(img, cfg, adc, options);
        const dajc::Frame dec = dajc::decode_frame(enc.bytes);
        const double p = dajc::psnr(img, dec);

        // Exact digital reference path for comparison.
        dajc::TiledFrame tiled = dajc::tile_blocks(img);
        for (auto& block : tiled.blocks) {
            const dajc::Mat8 rec =
                dajc::idct2(dajc::dequantize(dajc::quantize(dajc::dct2(block, basis), q), q),
                            basis);
            for (std::size_t i = 0; i < 64; ++i) {
                block.p[i] = static_cast<std::uint8_t>(
                    std::clamp(std::round(rec.m[i]), 0.0, 255.0));
            }
        }
        const double ref_p = dajc::psnr(img, dajc::untile_blocks(tiled));

        const double tokens_per_block =
            static_cast<double>(enc.token_count) / static_cast<double>(tiled.blocks.size());
        std::printf("%-16s %9.4f %11.2f %8.2f %10.2f %10.2f\n", name,
                    enc.energy.significant_fraction, tokens_per_block, enc.compression_ratio,
                    p, ref_p);

        total = dajc::merge_energy(total, enc.energy);
        if (k < 5) first5 = dajc::merge_energy(first5, enc.energy);
        min_psnr = std::min(min_psnr, p);
        min_ref_psnr = std::min(min_ref_psnr, ref_p);
        min_ratio = std::min(min_ratio, enc.compression_ratio);
    }

    std::printf("\naggregate fraction (all 10): %.4f  energy ratio: %.1f\n",
                total.significant_fraction, dajc::energy_ratio(total));
    std::printf("aggregate fraction (first 5): %.4f  energy ratio: %.1f\n",
                first5.significant_fraction, dajc::energy_ratio(first5));
    std::printf("min compression ratio: %.2f  min psnr: %.2f dB  min ref psnr: %.2f dB\n",
                min_ratio, min_psnr, min_ref_psnr);
    return 0;
}
