#include "dajc/nonideal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dajc/sc_sim.hpp"

namespace dajc {

namespace rng {

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
    // SplitMix64 evaluated at an absolute position: state after `counter + 1`
    // increments, passed through the standard finalizer.
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double gaussian_at(std::uint64_t seed, std::uint64_t draw_index) {
    // Box-Muller over two counter words. u1 lands in (0, 1] so the log is
    // always finite; u2 in [0, 1).
    const std::uint64_t b1 = splitmix64_at(seed, 2 * draw_index);
    const std::uint64_t b2 = splitmix64_at(seed, 2 * draw_index + 1);
    const double u1 = static_cast<double>((b1 >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(b2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rng

double NoiseContext::next_gaussian() {
    return rng::gaussian_at(seed, draw_count++);
}

double ktc_sigma(double cap_ff, double temperature_k) {
    if (cap_ff <= 0.0) {
        throw std::invalid_argument("kT/C noise needs a positive capacitance");
    }
    return std::sqrt(k_boltzmann * temperature_k / (cap_ff * 1e-15));
}

double sample_ktc(double cap_ff, NoiseContext& ctx) {
    const double g = ctx.next_gaussian();  // consume the draw even when disabled
    if (!ctx.enabled) {
        return 0.0;
    }
    return ktc_sigma(cap_ff, ctx.temperature_k) * g;
}

namespace {

// Draw machinery for perturb_caps: one Gaussian per capacitor in a fixed
// enumeration order, resampling (never clamping) if a draw would drive the
// capacitance non-positive, so the perturbed instance is always physical and
// fully determined by the seed.
struct MismatchDraws {
    std::uint64_t seed;
    std::uint64_t counter = 0;

    double factor(double sigma_rel, bool apply) {
        double f = 1.0 + sigma_rel * rng::gaussian_at(seed, counter++);
        if (!apply) {
            return 1.0;  // the draw is still consumed to keep ordering fixed
        }
        while (f <= 0.0) {
            f = 1.0 + sigma_rel * rng::gaussian_at(seed, counter++);
        }
        return f;
    }

    // Zero-valued caps (divider bypass) stay zero.
    double perturb(double cap_ff, double sigma_rel, bool apply) {
        const double f = factor(sigma_rel, apply && cap_ff != 0.0);
        return cap_ff * f;
    }
};

}  // namespace

PipelineConfig perturb_caps(const PipelineConfig& cfg, const MismatchModel& model) {
    if (model.sigma_rel < 0.0) {
        throw std::invalid_argument("mismatch sigma must be non-negative");
    }
    PipelineConfig out = cfg;
    // Enumeration order: c_mul row-major, then the three divider arrays, then
    // c_norm and c_acc.
    MismatchDraws draws{model.seed};
    const bool all = !model.quant_caps_only;
    for (std::size_t i = 0; i < 64; ++i) {
        out.c_mul_ff.m[i] = draws.perturb(cfg.c_mul_ff.m[i], model.sigma_rel, all);
    }
    for (std::size_t i = 0; i < 64; ++i) {
        out.division.c_first_ff.m[i] =
            draws.perturb(cfg.division.c_first_ff.m[i], model.sigma_rel, true);
    }
    for (std::size_t i = 0; i < 64; ++i) {
        out.division.c_inter_ff.m[i] =
            draws.perturb(cfg.division.c_inter_ff.m[i], model.sigma_rel, true);
    }
    for (std::size_t i = 0; i < 64; ++i) {
        out.division.c_out_ff.m[i] =
            draws.perturb(cfg.division.c_out_ff.m[i], model.sigma_rel, true);
    }
    out.c_norm_ff = draws.perturb(cfg.c_norm_ff, model.sigma_rel, all);
    out.c_acc_ff = draws.perturb(cfg.c_acc_ff, model.sigma_rel, all);
    return out;
}

PipelineConfig apply_parasitics(const PipelineConfig& cfg, const ParasiticModel& model) {
    PipelineConfig out = cfg;
    const double cp = model.c_parasitic_ff;
    if (cp < 0.0) {
        throw std::invalid_argument("parasitic capacitance must be non-negative");
    }
    // Every switched node gains the same fixed parasitic. The normalization
    // constant is not a physical node, so a 2 fF parasitic on a 20.4 fF unit
    // cap scales that coefficient's weight by exactly 22.4/20.4.
    auto bump = [cp](double c) { return c > 0.0 ? c + cp : c; };
    for (std::size_t i = 0; i < 64; ++i) {
        out.c_mul_ff.m[i] = bump(out.c_mul_ff.m[i]);
        out.division.c_first_ff.m[i] = bump(out.division.c_first_ff.m[i]);
        out.division.c_inter_ff.m[i] = bump(out.division.c_inter_ff.m[i]);
        out.division.c_out_ff.m[i] = bump(out.division.c_out_ff.m[i]);
    }
    out.c_acc_ff = bump(out.c_acc_ff);
    return out;
}

namespace {

// Sampled variance at one stage accumulator: every multiplying cap injects
// kT/C scaled by its weight, plus one kT/C on the accumulation cap.
double stage_row_variance(const PipelineConfig& cfg, int row, double kt) {
    double var = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double w = effective_weight(cfg, row, j);
        var += w * w * kt / (cfg.c_mul_ff(row, j) * 1e-15);
    }
    var += kt / (cfg.c_acc_ff * 1e-15);
    return var;
}

}  // namespace

double input_referred_noise(const PipelineConfig& cfg) {
    const double kt = k_boltzmann * 300.0;
    double mean_nu = 0.0;
    for (int i = 0; i < 8; ++i) {
        mean_nu += stage_row_variance(cfg, i, kt);
    }
    mean_nu /= 8.0;
    // Stage-2 sampling sees the same capacitor rows, referred back through the
    // stage-1 chain gain; the two differential half-circuits double the total.
    const double g1 = cfg.buf1_gain * (1.0 + cfg.gain_error) * cfg.intentional_attenuation;
    return std::sqrt(2.0 * (mean_nu + mean_nu / (g1 * g1)));
}

double output_noise_std(const PipelineConfig& cfg, int i, int j) {
    const double kt = k_boltzmann * 300.0;
    const double g1 = cfg.buf1_gain * (1.0 + cfg.gain_error) * cfg.intentional_attenuation;
    const double b3 = cfg.buf3_gain * (1.0 + cfg.gain_error);

    const double nu1 = stage_row_variance(cfg, i, kt);
    double sum_w2 = 0.0;
    for (int c = 0; c < 8; ++c) {
        const double w = effective_weight(cfg, j, c);
        sum_w2 += w * w;
    }
    const double nu2 = stage_row_variance(cfg, j, kt);
    const double var_acc2 = g1 * g1 * nu1 * sum_w2 + nu2;

    const double ca = cfg.division.c_first_ff(i, j);
    const double ci = cfg.division.c_inter_ff(i, j);
    const double co = cfg.division.c_out_ff(i, j);
    double var_out;
    if (ca <= 0.0 || ci <= 0.0) {  // divider bypass: no extra sampling events
        var_out = var_acc2;
    } else {
        const auto [r1, r2] = divider_ratios(cfg, i, j);
        var_out = (r1 * r2) * (r1 * r2) * (var_acc2 + kt / (ca * 1e-15)) +
                  r2 * r2 * kt / (ci * 1e-15) + kt / (co * 1e-15);
    }
    return b3 * std::sqrt(var_out);
}

}  // namespace dajc
