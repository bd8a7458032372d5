#include "dajc/adc_rle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dajc {

AdcConfig adc_config_for_rails(double v_min, double v_max) {
    if (v_min >= v_max) {
        throw ConfigError("voltage rails must satisfy v_min < v_max");
    }
    AdcConfig cfg;
    const double half_range = 9.0 / 8.0 * (v_max - v_min);
    cfg.v_fullscale_lo_v = -half_range;
    cfg.v_fullscale_hi_v = half_range;
    return cfg;
}

double adc_lsb(const AdcConfig& cfg) {
    const double levels = static_cast<double>((1 << cfg.bits) - 1);
    return (cfg.v_fullscale_hi_v - cfg.v_fullscale_lo_v) / levels;
}

bool classify(double v, double v_thresh, double v_mid) {
    if (v_thresh < 0.0) {
        throw std::invalid_argument("classification threshold must be non-negative");
    }
    return std::abs(v - v_mid) >= v_thresh;
}

std::uint16_t adc_convert(double v, const AdcConfig& cfg) {
    const int max_code = (1 << cfg.bits) - 1;
    const double span = cfg.v_fullscale_hi_v - cfg.v_fullscale_lo_v;
    double x = (v - cfg.v_fullscale_lo_v) / span * max_code;
    if (!cfg.code_error.empty()) {
        const long ideal = std::lround(std::min(std::max(x, 0.0), static_cast<double>(max_code)));
        x += cfg.code_error[static_cast<std::size_t>(ideal) % cfg.code_error.size()];
    }
    const double rounded = std::round(x);
    if (rounded < 0.0) {
        return 0;
    }
    if (rounded > max_code) {
        return static_cast<std::uint16_t>(max_code);
    }
    return static_cast<std::uint16_t>(rounded);
}

double adc_decode(std::uint16_t code, const AdcConfig& cfg) {
    const int mid = 1 << (cfg.bits - 1);
    return (static_cast<int>(code) - mid) * adc_lsb(cfg);
}

int token_positions(const Token& t) {
    return t.kind == Token::Kind::sample ? 1 : static_cast<int>(t.value);
}

namespace {
void refresh_derived(EnergyReport& r) {
    r.significant_fraction =
        r.total_samples > 0
            ? static_cast<double>(r.conversions) / static_cast<double>(r.total_samples)
            : 0.0;
    r.ratio = r.adc_energy_j > 0.0 ? r.baseline_energy_j / r.adc_energy_j
                                   : std::numeric_limits<double>::infinity();
}
}  // namespace

EnergyReport merge_energy(const EnergyReport& a, const EnergyReport& b) {
    EnergyReport out;
    out.conversions = a.conversions + b.conversions;
    out.total_samples = a.total_samples + b.total_samples;
    out.adc_energy_j = a.adc_energy_j + b.adc_energy_j;
    out.baseline_energy_j = a.baseline_energy_j + b.baseline_energy_j;
    refresh_derived(out);
    return out;
}

double energy_ratio(const EnergyReport& report) {
    return report.adc_energy_j > 0.0 ? report.baseline_energy_j / report.adc_energy_j
                                     : std::numeric_limits<double>::infinity();
}

BlockEncodeResult encode_block(const std::array<double, 64>& samples_v, double v_thresh,
                               const AdcConfig& cfg, bool force_first) {
    BlockEncodeResult res;
    const double conversion_energy = cfg.cycles_per_conversion * cfg.energy_per_cycle_j;

    int run = 0;
    auto flush_run = [&] {
        while (run > 0) {
            const int chunk = std::min(run, 63);
            res.tokens.push_back(Token::run(static_cast<std::uint16_t>(chunk)));
            run -= chunk;
        }
    };

    for (int k = 0; k < 64; ++k) {
        const double v = samples_v[static_cast<std::size_t>(k)];
        const bool significant = (k == 0 && force_first) || classify(v, v_thresh);
        res.energy.adc_energy_j += cfg.comparator_energy_j;
        if (significant) {
            flush_run();
            res.tokens.push_back(Token::sample(adc_convert(v, cfg)));
            res.energy.conversions += 1;
            res.energy.adc_energy_j += conversion_energy;
        } else {
            if (run == 63) {
                flush_run();
            }
            run += 1;
        }
    }
    flush_run();

    res.energy.total_samples = 64;
    res.energy.baseline_energy_j = 64.0 * conversion_energy;
    refresh_derived(res.energy);
    return res;
}

std::array<double, 64> decode_block(std::span<const Token> tokens, const AdcConfig& cfg) {
    std::array<double, 64> out{};
    int pos = 0;
    for (const Token& t : tokens) {
        if (t.kind == Token::Kind::sample) {
            if (pos >= 64) {
                throw FormatError("block token positions exceed 64");
            }
            out[static_cast<std::size_t>(pos)] = adc_decode(t.value, cfg);
            pos += 1;
        } else {
            if (t.value < 1 || t.value > 63) {
                throw FormatError("run token count out of range: " + std::to_string(t.value));
            }
            pos += t.value;  // skipped positions stay at exactly 0 V
            if (pos > 64) {
                throw FormatError("block token positions exceed 64");
            }
        }
    }
    if (pos != 64) {
        throw FormatError("block token positions sum to " + std::to_string(pos) + ", expected 64");
    }
    return out;
}

double comm_power(double bit_rate_bps, double energy_per_bit_j) {
    if (bit_rate_bps < 0.0 || energy_per_bit_j < 0.0) {
        throw std::invalid_argument("comm_power expects non-negative inputs");
    }
    return bit_rate_bps * energy_per_bit_j;
}

}  // namespace dajc
