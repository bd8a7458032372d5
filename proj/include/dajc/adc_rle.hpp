#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dajc/core_types.hpp"

namespace dajc {

// Sparsity-gated SAR ADC parameters. The full-scale window is symmetric
// around the zero-coefficient level with a 9/8 headroom factor over the pixel
// rail span, so the default 0.1..0.9 V rails give +/-0.9 V.
struct AdcConfig {
    int bits = 10;
    double v_fullscale_lo_v = -0.9;
    double v_fullscale_hi_v = 0.9;
    int cycles_per_conversion = 14;
    // Measured ADC power over clock rate: 98.5 uW / 84 MHz ~= 1.173 pJ.
    double energy_per_cycle_j = 98.5e-6 / 84.0e6;
    // Per-sample threshold-comparator cost; zero by default so the energy
    // ratio reduces to 1/significant_fraction.
    double comparator_energy_j = 0.0;
    // Optional additive code-domain error (INL hook), indexed by the ideal
    // code; empty means an ideal quantizer.
    std::vector<double> code_error;
};

// Full-scale window derived from pixel voltage rails: +/- (9/8)*(v_max-v_min).
AdcConfig adc_config_for_rails(double v_min, double v_max);

// Code step in volts: (hi - lo) / (2^bits - 1).
double adc_lsb(const AdcConfig& cfg);

// Significance test against the zero-coefficient level v_mid. The boundary is
// closed: |v - v_mid| == v_thresh counts as significant, and v_thresh == 0
// marks everything significant.
bool classify(double v, double v_thresh, double v_mid = 0.0);

// Ideal mid-tread uniform quantizer: clamp(round((v-lo)/(hi-lo) * (2^b-1))).
// The zero-coefficient midpoint lands on code 2^(b-1) (511.5 rounds to 512).
std::uint16_t adc_convert(double v, const AdcConfig& cfg);

// Code back to volts, with code 2^(b-1) mapping to exactly 0 V.
double adc_decode(std::uint16_t code, const AdcConfig& cfg);

// One compressed-stream element: a converted significant sample or a count of
// skipped insignificant samples (1..63).
struct Token {
    enum class Kind : std::uint8_t { sample, run };
    Kind kind = Kind::run;
    std::uint16_t value = 0;  // sample: 10-bit code; run: count

    static Token sample(std::uint16_t code) { return {Kind::sample, code}; }
    static Token run(std::uint16_t count) { return {Kind::run, count}; }
    bool operator==(const Token&) const = default;
};

// Sample positions a token accounts for (1 for a sample, count for a run).
int token_positions(const Token& t);

struct EnergyReport {
    std::int64_t conversions = 0;
    std::int64_t total_samples = 0;
    double adc_energy_j = 0.0;
    double baseline_energy_j = 0.0;  // all samples converted, no gating
    double significant_fraction = 0.0;
    double ratio = std::numeric_limits<double>::infinity();  // baseline/actual
};

// Folds b into a and refreshes the derived fields.
EnergyReport merge_energy(const EnergyReport& a, const EnergyReport& b);

double energy_ratio(const EnergyReport& report);

struct BlockEncodeResult {
    std::vector<Token> tokens;
    EnergyReport energy;
};

// Threshold-gated conversion + run-length encoding of one block of samples in
// zig-zag order. Significant samples cost one conversion; insignificant ones
// extend the current run (split at 63). The token positions always sum to 64.
// force_first treats sample 0 (the DC coefficient) as significant regardless
// of the threshold.
BlockEncodeResult encode_block(const std::array<double, 64>& samples_v, double v_thresh,
                               const AdcConfig& cfg, bool force_first = false);

// Inverse of encode_block: significant samples decode through the ADC code
// (exact to within one LSB), insignificant positions become exactly 0 V.
// Throws FormatError if token positions do not sum to 64.
std::array<double, 64> decode_block(std::span<const Token> tokens, const AdcConfig& cfg);

// Transmit power = bit rate x energy per bit.
double comm_power(double bit_rate_bps, double energy_per_bit_j);

}  // namespace dajc
