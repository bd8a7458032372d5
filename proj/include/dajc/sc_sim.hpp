#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "dajc/core_types.hpp"
#include "dajc/jpeg_core.hpp"
#include "dajc/nonideal.hpp"

namespace dajc {

// One capacitor with its stored voltage, for explicit charge-share math.
struct CapNode {
    double capacitance_ff = 0.0;
    double voltage_v = 0.0;
};

// Ideal charge redistribution across >= 2 connected nodes:
// V = sum(C_i * V_i) / sum(C_i). All node voltages are set to the result,
// which is also returned. Throws std::invalid_argument for fewer than two
// nodes or a non-positive capacitance.
double share(std::span<CapNode> nodes);

// Column-parallel phase plan: each image column takes cycles_per_column
// cycles through stage 1, and total_block_cycles must equal the product.
struct PhaseSchedule {
    int cycles_per_column = 9;
    int columns = 8;
    int total_block_cycles = 72;
};

void validate_phase_schedule(const PhaseSchedule& ps);  // ConfigError on mismatch

// Capacitor arrays realizing the per-coefficient 1/Q two-step dividers.
struct DivisionCaps {
    Mat8 c_first_ff;  // holds the signal before the first share
    Mat8 c_inter_ff;  // intermediate transfer cap
    Mat8 c_out_ff;    // final cap sampled by the ADC
};

// Synthesizes {c_first, c_inter} for every Q entry with the output cap fixed.
// Uses the closed form that minimizes total capacitance per divider:
// r1 = (Q+1)/(2Q), r2 = 2/(Q+1), so c_inter = 2*c_out/(Q-1) and
// c_first = (Q+1)*c_inter/(Q-1). r1*r2 = 1/Q exactly. Q == 1 entries become
// a bypass (both caps zero); Q < 1 raises ConfigError.
DivisionCaps synthesize_division_caps(const QuantTable& q, double c_out_ff = 90.0);

// Capacitance implementing DCT weight magnitude `a_abs` against the common
// normalization cap: c = a_abs * c_norm.
double mul_cap_for_coefficient(double a_abs, double c_norm_ff);

// Full behavioral parameter set of the analog encode pipeline.
struct PipelineConfig {
    // Pixel-to-voltage rails: pixel p maps to (p/255)*(v_max-v_min)+v_min,
    // and the pipeline runs on level-shifted voltages (p-128)*delta_v.
    double v_min = 0.1;
    double v_max = 0.9;

    // Multiplying-DAC capacitor matrix (|A_ij| * c_norm by default), the sign
    // matrix of the DCT basis, and the shared normalization/accumulation caps.
    Mat8 c_mul_ff;
    Mat8 sign;
    double c_norm_ff = 204.0;
    double c_acc_ff = 500.0;

    DivisionCaps division;

    // Amplifier chain: stage-1 output buffer, intentional attenuation into
    // stage 2, output driver after the quantization divider. Nominal chain
    // gain K = buf1 * attenuation * buf3 = 3. gain_error applies
    // multiplicatively to both buffers.
    double buf1_gain = 2.0;
    double intentional_attenuation = 0.5;
    double buf3_gain = 3.0;
    double gain_error = 0.0;

    PhaseSchedule phase;
    int quant_cycles_per_coeff = 2;
    int mux_cycles_per_sample = 1;
};

// Defaults wired to the orthonormal basis and the quality-50 table.
PipelineConfig default_pipeline_config();

// Volts per pixel code step: (v_max - v_min) / 255.
double delta_v(const PipelineConfig& cfg);

// Effective MAC weight sign_ij * c_mul_ij / c_norm (equals A_ij when ideal).
double effective_weight(const PipelineConfig& cfg, int i, int j);

// Divider transfer ratios (r1, r2) for coefficient (i, j) from the synthesized
// caps; r1 * r2 == 1/Q_ij for an unperturbed config.
std::pair<double, double> divider_ratios(const PipelineConfig& cfg, int i, int j);

// Nominal amplifier chain gain buf1 * attenuation * buf3 * (1+gain_error)^2.
double chain_gain(const PipelineConfig& cfg);

// First-order scalar gain of the full chain for coefficient (i, j): volts at
// the ADC input per unit of the pre-quantization DCT coefficient. Exact when
// only divider caps deviate from nominal; first-order under MAC-cap mismatch.
double scalar_chain_gain(const PipelineConfig& cfg, int i, int j);

// Ideal voltage buffer with relative gain error: v * gain * (1 + gain_error).
double buffer(double v, double gain, double gain_error = 0.0);

// Noiseless two-step capacitive division: v * r1 * r2 with
// r1 = c_first/(c_first+c_inter), r2 = c_inter/(c_inter+c_out).
// Zero c_first/c_inter means bypass (returns v unchanged).
double two_step_divide(double v, double c_first_ff, double c_inter_ff, double c_out_ff);

struct Stage1Result {
    std::array<double, 8> out_v{};
    int cycles = 0;  // 8 sampling cycles + 1 accumulation cycle
};

// Stage 1: one column of the image through the 8 row MACs. Input voltages are
// level-shifted pixel voltages; output is approximately A * u. Per MAC, the 8
// input sampling events draw kT/C on their multiplying caps and one draw lands
// on the accumulation cap (9 draws per MAC, 72 per column).
Stage1Result stage1_dct_column(const std::array<double, 8>& column_v, const PipelineConfig& cfg,
                               NoiseContext& noise);

// Stage 2: right-multiplication by A^T. Input rows must already be through
// the stage-1 buffer and intentional attenuation. Same draw pattern per
// output coefficient as stage 1 (9 draws each, row-major output order).
Mat8 stage2_dct(const Mat8& buffered_rows, const PipelineConfig& cfg, NoiseContext& noise);

struct AnalogBlockResult {
    // ADC input voltages in zig-zag scan order (the 64:1 output mux walks the
    // coefficient matrix along anti-diagonals).
    std::array<double, 64> samples_v{};
    int cycles_used = 0;
    std::uint64_t noise_draws = 0;
};

// Full block pipeline on level-shifted voltages: stage 1 per column, buffer
// and attenuation, stage 2, per-coefficient two-step quantization division
// (three draws each: c_first, c_inter, c_out), output driver, zig-zag
// serialization. Samples equal chain_gain * delta_v * zigzag(Y ./ Q) when
// noise is disabled and caps are ideal.
AnalogBlockResult run_block_voltages(const Mat8& level_shifted_v, const PipelineConfig& cfg,
                                     NoiseContext& noise);

// Same, starting from an 8-bit pixel block.
AnalogBlockResult run_block(const PixelBlock& pixels, const PipelineConfig& cfg,
                            NoiseContext& noise);

}  // namespace dajc
