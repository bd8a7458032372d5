#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "dajc/core_types.hpp"
#include "dajc/jpeg_core.hpp"
#include "dajc/sc_sim.hpp"

namespace dajc {

// Effective per-coefficient chain gain measured by calibration: volts at the
// ADC input per unit of pre-quantization DCT coefficient.
struct GainMatrix {
    Mat8 g;
};

// Decoder-side inverse table: coefficient units per volt (the corrected
// inverse-Q, folding the analog chain gain and any per-coefficient error).
struct InverseQTable {
    Mat8 q_inv;
};

// Calibration pattern p: pixel p at 255, all others 0.
PixelBlock impulse_frame(int p);  // throws std::out_of_range unless 0 <= p < 64

// One pipeline evaluation for characterization: runs the (possibly
// non-ideal) encoder on `frame` and returns the 64 ADC input voltages in
// zig-zag order. `draw_key` is unique per (impulse index, repetition) so
// implementations can derive independent noise streams.
using PipelineFn = std::function<std::array<double, 64>(const PixelBlock& frame,
                                                        std::uint64_t draw_key)>;

struct GainEstimate {
    GainMatrix gain;
    // Largest residual of the scalar-gain model across all impulse responses,
    // relative to each coefficient's full-scale excitation — a diagnostic for
    // cross-coefficient leakage that the element-wise model cannot capture.
    double max_cross_talk = 0.0;
};

// Drives the 64 impulse frames through the pipeline, averaging
// noise_averaging runs per frame, and least-squares fits the per-coefficient
// gain: g_ij = sum_p(O^p_ij * Y^p_ij) / sum_p(Y^p_ij)^2, where Y^p is the
// exact reference DCT of impulse frame p. Frames run in parallel (the
// pipeline closure must be thread-safe; cap with DAJC_THREADS).
// Throws CalibrationError for a degenerate (all-zero-output) pipeline.
GainEstimate characterize(const PipelineFn& pipeline, int noise_averaging);

// q_inv = 1/g. Throws CalibrationError if any gain entry is too small to
// invert meaningfully.
InverseQTable build_inverse_q(const GainMatrix& g);

// The uncalibrated decoder table from architecture constants alone: nominal
// chain gain 2 * 0.5 * 3 and the standard table, q_inv = Q_ij / (3 * delta_v).
InverseQTable ideal_inverse_q(const QuantTable& q, double v_min, double v_max);

struct CalibrationResult {
    InverseQTable q_inv;
    GainMatrix gain;
    std::uint64_t seed = 0;
    int noise_averaging = 16;
    std::string config_hash;
    double max_cross_talk = 0.0;
};

// Convenience wrapper: characterizes `chip` (a fully perturbed PipelineConfig)
// with per-run noise contexts derived from `seed`.
CalibrationResult run_calibration(const PipelineConfig& chip, int noise_averaging,
                                  std::uint64_t seed, bool noise_enabled = true,
                                  double temperature_k = 300.0,
                                  const std::string& config_hash = "");

// Calibration file round trip (JSON). IoError on unreadable/unwritable paths,
// FormatError on malformed content.
void save_calibration(const CalibrationResult& result, const std::string& path);
CalibrationResult load_calibration(const std::string& path);

}  // namespace dajc
