#pragma once

#include <cstdint>

namespace dajc {

struct PipelineConfig;  // defined in sc_sim.hpp

// Boltzmann constant (exact, SI 2019).
inline constexpr double k_boltzmann = 1.380649e-23;

// Deterministic counter-based Gaussian source. Draw n is produced from two
// SplitMix64 words evaluated at counters 2n and 2n+1 and combined with
// Box-Muller, so the stream is random access: (seed, draw index) fully
// determines the value regardless of call order elsewhere.
namespace rng {

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter);
double gaussian_at(std::uint64_t seed, std::uint64_t draw_index);

}  // namespace rng

// Carries the noise state for one simulated block. Every sampling event
// consumes exactly one Gaussian draw, so draw_count doubles as an audit of
// the phase schedule.
struct NoiseContext {
    double temperature_k = 300.0;
    bool enabled = true;
    std::uint64_t seed = 0;
    std::uint64_t draw_count = 0;

    // Standard normal from the counter stream; advances draw_count even when
    // noise is disabled so the draw ledger is schedule-invariant.
    double next_gaussian();
};

// One kT/C thermal-noise sample for a switch closing onto `cap_ff`
// femtofarads: zero-mean Gaussian with std sqrt(kT/C), or exactly 0 when the
// context is disabled. Consumes one draw either way.
double sample_ktc(double cap_ff, NoiseContext& ctx);

// Convenience: sqrt(kT/C) in volts for a capacitance in femtofarads.
double ktc_sigma(double cap_ff, double temperature_k = 300.0);

// Static per-instance capacitor mismatch: each capacitor value is multiplied
// by (1 + sigma_rel * g) with g drawn from the seed's Gaussian stream in a
// fixed enumeration order. The same (sigma_rel, seed) always yields the same
// perturbed instance.
struct MismatchModel {
    double sigma_rel = 0.0;
    std::uint64_t seed = 0;
    // When true only the quantization-divider capacitors are perturbed,
    // leaving the DCT multiplying caps ideal (useful for isolating the
    // per-coefficient scalar gain error that calibration can cancel exactly).
    bool quant_caps_only = false;
};

PipelineConfig perturb_caps(const PipelineConfig& cfg, const MismatchModel& model);

// Fixed parasitic loading: adds c_parasitic_ff to every capacitor in the
// sharing networks, biasing effective ratios.
struct ParasiticModel {
    double c_parasitic_ff = 0.0;
};

PipelineConfig apply_parasitics(const PipelineConfig& cfg, const ParasiticModel& model);

// Analytic input-referred acquisition noise of the differential stage-1
// sampling network (volts, rms). Averages the per-row sampled variance over
// the 8 basis rows, refers the post-buffer contribution back through the
// stage-1 chain gain, and doubles the variance for the differential halves.
double input_referred_noise(const PipelineConfig& cfg);

// Analytic output-referred noise std (volts) of coefficient (i, j) produced
// by run_block with noise enabled, mirroring the simulator's draw points.
double output_noise_std(const PipelineConfig& cfg, int i, int j);

}  // namespace dajc
