#pragma once

#include <string>

#include "dajc/adc_rle.hpp"
#include "dajc/nonideal.hpp"
#include "dajc/sc_sim.hpp"

namespace dajc {

// Everything a run needs, as loaded from a JSON config file. The pipeline's
// capacitor arrays are always synthesized from the scalar knobs (c_norm,
// c_q_out) plus the DCT basis and standard table; mismatch/parasitics then
// perturb that nominal chip.
struct RunConfig {
    PipelineConfig pipeline;
    AdcConfig adc;
    double v_thresh_v = 0.005;
    bool noise_enabled = true;
    double temperature_k = 300.0;
    MismatchModel mismatch;      // sigma_rel = 0: ideal caps
    ParasiticModel parasitics;   // 0 fF: no parasitics
};

RunConfig default_run_config();

// Strict parser: unknown keys anywhere in the document raise ConfigError, as
// do out-of-domain values. See README for the schema.
RunConfig parse_run_config(const std::string& json_text);

// IoError if the file cannot be read; ConfigError for malformed JSON/values.
RunConfig load_run_config(const std::string& path);

// The chip instance actually simulated: nominal pipeline with mismatch
// applied first, then parasitic loading.
PipelineConfig build_chip(const RunConfig& cfg);

// Canonical JSON rendering of the effective configuration (sorted keys,
// fixed field set) — the basis for config_hash.
std::string canonical_config_json(const RunConfig& cfg);

// FNV-1a 64-bit hash of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace dajc
