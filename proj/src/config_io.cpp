#include "dajc/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

namespace dajc {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.contains(key)) {
            throw ConfigError("unknown config key '" + key + "' in " + where);
        }
    }
}

double require_number(const json& obj, const char* key, double fallback, double lo, double hi,
                      const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(std::string("config key '") + key + "' in " + where +
                          " must be a number");
    }
    const double d = v.get<double>();
    if (d < lo || d > hi) {
        throw ConfigError(std::string("config key '") + key + "' in " + where +
                          " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "]: " + std::to_string(d));
    }
    return d;
}

int require_int(const json& obj, const char* key, int fallback, int lo, int hi,
                const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(std::string("config key '") + key + "' in " + where +
                          " must be an integer");
    }
    const int i = v.get<int>();
    if (i < lo || i > hi) {
        throw ConfigError(std::string("config key '") + key + "' in " + where + " out of range");
    }
    return i;
}

bool require_bool(const json& obj, const char* key, bool fallback, const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        throw ConfigError(std::string("config key '") + key + "' in " + where +
                          " must be a boolean");
    }
    return v.get<bool>();
}

std::uint64_t require_seed(const json& obj, const char* key, std::uint64_t fallback,
                           const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_string()) {
        try {
            return std::stoull(v.get<std::string>());
        } catch (const std::exception&) {
            throw ConfigError(std::string("config key '") + key + "' in " + where +
                              " is not a valid seed");
        }
    }
    throw ConfigError(std::string("config key '") + key + "' in " + where +
                      " must be a non-negative integer or decimal string");
}

}  // namespace

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.pipeline = default_pipeline_config();
    cfg.adc = adc_config_for_rails(cfg.pipeline.v_min, cfg.pipeline.v_max);
    return cfg;
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    reject_unknown_keys(doc, {"pipeline", "adc", "noise", "mismatch", "parasitics",
                              "threshold_mv"},
                        "config root");

    RunConfig cfg = default_run_config();

    double c_norm = 204.0;
    double c_acc = 500.0;
    double c_q_out = 90.0;
    if (doc.contains("pipeline")) {
        const json& p = doc.at("pipeline");
        reject_unknown_keys(p,
                            {"v_min", "v_max", "c_norm_ff", "c_acc_ff", "c_q_out_ff", "buf1_gain",
                             "buf3_gain", "intentional_attenuation", "gain_error",
                             "quant_cycles_per_coeff", "mux_cycles_per_sample"},
                            "pipeline");
        cfg.pipeline.v_min = require_number(p, "v_min", cfg.pipeline.v_min, 0.0, 10.0, "pipeline");
        cfg.pipeline.v_max = require_number(p, "v_max", cfg.pipeline.v_max, 0.0, 10.0, "pipeline");
        if (cfg.pipeline.v_min >= cfg.pipeline.v_max) {
            throw ConfigError("pipeline.v_min must be below pipeline.v_max");
        }
        c_norm = require_number(p, "c_norm_ff", c_norm, 1.0, 1e6, "pipeline");
        c_acc = require_number(p, "c_acc_ff", c_acc, 1.0, 1e6, "pipeline");
        c_q_out = require_number(p, "c_q_out_ff", c_q_out, 1.0, 1e6, "pipeline");
        cfg.pipeline.buf1_gain = require_number(p, "buf1_gain", 2.0, 1e-3, 100.0, "pipeline");
        cfg.pipeline.buf3_gain = require_number(p, "buf3_gain", 3.0, 1e-3, 100.0, "pipeline");
        cfg.pipeline.intentional_attenuation =
            require_number(p, "intentional_attenuation", 0.5, 1e-3, 1.0, "pipeline");
        cfg.pipeline.gain_error = require_number(p, "gain_error", 0.0, -0.5, 0.5, "pipeline");
        cfg.pipeline.quant_cycles_per_coeff =
            require_int(p, "quant_cycles_per_coeff", 2, 0, 100, "pipeline");
        cfg.pipeline.mux_cycles_per_sample =
            require_int(p, "mux_cycles_per_sample", 1, 0, 100, "pipeline");
    }

    // Rebuild the capacitor arrays from the (possibly overridden) scalars.
    cfg.pipeline.c_norm_ff = c_norm;
    cfg.pipeline.c_acc_ff = c_acc;
    const DctBasis basis = build_dct_basis();
    for (std::size_t k = 0; k < 64; ++k) {
        cfg.pipeline.c_mul_ff.m[k] = mul_cap_for_coefficient(std::abs(basis.a.m[k]), c_norm);
        cfg.pipeline.sign.m[k] = basis.a.m[k] < 0.0 ? -1.0 : 1.0;
    }
    cfg.pipeline.division = synthesize_division_caps(q50_table(), c_q_out);

    cfg.adc = adc_config_for_rails(cfg.pipeline.v_min, cfg.pipeline.v_max);
    if (doc.contains("adc")) {
        const json& a = doc.at("adc");
        reject_unknown_keys(a,
                            {"cycles_per_conversion", "energy_per_cycle_pj",
                             "comparator_energy_pj"},
                            "adc");
        cfg.adc.cycles_per_conversion =
            require_int(a, "cycles_per_conversion", 14, 1, 1000, "adc");
        cfg.adc.energy_per_cycle_j =
            require_number(a, "energy_per_cycle_pj", cfg.adc.energy_per_cycle_j * 1e12, 0.0,
                           1e6, "adc") *
            1e-12;
        cfg.adc.comparator_energy_j =
            require_number(a, "comparator_energy_pj", 0.0, 0.0, 1e6, "adc") * 1e-12;
    }

    if (doc.contains("noise")) {
        const json& n = doc.at("noise");
        reject_unknown_keys(n, {"enabled", "temperature_k"}, "noise");
        cfg.noise_enabled = require_bool(n, "enabled", true, "noise");
        cfg.temperature_k = require_number(n, "temperature_k", 300.0, 1.0, 1000.0, "noise");
    }

    if (doc.contains("mismatch")) {
        const json& m = doc.at("mismatch");
        reject_unknown_keys(m, {"sigma_rel", "seed", "quant_caps_only"}, "mismatch");
        cfg.mismatch.sigma_rel = require_number(m, "sigma_rel", 0.0, 0.0, 0.5, "mismatch");
        cfg.mismatch.seed = require_seed(m, "seed", 0, "mismatch");
        cfg.mismatch.quant_caps_only = require_bool(m, "quant_caps_only", false, "mismatch");
    }

    if (doc.contains("parasitics")) {
        const json& p = doc.at("parasitics");
        reject_unknown_keys(p, {"c_node_ff"}, "parasitics");
        cfg.parasitics.c_parasitic_ff = require_number(p, "c_node_ff", 0.0, 0.0, 1e3, "parasitics");
    }

    cfg.v_thresh_v =
        require_number(doc, "threshold_mv", cfg.v_thresh_v * 1000.0, 0.0, 65535.0, "config root") /
        1000.0;
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("failed reading config file: " + path);
    }
    return parse_run_config(text);
}

PipelineConfig build_chip(const RunConfig& cfg) {
    return apply_parasitics(perturb_caps(cfg.pipeline, cfg.mismatch), cfg.parasitics);
}

std::string canonical_config_json(const RunConfig& cfg) {
    json doc;
    doc["pipeline"] = {{"v_min", cfg.pipeline.v_min},
                       {"v_max", cfg.pipeline.v_max},
                       {"c_norm_ff", cfg.pipeline.c_norm_ff},
                       {"c_acc_ff", cfg.pipeline.c_acc_ff},
                       {"c_q_out_ff", cfg.pipeline.division.c_out_ff.m[0]},
                       {"buf1_gain", cfg.pipeline.buf1_gain},
                       {"buf3_gain", cfg.pipeline.buf3_gain},
                       {"intentional_attenuation", cfg.pipeline.intentional_attenuation},
                       {"gain_error", cfg.pipeline.gain_error},
                       {"quant_cycles_per_coeff", cfg.pipeline.quant_cycles_per_coeff},
                       {"mux_cycles_per_sample", cfg.pipeline.mux_cycles_per_sample}};
    doc["adc"] = {{"cycles_per_conversion", cfg.adc.cycles_per_conversion},
                  {"energy_per_cycle_pj", cfg.adc.energy_per_cycle_j * 1e12},
                  {"comparator_energy_pj", cfg.adc.comparator_energy_j * 1e12}};
    doc["noise"] = {{"enabled", cfg.noise_enabled}, {"temperature_k", cfg.temperature_k}};
    doc["mismatch"] = {{"sigma_rel", cfg.mismatch.sigma_rel},
                       {"seed", std::to_string(cfg.mismatch.seed)},
                       {"quant_caps_only", cfg.mismatch.quant_caps_only}};
    doc["parasitics"] = {{"c_node_ff", cfg.parasitics.c_parasitic_ff}};
    doc["threshold_mv"] = cfg.v_thresh_v * 1000.0;
    return doc.dump();  // nlohmann orders object keys lexicographically
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = canonical_config_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char ch : text) {
        h ^= static_cast<std::uint8_t>(ch);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace dajc
