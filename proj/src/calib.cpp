#include "dajc/calib.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dajc/nonideal.hpp"
#include "dajc/parallel.hpp"

namespace dajc {

PixelBlock impulse_frame(int p) {
    if (p < 0 || p > 63) {
        throw std::out_of_range("impulse index must be in [0, 63], got " + std::to_string(p));
    }
    PixelBlock block;
    block.p[static_cast<std::size_t>(p)] = 255;
    return block;
}

GainEstimate characterize(const PipelineFn& pipeline, int noise_averaging) {
    if (noise_averaging < 1) {
        throw std::invalid_argument("noise_averaging must be >= 1");
    }
    const DctBasis basis = build_dct_basis();

    // Per-impulse mean outputs and exact reference coefficients.
    std::array<Mat8, 64> outputs{};
    std::array<Mat8, 64> references{};
    parallel_for(64, [&](int p) {
        Mat8 mean;
        for (int rep = 0; rep < noise_averaging; ++rep) {
            const std::uint64_t key =
                static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(noise_averaging) +
                static_cast<std::uint64_t>(rep);
            const auto samples = pipeline(impulse_frame(p), key);
            const Mat8 o = inverse_zigzag(samples);
            for (std::size_t k = 0; k < 64; ++k) {
                mean.m[k] += o.m[k];
            }
        }
        for (std::size_t k = 0; k < 64; ++k) {
            mean.m[k] /= noise_averaging;
        }
        outputs[static_cast<std::size_t>(p)] = mean;
        references[static_cast<std::size_t>(p)] = dct2(impulse_frame(p), basis);
    });

    // Element-wise least squares over the 64 impulse responses.
    GainEstimate est;
    Mat8 num, den;
    for (int p = 0; p < 64; ++p) {
        for (std::size_t k = 0; k < 64; ++k) {
            const double y = references[static_cast<std::size_t>(p)].m[k];
            num.m[k] += outputs[static_cast<std::size_t>(p)].m[k] * y;
            den.m[k] += y * y;
        }
    }
    for (std::size_t k = 0; k < 64; ++k) {
        est.gain.g.m[k] = num.m[k] / den.m[k];
    }
    if (max_abs(est.gain.g) < 1e-12) {
        throw CalibrationError("pipeline produced no measurable gain (all outputs ~0)");
    }

    // Residual diagnostic: worst scalar-model misfit relative to the
    // coefficient's strongest excitation across the impulse set.
    Mat8 peak;
    for (int p = 0; p < 64; ++p) {
        for (std::size_t k = 0; k < 64; ++k) {
            peak.m[k] = std::max(peak.m[k],
                                 std::abs(est.gain.g.m[k] * references[static_cast<std::size_t>(p)].m[k]));
        }
    }
    for (int p = 0; p < 64; ++p) {
        for (std::size_t k = 0; k < 64; ++k) {
            const double fit = est.gain.g.m[k] * references[static_cast<std::size_t>(p)].m[k];
            const double resid = std::abs(outputs[static_cast<std::size_t>(p)].m[k] - fit);
            if (peak.m[k] > 0.0) {
                est.max_cross_talk = std::max(est.max_cross_talk, resid / peak.m[k]);
            }
        }
    }
    return est;
}

InverseQTable build_inverse_q(const GainMatrix& g) {
    InverseQTable table;
    for (std::size_t k = 0; k < 64; ++k) {
        if (std::abs(g.g.m[k]) < 1e-12) {
            throw CalibrationError("gain entry " + std::to_string(k) + " too small to invert");
        }
        table.q_inv.m[k] = 1.0 / g.g.m[k];
    }
    return table;
}

InverseQTable ideal_inverse_q(const QuantTable& q, double v_min, double v_max) {
    if (v_min >= v_max) {
        throw ConfigError("voltage rails must satisfy v_min < v_max");
    }
    constexpr double nominal_chain_gain = 2.0 * 0.5 * 3.0;
    const double dv = (v_max - v_min) / 255.0;
    InverseQTable table;
    for (std::size_t k = 0; k < 64; ++k) {
        table.q_inv.m[k] = static_cast<double>(q.q[k]) / (nominal_chain_gain * dv);
    }
    return table;
}

CalibrationResult run_calibration(const PipelineConfig& chip, int noise_averaging,
                                  std::uint64_t seed, bool noise_enabled, double temperature_k,
                                  const std::string& config_hash) {
    PipelineFn pipeline = [&chip, seed, noise_enabled, temperature_k](
                              const PixelBlock& frame, std::uint64_t key) {
        NoiseContext ctx;
        ctx.enabled = noise_enabled;
        ctx.temperature_k = temperature_k;
        ctx.seed = rng::splitmix64_at(seed, key);
        return run_block(frame, chip, ctx).samples_v;
    };
    const GainEstimate est = characterize(pipeline, noise_averaging);

    CalibrationResult result;
    result.gain = est.gain;
    result.q_inv = build_inverse_q(est.gain);
    result.seed = seed;
    result.noise_averaging = noise_averaging;
    result.config_hash = config_hash;
    result.max_cross_talk = est.max_cross_talk;
    return result;
}

void save_calibration(const CalibrationResult& result, const std::string& path) {
    nlohmann::json doc;
    doc["format"] = "dajc-calibration";
    doc["version"] = 1;
    doc["q_inv"] = result.q_inv.q_inv.m;
    doc["gain"] = result.gain.g.m;
    doc["seed"] = std::to_string(result.seed);  // string: JSON numbers lose 64-bit precision
    doc["noise_averaging"] = result.noise_averaging;
    doc["config_hash"] = result.config_hash;
    doc["max_cross_talk"] = result.max_cross_talk;

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open calibration file for writing: " + path);
    }
    out << doc.dump(2) << "\n";
    if (!out) {
        throw IoError("failed writing calibration file: " + path);
    }
}

CalibrationResult load_calibration(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open calibration file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed calibration file " + path + ": " + e.what());
    }

    try {
        if (doc.at("format") != "dajc-calibration" || doc.at("version") != 1) {
            throw FormatError("unsupported calibration file format in " + path);
        }
        CalibrationResult result;
        const auto& qi = doc.at("q_inv");
        const auto& g = doc.at("gain");
        if (qi.size() != 64 || g.size() != 64) {
            throw FormatError("calibration tables must hold 64 entries in " + path);
        }
        for (std::size_t k = 0; k < 64; ++k) {
            result.q_inv.q_inv.m[k] = qi[k].get<double>();
            result.gain.g.m[k] = g[k].get<double>();
        }
        result.seed = std::stoull(doc.at("seed").get<std::string>());
        result.noise_averaging = doc.at("noise_averaging").get<int>();
        result.config_hash = doc.value("config_hash", std::string{});
        result.max_cross_talk = doc.value("max_cross_talk", 0.0);
        return result;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed calibration file " + path + ": " + e.what());
    } catch (const std::invalid_argument&) {
        throw FormatError("malformed seed in calibration file " + path);
    } catch (const std::out_of_range&) {
        throw FormatError("malformed seed in calibration file " + path);
    }
}

}  // namespace dajc
