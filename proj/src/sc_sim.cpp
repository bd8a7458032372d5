#include "dajc/sc_sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dajc {

double share(std::span<CapNode> nodes) {
    if (nodes.size() < 2) {
        throw std::invalid_argument("charge share needs at least two nodes");
    }
    double charge = 0.0;
    double cap = 0.0;
    for (const CapNode& n : nodes) {
        if (n.capacitance_ff <= 0.0) {
            throw std::invalid_argument("charge share requires positive capacitances");
        }
        charge += n.capacitance_ff * n.voltage_v;
        cap += n.capacitance_ff;
    }
    const double v = charge / cap;
    for (CapNode& n : nodes) {
        n.voltage_v = v;
    }
    return v;
}

void validate_phase_schedule(const PhaseSchedule& ps) {
    if (ps.cycles_per_column <= 0 || ps.columns <= 0) {
        throw ConfigError("phase schedule entries must be positive");
    }
    if (ps.cycles_per_column * ps.columns != ps.total_block_cycles) {
        throw ConfigError("total_block_cycles (" + std::to_string(ps.total_block_cycles) +
                          ") != cycles_per_column * columns (" +
                          std::to_string(ps.cycles_per_column * ps.columns) + ")");
    }
}

DivisionCaps synthesize_division_caps(const QuantTable& q, double c_out_ff) {
    if (c_out_ff <= 0.0) {
        throw ConfigError("divider output capacitance must be positive");
    }
    DivisionCaps caps;
    for (std::size_t idx = 0; idx < 64; ++idx) {
        const int qv = q.q[idx];
        if (qv < 1) {
            throw ConfigError("quantization step must be >= 1, got " + std::to_string(qv));
        }
        if (qv == 1) {
            continue;  // bypass: leave all three caps at zero
        }
        const double c_inter = 2.0 * c_out_ff / (qv - 1);
        caps.c_inter_ff.m[idx] = c_inter;
        caps.c_first_ff.m[idx] = (qv + 1) * c_inter / (qv - 1);
        caps.c_out_ff.m[idx] = c_out_ff;
    }
    return caps;
}

double mul_cap_for_coefficient(double a_abs, double c_norm_ff) {
    if (a_abs <= 0.0 || c_norm_ff <= 0.0) {
        throw std::invalid_argument("capacitor sizing expects positive inputs");
    }
    return a_abs * c_norm_ff;
}

PipelineConfig default_pipeline_config() {
    PipelineConfig cfg;
    const DctBasis basis = build_dct_basis();
    for (std::size_t i = 0; i < 64; ++i) {
        cfg.c_mul_ff.m[i] = mul_cap_for_coefficient(std::abs(basis.a.m[i]), cfg.c_norm_ff);
        cfg.sign.m[i] = basis.a.m[i] < 0.0 ? -1.0 : 1.0;
    }
    cfg.division = synthesize_division_caps(q50_table());
    return cfg;
}

double delta_v(const PipelineConfig& cfg) {
    return (cfg.v_max - cfg.v_min) / 255.0;
}

double effective_weight(const PipelineConfig& cfg, int i, int j) {
    return cfg.sign(i, j) * cfg.c_mul_ff(i, j) / cfg.c_norm_ff;
}

std::pair<double, double> divider_ratios(const PipelineConfig& cfg, int i, int j) {
    const double ca = cfg.division.c_first_ff(i, j);
    const double ci = cfg.division.c_inter_ff(i, j);
    const double co = cfg.division.c_out_ff(i, j);
    if (ca <= 0.0 || ci <= 0.0) {
        return {1.0, 1.0};
    }
    return {ca / (ca + ci), ci / (ci + co)};
}

double chain_gain(const PipelineConfig& cfg) {
    const double e = 1.0 + cfg.gain_error;
    return cfg.buf1_gain * e * cfg.intentional_attenuation * cfg.buf3_gain * e;
}

double scalar_chain_gain(const PipelineConfig& cfg, int i, int j) {
    static const DctBasis basis = build_dct_basis();
    auto row_projection = [&](int r) {
        double s = 0.0;
        for (int k = 0; k < 8; ++k) {
            s += effective_weight(cfg, r, k) * basis.a(r, k);
        }
        return s;
    };
    const auto [r1, r2] = divider_ratios(cfg, i, j);
    return delta_v(cfg) * chain_gain(cfg) * r1 * r2 * row_projection(i) * row_projection(j);
}

double buffer(double v, double gain, double gain_error) {
    return v * gain * (1.0 + gain_error);
}

double two_step_divide(double v, double c_first_ff, double c_inter_ff, double c_out_ff) {
    if (c_first_ff <= 0.0 || c_inter_ff <= 0.0) {
        return v;  // bypass
    }
    const double r1 = c_first_ff / (c_first_ff + c_inter_ff);
    const double r2 = c_out_ff > 0.0 ? c_inter_ff / (c_inter_ff + c_out_ff) : 1.0;
    return v * r1 * r2;
}

Stage1Result stage1_dct_column(const std::array<double, 8>& column_v, const PipelineConfig& cfg,
                               NoiseContext& noise) {
    Stage1Result result;
    for (int i = 0; i < 8; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 8; ++j) {
            const double n = sample_ktc(cfg.c_mul_ff(i, j), noise);
            acc += effective_weight(cfg, i, j) * (column_v[static_cast<std::size_t>(j)] + n);
        }
        acc += sample_ktc(cfg.c_acc_ff, noise);
        result.out_v[static_cast<std::size_t>(i)] = acc;
    }
    result.cycles = cfg.phase.cycles_per_column;
    return result;
}

Mat8 stage2_dct(const Mat8& buffered_rows, const PipelineConfig& cfg, NoiseContext& noise) {
    Mat8 out;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            double acc = 0.0;
            for (int c = 0; c < 8; ++c) {
                const double n = sample_ktc(cfg.c_mul_ff(j, c), noise);
                acc += effective_weight(cfg, j, c) * (buffered_rows(i, c) + n);
            }
            acc += sample_ktc(cfg.c_acc_ff, noise);
            out(i, j) = acc;
        }
    }
    return out;
}

AnalogBlockResult run_block_voltages(const Mat8& level_shifted_v, const PipelineConfig& cfg,
                                     NoiseContext& noise) {
    validate_phase_schedule(cfg.phase);
    const std::uint64_t draws_before = noise.draw_count;

    // Stage 1, column by column per the phase schedule.
    Mat8 t1;
    for (int c = 0; c < 8; ++c) {
        std::array<double, 8> column{};
        for (int r = 0; r < 8; ++r) {
            column[static_cast<std::size_t>(r)] = level_shifted_v(r, c);
        }
        const auto s1 = stage1_dct_column(column, cfg, noise);
        for (int r = 0; r < 8; ++r) {
            t1(r, c) = s1.out_v[static_cast<std::size_t>(r)];
        }
    }

    // Stage-1 buffer and the intentional attenuation into stage 2.
    Mat8 w;
    for (std::size_t i = 0; i < 64; ++i) {
        w.m[i] = buffer(t1.m[i], cfg.buf1_gain, cfg.gain_error) * cfg.intentional_attenuation;
    }

    Mat8 z = stage2_dct(w, cfg, noise);

    // Per-coefficient two-step quantization division, then the output driver.
    Mat8 out;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const double ca = cfg.division.c_first_ff(i, j);
            const double ci = cfg.division.c_inter_ff(i, j);
            const double co = cfg.division.c_out_ff(i, j);
            double v = z(i, j);
            if (ca > 0.0 && ci > 0.0) {
                const auto [r1, r2] = divider_ratios(cfg, i, j);
                const double va = v + sample_ktc(ca, noise);
                const double vi = r1 * va + sample_ktc(ci, noise);
                v = r2 * vi + sample_ktc(co, noise);
            }
            out(i, j) = buffer(v, cfg.buf3_gain, cfg.gain_error);
        }
    }

    // The 64:1 output mux serializes the coefficients in zig-zag order.
    AnalogBlockResult result;
    result.samples_v = zigzag(out);
    result.cycles_used = cfg.phase.total_block_cycles +
                         64 * (cfg.quant_cycles_per_coeff + cfg.mux_cycles_per_sample);
    result.noise_draws = noise.draw_count - draws_before;
    return result;
}

AnalogBlockResult run_block(const PixelBlock& pixels, const PipelineConfig& cfg,
                            NoiseContext& noise) {
    const double dv = delta_v(cfg);
    Mat8 u;
    for (std::size_t i = 0; i < 64; ++i) {
        u.m[i] = (static_cast<double>(pixels.p[i]) - 128.0) * dv;
    }
    return run_block_voltages(u, cfg, noise);
}

}  // namespace dajc
