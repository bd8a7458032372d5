#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "dajc/jpeg_core.hpp"
#include "dajc/nonideal.hpp"
#include "dajc/sc_sim.hpp"

using namespace dajc;

namespace {

PixelBlock random_block(std::uint64_t seed) {
    PixelBlock b;
    for (std::size_t i = 0; i < 64; ++i) {
        b.p[i] = static_cast<std::uint8_t>(rng::splitmix64_at(seed, i) & 0xFF);
    }
    return b;
}

NoiseContext quiet(std::uint64_t seed = 0) {
    NoiseContext ctx;
    ctx.seed = seed;
    ctx.enabled = false;
    return ctx;
}

}  // namespace

TEST_CASE("charge sharing conserves charge and settles every node") {
    std::array<CapNode, 3> nodes{CapNode{100.0, 0.5}, CapNode{100.0, 0.3}, CapNode{500.0, 0.0}};
    double before = 0.0;
    for (const auto& n : nodes) before += n.capacitance_ff * n.voltage_v;

    const double v = share(nodes);
    CHECK(v == doctest::Approx(0.8 * 100.0 / 700.0).epsilon(1e-12));
    double after = 0.0;
    for (const auto& n : nodes) {
        CHECK(n.voltage_v == v);
        after += n.capacitance_ff * n.voltage_v;
    }
    CHECK(after == doctest::Approx(before).epsilon(1e-12));

    std::array<CapNode, 2> equal{CapNode{37.0, 0.25}, CapNode{11.0, 0.25}};
    CHECK(share(equal) == doctest::Approx(0.25).epsilon(1e-15));

    std::array<CapNode, 1> lone{CapNode{37.0, 0.25}};
    CHECK_THROWS_AS((void)share(lone), std::invalid_argument);
    std::array<CapNode, 2> bad{CapNode{37.0, 0.25}, CapNode{0.0, 0.1}};
    CHECK_THROWS_AS((void)share(bad), std::invalid_argument);
}

TEST_CASE("phase schedule validation") {
    PhaseSchedule ok;
    CHECK(ok.cycles_per_column == 9);
    CHECK(ok.columns == 8);
    CHECK(ok.total_block_cycles == 72);
    CHECK_NOTHROW(validate_phase_schedule(ok));

    PhaseSchedule broken = ok;
    broken.total_block_cycles = 71;
    CHECK_THROWS_AS(validate_phase_schedule(broken), ConfigError);
    PhaseSchedule negative = ok;
    negative.cycles_per_column = 0;
    CHECK_THROWS_AS(validate_phase_schedule(negative), ConfigError);
}

TEST_CASE("division cap synthesis realizes exact 1/Q ratios") {
    const QuantTable q = q50_table();
    const DivisionCaps caps = synthesize_division_caps(q);

    // Spot check Q = 16 (the DC entry): c_inter = 12 fF, c_first = 13.6 fF.
    CHECK(caps.c_out_ff(0, 0) == doctest::Approx(90.0).epsilon(1e-15));
    CHECK(caps.c_inter_ff(0, 0) == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(caps.c_first_ff(0, 0) == doctest::Approx(13.6).epsilon(1e-12));

    PipelineConfig cfg = default_pipeline_config();
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const auto [r1, r2] = divider_ratios(cfg, i, j);
            CHECK(r1 * r2 * q.q[static_cast<std::size_t>(i * 8 + j)] ==
                  doctest::Approx(1.0).epsilon(1e-12));
            CHECK(r1 > 0.0);
            CHECK(r1 < 1.0);
        }
    }

    // Q = 1 entries bypass the divider: no capacitors at all.
    QuantTable flat;
    flat.q.fill(1);
    const DivisionCaps none = synthesize_division_caps(flat);
    CHECK(none.c_first_ff(3, 3) == 0.0);
    CHECK(none.c_inter_ff(3, 3) == 0.0);
    CHECK(none.c_out_ff(3, 3) == 0.0);

    QuantTable bad;
    bad.q.fill(16);
    bad.q[5] = 0;
    CHECK_THROWS_AS((void)synthesize_division_caps(bad), ConfigError);
    CHECK_THROWS_AS((void)synthesize_division_caps(q, 0.0), ConfigError);
}

TEST_CASE("two-step divide matches the charge-sharing arithmetic") {
    // One valid realization of divide-by-16: 30 into 90, then 90 into 270.
    CHECK(two_step_divide(0.8, 30.0, 90.0, 270.0) == doctest::Approx(0.05).epsilon(1e-12));
    // The synthesized minimal realization gives the same ratio.
    CHECK(two_step_divide(0.8, 13.6, 12.0, 90.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(two_step_divide(0.37, 0.0, 0.0, 0.0) == 0.37);  // bypass
    CHECK(two_step_divide(0.0, 30.0, 90.0, 270.0) == 0.0);
}

TEST_CASE("capacitor sizing follows the c_norm rule") {
    CHECK(mul_cap_for_coefficient(0.1, 204.0) == doctest::Approx(20.4).epsilon(1e-12));
    // The largest AC coefficient lands within 0.5% of the documented 100 fF.
    const DctBasis basis = build_dct_basis();
    CHECK(mul_cap_for_coefficient(std::abs(basis.a(1, 0)), 204.0) ==
          doctest::Approx(100.0).epsilon(5e-3));
    // A 100 fF realization still hits the coefficient within 0.1%.
    CHECK(100.0 / 204.0 == doctest::Approx(std::abs(basis.a(1, 0))).epsilon(1e-3));

    const PipelineConfig cfg = default_pipeline_config();
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            CHECK(cfg.c_mul_ff(i, j) ==
                  doctest::Approx(std::abs(basis.a(i, j)) * cfg.c_norm_ff).epsilon(1e-12));
            CHECK(effective_weight(cfg, i, j) ==
                  doctest::Approx(basis.a(i, j)).epsilon(1e-12));
        }
    }
    CHECK_THROWS(mul_cap_for_coefficient(0.0, 204.0));
}

TEST_CASE("stage 1 realizes one DCT column with 9 cycles per MAC pass") {
    const PipelineConfig cfg = default_pipeline_config();
    const DctBasis basis = build_dct_basis();

    std::array<double, 8> u{};
    for (int j = 0; j < 8; ++j) {
        u[static_cast<std::size_t>(j)] =
            0.4 * rng::gaussian_at(5, static_cast<std::uint64_t>(j)) / 3.0;
    }
    NoiseContext off = quiet();
    const Stage1Result s1 = stage1_dct_column(u, cfg, off);
    CHECK(s1.cycles == 9);
    for (int i = 0; i < 8; ++i) {
        double want = 0.0;
        for (int j = 0; j < 8; ++j) want += basis.a(i, j) * u[static_cast<std::size_t>(j)];
        CHECK(s1.out_v[static_cast<std::size_t>(i)] ==
              doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(off.draw_count == 72);  // draws consumed even with noise disabled

    NoiseContext on;
    on.seed = 17;
    (void)stage1_dct_column(u, cfg, on);
    CHECK(on.draw_count == 72);
}

TEST_CASE("stage 2 multiplies by the basis transpose") {
    const PipelineConfig cfg = default_pipeline_config();
    const DctBasis basis = build_dct_basis();
    Mat8 in;
    for (std::size_t i = 0; i < 64; ++i) {
        in.m[i] = 0.1 * rng::gaussian_at(6, i) / 3.0;
    }
    NoiseContext off = quiet();
    const Mat8 out = stage2_dct(in, cfg, off);
    const Mat8 want = matmul(in, transpose(basis.a));
    CHECK(max_abs_diff(out, want) < 1e-9);
    CHECK(off.draw_count == 576);
}

TEST_CASE("full block run matches the exact DCT/quantization oracle") {
    const PipelineConfig cfg = default_pipeline_config();
    const DctBasis basis = build_dct_basis();
    const QuantTable q = q50_table();
    const double k_gain = 3.0 * delta_v(cfg);

    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const PixelBlock b = random_block(seed);
        NoiseContext off = quiet();
        const AnalogBlockResult r = run_block(b, cfg, off);

        const auto ideal = zigzag(quantize_unrounded(dct2(b, basis), q));
        double scale = 0.0;
        for (double v : ideal) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < 64; ++k) {
            const double want = k_gain * ideal[k];
            const double tol = 1e-6 * std::max(std::abs(want), k_gain * 1e-3 * scale);
            CHECK(std::abs(r.samples_v[k] - want) <= tol);
        }
    }
}

TEST_CASE("block run accounting: cycles and noise draws") {
    const PipelineConfig cfg = default_pipeline_config();
    NoiseContext on;
    on.seed = 3;
    const AnalogBlockResult r = run_block(random_block(1), cfg, on);
    CHECK(cfg.phase.total_block_cycles == 72);
    CHECK(r.cycles_used == 72 + 64 * (cfg.quant_cycles_per_coeff + cfg.mux_cycles_per_sample));
    CHECK(r.cycles_used == 264);
    CHECK(r.noise_draws == 1344);

    NoiseContext off = quiet();
    const AnalogBlockResult r2 = run_block(random_block(1), cfg, off);
    CHECK(r2.noise_draws == 1344);

    PipelineConfig broken = cfg;
    broken.phase.total_block_cycles = 70;
    NoiseContext ctx = quiet();
    CHECK_THROWS_AS((void)run_block(random_block(1), broken, ctx), ConfigError);
}

TEST_CASE("block run is linear in the input voltages when noiseless") {
    const PipelineConfig cfg = default_pipeline_config();
    Mat8 u1, u2;
    for (std::size_t i = 0; i < 64; ++i) {
        u1.m[i] = 0.05 * rng::gaussian_at(21, i);
        u2.m[i] = 0.05 * rng::gaussian_at(22, i);
    }
    Mat8 mix;
    for (std::size_t i = 0; i < 64; ++i) mix.m[i] = 1.5 * u1.m[i] - 0.75 * u2.m[i];

    NoiseContext c1 = quiet(), c2 = quiet(), c3 = quiet();
    const auto r1 = run_block_voltages(u1, cfg, c1).samples_v;
    const auto r2 = run_block_voltages(u2, cfg, c2).samples_v;
    const auto rm = run_block_voltages(mix, cfg, c3).samples_v;
    for (std::size_t k = 0; k < 64; ++k) {
        const double want = 1.5 * r1[k] - 0.75 * r2[k];
        CHECK(rm[k] == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("noisy runs are reproducible per seed") {
    const PipelineConfig cfg = default_pipeline_config();
    const PixelBlock b = random_block(9);

    NoiseContext a;
    a.seed = 1234;
    NoiseContext c;
    c.seed = 1234;
    const auto ra = run_block(b, cfg, a).samples_v;
    const auto rc = run_block(b, cfg, c).samples_v;
    for (std::size_t k = 0; k < 64; ++k) CHECK(ra[k] == rc[k]);

    NoiseContext d;
    d.seed = 1235;
    const auto rd = run_block(b, cfg, d).samples_v;
    bool any_diff = false;
    for (std::size_t k = 0; k < 64; ++k) any_diff = any_diff || rd[k] != ra[k];
    CHECK(any_diff);
}

TEST_CASE("a flat block produces a lone DC sample in zig-zag position 0") {
    const PipelineConfig cfg = default_pipeline_config();
    PixelBlock b;
    b.p.fill(200);
    NoiseContext off = quiet();
    const auto r = run_block(b, cfg, off);
    // DC: (200-128) * dv * 8 (DCT) * 3 (chain) / 16 (quantization)
    const double want = 72.0 * delta_v(cfg) * 8.0 * 3.0 / 16.0;
    CHECK(r.samples_v[0] == doctest::Approx(want).epsilon(1e-9));
    for (std::size_t k = 1; k < 64; ++k) {
        CHECK(std::abs(r.samples_v[k]) < 1e-12);
    }
}

TEST_CASE("scalar chain gain summarizes the per-coefficient transfer") {
    const PipelineConfig cfg = default_pipeline_config();
    CHECK(chain_gain(cfg) == doctest::Approx(3.0).epsilon(1e-15));
    const QuantTable q = q50_table();
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const double want = 3.0 * delta_v(cfg) / q.q[static_cast<std::size_t>(i * 8 + j)];
            CHECK(scalar_chain_gain(cfg, i, j) == doctest::Approx(want).epsilon(1e-12));
        }
    }

    // With a gain error the chain gain picks up (1+e)^2.
    PipelineConfig off = cfg;
    off.gain_error = 0.01;
    CHECK(chain_gain(off) == doctest::Approx(3.0 * 1.01 * 1.01).epsilon(1e-12));
}
