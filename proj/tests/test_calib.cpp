#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "dajc/calib.hpp"
#include "dajc/nonideal.hpp"

using namespace dajc;

namespace {

const std::string kTmp = DAJC_TEST_TMP;

PipelineFn make_pipeline(const PipelineConfig& chip, bool noise_enabled, std::uint64_t seed) {
    return [chip, noise_enabled, seed](const PixelBlock& frame, std::uint64_t key) {
        NoiseContext ctx;
        ctx.seed = rng::splitmix64_at(seed, key);
        ctx.enabled = noise_enabled;
        return run_block(frame, chip, ctx).samples_v;
    };
}

}  // namespace

TEST_CASE("impulse frames cover each pixel exactly once") {
    const PixelBlock first = impulse_frame(0);
    CHECK(first.p[0] == 255);
    for (std::size_t i = 1; i < 64; ++i) CHECK(first.p[i] == 0);

    std::array<int, 64> sum{};
    for (int p = 0; p < 64; ++p) {
        const PixelBlock f = impulse_frame(p);
        for (std::size_t i = 0; i < 64; ++i) sum[i] += f.p[i];
    }
    for (std::size_t i = 0; i < 64; ++i) CHECK(sum[i] == 255);

    CHECK_THROWS_AS((void)impulse_frame(-1), std::out_of_range);
    CHECK_THROWS_AS((void)impulse_frame(64), std::out_of_range);
}

TEST_CASE("characterization of the nominal chip recovers the design gains") {
    const PipelineConfig chip = default_pipeline_config();
    const GainEstimate est = characterize(make_pipeline(chip, false, 1), 1);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            CHECK(est.gain.g(i, j) ==
                  doctest::Approx(scalar_chain_gain(chip, i, j)).epsilon(1e-6));
        }
    }
    CHECK(est.max_cross_talk < 1e-9);

    // Noiseless characterization is idempotent.
    const GainEstimate again = characterize(make_pipeline(chip, false, 1), 1);
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(est.gain.g.m[i] == doctest::Approx(again.gain.g.m[i]).epsilon(1e-12));
    }
}

TEST_CASE("characterization tracks a fully mismatched chip within tolerance") {
    PipelineConfig chip = perturb_caps(default_pipeline_config(), MismatchModel{0.05, 404, false});
    chip = apply_parasitics(chip, ParasiticModel{1.0});
    const GainEstimate est = characterize(make_pipeline(chip, false, 2), 1);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const double want = scalar_chain_gain(chip, i, j);
            CHECK(est.gain.g(i, j) == doctest::Approx(want).epsilon(0.01));
        }
    }
    // Mismatch perturbs the gains well away from nominal, so the fit is doing
    // real work here.
    const PipelineConfig nominal = default_pipeline_config();
    double max_shift = 0.0;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            max_shift = std::max(max_shift, std::abs(est.gain.g(i, j) /
                                                         scalar_chain_gain(nominal, i, j) -
                                                     1.0));
        }
    }
    CHECK(max_shift > 0.02);
}

TEST_CASE("noise averaging shrinks the estimate variance like 1/N") {
    const PipelineConfig chip = default_pipeline_config();
    const int reps = 24;

    auto pooled_error = [&](int n, std::uint64_t seed_base) {
        double sum2 = 0.0;
        for (int r = 0; r < reps; ++r) {
            const GainEstimate est =
                characterize(make_pipeline(chip, true, seed_base + static_cast<std::uint64_t>(r)),
                             n);
            for (int i = 0; i < 8; ++i) {
                for (int j = 0; j < 8; ++j) {
                    const double rel =
                        est.gain.g(i, j) / scalar_chain_gain(chip, i, j) - 1.0;
                    sum2 += rel * rel;
                }
            }
        }
        return sum2 / static_cast<double>(reps * 64);
    };

    const double var1 = pooled_error(1, 9000);
    const double var16 = pooled_error(16, 9500);
    CHECK(var1 > 0.0);
    CHECK(var16 > 0.0);
    const double shrink = var1 / var16;
    CHECK(shrink > 6.0);
    CHECK(shrink < 40.0);
}

TEST_CASE("inverse-Q construction and the ideal fallback") {
    const PipelineConfig chip = default_pipeline_config();
    const GainEstimate est = characterize(make_pipeline(chip, false, 3), 1);
    const InverseQTable inv = build_inverse_q(est.gain);
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(inv.q_inv.m[i] * est.gain.g.m[i] == doctest::Approx(1.0).epsilon(1e-12));
    }

    const InverseQTable ideal = ideal_inverse_q(q50_table(), 0.1, 0.9);
    // Q(0,0) = 16 against chain gain 3 * delta_v: 16 * 255 / 2.4 = 1700.
    CHECK(ideal.q_inv(0, 0) == doctest::Approx(1700.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(ideal.q_inv.m[i] ==
              doctest::Approx(q50_table().q[i] * 255.0 / 2.4).epsilon(1e-12));
    }

    // For the nominal chip both tables agree.
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(inv.q_inv.m[i] == doctest::Approx(ideal.q_inv.m[i]).epsilon(1e-6));
    }

    GainMatrix degenerate;
    CHECK_THROWS_AS((void)build_inverse_q(degenerate), CalibrationError);
}

TEST_CASE("degenerate pipelines are rejected") {
    PipelineFn dead = [](const PixelBlock&, std::uint64_t) {
        return std::array<double, 64>{};
    };
    CHECK_THROWS_AS((void)characterize(dead, 1), CalibrationError);
    CHECK_THROWS_AS((void)characterize(make_pipeline(default_pipeline_config(), false, 4), 0),
                    std::invalid_argument);
}

TEST_CASE("calibration wrapper produces a consistent result bundle") {
    const PipelineConfig chip =
        perturb_caps(default_pipeline_config(), MismatchModel{0.03, 777, false});
    const CalibrationResult res = run_calibration(chip, 2, 4242, true, 300.0, "cafe0123");
    CHECK(res.seed == 4242);
    CHECK(res.noise_averaging == 2);
    CHECK(res.config_hash == "cafe0123");
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(res.q_inv.q_inv.m[i] * res.gain.g.m[i] == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Reproducible for the same seed, different for another.
    const CalibrationResult res2 = run_calibration(chip, 2, 4242, true, 300.0, "cafe0123");
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(res.gain.g.m[i] == res2.gain.g.m[i]);
    }
    const CalibrationResult res3 = run_calibration(chip, 2, 4243, true);
    bool any_diff = false;
    for (std::size_t i = 0; i < 64; ++i) {
        any_diff = any_diff || res3.gain.g.m[i] != res.gain.g.m[i];
    }
    CHECK(any_diff);
}

TEST_CASE("calibration files round trip exactly") {
    const PipelineConfig chip = default_pipeline_config();
    CalibrationResult res = run_calibration(chip, 2, 31337, true, 300.0, "deadbeef01234567");

    const std::string path = kTmp + "/calib_roundtrip.json";
    save_calibration(res, path);
    const CalibrationResult back = load_calibration(path);
    CHECK(back.seed == res.seed);
    CHECK(back.noise_averaging == res.noise_averaging);
    CHECK(back.config_hash == res.config_hash);
    CHECK(back.max_cross_talk == doctest::Approx(res.max_cross_talk).epsilon(1e-12));
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(back.q_inv.q_inv.m[i] == res.q_inv.q_inv.m[i]);
        CHECK(back.gain.g.m[i] == res.gain.g.m[i]);
    }

    CHECK_THROWS_AS((void)load_calibration(kTmp + "/does_not_exist.json"), IoError);

    const std::string junk_path = kTmp + "/calib_junk.json";
    {
        std::ofstream out(junk_path);
        out << "{\"format\": \"something-else\"}";
    }
    CHECK_THROWS_AS((void)load_calibration(junk_path), FormatError);

    const std::string trunc_path = kTmp + "/calib_trunc.json";
    {
        std::ofstream out(trunc_path);
        out << "{\"format\": \"dajc-calibration\", \"version\": 1";
    }
    CHECK_THROWS_AS((void)load_calibration(trunc_path), FormatError);
}
