// Python bindings for the analog MJPEG codec simulator. The module mirrors
// the C++ API at the operation level: exact JPEG math, the behavioral analog
// block pipeline, frame encode/decode, calibration, and the noise/power
// analytics. 8x8 matrices cross the boundary as (8, 8) float64 arrays and
// images as (h, w) uint8 arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "dajc/calib.hpp"
#include "dajc/config_io.hpp"
#include "dajc/jpeg_core.hpp"
#include "dajc/stream.hpp"

namespace py = pybind11;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

dajc::Mat8 to_mat8(const DoubleArray& arr) {
    if (arr.ndim() != 2 || arr.shape(0) != 8 || arr.shape(1) != 8) {
        throw py::value_error("expected an (8, 8) array");
    }
    dajc::Mat8 m;
    std::memcpy(m.m.data(), arr.data(), 64 * sizeof(double));
    return m;
}

py::array_t<double> from_mat8(const dajc::Mat8& m) {
    py::array_t<double> arr({8, 8});
    std::memcpy(arr.mutable_data(), m.m.data(), 64 * sizeof(double));
    return arr;
}

dajc::PixelBlock to_block(const ByteArray& arr) {
    if (arr.ndim() != 2 || arr.shape(0) != 8 || arr.shape(1) != 8) {
        throw py::value_error("expected an (8, 8) uint8 array");
    }
    dajc::PixelBlock b;
    std::memcpy(b.p.data(), arr.data(), 64);
    return b;
}

dajc::GrayImage to_image(const ByteArray& arr) {
    if (arr.ndim() != 2) {
        throw py::value_error("expected an (h, w) uint8 array");
    }
    dajc::GrayImage img;
    img.height = static_cast<int>(arr.shape(0));
    img.width = static_cast<int>(arr.shape(1));
    img.pixels.assign(arr.data(), arr.data() + arr.size());
    return img;
}

py::array_t<std::uint8_t> from_image(const dajc::GrayImage& img) {
    py::array_t<std::uint8_t> arr({img.height, img.width});
    std::memcpy(arr.mutable_data(), img.pixels.data(), img.pixels.size());
    return arr;
}

dajc::QuantTable to_quant(const std::optional<DoubleArray>& arr) {
    if (!arr) {
        return dajc::q50_table();
    }
    const dajc::Mat8 m = to_mat8(*arr);
    dajc::QuantTable q;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            q(i, j) = static_cast<int>(m(i, j));
        }
    }
    return q;
}

dajc::RunConfig config_from(const std::optional<std::string>& config_json) {
    return config_json ? dajc::parse_run_config(*config_json) : dajc::default_run_config();
}

}  // namespace

PYBIND11_MODULE(_dajc, m) {
    m.doc() = "Behavioral simulator and codec for an analog-domain MJPEG encoder";
    m.attr("__version__") = "1.0.0";

    // --- exact JPEG math -------------------------------------------------
    m.def("dct_basis", [] { return from_mat8(dajc::build_dct_basis().a); },
          "Orthonormal 8-point DCT-II basis matrix");

    m.def("dct2",
          [](const ByteArray& pixels) {
              return from_mat8(dajc::dct2(to_block(pixels), dajc::build_dct_basis()));
          },
          py::arg("pixels"), "Forward 2-D DCT of an (8, 8) uint8 block (level shift -128)");

    m.def("idct2",
          [](const DoubleArray& coeffs) {
              return from_mat8(dajc::idct2(to_mat8(coeffs), dajc::build_dct_basis()));
          },
          py::arg("coeffs"), "Inverse 2-D DCT (adds the +128 level shift back)");

    m.def("q50", [] {
        const dajc::QuantTable& q = dajc::q50_table();
        dajc::Mat8 m8;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) m8(i, j) = q(i, j);
        return from_mat8(m8);
    }, "The standard quality-50 luminance quantization table");

    m.def("quantize",
          [](const DoubleArray& coeffs, const std::optional<DoubleArray>& q) {
              return from_mat8(dajc::quantize(to_mat8(coeffs), to_quant(q)));
          },
          py::arg("coeffs"), py::arg("q") = std::nullopt,
          "Element-wise Y/Q rounded half away from zero (Q defaults to the Q50 table)");

    m.def("dequantize",
          [](const DoubleArray& quantized, const std::optional<DoubleArray>& q) {
              return from_mat8(dajc::dequantize(to_mat8(quantized), to_quant(q)));
          },
          py::arg("quantized"), py::arg("q") = std::nullopt, "Element-wise Yq * Q");

    m.def("zigzag_order", [] {
        const auto& order = dajc::zigzag_order();
        return std::vector<int>(order.begin(), order.end());
    }, "Linear indices of the zig-zag scan");

    m.def("zigzag",
          [](const DoubleArray& block) {
              const auto scanned = dajc::zigzag(to_mat8(block));
              return std::vector<double>(scanned.begin(), scanned.end());
          },
          py::arg("block"), "Scan an (8, 8) block into 64 zig-zag-ordered values");

    m.def("inverse_zigzag",
          [](const std::vector<double>& scanned) {
              if (scanned.size() != 64) {
                  throw py::value_error("expected 64 values");
              }
              std::array<double, 64> a{};
              std::copy(scanned.begin(), scanned.end(), a.begin());
              return from_mat8(dajc::inverse_zigzag(a));
          },
          py::arg("scanned"), "Reassemble an (8, 8) block from a zig-zag scan");

    // --- quality metrics -------------------------------------------------
    m.def("psnr",
          [](const ByteArray& a, const ByteArray& b) {
              return dajc::psnr(to_image(a), to_image(b));
          },
          py::arg("a"), py::arg("b"), "PSNR in dB (+inf for identical images)");

    m.def("ssim",
          [](const ByteArray& a, const ByteArray& b) {
              return dajc::ssim(to_image(a), to_image(b));
          },
          py::arg("a"), py::arg("b"), "Mean SSIM over 8x8 windows");

    m.def("quality_report",
          [](const ByteArray& a, const ByteArray& b) {
              const dajc::QualityReport q = dajc::quality_report(to_image(a), to_image(b));
              py::dict d;
              d["mse"] = q.mse;
              d["psnr_db"] = q.psnr_db;
              d["ssim"] = q.ssim;
              return d;
          },
          py::arg("a"), py::arg("b"));

    // --- analog block pipeline -------------------------------------------
    m.def("run_block",
          [](const ByteArray& pixels, std::uint64_t seed, bool noise, double temperature_k,
             const std::optional<std::string>& config_json) {
              const dajc::RunConfig rc = config_from(config_json);
              const dajc::PipelineConfig chip = dajc::build_chip(rc);
              dajc::NoiseContext ctx;
              ctx.seed = seed;
              ctx.enabled = noise;
              ctx.temperature_k = temperature_k;
              const dajc::AnalogBlockResult r = dajc::run_block(to_block(pixels), chip, ctx);
              py::dict d;
              d["samples_v"] = std::vector<double>(r.samples_v.begin(), r.samples_v.end());
              d["cycles_used"] = r.cycles_used;
              d["noise_draws"] = r.noise_draws;
              return d;
          },
          py::arg("pixels"), py::arg("seed") = 0, py::arg("noise") = true,
          py::arg("temperature_k") = 300.0, py::arg("config_json") = std::nullopt,
          "Simulate one 8x8 block through the analog pipeline; returns the 64 ADC "
          "input voltages in zig-zag order plus cycle and noise-draw counts");

    // --- frame codec -------------------------------------------------------
    m.def("encode",
          [](const ByteArray& image, double thresh_mv, std::uint64_t seed, bool noise,
             double temperature_k, const std::optional<std::string>& config_json) {
              dajc::RunConfig rc = config_from(config_json);
              rc.v_thresh_v = thresh_mv / 1000.0;
              rc.noise_enabled = noise;
              rc.temperature_k = temperature_k;
              const dajc::PipelineConfig chip = dajc::build_chip(rc);
              dajc::EncodeOptions opt;
              opt.v_thresh_v = rc.v_thresh_v;
              opt.seed = seed;
              opt.noise_enabled = rc.noise_enabled;
              opt.temperature_k = rc.temperature_k;
              const dajc::FrameEncodeResult r =
                  dajc::encode_frame(to_image(image), chip, rc.adc, opt);
              py::dict stats;
              stats["token_count"] = r.token_count;
              stats["compression_ratio"] = r.compression_ratio;
              stats["significant_fraction"] = r.energy.significant_fraction;
              stats["adc_energy_j"] = r.energy.adc_energy_j;
              stats["baseline_energy_j"] = r.energy.baseline_energy_j;
              stats["energy_ratio"] = dajc::energy_ratio(r.energy);
              stats["analog_cycles"] = r.analog_cycles;
              return py::make_tuple(
                  py::bytes(reinterpret_cast<const char*>(r.bytes.data()), r.bytes.size()),
                  stats);
          },
          py::arg("image"), py::arg("thresh_mv") = 5.0, py::arg("seed") = 0,
          py::arg("noise") = true, py::arg("temperature_k") = 300.0,
          py::arg("config_json") = std::nullopt,
          "Encode an (h, w) uint8 image; returns (stream_bytes, stats_dict)");

    m.def("decode",
          [](const py::bytes& stream, const std::optional<DoubleArray>& q_inv) {
              const std::string_view view = stream;
              const auto* data = reinterpret_cast<const std::uint8_t*>(view.data());
              const std::span<const std::uint8_t> bytes(data, view.size());
              if (q_inv) {
                  dajc::InverseQTable table{to_mat8(*q_inv)};
                  return from_image(dajc::decode_frame(bytes, &table));
              }
              return from_image(dajc::decode_frame(bytes));
          },
          py::arg("stream"), py::arg("q_inv") = std::nullopt,
          "Decode a stream back to an (h, w) uint8 image, optionally with a "
          "calibrated inverse-Q table");

    // --- calibration -------------------------------------------------------
    m.def("calibrate",
          [](double mismatch_sigma, std::uint64_t mismatch_seed, double parasitic_ff,
             int reps, std::uint64_t seed, bool noise) {
              dajc::RunConfig rc = dajc::default_run_config();
              rc.mismatch.sigma_rel = mismatch_sigma;
              rc.mismatch.seed = mismatch_seed;
              rc.parasitics.c_parasitic_ff = parasitic_ff;
              const dajc::PipelineConfig chip = dajc::build_chip(rc);
              const dajc::CalibrationResult r = dajc::run_calibration(
                  chip, reps, seed, noise, rc.temperature_k, dajc::config_hash(rc));
              py::dict d;
              d["q_inv"] = from_mat8(r.q_inv.q_inv);
              d["gain"] = from_mat8(r.gain.g);
              d["max_cross_talk"] = r.max_cross_talk;
              return d;
          },
          py::arg("mismatch_sigma") = 0.0, py::arg("mismatch_seed") = 0,
          py::arg("parasitic_ff") = 0.0, py::arg("reps") = 16, py::arg("seed") = 1,
          py::arg("noise") = true,
          "Characterize a (possibly mismatched) chip and fit the corrected "
          "inverse-Q table");

    m.def("ideal_inverse_q", [] {
        const dajc::RunConfig rc = dajc::default_run_config();
        return from_mat8(
            dajc::ideal_inverse_q(dajc::q50_table(), rc.pipeline.v_min, rc.pipeline.v_max)
                .q_inv);
    }, "The uncalibrated decoder table from architecture constants alone");

    // --- analytics ---------------------------------------------------------
    m.def("input_referred_noise",
          [](const std::optional<std::string>& config_json) {
              return dajc::input_referred_noise(dajc::build_chip(config_from(config_json)));
          },
          py::arg("config_json") = std::nullopt,
          "Analytic input-referred acquisition noise (volts rms)");

    m.def("comm_power", &dajc::comm_power, py::arg("bit_rate_bps"),
          py::arg("energy_per_bit_j"), "Transmit power = bit rate x energy per bit");

    // Error taxonomy maps onto Python exceptions.
    py::register_exception<dajc::IoError>(m, "IoError");
    py::register_exception<dajc::FormatError>(m, "FormatError");
    py::register_exception<dajc::ConfigError>(m, "ConfigError");
    py::register_exception<dajc::CalibrationError>(m, "CalibrationError");
}
