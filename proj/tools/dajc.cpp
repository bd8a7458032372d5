// dajc — analog-domain MJPEG codec simulator front end.
//
// Subcommands: encode, decode, calibrate, sweep. Every command is
// deterministic for a fixed --seed and writes a JSON manifest alongside its
// primary output. Exit codes: 0 success, 1 I/O, 2 format, 3 config.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dajc/calib.hpp"
#include "dajc/config_io.hpp"
#include "dajc/jpeg_core.hpp"
#include "dajc/stream.hpp"
#include "dajc/svg_plot.hpp"

namespace {

using nlohmann::json;

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw dajc::IoError("cannot open input file: " + path);
    }
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

void write_binary(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw dajc::IoError("cannot open output file for writing: " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw dajc::IoError("failed writing output file: " + path);
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw dajc::IoError("cannot open output file for writing: " + path);
    }
    out << text;
    if (!out) {
        throw dajc::IoError("failed writing output file: " + path);
    }
}

void write_manifest(const std::string& primary_output, const std::string& command,
                    const std::string& config_path, const std::string& config_hash,
                    const std::vector<std::pair<std::string, std::uint64_t>>& seeds,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["config"] = config_path.empty() ? "(defaults)" : config_path;
    m["config_hash"] = config_hash;
    json s = json::object();
    for (const auto& [name, value] : seeds) {
        s[name] = std::to_string(value);  // decimal string: JSON-safe 64-bit
    }
    m["seeds"] = s;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    const std::filesystem::path dir = std::filesystem::absolute(primary_output).parent_path();
    m["output_dir"] = dir.string();
    m["timestamp"] = iso8601_now();
    write_text(primary_output + ".manifest.json", m.dump(2) + "\n");
}

dajc::RunConfig load_config_or_default(const std::string& path) {
    return path.empty() ? dajc::default_run_config() : dajc::load_run_config(path);
}

dajc::EncodeOptions options_from(const dajc::RunConfig& rc, std::uint64_t seed,
                                 bool calibrated) {
    dajc::EncodeOptions opt;
    opt.v_thresh_v = rc.v_thresh_v;
    opt.seed = seed;
    opt.noise_enabled = rc.noise_enabled;
    opt.temperature_k = rc.temperature_k;
    opt.calibrated = calibrated;
    return opt;
}

void print_energy_summary(const dajc::FrameEncodeResult& r, int blocks) {
    std::printf("blocks:               %d\n", blocks);
    std::printf("tokens:               %lld\n", static_cast<long long>(r.token_count));
    std::printf("stream bytes:         %zu\n", r.bytes.size());
    std::printf("compression ratio:    %.2f\n", r.compression_ratio);
    std::printf("significant fraction: %.4f (%lld / %lld samples)\n",
                r.energy.significant_fraction, static_cast<long long>(r.energy.conversions),
                static_cast<long long>(r.energy.total_samples));
    std::printf("adc energy:           %.4e J\n", r.energy.adc_energy_j);
    std::printf("baseline energy:      %.4e J\n", r.energy.baseline_energy_j);
    std::printf("energy ratio:         %.2f\n", dajc::energy_ratio(r.energy));
    std::printf("analog cycles:        %lld\n", static_cast<long long>(r.analog_cycles));
}

// ---------------------------------------------------------------- encode ---

struct EncodeArgs {
    std::string input;
    std::string output;
    std::string config_path;
    std::string calib_path;
    double thresh_mv = -1.0;  // <0: take from config
    std::uint64_t seed = 0;
    bool no_noise = false;
};

int cmd_encode(const EncodeArgs& a) {
    dajc::RunConfig rc = load_config_or_default(a.config_path);
    if (a.thresh_mv >= 0.0) {
        rc.v_thresh_v = a.thresh_mv / 1000.0;
    }
    if (a.no_noise) {
        rc.noise_enabled = false;
    }
    if (!a.calib_path.empty()) {
        (void)dajc::load_calibration(a.calib_path);  // validate; marks the stream only
    }

    const dajc::Frame frame = dajc::load_pgm(a.input);
    const dajc::PipelineConfig chip = dajc::build_chip(rc);
    const dajc::FrameEncodeResult r = dajc::encode_frame(
        frame, chip, rc.adc, options_from(rc, a.seed, !a.calib_path.empty()));

    write_binary(a.output, r.bytes);
    const int blocks = ((frame.width + 7) / 8) * ((frame.height + 7) / 8);
    print_energy_summary(r, blocks);

    std::vector<std::string> inputs{a.input};
    if (!a.calib_path.empty()) inputs.push_back(a.calib_path);
    write_manifest(a.output, "encode", a.config_path, dajc::config_hash(rc),
                   {{"seed", a.seed}, {"mismatch_seed", rc.mismatch.seed}}, inputs,
                   {a.output});
    return 0;
}

// ---------------------------------------------------------------- decode ---

struct DecodeArgs {
    std::string input;
    std::string output;
    std::string calib_path;
    std::string ref_path;
    std::string csv_path;
};

int cmd_decode(const DecodeArgs& a) {
    const std::vector<std::uint8_t> bytes = read_binary(a.input);

    dajc::Frame frame;
    if (!a.calib_path.empty()) {
        const dajc::CalibrationResult calib = dajc::load_calibration(a.calib_path);
        frame = dajc::decode_frame(bytes, &calib.q_inv);
    } else {
        frame = dajc::decode_frame(bytes);
    }
    dajc::save_pgm(frame, a.output);
    std::printf("decoded %dx%d frame\n", frame.width, frame.height);

    std::vector<std::string> outputs{a.output};
    if (!a.ref_path.empty()) {
        const dajc::Frame ref = dajc::load_pgm(a.ref_path);
        const dajc::QualityReport q = dajc::quality_report(ref, frame);
        std::printf("psnr: %.2f dB  ssim: %.4f  mse: %.3f\n", q.psnr_db, q.ssim, q.mse);
        if (!a.csv_path.empty()) {
            char row[256];
            std::snprintf(row, sizeof(row), "input,reference,psnr_db,ssim,mse\n%s,%s,%.6f,%.6f,%.6f\n",
                          a.input.c_str(), a.ref_path.c_str(), q.psnr_db, q.ssim, q.mse);
            write_text(a.csv_path, row);
            outputs.push_back(a.csv_path);
        }
    }

    std::vector<std::string> inputs{a.input};
    if (!a.calib_path.empty()) inputs.push_back(a.calib_path);
    if (!a.ref_path.empty()) inputs.push_back(a.ref_path);
    write_manifest(a.output, "decode", "", "", {}, inputs, outputs);
    return 0;
}

// ------------------------------------------------------------- calibrate ---

struct CalibrateArgs {
    std::string output;
    std::string config_path;
    std::string corpus_dir;
    double mismatch_sigma = -1.0;  // <0: take from config
    std::uint64_t mismatch_seed = 0;
    bool mismatch_seed_set = false;
    double parasitic_ff = -1.0;  // <0: take from config
    std::uint64_t seed = 1;
    int reps = 16;
    bool no_noise = false;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_calibrate(const CalibrateArgs& a) {
    dajc::RunConfig rc = load_config_or_default(a.config_path);
    if (a.mismatch_sigma >= 0.0) rc.mismatch.sigma_rel = a.mismatch_sigma;
    if (a.mismatch_seed_set) rc.mismatch.seed = a.mismatch_seed;
    if (a.parasitic_ff >= 0.0) rc.parasitics.c_parasitic_ff = a.parasitic_ff;
    if (a.no_noise) rc.noise_enabled = false;

    const dajc::PipelineConfig chip = dajc::build_chip(rc);
    const dajc::CalibrationResult result = dajc::run_calibration(
        chip, a.reps, a.seed, rc.noise_enabled, rc.temperature_k, dajc::config_hash(rc));
    dajc::save_calibration(result, a.output);
    std::printf("calibrated %d-rep gain table (seed %llu, config %s)\n", a.reps,
                static_cast<unsigned long long>(a.seed), dajc::config_hash(rc).c_str());
    std::printf("max cross-talk residual: %.3e\n", result.max_cross_talk);

    std::vector<std::string> inputs;
    if (!a.corpus_dir.empty()) {
        // Before/after report: decode corpus streams from this chip with the
        // ideal table vs the calibrated one.
        std::vector<std::string> images;
        for (const auto& entry : std::filesystem::directory_iterator(a.corpus_dir)) {
            if (entry.path().extension() == ".pgm") {
                images.push_back(entry.path().string());
            }
        }
        std::sort(images.begin(), images.end());
        if (images.empty()) {
            throw dajc::IoError("no .pgm images found in corpus dir: " + a.corpus_dir);
        }

        std::vector<double> before, after;
        for (std::size_t i = 0; i < images.size(); ++i) {
            const dajc::Frame img = dajc::load_pgm(images[i]);
            const dajc::FrameEncodeResult enc = dajc::encode_frame(
                img, chip, rc.adc,
                options_from(rc, a.seed + 1000 + static_cast<std::uint64_t>(i), true));
            const dajc::Frame ideal = dajc::decode_frame(enc.bytes);
            const dajc::Frame fixed = dajc::decode_frame(enc.bytes, &result.q_inv);
            before.push_back(dajc::psnr(img, ideal));
            after.push_back(dajc::psnr(img, fixed));
            std::printf("%-28s before %6.2f dB   after %6.2f dB\n", images[i].c_str(),
                        before.back(), after.back());
        }
        const double mb = median(before);
        const double ma = median(after);
        std::printf("median psnr before: %.2f dB  after: %.2f dB  delta: %+.2f dB\n", mb, ma,
                    ma - mb);
        inputs = images;
    }

    write_manifest(a.output, "calibrate", a.config_path, dajc::config_hash(rc),
                   {{"seed", a.seed}, {"mismatch_seed", rc.mismatch.seed}}, inputs,
                   {a.output});
    return 0;
}

// ----------------------------------------------------------------- sweep ---

struct SweepArgs {
    std::string input;
    std::string output;
    std::string svg_path;
    std::string config_path;
    std::string kind = "thresh";
    std::uint64_t seed = 0;
};

dajc::Frame center_crop(const dajc::Frame& f, int size) {
    dajc::Frame out = dajc::make_image(size, size);
    const int x0 = (f.width - size) / 2;
    const int y0 = (f.height - size) / 2;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            out.at(x, y) = f.at(x0 + x, y0 + y);
        }
    }
    return out;
}

int cmd_sweep(const SweepArgs& a) {
    dajc::RunConfig rc = load_config_or_default(a.config_path);
    const dajc::Frame frame = dajc::load_pgm(a.input);
    const dajc::PipelineConfig chip = dajc::build_chip(rc);

    std::string csv;
    dajc::PlotSpec plot;

    if (a.kind == "thresh") {
        csv = "threshold_mv,significant_fraction,energy_ratio,compression_ratio,psnr_db\n";
        dajc::PlotSeries frac{"significant fraction", {}};
        dajc::PlotSeries quality{"psnr / 100 dB", {}};
        for (int mv = 0; mv <= 12; ++mv) {
            dajc::RunConfig point = rc;
            point.v_thresh_v = mv / 1000.0;
            const dajc::FrameEncodeResult enc = dajc::encode_frame(
                frame, chip, point.adc, options_from(point, a.seed, false));
            const double p = dajc::psnr(frame, dajc::decode_frame(enc.bytes));
            char row[160];
            std::snprintf(row, sizeof(row), "%d,%.6f,%.4f,%.4f,%.4f\n", mv,
                          enc.energy.significant_fraction, dajc::energy_ratio(enc.energy),
                          enc.compression_ratio, p);
            csv += row;
            frac.points.emplace_back(mv, enc.energy.significant_fraction);
            quality.points.emplace_back(mv, p / 100.0);
        }
        plot = {"Significance vs threshold", "threshold (mV)", "fraction / scaled PSNR",
                {frac, quality}};
    } else if (a.kind == "framesize") {
        csv = "size,blocks,total_samples,significant_fraction,adc_energy_j,"
              "baseline_energy_j,baseline_per_sample_j,energy_ratio\n";
        dajc::PlotSeries adc{"adc energy (pJ)", {}};
        dajc::PlotSeries base{"baseline energy (pJ)", {}};
        for (int size : {16, 32, 48, 64, 96, 128}) {
            if (size > frame.width || size > frame.height) {
                continue;
            }
            const dajc::Frame crop = center_crop(frame, size);
            const dajc::FrameEncodeResult enc =
                dajc::encode_frame(crop, chip, rc.adc, options_from(rc, a.seed, false));
            const int blocks = (size / 8) * (size / 8);
            char row[224];
            std::snprintf(row, sizeof(row), "%d,%d,%lld,%.6f,%.6e,%.6e,%.6e,%.4f\n", size,
                          blocks, static_cast<long long>(enc.energy.total_samples),
                          enc.energy.significant_fraction, enc.energy.adc_energy_j,
                          enc.energy.baseline_energy_j,
                          enc.energy.baseline_energy_j /
                              static_cast<double>(enc.energy.total_samples),
                          dajc::energy_ratio(enc.energy));
            csv += row;
            adc.points.emplace_back(size, enc.energy.adc_energy_j * 1e12);
            base.points.emplace_back(size, enc.energy.baseline_energy_j * 1e12);
        }
        plot = {"ADC energy vs frame size", "frame size (px)", "energy (pJ)", {adc, base}};
    } else if (a.kind == "noise") {
        csv = "temperature_k,psnr_db,significant_fraction\n";
        dajc::PlotSeries quality{"psnr (dB)", {}};
        for (double tk : {150.0, 250.0, 300.0, 350.0, 450.0}) {
            dajc::RunConfig point = rc;
            point.temperature_k = tk;
            point.noise_enabled = true;
            const dajc::FrameEncodeResult enc = dajc::encode_frame(
                frame, chip, point.adc, options_from(point, a.seed, false));
            const double p = dajc::psnr(frame, dajc::decode_frame(enc.bytes));
            char row[96];
            std::snprintf(row, sizeof(row), "%.1f,%.4f,%.6f\n", tk, p,
                          enc.energy.significant_fraction);
            csv += row;
            quality.points.emplace_back(tk, p);
        }
        plot = {"Decoded quality vs temperature", "temperature (K)", "PSNR (dB)", {quality}};
    } else {
        throw dajc::ConfigError("unknown sweep kind: " + a.kind +
                                " (expected thresh|framesize|noise)");
    }

    write_text(a.output, csv);
    std::printf("%s", csv.c_str());
    std::vector<std::string> outputs{a.output};
    if (!a.svg_path.empty()) {
        dajc::write_svg_plot(plot, a.svg_path);
        outputs.push_back(a.svg_path);
    }
    write_manifest(a.output, "sweep " + a.kind, a.config_path, dajc::config_hash(rc),
                   {{"seed", a.seed}}, {a.input}, outputs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dajc: analog-domain MJPEG codec simulator"};
    app.require_subcommand(1);

    EncodeArgs enc;
    CLI::App* enc_cmd = app.add_subcommand("encode", "Encode a PGM image to a .dajc stream");
    enc_cmd->add_option("input", enc.input, "input PGM (P5) image")->required();
    enc_cmd->add_option("-o,--output", enc.output, "output .dajc stream")->required();
    enc_cmd->add_option("--config", enc.config_path, "JSON run configuration");
    enc_cmd->add_option("--thresh-mv", enc.thresh_mv,
                        "significance threshold in mV (overrides config)");
    enc_cmd->add_option("--seed", enc.seed, "noise seed");
    enc_cmd->add_option("--calib", enc.calib_path,
                        "calibration file; marks the stream for calibrated decode");
    enc_cmd->add_flag("--no-noise", enc.no_noise, "disable kT/C noise injection");

    DecodeArgs dec;
    CLI::App* dec_cmd = app.add_subcommand("decode", "Decode a .dajc stream to a PGM image");
    dec_cmd->add_option("input", dec.input, "input .dajc stream")->required();
    dec_cmd->add_option("-o,--output", dec.output, "output PGM image")->required();
    dec_cmd->add_option("--calib", dec.calib_path, "calibration file (corrected inverse-Q)");
    dec_cmd->add_option("--ref", dec.ref_path, "reference image for a quality report");
    dec_cmd->add_option("--csv", dec.csv_path, "write the quality report as CSV");

    CalibrateArgs cal;
    CLI::App* cal_cmd =
        app.add_subcommand("calibrate", "Characterize a chip and fit the inverse-Q table");
    cal_cmd->add_option("-o,--output", cal.output, "output calibration JSON")->required();
    cal_cmd->add_option("--config", cal.config_path, "JSON run configuration");
    cal_cmd->add_option("--mismatch-sigma", cal.mismatch_sigma,
                        "capacitor mismatch sigma (overrides config)");
    CLI::Option* mismatch_seed_opt =
        cal_cmd->add_option("--mismatch-seed", cal.mismatch_seed, "mismatch realization seed");
    cal_cmd->add_option("--parasitic-ff", cal.parasitic_ff,
                        "per-node parasitic in fF (overrides config)");
    cal_cmd->add_option("--seed", cal.seed, "calibration noise seed");
    cal_cmd->add_option("-N,--reps", cal.reps, "noise-averaging repetitions")
        ->check(CLI::Range(1, 10000));
    cal_cmd->add_flag("--no-noise", cal.no_noise, "disable kT/C noise during calibration");
    cal_cmd->add_option("--corpus", cal.corpus_dir,
                        "directory of .pgm images for a before/after PSNR report");

    SweepArgs swp;
    CLI::App* swp_cmd = app.add_subcommand("sweep", "Parameter sweeps with CSV + SVG reports");
    swp_cmd->add_option("input", swp.input, "input PGM image")->required();
    swp_cmd->add_option("-o,--output", swp.output, "output CSV path")->required();
    swp_cmd->add_option("--kind", swp.kind, "thresh | framesize | noise");
    swp_cmd->add_option("--svg", swp.svg_path, "also render an SVG chart");
    swp_cmd->add_option("--config", swp.config_path, "JSON run configuration");
    swp_cmd->add_option("--seed", swp.seed, "noise seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }
    cal.mismatch_seed_set = mismatch_seed_opt->count() > 0;

    try {
        if (*enc_cmd) return cmd_encode(enc);
        if (*dec_cmd) return cmd_decode(dec);
        if (*cal_cmd) return cmd_calibrate(cal);
        if (*swp_cmd) return cmd_sweep(swp);
    } catch (const dajc::IoError& e) {
        std::fprintf(stderr, "error (io): %s\n", e.what());
        return 1;
    } catch (const dajc::FormatError& e) {
        std::fprintf(stderr, "error (format): %s\n", e.what());
        return 2;
    } catch (const dajc::ConfigError& e) {
        std::fprintf(stderr, "error (config): %s\n", e.what());
        return 3;
    } catch (const dajc::CalibrationError& e) {
        std::fprintf(stderr, "error (calibration): %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error (config): %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
