// Integration tests that drive the installed CLI binary end to end through a
// shell, covering the exit-code contract, report output, manifests, and
// determinism across thread counts.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string cli_path() { return DAJC_CLI_PATH; }

std::string tmp_path(const std::string& name) {
    return std::string(DAJC_TEST_TMP) + "/" + name;
}

std::string corpus_path(int i) {
    char name[32];
    std::snprintf(name, sizeof(name), "/corpus_%02d.pgm", i);
    return std::string(DAJC_DATA_DIR) + name;
}

// Runs `dajc <args>` through the shell, capturing stdout+stderr into a log
// file; returns the process exit code.
int run_cli(const std::string& args, const std::string& log_name,
            const std::string& env_prefix = "") {
    const std::string cmd =
        env_prefix + cli_path() + " " + args + " > " + tmp_path(log_name) + " 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty()) {
            lines.push_back(line);
        }
    }
    return lines;
}

}  // namespace

TEST_CASE("encode writes a stream, a manifest, and an energy summary") {
    const std::string out = tmp_path("cli_enc.dajc");
    const int rc = run_cli("encode " + corpus_path(0) + " -o " + out + " --seed 7",
                           "cli_enc.log");
    CHECK(rc == 0);
    CHECK(file_exists(out));
    CHECK(slurp(out).size() > 16);

    const std::string log = slurp(tmp_path("cli_enc.log"));
    CHECK(log.find("significant fraction:") != std::string::npos);
    CHECK(log.find("energy ratio:") != std::string::npos);
    CHECK(log.find("compression ratio:") != std::string::npos);

    const std::string manifest = slurp(out + ".manifest.json");
    CHECK(manifest.find("\"command\": \"encode\"") != std::string::npos);
    CHECK(manifest.find("\"timestamp\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": \"7\"") != std::string::npos);
}

TEST_CASE("missing input exits with the I/O code") {
    const int rc = run_cli("encode " + tmp_path("does_not_exist.pgm") + " -o " +
                               tmp_path("cli_x.dajc"),
                           "cli_missing.log");
    CHECK(rc == 1);
}

TEST_CASE("a stream with a bad magic exits with the format code") {
    const std::string bad = tmp_path("cli_bad.dajc");
    std::ofstream(bad, std::ios::binary) << "JUNKJUNKJUNKJUNKJUNK";
    const int rc = run_cli("decode " + bad + " -o " + tmp_path("cli_bad.pgm"),
                           "cli_bad.log");
    CHECK(rc == 2);
}

TEST_CASE("an unknown config key exits with the config code") {
    const std::string cfg = tmp_path("cli_bad_config.json");
    std::ofstream(cfg) << "{\"bogus\": 1}\n";
    const int rc = run_cli("encode " + corpus_path(0) + " -o " + tmp_path("cli_y.dajc") +
                               " --config " + cfg,
                           "cli_bad_config.log");
    CHECK(rc == 3);
}

TEST_CASE("threshold zero converts every sample") {
    const int rc = run_cli("encode " + corpus_path(0) + " -o " + tmp_path("cli_t0.dajc") +
                               " --thresh-mv 0 --seed 3",
                           "cli_t0.log");
    CHECK(rc == 0);
    const std::string log = slurp(tmp_path("cli_t0.log"));
    CHECK(log.find("significant fraction: 1.0000") != std::string::npos);
}

TEST_CASE("decode round trip reports quality against the reference") {
    const std::string stream = tmp_path("cli_rt.dajc");
    REQUIRE(run_cli("encode " + corpus_path(0) + " -o " + stream + " --seed 7",
                    "cli_rt_enc.log") == 0);

    const std::string csv = tmp_path("cli_rt.csv");
    const int rc = run_cli("decode " + stream + " -o " + tmp_path("cli_rt.pgm") + " --ref " +
                               corpus_path(0) + " --csv " + csv,
                           "cli_rt_dec.log");
    CHECK(rc == 0);
    CHECK(file_exists(tmp_path("cli_rt.pgm")));

    const std::vector<std::string> rows = lines_of(slurp(csv));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "input,reference,psnr_db,ssim,mse");
    double psnr = 0.0, ssim = 0.0, mse = 0.0;
    const std::size_t ref_at = rows[1].find(corpus_path(0));
    REQUIRE(ref_at != std::string::npos);
    REQUIRE(std::sscanf(rows[1].c_str() + ref_at + corpus_path(0).size(), ",%lf,%lf,%lf",
                        &psnr, &ssim, &mse) == 3);
    CHECK(psnr >= 25.0);
    CHECK(ssim > 0.5);
}

TEST_CASE("encoded bytes are identical across thread counts") {
    const std::string a = tmp_path("cli_thr1.dajc");
    const std::string b = tmp_path("cli_thr8.dajc");
    REQUIRE(run_cli("encode " + corpus_path(1) + " -o " + a + " --seed 99",
                    "cli_thr1.log", "DAJC_THREADS=1 ") == 0);
    REQUIRE(run_cli("encode " + corpus_path(1) + " -o " + b + " --seed 99",
                    "cli_thr8.log", "DAJC_THREADS=8 ") == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("calibrating an ideal chip leaves decode quality unchanged") {
    const std::string cal = tmp_path("cli_cal0.json");
    const int rc = run_cli("calibrate -o " + cal +
                               " --mismatch-sigma 0 --no-noise -N 1 --seed 5 --corpus " +
                               std::string(DAJC_DATA_DIR),
                           "cli_cal0.log");
    CHECK(rc == 0);

    const std::string log = slurp(tmp_path("cli_cal0.log"));
    const std::size_t at = log.find("delta:");
    REQUIRE(at != std::string::npos);
    double delta = 1e9;
    REQUIRE(std::sscanf(log.c_str() + at, "delta: %lf", &delta) == 1);
    CHECK(std::abs(delta) < 0.1);

    // The calibration file must be reloadable by decode.
    const std::string stream = tmp_path("cli_cal0.dajc");
    REQUIRE(run_cli("encode " + corpus_path(2) + " -o " + stream + " --seed 8 --calib " + cal,
                    "cli_cal0_enc.log") == 0);
    CHECK(run_cli("decode " + stream + " -o " + tmp_path("cli_cal0.pgm") + " --calib " + cal,
                  "cli_cal0_dec.log") == 0);
}

TEST_CASE("threshold sweep emits a monotone CSV and an SVG chart") {
    const std::string csv = tmp_path("cli_sweep.csv");
    const std::string svg = tmp_path("cli_sweep.svg");
    const int rc = run_cli("sweep " + corpus_path(0) + " -o " + csv +
                               " --kind thresh --svg " + svg + " --seed 4",
                           "cli_sweep.log");
    CHECK(rc == 0);

    const std::vector<std::string> rows = lines_of(slurp(csv));
    REQUIRE(rows.size() == 14);  // header + 0..12 mV
    CHECK(rows[0] ==
          "threshold_mv,significant_fraction,energy_ratio,compression_ratio,psnr_db");
    double prev_fraction = 2.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        int mv = 0;
        double fraction = 0.0;
        REQUIRE(std::sscanf(rows[i].c_str(), "%d,%lf", &mv, &fraction) == 2);
        CHECK(mv == static_cast<int>(i) - 1);
        CHECK(fraction <= prev_fraction + 1e-12);
        prev_fraction = fraction;
    }

    const std::string chart = slurp(svg);
    CHECK(chart.find("<svg") != std::string::npos);
}

TEST_CASE("an unknown sweep kind exits with the config code") {
    const int rc = run_cli("sweep " + corpus_path(0) + " -o " + tmp_path("cli_k.csv") +
                               " --kind bogus",
                           "cli_kind.log");
    CHECK(rc == 3);
}
