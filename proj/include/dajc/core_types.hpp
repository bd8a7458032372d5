#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dajc {

// Row-major 8x8 matrix of doubles. Small enough to pass by value, but most
// call sites take const references to keep the hot paths allocation-free.
struct Mat8 {
    std::array<double, 64> m{};

    double& operator()(int row, int col) { return m[static_cast<std::size_t>(row * 8 + col)]; }
    double operator()(int row, int col) const { return m[static_cast<std::size_t>(row * 8 + col)]; }

    double& at(int row, int col);
    double at(int row, int col) const;

    bool operator==(const Mat8&) const = default;

    static Mat8 constant(double value);
};

Mat8 matmul(const Mat8& a, const Mat8& b);
Mat8 transpose(const Mat8& a);
Mat8 hadamard(const Mat8& a, const Mat8& b);  // element-wise product
Mat8 scale(const Mat8& a, double s);
double max_abs_diff(const Mat8& a, const Mat8& b);
double max_abs(const Mat8& a);

// One 8x8 tile of 8-bit pixels, row-major.
struct PixelBlock {
    std::array<std::uint8_t, 64> p{};

    std::uint8_t& operator()(int row, int col) { return p[static_cast<std::size_t>(row * 8 + col)]; }
    std::uint8_t operator()(int row, int col) const { return p[static_cast<std::size_t>(row * 8 + col)]; }

    bool operator==(const PixelBlock&) const = default;
};

// Whole-frame 8-bit grayscale image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const GrayImage&) const = default;
};

GrayImage make_image(int width, int height, std::uint8_t fill = 0);

// Error taxonomy used across the library. All derive from std::runtime_error
// so callers can catch coarsely; the CLI maps them onto exit codes.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dajc
