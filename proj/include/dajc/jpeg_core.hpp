#pragma once

#include <array>
#include <cstdint>

#include "dajc/core_types.hpp"

namespace dajc {

// Orthonormal 8-point DCT-II basis. Row 0 is the flat vector 1/sqrt(8); rows
// 1..7 are (1/2)*cos((2j+1)*i*pi/16). A * A^T = I holds to machine precision.
struct DctBasis {
    Mat8 a;
};

DctBasis build_dct_basis();

// Forward 2-D DCT of one block: Y = A * (X - 128) * A^T. The 128 level shift
// centers 8-bit pixels around zero; idct2 adds it back. Pixel values are
// treated as real numbers so the pair is an exact inverse for real inputs.
Mat8 dct2(const Mat8& pixels, const DctBasis& basis);
Mat8 dct2(const PixelBlock& pixels, const DctBasis& basis);

// Inverse 2-D DCT: X = A^T * Y * A + 128. Result is real-valued and
// unclamped; rounding/clamping to 8 bits happens at image reassembly.
Mat8 idct2(const Mat8& coeffs, const DctBasis& basis);

// Per-coefficient quantization step sizes (positive integers).
struct QuantTable {
    std::array<int, 64> q{};

    int& operator()(int row, int col) { return q[static_cast<std::size_t>(row * 8 + col)]; }
    int operator()(int row, int col) const { return q[static_cast<std::size_t>(row * 8 + col)]; }
};

// The standard quality-50 luminance table.
const QuantTable& q50_table();

// Element-wise Y ./ Q, rounded half away from zero. Values are integers
// stored in a Mat8 so downstream math stays in one matrix type.
Mat8 quantize(const Mat8& coeffs, const QuantTable& q);

// Element-wise Y ./ Q without rounding (used by analysis and calibration).
Mat8 quantize_unrounded(const Mat8& coeffs, const QuantTable& q);

// Element-wise Yq .* Q.
Mat8 dequantize(const Mat8& quantized, const QuantTable& q);

// Visit order of the 64 linear indices along anti-diagonals, starting at DC.
const std::array<int, 64>& zigzag_order();

std::array<double, 64> zigzag(const Mat8& block);
Mat8 inverse_zigzag(const std::array<double, 64>& scanned);

// Image quality metrics. Both images must have identical dimensions
// (FormatError otherwise). psnr returns +inf for identical images.
double mse(const GrayImage& a, const GrayImage& b);
double psnr(const GrayImage& a, const GrayImage& b);

// Mean SSIM over all fully-contained 8x8 windows (stride 1, uniform window,
// K1 = 0.01, K2 = 0.03, L = 255). Images smaller than 8x8 use one window
// spanning the whole image.
double ssim(const GrayImage& a, const GrayImage& b);

struct QualityReport {
    double mse = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
};

QualityReport quality_report(const GrayImage& a, const GrayImage& b);

}  // namespace dajc
