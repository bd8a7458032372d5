#include "dajc/jpeg_core.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dajc {

DctBasis build_dct_basis() {
    DctBasis basis;
    const double inv_sqrt8 = 1.0 / std::sqrt(8.0);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            if (i == 0) {
                basis.a(i, j) = inv_sqrt8;
            } else {
                basis.a(i, j) = 0.5 * std::cos((2.0 * j + 1.0) * i * std::numbers::pi / 16.0);
            }
        }
    }
    return basis;
}

Mat8 dct2(const Mat8& pixels, const DctBasis& basis) {
    Mat8 shifted;
    for (std::size_t i = 0; i < 64; ++i) {
        shifted.m[i] = pixels.m[i] - 128.0;
    }
    return matmul(matmul(basis.a, shifted), transpose(basis.a));
}

Mat8 dct2(const PixelBlock& pixels, const DctBasis& basis) {
    Mat8 real;
    for (std::size_t i = 0; i < 64; ++i) {
        real.m[i] = static_cast<double>(pixels.p[i]);
    }
    return dct2(real, basis);
}

Mat8 idct2(const Mat8& coeffs, const DctBasis& basis) {
    Mat8 out = matmul(matmul(transpose(basis.a), coeffs), basis.a);
    for (std::size_t i = 0; i < 64; ++i) {
        out.m[i] += 128.0;
    }
    return out;
}

const QuantTable& q50_table() {
    // ITU-T T.81 Annex K.1 luminance table (quality 50), row-major.
    static const QuantTable table = [] {
        QuantTable t;
        t.q = {16, 11, 10, 16, 24,  40,  51,  61,   //
               12, 12, 14, 19, 26,  58,  60,  55,   //
               14, 13, 16, 24, 40,  57,  69,  56,   //
               14, 17, 22, 29, 51,  87,  80,  62,   //
               18, 22, 37, 56, 68,  109, 103, 77,   //
               24, 35, 55, 64, 81,  104, 113, 92,   //
               49, 64, 78, 87, 103, 121, 120, 101,  //
               72, 92, 95, 98, 112, 100, 103, 99};
        return t;
    }();
    return table;
}

namespace {
double round_half_away(double v) {
    // std::round ties away from zero, which is the convention used throughout.
    return std::round(v);
}
}  // namespace

Mat8 quantize(const Mat8& coeffs, const QuantTable& q) {
    Mat8 out;
    for (std::size_t i = 0; i < 64; ++i) {
        out.m[i] = round_half_away(coeffs.m[i] / q.q[i]);
    }
    return out;
}

Mat8 quantize_unrounded(const Mat8& coeffs, const QuantTable& q) {
    Mat8 out;
    for (std::size_t i = 0; i < 64; ++i) {
        out.m[i] = coeffs.m[i] / q.q[i];
    }
    return out;
}

Mat8 dequantize(const Mat8& quantized, const QuantTable& q) {
    Mat8 out;
    for (std::size_t i = 0; i < 64; ++i) {
        out.m[i] = quantized.m[i] * q.q[i];
    }
    return out;
}

const std::array<int, 64>& zigzag_order() {
    // Walk anti-diagonals, alternating direction, starting up-right from DC.
    static const std::array<int, 64> order = [] {
        std::array<int, 64> o{};
        int idx = 0;
        for (int s = 0; s <= 14; ++s) {
            if (s % 2 == 0) {  // up-right: row decreasing
                for (int r = std::min(s, 7); r >= std::max(0, s - 7); --r) {
                    o[idx++] = r * 8 + (s - r);
                }
            } else {  // down-left: row increasing
                for (int r = std::max(0, s - 7); r <= std::min(s, 7); ++r) {
                    o[idx++] = r * 8 + (s - r);
                }
            }
        }
        return o;
    }();
    return order;
}

std::array<double, 64> zigzag(const Mat8& block) {
    const auto& order = zigzag_order();
    std::array<double, 64> out{};
    for (int k = 0; k < 64; ++k) {
        out[static_cast<std::size_t>(k)] = block.m[static_cast<std::size_t>(order[k])];
    }
    return out;
}

Mat8 inverse_zigzag(const std::array<double, 64>& scanned) {
    const auto& order = zigzag_order();
    Mat8 out;
    for (int k = 0; k < 64; ++k) {
        out.m[static_cast<std::size_t>(order[k])] = scanned[static_cast<std::size_t>(k)];
    }
    return out;
}

namespace {
void require_same_shape(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height) {
        throw FormatError("image dimensions differ: " + std::to_string(a.width) + "x" +
                          std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                          std::to_string(b.height));
    }
}
}  // namespace

double mse(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(a.pixels.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
    const double m = mse(a, b);
    if (m == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

double ssim(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    constexpr double k1 = 0.01, k2 = 0.03, level = 255.0;
    constexpr double c1 = (k1 * level) * (k1 * level);
    constexpr double c2 = (k2 * level) * (k2 * level);

    const int win_w = std::min(8, a.width);
    const int win_h = std::min(8, a.height);
    const double n = static_cast<double>(win_w) * win_h;

    double total = 0.0;
    long windows = 0;
    for (int y = 0; y + win_h <= a.height; ++y) {
        for (int x = 0; x + win_w <= a.width; ++x) {
            double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (int dy = 0; dy < win_h; ++dy) {
                for (int dx = 0; dx < win_w; ++dx) {
                    const double pa = a.at(x + dx, y + dy);
                    const double pb = b.at(x + dx, y + dy);
                    sa += pa;
                    sb += pb;
                    saa += pa * pa;
                    sbb += pb * pb;
                    sab += pa * pb;
                }
            }
            const double mu_a = sa / n;
            const double mu_b = sb / n;
            const double var_a = saa / n - mu_a * mu_a;
            const double var_b = sbb / n - mu_b * mu_b;
            const double cov = sab / n - mu_a * mu_b;
            const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

QualityReport quality_report(const GrayImage& a, const GrayImage& b) {
    QualityReport r;
    r.mse = mse(a, b);
    r.psnr_db = psnr(a, b);
    r.ssim = ssim(a, b);
    return r;
}

}  // namespace dajc
