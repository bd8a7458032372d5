#include "dajc/core_types.hpp"

#include <cmath>
#include <cstdlib>

namespace dajc {

namespace {
void check_index(int row, int col) {
    if (row < 0 || row > 7 || col < 0 || col > 7) {
        throw std::out_of_range("Mat8 index out of range: (" + std::to_string(row) + ", " +
                                std::to_string(col) + ")");
    }
}
}  // namespace

double& Mat8::at(int row, int col) {
    check_index(row, col);
    return (*this)(row, col);
}

double Mat8::at(int row, int col) const {
    check_index(row, col);
    return (*this)(row, col);
}

Mat8 Mat8::constant(double value) {
    Mat8 out;
    out.m.fill(value);
    return out;
}

Mat8 matmul(const Mat8& a, const Mat8& b) {
    Mat8 out;
    for (int i = 0; i < 8; ++i) {
        for (int k = 0; k < 8; ++k) {
            const double aik = a(i, k);
            for (int j = 0; j < 8; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Mat8 transpose(const Mat8& a) {
    Mat8 out;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            out(i, j) = a(j, i);
        }
    }
    return out;
}

Mat8 hadamard(const Mat8& a, const Mat8& b) {
    Mat8 out;
    for (std::size_t i = 0; i < 64; ++i) {
        out.m[i] = a.m[i] * b.m[i];
    }
    return out;
}

Mat8 scale(const Mat8& a, double s) {
    Mat8 out;
    for (std::size_t i = 0; i < 64; ++i) {
        out.m[i] = a.m[i] * s;
    }
    return out;
}

double max_abs_diff(const Mat8& a, const Mat8& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
    }
    return worst;
}

double max_abs(const Mat8& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        worst = std::max(worst, std::abs(a.m[i]));
    }
    return worst;
}

GrayImage make_image(int width, int height, std::uint8_t fill) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, fill);
    return img;
}

}  // namespace dajc
