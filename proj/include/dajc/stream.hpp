#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dajc/adc_rle.hpp"
#include "dajc/calib.hpp"
#include "dajc/core_types.hpp"
#include "dajc/sc_sim.hpp"

namespace dajc {

using Frame = GrayImage;

// Affine pixel-to-rail mapping: 0 -> v_min, 255 -> v_max. The inverse rounds
// to the nearest code and clamps to [0, 255].
double pixel_to_voltage(int p, double v_min, double v_max);
int voltage_to_pixel(double v, double v_min, double v_max);

// 8x8 tiling with edge-replication padding; blocks stored row-major over the
// block grid. untile_blocks crops back to the original dimensions.
struct TiledFrame {
    int width = 0;   // original frame dimensions
    int height = 0;
    int blocks_x = 0;
    int blocks_y = 0;
    std::vector<PixelBlock> blocks;
};

TiledFrame tile_blocks(const Frame& frame);
Frame untile_blocks(const TiledFrame& tiled);

// Binary 8-bit PGM (P5, maxval 255). IoError for unreadable/unwritable paths,
// FormatError for malformed content (including ASCII P2 input).
Frame load_pgm(const std::string& path);
void save_pgm(const Frame& frame, const std::string& path);

// Fixed 16-byte stream header. Layout (big-endian multi-byte fields):
// "DAJC" | version u8 | width u16 | height u16 | v_min_mv u16 | v_max_mv u16
// | v_thresh_mv u16 | flags u8 (bit0: calibrated decode intended).
struct StreamHeader {
    int width = 0;
    int height = 0;
    double v_min = 0.1;    // volts; stored as integer millivolts
    double v_max = 0.9;
    double v_thresh = 0.005;
    bool calibrated = false;
};

inline constexpr std::size_t stream_header_size = 16;
inline constexpr std::uint8_t stream_version = 1;

std::vector<std::uint8_t> serialize_header(const StreamHeader& header);
StreamHeader parse_header(std::span<const std::uint8_t> bytes);  // FormatError on mismatch

// Token wire form: 2 bytes big-endian each. Bit 15 selects the type
// (1 = sample with the 10-bit code in bits 9..0, 0 = run with the count in
// bits 5..0); reserved bits must be zero.
void append_token(std::vector<std::uint8_t>& bytes, const Token& token);
Token parse_token(std::span<const std::uint8_t> bytes, std::size_t offset);  // FormatError

struct EncodeOptions {
    double v_thresh_v = 0.005;
    std::uint64_t seed = 0;
    bool noise_enabled = true;
    double temperature_k = 300.0;
    bool calibrated = false;  // mark the stream for calibrated decoding
};

struct FrameEncodeResult {
    std::vector<std::uint8_t> bytes;
    EnergyReport energy;
    std::int64_t analog_cycles = 0;
    std::int64_t token_count = 0;
    double compression_ratio = 0.0;  // 8*pixels / output bits
};

// Full encoder: tile -> analog block pipeline -> threshold/RLE -> wire bytes.
// Per-block noise seeds derive from (options.seed, block index), so blocks
// may be simulated in parallel with byte-identical results. The DC sample of
// every block is force-converted (never folded into a run).
FrameEncodeResult encode_frame(const Frame& frame, const PipelineConfig& cfg,
                               const AdcConfig& adc, const EncodeOptions& options);

// Full decoder. Reads only the header (rails, dimensions) plus the optional
// calibrated inverse-Q table; the ADC window and the uncalibrated inverse-Q
// are reconstructed from the header rails and architecture constants.
// Unknown trailing bytes after the last block are ignored.
Frame decode_frame(std::span<const std::uint8_t> bytes,
                   const InverseQTable* calibrated_q_inv = nullptr);

}  // namespace dajc
