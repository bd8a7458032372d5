#include "dajc/stream.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>

#include "dajc/nonideal.hpp"
#include "dajc/parallel.hpp"

namespace dajc {

double pixel_to_voltage(int p, double v_min, double v_max) {
    if (p < 0 || p > 255) {
        throw std::out_of_range("pixel value out of [0, 255]: " + std::to_string(p));
    }
    if (v_min >= v_max) {
        throw ConfigError("voltage rails must satisfy v_min < v_max");
    }
    return static_cast<double>(p) / 255.0 * (v_max - v_min) + v_min;
}

int voltage_to_pixel(double v, double v_min, double v_max) {
    if (v_min >= v_max) {
        throw ConfigError("voltage rails must satisfy v_min < v_max");
    }
    const double p = std::round((v - v_min) / (v_max - v_min) * 255.0);
    if (p < 0.0) {
        return 0;
    }
    if (p > 255.0) {
        return 255;
    }
    return static_cast<int>(p);
}

TiledFrame tile_blocks(const Frame& frame) {
    if (frame.width <= 0 || frame.height <= 0 ||
        frame.pixels.size() != static_cast<std::size_t>(frame.width) * frame.height) {
        throw FormatError("frame dimensions inconsistent with pixel data");
    }
    TiledFrame tiled;
    tiled.width = frame.width;
    tiled.height = frame.height;
    tiled.blocks_x = (frame.width + 7) / 8;
    tiled.blocks_y = (frame.height + 7) / 8;
    tiled.blocks.resize(static_cast<std::size_t>(tiled.blocks_x) * tiled.blocks_y);
    for (int by = 0; by < tiled.blocks_y; ++by) {
        for (int bx = 0; bx < tiled.blocks_x; ++bx) {
            PixelBlock& block = tiled.blocks[static_cast<std::size_t>(by) * tiled.blocks_x + bx];
            for (int r = 0; r < 8; ++r) {
                for (int c = 0; c < 8; ++c) {
                    // Edge replication for partial border blocks.
                    const int x = std::min(bx * 8 + c, frame.width - 1);
                    const int y = std::min(by * 8 + r, frame.height - 1);
                    block(r, c) = frame.at(x, y);
                }
            }
        }
    }
    return tiled;
}

Frame untile_blocks(const TiledFrame& tiled) {
    if (tiled.blocks.size() != static_cast<std::size_t>(tiled.blocks_x) * tiled.blocks_y) {
        throw FormatError("tiled frame block count inconsistent with grid");
    }
    Frame frame = make_image(tiled.width, tiled.height);
    for (int by = 0; by < tiled.blocks_y; ++by) {
        for (int bx = 0; bx < tiled.blocks_x; ++bx) {
            const PixelBlock& block =
                tiled.blocks[static_cast<std::size_t>(by) * tiled.blocks_x + bx];
            for (int r = 0; r < 8; ++r) {
                for (int c = 0; c < 8; ++c) {
                    const int x = bx * 8 + c;
                    const int y = by * 8 + r;
                    if (x < tiled.width && y < tiled.height) {
                        frame.at(x, y) = block(r, c);
                    }
                }
            }
        }
    }
    return frame;
}

namespace {

// Reads one PGM header token, skipping whitespace and '#' comments.
std::string next_pgm_token(const std::vector<std::uint8_t>& data, std::size_t& pos) {
    while (pos < data.size()) {
        const char ch = static_cast<char>(data[pos]);
        if (ch == '#') {
            while (pos < data.size() && data[pos] != '\n') {
                ++pos;
            }
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ++pos;
        } else {
            break;
        }
    }
    std::string token;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) {
        token.push_back(static_cast<char>(data[pos]));
        ++pos;
    }
    if (token.empty()) {
        throw FormatError("truncated PGM header");
    }
    return token;
}

int parse_pgm_int(const std::string& token, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return v;
    } catch (const std::exception&) {
        throw FormatError(std::string("invalid PGM ") + what + ": '" + token + "'");
    }
}

}  // namespace

Frame load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open PGM file: " + path);
    }
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("failed reading PGM file: " + path);
    }

    std::size_t pos = 0;
    const std::string magic = next_pgm_token(data, pos);
    if (magic == "P2") {
        throw FormatError("ASCII PGM (P2) is unsupported; use binary P5: " + path);
    }
    if (magic != "P5") {
        throw FormatError("not a binary PGM (P5) file: " + path);
    }
    const int width = parse_pgm_int(next_pgm_token(data, pos), "width");
    const int height = parse_pgm_int(next_pgm_token(data, pos), "height");
    const int maxval = parse_pgm_int(next_pgm_token(data, pos), "maxval");
    if (width <= 0 || height <= 0 || width > 65535 || height > 65535) {
        throw FormatError("PGM dimensions out of range in " + path);
    }
    if (maxval != 255) {
        throw FormatError("only maxval 255 PGM is supported, got " + std::to_string(maxval) +
                          " in " + path);
    }
    pos += 1;  // single whitespace byte after maxval
    const std::size_t need = static_cast<std::size_t>(width) * height;
    if (pos > data.size() || data.size() - pos < need) {
        throw FormatError("truncated PGM pixel data in " + path);
    }

    Frame frame = make_image(width, height);
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(pos), need, frame.pixels.begin());
    return frame;
}

void save_pgm(const Frame& frame, const std::string& path) {
    if (frame.width <= 0 || frame.height <= 0 ||
        frame.pixels.size() != static_cast<std::size_t>(frame.width) * frame.height) {
        throw FormatError("frame dimensions inconsistent with pixel data");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open PGM file for writing: " + path);
    }
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels.data()),
              static_cast<std::streamsize>(frame.pixels.size()));
    if (!out) {
        throw IoError("failed writing PGM file: " + path);
    }
}

namespace {

void put_u16_be(std::vector<std::uint8_t>& bytes, std::uint16_t v) {
    bytes.push_back(static_cast<std::uint8_t>(v >> 8));
    bytes.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16_be(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return static_cast<std::uint16_t>((bytes[offset] << 8) | bytes[offset + 1]);
}

std::uint16_t to_millivolts(double volts, const char* what) {
    const double mv = std::round(volts * 1000.0);
    if (mv < 0.0 || mv > 65535.0) {
        throw FormatError(std::string(what) + " out of header range: " + std::to_string(volts) +
                          " V");
    }
    return static_cast<std::uint16_t>(mv);
}

}  // namespace

std::vector<std::uint8_t> serialize_header(const StreamHeader& header) {
    if (header.width < 1 || header.width > 65535 || header.height < 1 ||
        header.height > 65535) {
        throw FormatError("frame dimensions out of header range");
    }
    if (header.v_min >= header.v_max) {
        throw FormatError("header requires v_min < v_max");
    }
    std::vector<std::uint8_t> bytes;
    bytes.reserve(stream_header_size);
    bytes.insert(bytes.end(), {'D', 'A', 'J', 'C'});
    bytes.push_back(stream_version);
    put_u16_be(bytes, static_cast<std::uint16_t>(header.width));
    put_u16_be(bytes, static_cast<std::uint16_t>(header.height));
    put_u16_be(bytes, to_millivolts(header.v_min, "v_min"));
    put_u16_be(bytes, to_millivolts(header.v_max, "v_max"));
    put_u16_be(bytes, to_millivolts(header.v_thresh, "v_thresh"));
    bytes.push_back(header.calibrated ? 0x01 : 0x00);
    return bytes;
}

StreamHeader parse_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < stream_header_size) {
        throw FormatError("stream shorter than the 16-byte header");
    }
    if (bytes[0] != 'D' || bytes[1] != 'A' || bytes[2] != 'J' || bytes[3] != 'C') {
        throw FormatError("bad stream magic (expected 'DAJC')");
    }
    if (bytes[4] != stream_version) {
        throw FormatError("unsupported stream version " + std::to_string(bytes[4]));
    }
    StreamHeader header;
    header.width = get_u16_be(bytes, 5);
    header.height = get_u16_be(bytes, 7);
    header.v_min = get_u16_be(bytes, 9) / 1000.0;
    header.v_max = get_u16_be(bytes, 11) / 1000.0;
    header.v_thresh = get_u16_be(bytes, 13) / 1000.0;
    const std::uint8_t flags = bytes[15];
    if ((flags & 0xFE) != 0) {
        throw FormatError("reserved header flag bits set");
    }
    header.calibrated = (flags & 0x01) != 0;
    if (header.width == 0 || header.height == 0) {
        throw FormatError("zero frame dimension in header");
    }
    if (header.v_min >= header.v_max) {
        throw FormatError("header rails invalid (v_min >= v_max)");
    }
    return header;
}

void append_token(std::vector<std::uint8_t>& bytes, const Token& token) {
    std::uint16_t wire = 0;
    if (token.kind == Token::Kind::sample) {
        if (token.value > 0x3FF) {
            throw FormatError("sample code exceeds 10 bits");
        }
        wire = static_cast<std::uint16_t>(0x8000 | token.value);
    } else {
        if (token.value < 1 || token.value > 63) {
            throw FormatError("run count out of [1, 63]");
        }
        wire = token.value;
    }
    put_u16_be(bytes, wire);
}

Token parse_token(std::span<const std::uint8_t> bytes, std::size_t offset) {
    if (offset + 2 > bytes.size()) {
        throw FormatError("truncated stream: token expected at byte " + std::to_string(offset));
    }
    const std::uint16_t wire = get_u16_be(bytes, offset);
    if (wire & 0x8000) {
        if (wire & 0x7C00) {
            throw FormatError("reserved bits set in sample token");
        }
        return Token::sample(wire & 0x3FF);
    }
    if (wire & 0x7FC0) {
        throw FormatError("reserved bits set in run token");
    }
    const std::uint16_t count = wire & 0x3F;
    if (count == 0) {
        throw FormatError("zero-length run token");
    }
    return Token::run(count);
}

FrameEncodeResult encode_frame(const Frame& frame, const PipelineConfig& cfg,
                               const AdcConfig& adc, const EncodeOptions& options) {
    const TiledFrame tiled = tile_blocks(frame);
    const int n_blocks = static_cast<int>(tiled.blocks.size());

    // Simulate blocks in parallel; per-block seeds come from the frame seed so
    // the result is independent of scheduling.
    std::vector<BlockEncodeResult> encoded(static_cast<std::size_t>(n_blocks));
    std::vector<int> cycles(static_cast<std::size_t>(n_blocks));
    parallel_for(n_blocks, [&](int b) {
        NoiseContext ctx;
        ctx.enabled = options.noise_enabled;
        ctx.temperature_k = options.temperature_k;
        ctx.seed = rng::splitmix64_at(options.seed, static_cast<std::uint64_t>(b));
        const AnalogBlockResult sim = run_block(tiled.blocks[static_cast<std::size_t>(b)], cfg, ctx);
        encoded[static_cast<std::size_t>(b)] =
            encode_block(sim.samples_v, options.v_thresh_v, adc, /*force_first=*/true);
        cycles[static_cast<std::size_t>(b)] = sim.cycles_used;
    });

    StreamHeader header;
    header.width = frame.width;
    header.height = frame.height;
    header.v_min = cfg.v_min;
    header.v_max = cfg.v_max;
    header.v_thresh = options.v_thresh_v;
    header.calibrated = options.calibrated;

    FrameEncodeResult result;
    result.bytes = serialize_header(header);
    for (const BlockEncodeResult& block : encoded) {
        for (const Token& t : block.tokens) {
            append_token(result.bytes, t);
        }
        result.token_count += static_cast<std::int64_t>(block.tokens.size());
        result.energy = merge_energy(result.energy, block.energy);
    }
    for (const int c : cycles) {
        result.analog_cycles += c;
    }
    const double bits_out = 8.0 * static_cast<double>(result.bytes.size());
    result.compression_ratio =
        8.0 * static_cast<double>(frame.width) * static_cast<double>(frame.height) / bits_out;
    return result;
}

Frame decode_frame(std::span<const std::uint8_t> bytes, const InverseQTable* calibrated_q_inv) {
    const StreamHeader header = parse_header(bytes);
    const AdcConfig adc = adc_config_for_rails(header.v_min, header.v_max);
    const InverseQTable table = calibrated_q_inv
                                    ? *calibrated_q_inv
                                    : ideal_inverse_q(q50_table(), header.v_min, header.v_max);
    static const DctBasis basis = build_dct_basis();

    TiledFrame tiled;
    tiled.width = header.width;
    tiled.height = header.height;
    tiled.blocks_x = (header.width + 7) / 8;
    tiled.blocks_y = (header.height + 7) / 8;
    const int n_blocks = tiled.blocks_x * tiled.blocks_y;
    tiled.blocks.resize(static_cast<std::size_t>(n_blocks));

    std::size_t offset = stream_header_size;
    for (int b = 0; b < n_blocks; ++b) {
        // Collect tokens until the block's 64 positions are accounted for.
        std::vector<Token> tokens;
        int positions = 0;
        while (positions < 64) {
            const Token t = parse_token(bytes, offset);
            offset += 2;
            tokens.push_back(t);
            positions += token_positions(t);
        }
        const std::array<double, 64> samples = decode_block(tokens, adc);

        // Voltages -> coefficient estimates -> pixels.
        const Mat8 volts = inverse_zigzag(samples);
        Mat8 coeffs;
        for (std::size_t k = 0; k < 64; ++k) {
            coeffs.m[k] = volts.m[k] * table.q_inv.m[k];
        }
        const Mat8 pixels = idct2(coeffs, basis);
        PixelBlock& block = tiled.blocks[static_cast<std::size_t>(b)];
        for (std::size_t k = 0; k < 64; ++k) {
            const double p = std::round(pixels.m[k]);
            block.p[k] = static_cast<std::uint8_t>(std::min(255.0, std::max(0.0, p)));
        }
    }
    // Trailing bytes after the final block are ignored by design.
    return untile_blocks(tiled);
}

}  // namespace dajc
