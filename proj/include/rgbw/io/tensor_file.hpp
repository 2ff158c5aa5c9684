#pragma once

// Lossless tensor container:
//
//   offset  size  field
//   0       8     magic "RGBWTNSR"
//   8       4     version, u32 little-endian, = 1
//   12      4     rows M, u32 LE
//   16      4     cols N, u32 LE
//   20      4     channels K, u32 LE
//   24      8MNK  IEEE-754 binary64 LE, row-major, channel-last
//
// Raw mosaics are stored with K = 1, scenes with K = 4.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rgbw/error.hpp"
#include "rgbw/tensor.hpp"

namespace rgbw::io {

inline constexpr char kTensorMagic[8] = {'R', 'G', 'B', 'W', 'T', 'N', 'S', 'R'};
inline constexpr std::uint32_t kTensorVersion = 1;
inline constexpr std::size_t kTensorHeaderSize = 24;

class TensorFormatError : public Error {
public:
    enum class Kind { BadMagic, BadVersion, BadShape, TruncatedPayload, TrailingData };

    TensorFormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

namespace detail {

inline void put_u32(std::uint8_t* out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out[b] = static_cast<std::uint8_t>(v >> (8 * b));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[at + b]) << (8 * b);
    return v;
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
    constexpr auto max_dim = std::numeric_limits<std::uint32_t>::max();
    if (t.rows() > max_dim || t.cols() > max_dim || t.channels() > max_dim)
        throw TensorFormatError(TensorFormatError::Kind::BadShape, "tensor dimension exceeds 32 bits");
    std::vector<std::uint8_t> out(kTensorHeaderSize + t.size() * 8);
    std::memcpy(out.data(), kTensorMagic, sizeof kTensorMagic);
    detail::put_u32(out.data() + 8, kTensorVersion);
    detail::put_u32(out.data() + 12, static_cast<std::uint32_t>(t.rows()));
    detail::put_u32(out.data() + 16, static_cast<std::uint32_t>(t.cols()));
    detail::put_u32(out.data() + 20, static_cast<std::uint32_t>(t.channels()));
    std::uint8_t* p = out.data() + kTensorHeaderSize;
    for (double v : t.values()) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) *p++ = static_cast<std::uint8_t>(bits >> (8 * b));
    }
    return out;
}

/// Strict decoder: every malformed input yields a TensorFormatError.
inline Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
    using Kind = TensorFormatError::Kind;
    if (bytes.size() < sizeof kTensorMagic || std::memcmp(bytes.data(), kTensorMagic, sizeof kTensorMagic) != 0)
        throw TensorFormatError(Kind::BadMagic, "not a tensor container (bad magic)");
    if (bytes.size() < kTensorHeaderSize)
        throw TensorFormatError(Kind::TruncatedPayload, "tensor header is truncated");
    const std::uint32_t version = detail::get_u32(bytes, 8);
    if (version != kTensorVersion)
        throw TensorFormatError(Kind::BadVersion, "unsupported tensor container version " + std::to_string(version));
    const std::uint64_t rows = detail::get_u32(bytes, 12);
    const std::uint64_t cols = detail::get_u32(bytes, 16);
    const std::uint64_t chans = detail::get_u32(bytes, 20);
    if (rows == 0 || cols == 0 || chans == 0)
        throw TensorFormatError(Kind::BadShape, "tensor dimensions must be non-zero");

    // rows*cols*chans can reach 2^96, so compare against the payload slot count factor by factor.
    const std::uint64_t payload = bytes.size() - kTensorHeaderSize;
    const std::uint64_t slots = payload / 8;
    if (rows > slots || cols > slots / rows || chans > slots / (rows * cols))
        throw TensorFormatError(Kind::TruncatedPayload, "tensor payload shorter than " + std::to_string(rows) + "x" +
                                                            std::to_string(cols) + "x" + std::to_string(chans));
    const std::uint64_t count = rows * cols * chans;
    if (payload != count * 8) throw TensorFormatError(Kind::TrailingData, "unexpected bytes after tensor payload");

    std::vector<double> values(count);
    const std::uint8_t* p = bytes.data() + kTensorHeaderSize;
    for (std::uint64_t n = 0; n < count; ++n, p += 8) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
        values[n] = std::bit_cast<double>(bits);
    }
    return Tensor(Shape3{rows, cols, chans}, std::move(values));
}

inline void write_tensor(const std::filesystem::path& path, const Tensor& t) {
    const auto bytes = encode_tensor(t);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

inline Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_tensor(bytes);
}

}  // namespace rgbw::io
