#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rgbw/error.hpp"
#include "rgbw/image.hpp"
#include "rgbw/tensor.hpp"

namespace rgbw {

/// Periodic tile of filter labels laid over the focal plane.
class CfaPattern {
public:
    CfaPattern(std::string name, std::vector<std::vector<Channel>> tile) : name_(std::move(name)), tile_(std::move(tile)) {
        if (tile_.empty() || tile_.front().empty()) throw InvalidArgument("CFA tile must be at least 1x1");
        for (const auto& row : tile_)
            if (row.size() != tile_.front().size()) throw InvalidArgument("CFA tile rows differ in length");
    }

    const std::string& name() const noexcept { return name_; }
    std::size_t tile_height() const noexcept { return tile_.size(); }
    std::size_t tile_width() const noexcept { return tile_.front().size(); }

    Channel at(std::size_t i, std::size_t j) const noexcept {
        return tile_[i % tile_height()][j % tile_width()];
    }

    const std::vector<std::vector<Channel>>& tile() const noexcept { return tile_; }

    /// Number of tile cells carrying the given filter.
    std::size_t count(Channel c) const noexcept {
        std::size_t n = 0;
        for (const auto& row : tile_)
            for (Channel v : row) n += (v == c);
        return n;
    }

    bool has(Channel c) const noexcept { return count(c) > 0; }

    friend bool operator==(const CfaPattern&, const CfaPattern&) = default;

private:
    std::string name_;
    std::vector<std::vector<Channel>> tile_;
};

/**
 * Full-size one-hot expansion H of a pattern. Stored as the active channel
 * index per pixel; `tensor()` materializes the binary tensor when needed.
 */
class CfaMask {
public:
    CfaMask(std::size_t rows, std::size_t cols, std::vector<Channel> labels)
        : rows_(rows), cols_(cols), labels_(std::move(labels)) {
        if (rows_ == 0 || cols_ == 0) throw InvalidArgument("mask dimensions must be at least 1");
        if (labels_.size() != rows_ * cols_) throw ShapeError("mask label count does not match its shape");
    }

    std::size_t height() const noexcept { return rows_; }
    std::size_t width() const noexcept { return cols_; }

    Channel label(std::size_t i, std::size_t j) const noexcept { return labels_[i * cols_ + j]; }
    std::size_t active(std::size_t i, std::size_t j) const noexcept { return index_of(label(i, j)); }

    /// H_k[i, j] in {0, 1}.
    double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return active(i, j) == k ? 1.0 : 0.0;
    }

    /// The rows x cols x 4 binary tensor H.
    Tensor tensor() const {
        Tensor h(rows_, cols_, kSpectralChannels);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) h(i, j, active(i, j)) = 1.0;
        return h;
    }

    /// Binary support of one channel as a rows x cols x 1 tensor.
    Tensor support(Channel c) const {
        Tensor s(rows_, cols_, 1);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) s(i, j, 0) = label(i, j) == c ? 1.0 : 0.0;
        return s;
    }

    std::size_t count(Channel c) const noexcept {
        std::size_t n = 0;
        for (Channel v : labels_) n += (v == c);
        return n;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Channel> labels_;
};

struct NoiseSpec {
    double std_dev = 0.0;
    std::uint64_t seed = 0;
};

/// Mixes a stream index into a seed (splitmix64 finalizer) so related runs get unrelated noise.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline CfaMask expand_mask(const CfaPattern& pattern, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw InvalidArgument("mask dimensions must be at least 1");
    std::vector<Channel> labels(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) labels[i * cols + j] = pattern.at(i, j);
    return CfaMask(rows, cols, std::move(labels));
}

namespace detail {

inline void require_mask_shape(const Shape3& s, const CfaMask& h, const char* op) {
    if (s.rows != h.height() || s.cols != h.width())
        throw ShapeError(std::string(op) + ": image " + to_string(s) + " does not match mask " +
                         std::to_string(h.height()) + "x" + std::to_string(h.width()));
}

}  // namespace detail

/// Y = sum_k X_k (.) H_k, on any 4-channel tensor.
inline Tensor forward(const Tensor& x, const CfaMask& h) {
    detail::require_mask_shape(x.shape(), h, "forward");
    if (x.channels() != kSpectralChannels) throw ShapeError("forward expects a 4-channel tensor");
    Tensor y(x.rows(), x.cols(), 1);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kSpectralChannels; ++k) acc += x(i, j, k) * h(i, j, k);
            y(i, j, 0) = acc;
        }
    return y;
}

inline RawImage forward(const SpectralImage& x, const CfaMask& h) { return RawImage(forward(x.tensor(), h)); }

/// Z_k = H_k (.) Y.
inline Tensor adjoint(const Tensor& y, const CfaMask& h) {
    detail::require_mask_shape(y.shape(), h, "adjoint");
    if (y.channels() != 1) throw ShapeError("adjoint expects a single-plane tensor");
    Tensor z(y.rows(), y.cols(), kSpectralChannels);
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j)
            for (std::size_t k = 0; k < kSpectralChannels; ++k) z(i, j, k) = h(i, j, k) * y(i, j, 0);
    return z;
}

inline SpectralImage adjoint(const RawImage& y, const CfaMask& h) { return SpectralImage(adjoint(y.tensor(), h)); }

/// Adds iid N(0, std_dev^2) samples drawn from a generator seeded with spec.seed. No clipping.
inline RawImage add_noise(const RawImage& y, const NoiseSpec& spec) {
    if (!(spec.std_dev >= 0.0) || !std::isfinite(spec.std_dev))
        throw InvalidArgument("noise standard deviation must be finite and non-negative");
    Tensor out = y.tensor();
    if (spec.std_dev == 0.0) return RawImage(std::move(out));
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, spec.std_dev);
    for (double& v : out.values()) v += gauss(rng);
    return RawImage(std::move(out));
}

namespace patterns {

inline std::vector<std::vector<Channel>> tile_from(std::initializer_list<std::string_view> rows) {
    std::vector<std::vector<Channel>> tile;
    for (std::string_view r : rows) {
        auto& row = tile.emplace_back();
        for (char c : r) {
            switch (c) {
                case 'R': row.push_back(Channel::R); break;
                case 'G': row.push_back(Channel::G); break;
                case 'B': row.push_back(Channel::B); break;
                case 'W': row.push_back(Channel::W); break;
                default: throw InvalidArgument(std::string("illegal filter label '") + c + "'");
            }
        }
    }
    return tile;
}

// Built-in tiles. The same layouts ship as text files under patterns/.

inline CfaPattern bayer() { return {"bayer", tile_from({"GR", "BG"})}; }

inline CfaPattern sparse3() { return {"sparse3", tile_from({"RWGW", "WWWW", "BWWW", "WWWW"})}; }

inline CfaPattern kodak() { return {"kodak", tile_from({"WBWG", "BWGW", "WGWR", "GWRW"})}; }

inline CfaPattern sony() { return {"sony", tile_from({"WGWR", "GWRW", "WBWG", "BWGW"})}; }

inline std::vector<CfaPattern> all() { return {bayer(), sparse3(), kodak(), sony()}; }

inline std::optional<CfaPattern> builtin(std::string_view name) {
    for (auto& p : all())
        if (p.name() == name) return p;
    return std::nullopt;
}

}  // namespace patterns

}  // namespace rgbw
