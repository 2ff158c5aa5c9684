#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "rgbw/error.hpp"
#include "rgbw/tensor.hpp"

namespace rgbw {

/// Spectral channel of the scene tensor. The order is fixed: W is last.
enum class Channel : std::size_t { R = 0, G = 1, B = 2, W = 3 };

inline constexpr std::size_t kColorChannels = 3;
inline constexpr std::size_t kSpectralChannels = 4;

inline constexpr std::size_t index_of(Channel c) noexcept { return static_cast<std::size_t>(c); }

namespace detail {

inline void require_image(const Tensor& t, std::size_t channels, const char* what) {
    if (t.rows() == 0 || t.cols() == 0)
        throw ShapeError(std::string(what) + " must have at least one row and one column");
    if (t.channels() != channels)
        throw ShapeError(std::string(what) + " needs " + std::to_string(channels) + " channels, got " +
                         std::to_string(t.channels()));
    if (!t.all_finite()) throw NonFiniteError(std::string(what) + " contains non-finite values");
}

}  // namespace detail

/**
 * Immutable image with a fixed channel count. The three image kinds below
 * differ only in that count; keeping them as distinct types stops a raw
 * mosaic from being passed where a scene is expected.
 */
template <std::size_t Channels, class Tag>
class FixedImage {
public:
    static constexpr std::size_t channel_count = Channels;

    explicit FixedImage(Tensor t) : data_(std::move(t)) { detail::require_image(data_, Channels, Tag::name); }

    FixedImage(std::size_t rows, std::size_t cols, double fill = 0.0)
        : FixedImage(Tensor(rows, cols, Channels, fill)) {}

    std::size_t height() const noexcept { return data_.rows(); }
    std::size_t width() const noexcept { return data_.cols(); }
    const Shape3& shape() const noexcept { return data_.shape(); }

    double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept { return data_(i, j, k); }

    const Tensor& tensor() const noexcept { return data_; }
    Tensor release() && { return std::move(data_); }

    friend bool operator==(const FixedImage&, const FixedImage&) = default;

private:
    Tensor data_;
};

struct SpectralTag { static constexpr const char* name = "spectral image"; };
struct RgbTag { static constexpr const char* name = "RGB image"; };
struct RawTag { static constexpr const char* name = "raw image"; };

/// Scene tensor X: R, G, B and panchromatic W planes.
using SpectralImage = FixedImage<kSpectralChannels, SpectralTag>;
/// Reconstruction deliverable: the scene without its W plane.
using RgbImage = FixedImage<kColorChannels, RgbTag>;

/// Single-plane mosaic Y recorded by the sensor.
class RawImage : public FixedImage<1, RawTag> {
public:
    using FixedImage::FixedImage;

    double operator()(std::size_t i, std::size_t j) const noexcept { return tensor()(i, j, 0); }
};

/// Convex weights used to synthesize a panchromatic plane from RGB.
struct WhiteWeights {
    double r = 1.0 / 3.0;
    double g = 1.0 / 3.0;
    double b = 1.0 / 3.0;
};

inline void validate(const WhiteWeights& w) {
    if (!std::isfinite(w.r) || !std::isfinite(w.g) || !std::isfinite(w.b))
        throw InvalidArgument("white weights must be finite");
    if (w.r < 0.0 || w.g < 0.0 || w.b < 0.0) throw InvalidArgument("white weights must be non-negative");
    if (std::abs(w.r + w.g + w.b - 1.0) > 1e-12) throw InvalidArgument("white weights must sum to 1");
}

/// Appends W = w.r*R + w.g*G + w.b*B to an RGB image.
inline SpectralImage synthesize_white(const RgbImage& rgb, const WhiteWeights& w = {}) {
    validate(w);
    Tensor out(rgb.height(), rgb.width(), kSpectralChannels);
    const Tensor& in = rgb.tensor();
    for (std::size_t i = 0; i < rgb.height(); ++i) {
        for (std::size_t j = 0; j < rgb.width(); ++j) {
            const double r = in(i, j, 0), g = in(i, j, 1), b = in(i, j, 2);
            out(i, j, 0) = r;
            out(i, j, 1) = g;
            out(i, j, 2) = b;
            out(i, j, 3) = w.r * r + w.g * g + w.b * b;
        }
    }
    return SpectralImage(std::move(out));
}

/// Appends a measured panchromatic plane (rows x cols x 1) to an RGB image.
inline SpectralImage attach_white(const RgbImage& rgb, const Tensor& pan) {
    if (pan.channels() != 1 || pan.rows() != rgb.height() || pan.cols() != rgb.width())
        throw ShapeError("panchromatic plane " + to_string(pan.shape()) + " does not match RGB image " +
                         to_string(rgb.shape()));
    Tensor out(rgb.height(), rgb.width(), kSpectralChannels);
    for (std::size_t i = 0; i < rgb.height(); ++i)
        for (std::size_t j = 0; j < rgb.width(); ++j) {
            for (std::size_t k = 0; k < kColorChannels; ++k) out(i, j, k) = rgb(i, j, k);
            out(i, j, 3) = pan(i, j, 0);
        }
    return SpectralImage(std::move(out));
}

inline RgbImage drop_white(const Tensor& x) {
    if (x.channels() != kSpectralChannels)
        throw ShapeError("drop_white expects 4 channels, got " + std::to_string(x.channels()));
    Tensor out(x.rows(), x.cols(), kColorChannels);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            for (std::size_t k = 0; k < kColorChannels; ++k) out(i, j, k) = x(i, j, k);
    return RgbImage(std::move(out));
}

inline RgbImage drop_white(const SpectralImage& x) { return drop_white(x.tensor()); }

}  // namespace rgbw
