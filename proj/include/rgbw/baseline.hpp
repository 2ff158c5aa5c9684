#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rgbw/cfa.hpp"
#include "rgbw/error.hpp"
#include "rgbw/image.hpp"
#include "rgbw/tensor.hpp"

namespace rgbw {

/// Separable weight window used for normalized convolution.
struct InterpolationKernel {
    enum class Profile { Tent, Gaussian };

    int radius = 1;
    Profile profile = Profile::Tent;
    double gaussian_sigma = 1.0;  // only read for the Gaussian profile

    static InterpolationKernel tent(int radius) { return {radius, Profile::Tent, 1.0}; }
    static InterpolationKernel gaussian(int radius, double sigma) { return {radius, Profile::Gaussian, sigma}; }

    /// Bilinear tent sized to the pattern period.
    static InterpolationKernel for_pattern(const CfaPattern& p) {
        return tent(static_cast<int>(std::max(p.tile_height(), p.tile_width())));
    }

    /// 1-D weights for offsets -radius..radius. Tent: 1 - |d| / (radius + 1).
    std::vector<double> weights() const {
        if (radius < 1) throw InvalidArgument("kernel radius must be at least 1");
        if (profile == Profile::Gaussian && !(gaussian_sigma > 0.0))
            throw InvalidArgument("gaussian kernel sigma must be positive");
        std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
        for (int d = -radius; d <= radius; ++d) {
            const double ad = std::abs(d);
            w[static_cast<std::size_t>(d + radius)] =
                profile == Profile::Tent ? 1.0 - ad / (radius + 1.0)
                                         : std::exp(-ad * ad / (2.0 * gaussian_sigma * gaussian_sigma));
        }
        return w;
    }
};

namespace detail {

/// Separable correlation of a single plane with w (x) w, truncated at the borders.
inline Tensor separable_filter(const Tensor& in, const std::vector<double>& w) {
    const auto rows = static_cast<std::ptrdiff_t>(in.rows());
    const auto cols = static_cast<std::ptrdiff_t>(in.cols());
    const auto r = static_cast<std::ptrdiff_t>(w.size() / 2);
    Tensor tmp(in.rows(), in.cols(), 1);
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::ptrdiff_t j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (std::ptrdiff_t d = std::max(-r, -j); d <= std::min(r, cols - 1 - j); ++d)
                acc += w[static_cast<std::size_t>(d + r)] * in(i, j + d, 0);
            tmp(i, j, 0) = acc;
        }
    Tensor out(in.rows(), in.cols(), 1);
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::ptrdiff_t j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (std::ptrdiff_t d = std::max(-r, -i); d <= std::min(r, rows - 1 - i); ++d)
                acc += w[static_cast<std::size_t>(d + r)] * tmp(i + d, j, 0);
            out(i, j, 0) = acc;
        }
    return out;
}

}  // namespace detail

/**
 * Fills the pixels outside `support` (a 0/1 plane) by normalized
 * convolution, (K * (support . y)) / (K * support); observed samples are
 * kept as they are. Pixels with no support inside the window take the value
 * of the nearest support pixel (Euclidean distance, first in scan order on
 * ties).
 */
inline Tensor interpolate_sparse(const Tensor& y, const Tensor& support, const InterpolationKernel& kernel) {
    if (y.channels() != 1 || support.channels() != 1) throw ShapeError("interpolate_sparse works on single planes");
    if (y.shape() != support.shape()) throw ShapeError("samples and support differ in shape");

    std::vector<std::pair<std::size_t, std::size_t>> sites;
    Tensor masked(y.rows(), y.cols(), 1);
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j)
            if (support(i, j, 0) != 0.0) {
                masked(i, j, 0) = support(i, j, 0) * y(i, j, 0);
                sites.emplace_back(i, j);
            }
    if (sites.empty()) throw InvalidArgument("interpolate_sparse: support is empty");

    const auto w = kernel.weights();
    const Tensor num = detail::separable_filter(masked, w);
    const Tensor den = detail::separable_filter(support, w);

    Tensor out(y.rows(), y.cols(), 1);
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j) {
            if (support(i, j, 0) != 0.0) {
                out(i, j, 0) = y(i, j, 0);
                continue;
            }
            if (den(i, j, 0) > 0.0) {
                out(i, j, 0) = num(i, j, 0) / den(i, j, 0);
                continue;
            }
            double best = std::numeric_limits<double>::infinity();
            for (auto [si, sj] : sites) {
                const double di = static_cast<double>(si) - static_cast<double>(i);
                const double dj = static_cast<double>(sj) - static_cast<double>(j);
                const double d2 = di * di + dj * dj;
                if (d2 < best) {
                    best = d2;
                    out(i, j, 0) = y(si, sj, 0);
                }
            }
        }
    return out;
}

/// Lower bound on the mean chroma in the ratio fusion.
inline constexpr double kDefaultFusionEpsilon = 1e-2;

/**
 * Interpolation baseline: a full-resolution luminance from the W samples,
 * low-detail colour planes from the R, G and B samples, and ratio fusion
 *   X_k = C_k * Lum / max(mean(C_R, C_G, C_B), epsilon).
 * Constant scenes at or above epsilon are reproduced exactly.
 */
inline RgbImage baseline_demosaic(const RawImage& raw, const CfaPattern& pattern, const InterpolationKernel& kernel,
                                  double epsilon = kDefaultFusionEpsilon) {
    for (Channel c : {Channel::R, Channel::G, Channel::B, Channel::W})
        if (!pattern.has(c))
            throw InvalidArgument("baseline needs R, G, B and W filters; pattern '" + pattern.name() +
                                  "' lacks one");
    if (!(epsilon > 0.0)) throw InvalidArgument("fusion epsilon must be positive");

    const CfaMask mask = expand_mask(pattern, raw.height(), raw.width());
    const Tensor& y = raw.tensor();
    const Tensor lum = interpolate_sparse(y, mask.support(Channel::W), kernel);
    Tensor color[kColorChannels] = {
        interpolate_sparse(y, mask.support(Channel::R), kernel),
        interpolate_sparse(y, mask.support(Channel::G), kernel),
        interpolate_sparse(y, mask.support(Channel::B), kernel),
    };

    Tensor out(raw.height(), raw.width(), kColorChannels);
    for (std::size_t i = 0; i < raw.height(); ++i)
        for (std::size_t j = 0; j < raw.width(); ++j) {
            const double mean = (color[0](i, j, 0) + color[1](i, j, 0) + color[2](i, j, 0)) / 3.0;
            const double ratio = lum(i, j, 0) / std::max(mean, epsilon);
            for (std::size_t k = 0; k < kColorChannels; ++k) out(i, j, k) = color[k](i, j, 0) * ratio;
        }
    return RgbImage(std::move(out));
}

inline RgbImage baseline_demosaic(const RawImage& raw, const CfaPattern& pattern) {
    return baseline_demosaic(raw, pattern, InterpolationKernel::for_pattern(pattern));
}

}  // namespace rgbw
