#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rgbw/error.hpp"
#include "rgbw/image.hpp"
#include "rgbw/tensor.hpp"

namespace rgbw {

/// Direction of a finite difference.
enum class Axis : std::size_t { Horizontal = 0, Vertical = 1 };

/**
 * rows x cols x channels x 2 field of forward differences. Per pixel the
 * 2*channels values form one group; the isotropic TV norm takes the l2
 * norm of each group and sums over pixels. Also serves as the dual
 * variable of the primal-dual solver.
 */
class GradientField {
public:
    GradientField() = default;

    GradientField(std::size_t rows, std::size_t cols, std::size_t channels, double fill = 0.0)
        : shape_{rows, cols, channels}, data_(rows * cols * channels * 2, fill) {}

    explicit GradientField(const Shape3& s) : GradientField(s.rows, s.cols, s.channels) {}

    const Shape3& shape() const noexcept { return shape_; }
    std::size_t rows() const noexcept { return shape_.rows; }
    std::size_t cols() const noexcept { return shape_.cols; }
    std::size_t channels() const noexcept { return shape_.channels; }
    std::size_t group_size() const noexcept { return shape_.channels * 2; }

    double& operator()(std::size_t i, std::size_t j, std::size_t k, Axis d) noexcept {
        return data_[offset(i, j) + k * 2 + static_cast<std::size_t>(d)];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k, Axis d) const noexcept {
        return data_[offset(i, j) + k * 2 + static_cast<std::size_t>(d)];
    }

    std::span<double> group(std::size_t i, std::size_t j) noexcept { return {data_.data() + offset(i, j), group_size()}; }
    std::span<const double> group(std::size_t i, std::size_t j) const noexcept {
        return {data_.data() + offset(i, j), group_size()};
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    bool all_finite() const noexcept {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend bool operator==(const GradientField&, const GradientField&) = default;

private:
    std::size_t offset(std::size_t i, std::size_t j) const noexcept { return (i * shape_.cols + j) * group_size(); }

    Shape3 shape_;
    std::vector<double> data_;
};

inline double inner_product(const GradientField& a, const GradientField& b) {
    if (a.shape() != b.shape()) throw ShapeError("gradient field shapes differ");
    double acc = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t n = 0; n < av.size(); ++n) acc += av[n] * bv[n];
    return acc;
}

/// Forward differences with a zero difference on the last column / row.
inline void gradient_into(const Tensor& x, GradientField& g) {
    if (g.shape() != x.shape()) g = GradientField(x.shape());
    const std::size_t rows = x.rows(), cols = x.cols(), chans = x.channels();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            auto grp = g.group(i, j);
            auto here = x.pixel(i, j);
            for (std::size_t k = 0; k < chans; ++k) {
                grp[2 * k] = j + 1 < cols ? x(i, j + 1, k) - here[k] : 0.0;
                grp[2 * k + 1] = i + 1 < rows ? x(i + 1, j, k) - here[k] : 0.0;
            }
        }
    }
}

inline GradientField gradient(const Tensor& x) {
    GradientField g(x.shape());
    gradient_into(x, g);
    return g;
}

inline GradientField gradient(const SpectralImage& x) { return gradient(x.tensor()); }

/// Exact transpose of `gradient` (negative divergence). Entries on the last
/// column (horizontal) or last row (vertical) are outside the range of the
/// gradient and do not contribute.
inline void transpose_gradient_into(const GradientField& g, Tensor& out) {
    if (out.shape() != g.shape()) out = Tensor(g.rows(), g.cols(), g.channels());
    const std::size_t rows = g.rows(), cols = g.cols(), chans = g.channels();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            auto o = out.pixel(i, j);
            auto grp = g.group(i, j);
            for (std::size_t k = 0; k < chans; ++k) {
                double v = 0.0;
                if (j + 1 < cols) v -= grp[2 * k];
                if (j > 0) v += g(i, j - 1, k, Axis::Horizontal);
                if (i + 1 < rows) v -= grp[2 * k + 1];
                if (i > 0) v += g(i - 1, j, k, Axis::Vertical);
                o[k] = v;
            }
        }
    }
}

inline Tensor transpose_gradient(const GradientField& g) {
    Tensor out(g.rows(), g.cols(), g.channels());
    transpose_gradient_into(g, out);
    return out;
}

/// Sum over pixels of the l2 norm taken jointly over channels and directions.
inline double norm_221(const GradientField& g) {
    double total = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            double sq = 0.0;
            for (double v : g.group(i, j)) sq += v * v;
            total += std::sqrt(sq);
        }
    return total;
}

/**
 * Power-iteration estimate of the spectral norm of the gradient operator on
 * a rows x cols image. The operator acts channel by channel, so its norm
 * does not depend on the channel count and a single plane is iterated.
 *
 * The returned value sqrt(|B v_n| / |v_n|), with B = L^T L and v_n = B^n v_0,
 * never decreases with `iterations` and is bounded by sqrt(8).
 */
inline double operator_norm_estimate(std::size_t rows, std::size_t cols, int iterations, std::uint64_t seed = 0x5eed) {
    if (iterations < 1) throw InvalidArgument("operator_norm_estimate needs at least one iteration");
    if (rows == 0 || cols == 0) throw InvalidArgument("image dimensions must be at least 1");
    if (rows == 1 && cols == 1) return 0.0;

    Tensor v(rows, cols, 1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double& e : v.values()) e = uni(rng);

    GradientField g(v.shape());
    Tensor w(rows, cols, 1);
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double vn = frobenius_norm(v);
        if (vn == 0.0) return 0.0;
        for (double& e : v.values()) e /= vn;
        gradient_into(v, g);
        transpose_gradient_into(g, w);
        estimate = std::sqrt(frobenius_norm(w));
        std::swap(v, w);
    }
    return estimate;
}

}  // namespace rgbw
