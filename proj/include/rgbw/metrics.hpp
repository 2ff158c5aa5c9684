#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "rgbw/error.hpp"
#include "rgbw/image.hpp"
#include "rgbw/tensor.hpp"

namespace rgbw {

/// Mean of squared differences over every entry.
inline double mse(const Tensor& estimate, const Tensor& reference) {
    if (estimate.shape() != reference.shape())
        throw ShapeError("mse: " + to_string(estimate.shape()) + " vs " + to_string(reference.shape()));
    if (estimate.empty()) throw ShapeError("mse of empty tensors");
    auto a = estimate.values();
    auto b = reference.values();
    double acc = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double d = a[n] - b[n];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

inline double mse(const RgbImage& estimate, const RgbImage& reference) {
    return mse(estimate.tensor(), reference.tensor());
}

/// PSNR in dB; an exact match has no finite value and is flagged separately.
struct Psnr {
    double db = 0.0;
    bool exact_match = false;
};

inline Psnr psnr_from_mse(double mse_value, double peak = 1.0) {
    if (!(peak > 0.0)) throw InvalidArgument("psnr peak must be positive");
    if (mse_value == 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {10.0 * std::log10(peak * peak / mse_value), false};
}

inline Psnr psnr(const RgbImage& estimate, const RgbImage& reference, double peak = 1.0) {
    return psnr_from_mse(mse(estimate, reference), peak);
}

struct Summary {
    double mean = 0.0;
    double std_dev = 0.0;  // population (divisor n)
};

/// Mean and population standard deviation. Values are summed in sorted
/// order so the result does not depend on input order.
inline Summary aggregate(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("aggregate of an empty list");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double n = static_cast<double>(v.size());
    const double mean = sum / n;
    std::vector<double> sq(v.size());
    std::transform(v.begin(), v.end(), sq.begin(), [mean](double x) { return (x - mean) * (x - mean); });
    std::sort(sq.begin(), sq.end());
    double ss = 0.0;
    for (double x : sq) ss += x;
    return {mean, std::sqrt(ss / n)};
}

}  // namespace rgbw
