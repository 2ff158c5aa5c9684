#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rgbw/error.hpp"

namespace rgbw {

struct Shape3 {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t channels = 0;

    std::size_t pixels() const noexcept { return rows * cols; }
    std::size_t size() const noexcept { return rows * cols * channels; }

    friend bool operator==(const Shape3&, const Shape3&) = default;
};

inline std::string to_string(const Shape3& s) {
    std::ostringstream os;
    os << s.rows << "x" << s.cols << "x" << s.channels;
    return os.str();
}

/**
 * Dense rows x cols x channels array, row-major with the channel index
 * varying fastest. This is also the on-disk payload order of the tensor
 * container.
 */
template <class T>
class Tensor3 {
public:
    using value_type = T;

    Tensor3() = default;

    Tensor3(std::size_t rows, std::size_t cols, std::size_t channels, T fill = T{})
        : shape_{rows, cols, channels}, data_(rows * cols * channels, fill) {}

    Tensor3(Shape3 shape, std::vector<T> data) : shape_(shape), data_(std::move(data)) {
        if (data_.size() != shape_.size())
            throw ShapeError("tensor payload has " + std::to_string(data_.size()) +
                             " values, shape " + to_string(shape_) + " needs " +
                             std::to_string(shape_.size()));
    }

    const Shape3& shape() const noexcept { return shape_; }
    std::size_t rows() const noexcept { return shape_.rows; }
    std::size_t cols() const noexcept { return shape_.cols; }
    std::size_t channels() const noexcept { return shape_.channels; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return (i * shape_.cols + j) * shape_.channels + k;
    }

    T& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept { return data_[index(i, j, k)]; }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return data_[index(i, j, k)];
    }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    /// Values of pixel (i, j), one per channel.
    std::span<T> pixel(std::size_t i, std::size_t j) noexcept {
        return {data_.data() + index(i, j, 0), shape_.channels};
    }
    std::span<const T> pixel(std::size_t i, std::size_t j) const noexcept {
        return {data_.data() + index(i, j, 0), shape_.channels};
    }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
    }

    friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
    Shape3 shape_;
    std::vector<T> data_;
};

using Tensor = Tensor3<double>;

/// Frobenius inner product; shapes must agree.
template <class T>
T inner_product(const Tensor3<T>& a, const Tensor3<T>& b) {
    if (a.shape() != b.shape())
        throw ShapeError("inner product of " + to_string(a.shape()) + " and " + to_string(b.shape()));
    T acc{};
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t n = 0; n < av.size(); ++n) acc += av[n] * bv[n];
    return acc;
}

template <class T>
T frobenius_norm(const Tensor3<T>& a) {
    return std::sqrt(inner_product(a, a));
}

}  // namespace rgbw
