#pragma once

// Dense row-major real tensor. The whole library moves data around as
// RealArray: network activations are (batch, seq_len, features), conv
// weights are (kernel, in, out), dense weights are (in, out).

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "risae/core/errors.hpp"

namespace risae {

class RealArray {
public:
    RealArray() = default;

    explicit RealArray(std::vector<std::size_t> shape)
        : shape_(std::move(shape)), data_(product(shape_), 0.0) {}

    RealArray(std::vector<std::size_t> shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != product(shape_)) {
            throw DimensionError("RealArray: data length " + std::to_string(data_.size()) +
                                 " does not match shape product " + std::to_string(product(shape_)));
        }
    }

    static RealArray zeros(std::vector<std::size_t> shape) { return RealArray(std::move(shape)); }

    static RealArray full(std::vector<std::size_t> shape, double value) {
        RealArray a(std::move(shape));
        std::fill(a.data_.begin(), a.data_.end(), value);
        return a;
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    // 2-D / 3-D accessors for the common layouts.
    double& at2(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double at2(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    double& at3(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double at3(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    /// Reinterpret with a new shape of identical element count.
    RealArray reshaped(std::vector<std::size_t> new_shape) const {
        if (product(new_shape) != data_.size()) {
            throw DimensionError("reshape: element count mismatch");
        }
        return RealArray(std::move(new_shape), data_);
    }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    std::string shape_str() const {
        std::ostringstream os;
        os << "(";
        for (std::size_t i = 0; i < shape_.size(); ++i) os << (i ? "," : "") << shape_[i];
        os << ")";
        return os.str();
    }

    static std::size_t product(const std::vector<std::size_t>& s) {
        std::size_t p = 1;
        for (std::size_t d : s) p *= d;
        return p;
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

/// Throws unless `a` has the given rank, naming the array for diagnostics.
inline void require_rank(const RealArray& a, std::size_t rank, const char* who) {
    if (a.rank() != rank) {
        throw DimensionError(std::string(who) + ": expected rank " + std::to_string(rank) +
                             " input, got shape " + a.shape_str());
    }
}

/// Throws unless axis `axis` of `a` has extent `want`.
inline void require_dim(const RealArray& a, std::size_t axis, std::size_t want, const char* who) {
    if (a.rank() <= axis || a.dim(axis) != want) {
        throw DimensionError(std::string(who) + ": axis " + std::to_string(axis) + " must be " +
                             std::to_string(want) + ", got shape " + a.shape_str());
    }
}

} // namespace risae
