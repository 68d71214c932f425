#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mdq {

// Dimensions of a dense row-major array, outermost first.
using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major array of binary64 values. All network math runs on this
// type; binary32 appears only at the dataset serialization boundary.
class Array {
public:
    Array() = default;
    explicit Array(Shape shape);
    Array(Shape shape, std::vector<double> values);

    static Array full(Shape shape, double value);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return values_.size(); }
    std::size_t dim(std::size_t axis) const;

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool same_shape(const Array& other) const { return shape_ == other.shape_; }

    // Throws numeric_error naming `context` when any element is NaN or
    // infinite.
    void check_finite(const char* context) const;

private:
    Shape shape_;
    std::vector<double> values_;
};

} // namespace mdq
