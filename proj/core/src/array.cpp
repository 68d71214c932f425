#include "mdq/array.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mdq/errors.hpp"

namespace mdq {

std::size_t shape_size(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) {
        n *= d;
    }
    return n;
}

std::string shape_string(const Shape& shape) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        out << (i == 0 ? "" : ", ") << shape[i];
    }
    out << "]";
    return out.str();
}

Array::Array(Shape shape) : shape_(std::move(shape)), values_(shape_size(shape_), 0.0) {}

Array::Array(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != shape_size(shape_)) {
        throw std::invalid_argument("Array: " + std::to_string(values_.size()) +
                                    " values do not fill shape " + shape_string(shape_));
    }
}

Array Array::full(Shape shape, double value) {
    Array out(std::move(shape));
    for (double& v : out.values_) {
        v = value;
    }
    return out;
}

std::size_t Array::dim(std::size_t axis) const {
    if (axis >= shape_.size()) {
        throw std::invalid_argument("Array: axis " + std::to_string(axis) +
                                    " out of range for shape " + shape_string(shape_));
    }
    return shape_[axis];
}

void Array::check_finite(const char* context) const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw numeric_error(std::string(context) + ": non-finite value at flat index " +
                                std::to_string(i));
        }
    }
}

} // namespace mdq
