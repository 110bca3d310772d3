#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace sfnet {

/// Raised when operand extents do not fit together.
class DimensionError : public std::runtime_error {
public:
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a requested configuration is not representable (bad strides,
/// bins larger than the input, indivisible extents, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when values themselves are broken: NaN/Inf where finiteness is
/// required, labels out of range, degenerate batches.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class DType : std::uint8_t { f32 = 0, f64 = 1 };

template <typename T>
constexpr DType dtype_of() {
    static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>,
                  "tensor scalar must be float or double");
    return std::is_same_v<T, float> ? DType::f32 : DType::f64;
}

/// Dense 4-D extents in (batch, channels, height, width) order.
struct Shape {
    int n = 0;
    int c = 0;
    int h = 0;
    int w = 0;

    std::int64_t numel() const {
        return std::int64_t(n) * c * h * w;
    }
    bool operator==(const Shape&) const = default;
    std::string str() const {
        return std::to_string(n) + "x" + std::to_string(c) + "x" + std::to_string(h) + "x" +
               std::to_string(w);
    }
};

/// Dense row-major NCHW array. Copies are cheap handles onto a shared value
/// buffer; every operation allocates a fresh buffer for its result, so a
/// tensor never changes after the producing call returns. The gradient
/// buffer, when attached by a Tape, is shared the same way so backward
/// closures can accumulate into it through any copy of the handle.
template <typename T>
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(Shape s)
        : shape_(s), data_(std::make_shared<std::vector<T>>(size_t(s.numel()), T(0))) {
        check_shape(s);
    }

    Tensor(Shape s, std::vector<T> values)
        : shape_(s), data_(std::make_shared<std::vector<T>>(std::move(values))) {
        check_shape(s);
        if (std::int64_t(data_->size()) != s.numel()) {
            throw DimensionError("tensor data length " + std::to_string(data_->size()) +
                                 " does not match shape " + s.str());
        }
    }

    static Tensor zeros(Shape s) { return Tensor(s); }

    static Tensor full(Shape s, T value) {
        Tensor t(s);
        for (auto& v : *t.data_) v = value;
        return t;
    }

    bool defined() const { return data_ != nullptr; }
    const Shape& shape() const { return shape_; }
    std::int64_t numel() const { return shape_.numel(); }
    DType dtype() const { return dtype_of<T>(); }

    std::span<const T> data() const { return {data_->data(), data_->size()}; }
    std::span<T> data() { return {data_->data(), data_->size()}; }

    bool has_grad() const { return grad_ != nullptr; }
    std::span<T> grad() { return {grad_->data(), grad_->size()}; }
    std::span<const T> grad() const { return {grad_->data(), grad_->size()}; }

    /// Attaches (or zeroes) the gradient buffer. Same length and dtype as data.
    void ensure_grad() {
        if (!grad_) {
            grad_ = std::make_shared<std::vector<T>>(data_->size(), T(0));
        } else {
            std::fill(grad_->begin(), grad_->end(), T(0));
        }
    }
    void drop_grad() { grad_.reset(); }

    std::int64_t offset(int n, int c, int h, int w) const {
        return ((std::int64_t(n) * shape_.c + c) * shape_.h + h) * shape_.w + w;
    }
    T at(int n, int c, int h, int w) const { return (*data_)[size_t(offset(n, c, h, w))]; }
    T& at(int n, int c, int h, int w) { return (*data_)[size_t(offset(n, c, h, w))]; }

    /// True when the two handles alias the same value buffer.
    bool same_buffer(const Tensor& o) const { return data_ == o.data_; }

private:
    static void check_shape(const Shape& s) {
        if (s.n < 0 || s.c < 0 || s.h < 0 || s.w < 0) {
            throw DimensionError("negative extent in shape " + s.str());
        }
    }

    Shape shape_;
    std::shared_ptr<std::vector<T>> data_;
    std::shared_ptr<std::vector<T>> grad_;
};

/// 2-channel displacement map, channel 0 = dx, channel 1 = dy, in pixel units
/// of the output grid it is applied on.
template <typename T>
using FlowField = Tensor<T>;

/// 1-channel per-pixel fusion weight, strictly inside (0,1).
template <typename T>
using GateMap = Tensor<T>;

/// Throws DataError unless every element of `t` is finite.
template <typename T>
void require_finite(const Tensor<T>& t, const char* op);

/// Linear tape of backward closures. Operations append one closure each in
/// execution order; backward() replays them in reverse. There is no graph
/// pruning: the caller decides which tensors carry gradient buffers, and
/// closures skip inputs without one.
template <typename T>
class Tape {
public:
    /// Marks a leaf (input or parameter) as requiring gradients.
    void watch(Tensor<T>& t) { t.ensure_grad(); }

    void record(std::function<void()> backward_fn) { nodes_.push_back(std::move(backward_fn)); }

    /// Runs all recorded closures in reverse order. The seed gradient must
    /// already be written into the output tensor's grad buffer.
    void backward() {
        for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
    }

    size_t size() const { return nodes_.size(); }
    void clear() { nodes_.clear(); }

private:
    std::vector<std::function<void()>> nodes_;
};

/// Named trainable tensor plus its SGD momentum buffer. The gradient
/// accumulator is the tensor's grad buffer; the optimizer zeroes it at the
/// start of every step via Tape::watch.
template <typename T>
struct Parameter {
    std::string name;
    Tensor<T> value;
    std::vector<T> momentum;

    Parameter(std::string n, Tensor<T> v)
        : name(std::move(n)), value(std::move(v)), momentum(size_t(value.numel()), T(0)) {}
};

}  // namespace sfnet
