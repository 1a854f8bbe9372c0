#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace seqlab {

/// Dense row-major array of 64-bit floats. Rank 1 and 2 cover everything
/// the models need; a scalar is a rank-1 tensor of length 1.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::int64_t> shape);
    Tensor(std::vector<std::int64_t> shape, std::vector<double> data);

    static Tensor scalar(double v);
    static Tensor zeros(std::vector<std::int64_t> shape);
    static Tensor full(std::vector<std::int64_t> shape, double v);
    static Tensor row_major(std::int64_t rows, std::int64_t cols,
                            std::vector<double> data);

    const std::vector<std::int64_t>& shape() const { return shape_; }
    std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }
    std::int64_t rank() const { return static_cast<std::int64_t>(shape_.size()); }
    std::int64_t dim(std::size_t i) const { return shape_[i]; }

    // rows()/cols() follow the usual convention for rank <= 2.
    std::int64_t rows() const;
    std::int64_t cols() const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }
    double& at(std::int64_t r, std::int64_t c);
    double at(std::int64_t r, std::int64_t c) const;

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
    bool all_finite() const;

    void fill(double v);
    std::string shape_str() const;

private:
    std::vector<std::int64_t> shape_;
    std::vector<double> data_;
};

std::string shape_to_string(const std::vector<std::int64_t>& shape);

/// Throws ShapeError mentioning both shapes.
void require_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace seqlab
