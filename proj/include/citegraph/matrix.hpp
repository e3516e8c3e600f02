#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "citegraph/rng.hpp"

namespace citegraph {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector row_copy(std::size_t r) const { return Vector(row(r).begin(), row(r).end()); }
  void set_row(std::size_t r, std::span<const double> values);

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double value);
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// --- elementary operations -------------------------------------------------

// Standard product; throws std::invalid_argument naming both shapes on
// mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

// y = M * x  (x.size() == M.cols()).
Vector matvec(const Matrix& m, std::span<const double> x);

// out += M^T * y  (the adjoint of matvec; used in backward passes).
void matvec_transpose_add(const Matrix& m, std::span<const double> y, std::span<double> out);

// G += dy * x^T  (outer-product gradient accumulation).
void add_outer(Matrix& g, std::span<const double> dy, std::span<const double> x);

// a's entries first, then b's.
Vector concat(std::span<const double> a, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);  // y += alpha*x

// Elementwise max(x, 0); the model nonlinearity.
Vector relu(std::span<const double> x);
void relu_inplace(std::span<double> x);
// Derivative convention: 0 at the kink.
Vector relu_derivative(std::span<const double> x);
// dx[i] = dy[i] * (pre[i] > 0); pre is the pre-activation.
void relu_backward(std::span<const double> pre, std::span<const double> dy, std::span<double> dx);

// Scales to unit Euclidean norm; the zero vector is returned unchanged.
// Writes the input norm to *norm_out when non-null (0 marks the bypass).
Vector l2_normalize(std::span<const double> x, double* norm_out = nullptr);
// Pullback of l2_normalize: y is the normalized output, norm the input norm
// (norm == 0 means the identity bypass was taken).
Vector l2_normalize_backward(std::span<const double> y, double norm, std::span<const double> dy);

// 1 - cos(a, b), clamped to [0, 2]; returns 1 if either vector has zero norm.
double cosine_distance(std::span<const double> a, std::span<const double> b);

// Elementwise product.
Vector hadamard(std::span<const double> a, std::span<const double> b);

double l2_norm(std::span<const double> x);

// Order-independent sum: values are sorted, then reduced pairwise. The result
// depends only on the multiset of inputs, and summing 2^k copies of v yields
// exactly 2^k * v. Used where bitwise permutation invariance is required.
double stable_multiset_sum(std::vector<double> values);

// Glorot-uniform initialization: entries uniform in +-sqrt(6/(fan_in+fan_out)).
void glorot_init(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng);

bool all_finite(std::span<const double> x);

}  // namespace citegraph
