#include "citegraph/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace citegraph {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void Matrix::set_row(std::size_t r, std::span<const double> values) {
  std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Matrix::all_finite() const { return citegraph::all_finite(data_); }

namespace {
std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}
}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: shape mismatch " + shape_str(a) + " * " + shape_str(b));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

Vector matvec(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) {
    throw std::invalid_argument("matvec: shape mismatch " + shape_str(m) + " * " +
                                std::to_string(x.size()) + "-vector");
  }
  Vector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = dot(m.row(r), x);
  return out;
}

void matvec_transpose_add(const Matrix& m, std::span<const double> y, std::span<double> out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    axpy(yr, m.row(r), out);
  }
}

void add_outer(Matrix& g, std::span<const double> dy, std::span<const double> x) {
  for (std::size_t r = 0; r < g.rows(); ++r) axpy(dy[r], x, g.row(r));
}

Vector concat(std::span<const double> a, std::span<const double> b) {
  Vector out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector relu(std::span<const double> x) {
  Vector out(x.begin(), x.end());
  relu_inplace(out);
  return out;
}

void relu_inplace(std::span<double> x) {
  for (double& v : x) v = v > 0.0 ? v : 0.0;
}

Vector relu_derivative(std::span<const double> x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? 1.0 : 0.0;
  return out;
}

void relu_backward(std::span<const double> pre, std::span<const double> dy, std::span<double> dx) {
  for (std::size_t i = 0; i < pre.size(); ++i) dx[i] = pre[i] > 0.0 ? dy[i] : 0.0;
}

double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return std::sqrt(s);
}

Vector l2_normalize(std::span<const double> x, double* norm_out) {
  const double n = l2_norm(x);
  if (norm_out != nullptr) *norm_out = n;
  Vector out(x.begin(), x.end());
  if (n == 0.0) return out;
  for (double& v : out) v /= n;
  return out;
}

Vector l2_normalize_backward(std::span<const double> y, double norm, std::span<const double> dy) {
  Vector dx(dy.begin(), dy.end());
  if (norm == 0.0) return dx;  // forward was the identity
  const double proj = dot(y, dy);
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = (dy[i] - y[i] * proj) / norm;
  return dx;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_distance: dimension mismatch " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double d = 1.0 - dot(a, b) / (na * nb);
  return std::clamp(d, 0.0, 2.0);
}

Vector hadamard(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hadamard: dimension mismatch " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

namespace {
double tree_sum(const double* a, std::size_t n) {
  if (n == 1) return a[0];
  if (n == 2) return a[0] + a[1];
  const std::size_t h = n / 2;
  return tree_sum(a, h) + tree_sum(a + h, n - h);
}
}  // namespace

double stable_multiset_sum(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return tree_sum(values.data(), values.size());
}

void glorot_init(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : m.data()) v = (2.0 * rng.uniform() - 1.0) * limit;
}

bool all_finite(std::span<const double> x) {
  for (const double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace citegraph
