#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace binrec {

using Vector = std::vector<double>;

struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IterationLimitError : std::runtime_error {
  explicit IterationLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverInconsistencyError : std::runtime_error {
  explicit SolverInconsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows <= 0 || cols <= 0) throw InputError("Matrix dimensions must be positive");
  }
  Matrix(int rows, int cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows <= 0 || cols <= 0) throw InputError("Matrix dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(rows) * cols)
      throw InputError("Matrix entry count does not match dimensions");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Vector column(int j) const {
    Vector c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Vector row(int i) const {
    Vector r(data_.begin() + static_cast<std::size_t>(i) * cols_,
             data_.begin() + static_cast<std::size_t>(i + 1) * cols_);
    return r;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

inline Vector matvec(const Matrix& a, const Vector& x) {
  if (static_cast<int>(x.size()) != a.cols()) throw InputError("matvec: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw InputError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace binrec
