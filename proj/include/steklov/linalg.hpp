#pragma once

// Small dense linear algebra: enough for Schur complements and symmetric
// eigenproblems of a few hundred rows.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steklov/errors.hpp"

namespace steklov {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<double> apply(std::span<const double> x) const {
    assert(x.size() == cols_);
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols_ == b.rows_);
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Cholesky factor L (lower) of a symmetric positive-definite matrix.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& a) : l_(a.rows(), a.rows()) {
    if (a.rows() != a.cols()) throw std::invalid_argument("Cholesky: matrix not square");
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
      double d = a(j, j);
      for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
      if (!(d > 0.0)) throw InternalFault("Cholesky: matrix not positive definite");
      const double ljj = std::sqrt(d);
      l_(j, j) = ljj;
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = a(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
        l_(i, j) = s / ljj;
      }
    }
  }

  std::vector<double> solve(std::span<const double> b) const {
    const std::size_t n = l_.rows();
    std::vector<double> y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < i; ++k) y[i] -= l_(i, k) * y[k];
      y[i] /= l_(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t k = i + 1; k < n; ++k) y[i] -= l_(k, i) * y[k];
      y[i] /= l_(i, i);
    }
    return y;
  }

  Matrix solve(const Matrix& b) const {
    Matrix x(b.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
      auto col = solve(b.column(j));
      for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
    }
    return x;
  }

 private:
  Matrix l_;
};

/// LU with partial pivoting. `min_pivot_ratio()` is |smallest pivot| / |largest entry|.
class PivotedLu {
 public:
  explicit PivotedLu(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (lu_.rows() != lu_.cols()) throw std::invalid_argument("LU: matrix not square");
    const std::size_t n = lu_.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(lu_(i, j)));
    min_pivot_ = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
      }
      const double pivot = lu_(k, k);
      min_pivot_ = std::min(min_pivot_, std::abs(pivot));
      if (pivot == 0.0) continue;
      for (std::size_t i = k + 1; i < n; ++i) {
        const double m = lu_(i, k) / pivot;
        lu_(i, k) = m;
        if (m == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
      }
    }
    ratio_ = scale > 0.0 ? min_pivot_ / scale : 0.0;
  }

  double min_pivot_ratio() const noexcept { return ratio_; }

  std::vector<double> solve(std::span<const double> b) const {
    const std::size_t n = lu_.rows();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[perm_[i]];
      for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * y[k];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= lu_(i, k) * y[k];
      y[i] = s / lu_(i, i);
    }
    return y;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double min_pivot_ = 0.0;
  double ratio_ = 0.0;
};

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a dense symmetric matrix. Only the upper
/// triangle is read. Stops once the off-diagonal Frobenius norm drops below
/// `offdiag_tol * ||A||_F`; throws ConvergenceError after `max_sweeps`.
inline SymmetricEigen jacobi_eigen(const Matrix& input, double offdiag_tol = 1e-13,
                                   int max_sweeps = 100) {
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigen: matrix not square");
  const std::size_t n = input.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = input(i, j);
  Matrix v = Matrix::identity(n);

  const double scale = std::max(a.frobenius(), std::numeric_limits<double>::min());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > offdiag_tol * scale) {
    if (sweep == max_sweeps)
      throw ConvergenceError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Rotation annihilating a(p,q); theta chosen so |t| <= 1.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    // Sign convention: the entry of largest magnitude (first on ties) is positive.
    std::size_t lead = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, src)) > std::abs(v(lead, src)) + 1e-12) lead = i;
    const double sign = v(lead, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

/// Smallest singular value, from the eigenvalues of A^T A.
inline double smallest_singular_value(const Matrix& a) {
  const Matrix ata = a.transpose() * a;
  const auto eig = jacobi_eigen(ata, 1e-14, 200);
  return std::sqrt(std::max(0.0, eig.values.front()));
}

}  // namespace steklov
