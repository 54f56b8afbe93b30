#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "hessquot/errors.hpp"

namespace hessquot {

inline constexpr int kMaxDim = 8;

/// Eigenvalue vector in R^n, 2 <= n <= 8. Fixed capacity, no allocation.
struct Lambda {
  std::array<double, kMaxDim> v{};
  int n = 0;

  Lambda() = default;
  Lambda(std::initializer_list<double> init) {
    n = static_cast<int>(init.size());
    int i = 0;
    for (double x : init) v[i++] = x;
  }
  static Lambda zeros(int n_) {
    Lambda l;
    l.n = n_;
    return l;
  }
  static Lambda ones(int n_) {
    Lambda l;
    l.n = n_;
    for (int i = 0; i < n_; ++i) l.v[i] = 1.0;
    return l;
  }
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  bool finite() const {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(v[i])) return false;
    return true;
  }
  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
    return m;
  }
};

/// Symmetric n x n matrix in an orthonormal frame; lower triangle stored
/// packed so A_ij == A_ji holds exactly.
struct SymMat {
  std::array<double, kMaxDim*(kMaxDim + 1) / 2> a{};
  int n = 0;

  SymMat() = default;
  explicit SymMat(int n_) : n(n_) {}

  static int idx(int i, int j) {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }
  double operator()(int i, int j) const { return a[idx(i, j)]; }
  double& at(int i, int j) { return a[idx(i, j)]; }

  static SymMat identity(int n_) {
    SymMat m(n_);
    for (int i = 0; i < n_; ++i) m.at(i, i) = 1.0;
    return m;
  }
  static SymMat diag(const Lambda& d) {
    SymMat m(d.n);
    for (int i = 0; i < d.n; ++i) m.at(i, i) = d[i];
    return m;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }
  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }
  double frobenius() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
  }

  SymMat& operator+=(const SymMat& o) {
    for (int i = 0; i < n * (n + 1) / 2; ++i) a[i] += o.a[i];
    return *this;
  }
  SymMat& operator*=(double s) {
    for (int i = 0; i < n * (n + 1) / 2; ++i) a[i] *= s;
    return *this;
  }
  friend SymMat operator+(SymMat l, const SymMat& r) { return l += r; }
  friend SymMat operator*(double s, SymMat m) { return m *= s; }
  friend SymMat operator-(SymMat l, const SymMat& r) {
    for (int i = 0; i < l.n * (l.n + 1) / 2; ++i) l.a[i] -= r.a[i];
    return l;
  }
};

/// Column-major orthogonal matrix of eigenvectors (column j pairs with
/// eigenvalue j).
struct FrameMat {
  std::array<double, kMaxDim * kMaxDim> q{};
  int n = 0;

  double operator()(int i, int j) const { return q[j * kMaxDim + i]; }
  double& at(int i, int j) { return q[j * kMaxDim + i]; }
  static FrameMat identity(int n_) {
    FrameMat f;
    f.n = n_;
    for (int i = 0; i < n_; ++i) f.at(i, i) = 1.0;
    return f;
  }
};

struct SpectralDecomp {
  Lambda eigenvalues;  // sorted ascending
  FrameMat eigenvectors;

  /// max_ij |(Q L Q^T - A)_ij|
  double reconstruction_error(const SymMat& A) const;
  /// max_ij |(Q^T Q - I)_ij|
  double orthogonality_error() const;
};

/// Cyclic Jacobi diagonalization. Deterministic sweep order (p<q row-major),
/// iterated until the off-diagonal Frobenius norm drops below 1e-14 * ||A||_F,
/// so results are bit-reproducible for a fixed input.
SpectralDecomp jacobi_eigen(const SymMat& A);

/// Q L Q^T with the decomposition's own frame.
SymMat reassemble(const SpectralDecomp& d, const Lambda& diag_values);

/// Q^T V Q: push a symmetric matrix into the eigenframe.
SymMat to_eigenframe(const FrameMat& Q, const SymMat& V);

}  // namespace hessquot
