#include "hessquot/symmat.hpp"

#include <algorithm>
#include <cmath>

namespace hessquot {

namespace {

double off_diagonal_norm(const SymMat& A) {
  double s = 0.0;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < i; ++j) s += 2.0 * A(i, j) * A(i, j);
  return std::sqrt(s);
}

}  // namespace

SpectralDecomp jacobi_eigen(const SymMat& A) {
  const int n = A.n;
  // Work on a full dense copy; rotations are applied symmetrically.
  double w[kMaxDim][kMaxDim] = {};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[i][j] = A(i, j);
  FrameMat Q = FrameMat::identity(n);

  const double anorm = A.frobenius();
  const double stop = 1e-14 * anorm;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) off += 2.0 * w[i][j] * w[i][j];
    if (std::sqrt(off) <= stop) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = w[p][q];
        if (apq == 0.0) continue;
        const double theta = (w[q][q] - w[p][p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = w[p][p], aqq = w[q][q];
        w[p][p] = app - t * apq;
        w[q][q] = aqq + t * apq;
        w[p][q] = w[q][p] = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = w[r][p], arq = w[r][q];
            w[r][p] = w[p][r] = arp - s * (arq + tau * arp);
            w[r][q] = w[q][r] = arq + s * (arp - tau * arq);
          }
          const double qrp = Q(r, p), qrq = Q(r, q);
          Q.at(r, p) = qrp - s * (qrq + tau * qrp);
          Q.at(r, q) = qrq + s * (qrp - tau * qrq);
        }
      }
    }
  }

  // Sort eigenvalues ascending; stable order keeps ties deterministic.
  int perm[kMaxDim];
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::stable_sort(perm, perm + n,
                   [&](int a, int b) { return w[a][a] < w[b][b]; });

  SpectralDecomp d;
  d.eigenvalues.n = n;
  d.eigenvectors.n = n;
  for (int j = 0; j < n; ++j) {
    d.eigenvalues[j] = w[perm[j]][perm[j]];
    for (int i = 0; i < n; ++i) d.eigenvectors.at(i, j) = Q(i, perm[j]);
  }
  return d;
}

double SpectralDecomp::reconstruction_error(const SymMat& A) const {
  const int n = eigenvalues.n;
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += eigenvectors(i, k) * eigenvalues[k] * eigenvectors(j, k);
      err = std::max(err, std::abs(s - A(i, j)));
    }
  }
  return err;
}

double SpectralDecomp::orthogonality_error() const {
  const int n = eigenvalues.n;
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += eigenvectors(k, i) * eigenvectors(k, j);
      err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return err;
}

SymMat reassemble(const SpectralDecomp& d, const Lambda& diag_values) {
  const int n = d.eigenvalues.n;
  SymMat out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += d.eigenvectors(i, k) * diag_values[k] * d.eigenvectors(j, k);
      out.at(i, j) = s;
    }
  }
  return out;
}

SymMat to_eigenframe(const FrameMat& Q, const SymMat& V) {
  const int n = Q.n;
  SymMat out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int p = 0; p < n; ++p) {
        double row = 0.0;
        for (int r = 0; r < n; ++r) row += V(p, r) * Q(r, j);
        s += Q(p, i) * row;
      }
      out.at(i, j) = s;
    }
  }
  return out;
}

}  // namespace hessquot
