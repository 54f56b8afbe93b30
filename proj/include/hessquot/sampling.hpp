#pragma once

#include <stdexcept>

#include "hessquot/rng.hpp"
#include "hessquot/symfunc.hpp"

namespace hessquot {

/// Rejection sampling on U(-1,3)^n, which straddles the cone boundary.
inline Lambda random_gamma_k(Rng& rng, int n, int k) {
  for (int tries = 0; tries < 1000000; ++tries) {
    Lambda l;
    l.n = n;
    for (int i = 0; i < n; ++i) l[i] = rng.uniform(-1.0, 3.0);
    if (in_gamma_k(l, k)) return l;
  }
  throw std::runtime_error("random_gamma_k: rejection sampling failed");
}

/// Gram-Schmidt on a Gaussian matrix; retries on near-degenerate draws.
inline FrameMat random_rotation(Rng& rng, int n) {
  for (;;) {
    FrameMat Q;
    Q.n = n;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      double col[kMaxDim];
      for (int i = 0; i < n; ++i) col[i] = rng.normal();
      for (int p = 0; p < j; ++p) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += col[i] * Q(i, p);
        for (int i = 0; i < n; ++i) col[i] -= dot * Q(i, p);
      }
      double nrm = 0.0;
      for (int i = 0; i < n; ++i) nrm += col[i] * col[i];
      nrm = std::sqrt(nrm);
      if (nrm < 1e-8) {
        ok = false;
        break;
      }
      for (int i = 0; i < n; ++i) Q.at(i, j) = col[i] / nrm;
    }
    if (ok) return Q;
  }
}

inline SymMat conjugate_diag(const FrameMat& Q, const Lambda& d) {
  SpectralDecomp sd;
  sd.eigenvalues = d;
  sd.eigenvectors = Q;
  return reassemble(sd, d);
}

inline SymMat random_gamma_k_sym(Rng& rng, int n, int k) {
  const Lambda lam = random_gamma_k(rng, n, k);
  return conjugate_diag(random_rotation(rng, n), lam);
}

inline SymMat random_symmetric(Rng& rng, int n, double scale) {
  SymMat V(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) V.at(i, j) = scale * rng.normal();
  return V;
}

/// Unit Frobenius norm, for absolute-tolerance derivative checks.
inline SymMat random_direction(Rng& rng, int n) {
  SymMat V = random_symmetric(rng, n, 1.0);
  const double f = V.frobenius();
  V *= 1.0 / (f > 1e-12 ? f : 1.0);
  return V;
}

}  // namespace hessquot
