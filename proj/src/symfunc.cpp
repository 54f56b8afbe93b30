#include "hessquot/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hessquot/errors.hpp"

namespace hessquot {

namespace {

// sigma_order of lambda with up to two entries deleted (skip < 0: keep all).
double sigma_deleted(const Lambda& lambda, int order, int skip_a, int skip_b) {
  if (order < 0) return 0.0;
  if (order == 0) return 1.0;
  double e[kMaxDim + 1] = {1.0};
  int cnt = 0;
  for (int i = 0; i < lambda.n; ++i) {
    if (i == skip_a || i == skip_b) continue;
    ++cnt;
    const int top = std::min(order, cnt);
    for (int j = top; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  }
  return order <= cnt ? e[order] : 0.0;
}

void require_gamma_k(const Lambda& lambda, int k, const char* where) {
  for (int j = 1; j <= k; ++j) {
    const double sj = sigma_deleted(lambda, j, -1, -1);
    if (!(sj > 0.0)) {
      std::ostringstream msg;
      msg << where << ": lambda(U) outside Gamma_" << k << " (sigma_" << j
          << " = " << sj << ")";
      throw ConeViolation(msg.str());
    }
  }
}

}  // namespace

void QuotientSpec::validate() const {
  std::ostringstream msg;
  if (n < 2 || n > kMaxDim) {
    msg << "quotient.n = " << n << " outside [2," << kMaxDim << "]";
    throw ConfigError(msg.str());
  }
  if (l < 0) {
    msg << "quotient.l = " << l << " must be >= 0";
    throw ConfigError(msg.str());
  }
  if (l > k - 1 || k > n) {
    msg << "quotient orders must satisfy 0 <= l <= k-1 <= n-1, got k=" << k
        << " l=" << l << " n=" << n;
    throw ConfigError(msg.str());
  }
  if (!(tau >= 1.0)) {
    msg << "quotient.tau = " << tau << " must be >= 1";
    throw ConfigError(msg.str());
  }
}

double sigma(const Lambda& lambda, int k) {
  if (k == 0) return 1.0;
  if (k < 0 || k > lambda.n) return 0.0;
  return sigma_deleted(lambda, k, -1, -1);
}

double sigma_partial(const Lambda& lambda, int k, int i) {
  if (i < 0 || i >= lambda.n) throw std::out_of_range("sigma_partial: index");
  return sigma_deleted(lambda, k - 1, i, -1);
}

double sigma_partial2(const Lambda& lambda, int k, int i, int j) {
  if (i < 0 || i >= lambda.n || j < 0 || j >= lambda.n || i == j)
    throw std::out_of_range("sigma_partial2: indices");
  return sigma_deleted(lambda, k - 2, i, j);
}

bool in_gamma_k(const Lambda& lambda, int k) {
  for (int j = 1; j <= k; ++j)
    if (!(sigma(lambda, j) > 0.0)) return false;
  return true;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r;
}

QuotientDerivs quotient_derivs(const Lambda& lambda, const QuotientSpec& spec,
                               bool want_hessian) {
  require_gamma_k(lambda, spec.k, "quotient_derivs");
  const int n = lambda.n;
  const int k = spec.k, l = spec.l;
  const double m = static_cast<double>(k - l);

  const double N = sigma(lambda, k);
  const double D = sigma(lambda, l);  // sigma_0 == 1 covers the pure branch
  const double Q = N / D;

  double Ni[kMaxDim], Di[kMaxDim], Qi[kMaxDim];
  for (int i = 0; i < n; ++i) {
    Ni[i] = sigma_deleted(lambda, k - 1, i, -1);
    Di[i] = l >= 1 ? sigma_deleted(lambda, l - 1, i, -1) : 0.0;
    Qi[i] = (Ni[i] * D - N * Di[i]) / (D * D);
  }

  QuotientDerivs out;
  out.value = std::pow(Q, 1.0 / m);
  const double qpow1 = out.value / (m * Q);  // (1/m) Q^{1/m - 1}
  for (int i = 0; i < n; ++i) out.grad[i] = qpow1 * Qi[i];

  if (want_hessian) {
    const double qpow2 = (1.0 / m - 1.0) * qpow1 / Q;  // (1/m)(1/m-1) Q^{1/m-2}
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double Nij = (i == j) ? 0.0 : sigma_deleted(lambda, k - 2, i, j);
        const double Dij =
            (i == j || l < 2) ? 0.0 : sigma_deleted(lambda, l - 2, i, j);
        const double Qij =
            (Nij * D + Ni[i] * Di[j] - Ni[j] * Di[i] - N * Dij) / (D * D) -
            2.0 * Di[j] * (Ni[i] * D - N * Di[i]) / (D * D * D);
        const double h = qpow2 * Qi[i] * Qi[j] + qpow1 * Qij;
        out.hess[i][j] = h;
        out.hess[j][i] = h;
      }
    }
  }
  return out;
}

double F_value(const SymMat& U, const QuotientSpec& spec) {
  const SpectralDecomp d = jacobi_eigen(U);
  require_gamma_k(d.eigenvalues, spec.k, "F_value");
  return quotient_derivs(d.eigenvalues, spec, false).value;
}

SymMat F_grad(const SymMat& U, const QuotientSpec& spec) {
  const SpectralDecomp d = jacobi_eigen(U);
  const QuotientDerivs qd = quotient_derivs(d.eigenvalues, spec, false);
  Lambda g;
  g.n = U.n;
  for (int i = 0; i < U.n; ++i) g[i] = qd.grad[i];
  return reassemble(d, g);
}

double F_hess_form(const SymMat& U, const SymMat& V, const QuotientSpec& spec) {
  const int n = U.n;
  const SpectralDecomp d = jacobi_eigen(U);
  const QuotientDerivs qd = quotient_derivs(d.eigenvalues, spec, true);
  const SymMat W = to_eigenframe(d.eigenvectors, V);

  double val = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) val += qd.hess[i][j] * W(i, i) * W(j, j);

  // Off-diagonal block: divided differences of the gradient. The confluent
  // limit of (g_i - g_j)/(lambda_i - lambda_j) is hess_ii - hess_ij.
  const double tie = 1e-9 * (1.0 + U.max_abs());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dl = d.eigenvalues[i] - d.eigenvalues[j];
      const double kappa = std::abs(dl) <= tie
                               ? qd.hess[i][i] - qd.hess[i][j]
                               : (qd.grad[i] - qd.grad[j]) / dl;
      val += kappa * W(i, j) * W(i, j);
    }
  }
  return val;
}

SymMat T_coeffs(const SymMat& U, const QuotientSpec& spec) {
  const SymMat G = F_grad(U, spec);
  SymMat T = G;
  T *= -1.0;
  const double tr = spec.tau * G.trace();
  for (int i = 0; i < U.n; ++i) T.at(i, i) += tr;
  const SpectralDecomp dt = jacobi_eigen(T);
  if (!(dt.eigenvalues[0] > 0.0))
    throw Inadmissible("T_coeffs: tau*trace(F')*I - F' not positive definite");
  return T;
}

double trace_lower_bound(const SymMat& U, const QuotientSpec& spec) {
  const SpectralDecomp d = jacobi_eigen(U);
  const QuotientDerivs qd = quotient_derivs(d.eigenvalues, spec, false);
  double tr = 0.0;
  for (int i = 0; i < U.n; ++i) tr += qd.grad[i];
  const double bound = std::pow(
      binomial(spec.n, spec.k) / binomial(spec.n, spec.l), 1.0 / (spec.k - spec.l));
  return tr - bound;
}

Prop1Diagnostics check_prop1(const Lambda& lambda, int k) {
  const int n = lambda.n;
  Prop1Diagnostics out;

  double partials[kMaxDim];
  double pscale = 0.0;
  for (int i = 0; i < n; ++i) {
    partials[i] = sigma_partial(lambda, k, i);
    pscale = std::max(pscale, std::abs(partials[i]));
  }
  pscale += 1e-300;
  out.min_partial = partials[0] / pscale;
  for (int i = 1; i < n; ++i)
    out.min_partial = std::min(out.min_partial, partials[i] / pscale);

  const double sk = sigma(lambda, k);
  for (int i = 0; i < n; ++i) {
    const double ski = sigma_deleted(lambda, k, i, -1);
    const double rhs = ski + lambda[i] * partials[i];
    const double scale =
        std::abs(sk) + std::abs(ski) + std::abs(lambda[i] * partials[i]) + 1e-300;
    out.splitting_residual =
        std::max(out.splitting_residual, std::abs(sk - rhs) / scale);
  }

  Lambda sorted = lambda;
  std::stable_sort(sorted.v.begin(), sorted.v.begin() + n,
                   [](double a, double b) { return a > b; });
  double slack = 1e300;
  for (int i = 0; i + 1 < n; ++i) {
    const double a = sigma_partial(sorted, k, i);
    const double b = sigma_partial(sorted, k, i + 1);
    slack = std::min(slack, (b - a) / pscale);
  }
  out.sorted_monotone_slack = n >= 2 ? slack : 0.0;

  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += partials[i];
  const double rhs6 = (n - k + 1) * sigma(lambda, k - 1);
  out.trace_identity_residual =
      std::abs(sum - rhs6) / (std::abs(sum) + std::abs(rhs6) + 1e-300);
  return out;
}

MacLaurinDiagnostics check_maclaurin(const Lambda& lambda,
                                     const QuotientSpec& spec, int r, int s) {
  const int n = lambda.n, k = spec.k, l = spec.l;
  MacLaurinDiagnostics out;

  const double lhs = k * (n - l + 1) * sigma(lambda, l - 1) * sigma(lambda, k);
  const double rhs = l * (n - k + 1) * sigma(lambda, l) * sigma(lambda, k - 1);
  out.product_slack = (rhs - lhs) / (std::abs(lhs) + std::abs(rhs) + 1.0);

  const double lq = std::pow((sigma(lambda, k) / binomial(n, k)) /
                                 (sigma(lambda, l) / binomial(n, l)),
                             1.0 / (k - l));
  const double rq = std::pow((sigma(lambda, r) / binomial(n, r)) /
                                 (sigma(lambda, s) / binomial(n, s)),
                             1.0 / (r - s));
  out.quotient_slack = (rq - lq) / (std::abs(lq) + std::abs(rq) + 1e-300);
  return out;
}

bool check_FL2(const SymMat& U, const QuotientSpec& spec) {
  const int n = U.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (U(i, j) != 0.0)
        throw std::invalid_argument("check_FL2: U must be diagonal");
  for (int i = 0; i + 1 < n; ++i)
    if (U(i, i) < U(i + 1, i + 1))
      throw std::invalid_argument("check_FL2: diagonal not sorted descending");

  const SymMat G = F_grad(U, spec);
  const double tol = 1e-12 * (1.0 + G.max_abs());
  for (int i = 0; i + 1 < n; ++i)
    if (G(i, i) > G(i + 1, i + 1) + tol) return false;
  return true;
}

}  // namespace hessquot
