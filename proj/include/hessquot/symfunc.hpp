#pragma once

#include <array>

#include "hessquot/symmat.hpp"

namespace hessquot {

/// The operator family (sigma_k/sigma_l)^{1/(k-l)} on n x n tensors with the
/// tau-weighted trace term. Valid operators need 0 <= l <= k-1 <= n-1 and
/// tau >= 1; the estimate regime additionally needs k >= l+2.
struct QuotientSpec {
  int n = 2;
  int k = 2;
  int l = 0;
  double tau = 1.0;

  bool valid() const {
    return n >= 2 && n <= kMaxDim && l >= 0 && l <= k - 1 && k <= n &&
           tau >= 1.0;
  }
  bool theorem_regime() const { return valid() && k >= l + 2; }
  void validate() const;  // throws ConfigError with the violated constraint
};

/// k-th elementary symmetric polynomial of lambda, by the one-pass O(n*k)
/// coefficient recurrence. k == 0 gives 1; k < 0 or k > n gives 0.
double sigma(const Lambda& lambda, int k);

/// sigma_{k-1}(lambda | i): the k-th symmetric polynomial with entry i
/// deleted, which equals d sigma_k / d lambda_i. Index i is 0-based here.
double sigma_partial(const Lambda& lambda, int k, int i);

/// sigma_{k-2}(lambda | ij) with entries i != j deleted (second partial).
double sigma_partial2(const Lambda& lambda, int k, int i, int j);

/// Strict Garding cone test: sigma_j(lambda) > 0 for all 1 <= j <= k.
bool in_gamma_k(const Lambda& lambda, int k);

/// Value, gradient and Hessian of phi(lambda) = (sigma_k/sigma_l)^{1/(k-l)}
/// at a point of Gamma_k. Gradient is the paper's F^{ii} diagonal; the
/// Hessian feeds the eigenframe second-derivative form.
struct QuotientDerivs {
  double value = 0.0;
  std::array<double, kMaxDim> grad{};
  std::array<std::array<double, kMaxDim>, kMaxDim> hess{};
};
QuotientDerivs quotient_derivs(const Lambda& lambda, const QuotientSpec& spec,
                               bool want_hessian);

double F_value(const SymMat& U, const QuotientSpec& spec);

/// dF/dU as a symmetric matrix in the same frame as U; positive definite on
/// Gamma_k (ellipticity).
SymMat F_grad(const SymMat& U, const QuotientSpec& spec);

/// The quadratic form F^{ij,rs} V_ij V_rs. Assembled in the eigenframe of U:
/// the eigenvalue Hessian on the diagonal block, divided differences
/// (F^{ii}-F^{jj})/(lambda_j-lambda_i) off the diagonal. Near-equal
/// eigenvalues switch to the analytic limit of the divided difference.
/// Non-positive for every V (concavity).
double F_hess_form(const SymMat& U, const SymMat& V, const QuotientSpec& spec);

/// tau * trace(F_grad) * I - F_grad; positive definite for tau >= 1, n >= 2.
SymMat T_coeffs(const SymMat& U, const QuotientSpec& spec);

/// trace(F_grad) - (C(n,k)/C(n,l))^{1/(k-l)}; nonnegative on Gamma_k.
double trace_lower_bound(const SymMat& U, const QuotientSpec& spec);

double binomial(int n, int k);

// ---- diagnostic lemma checks -------------------------------------------

/// Residuals for the classic sigma_k identities at one sample:
///   partial positivity, the splitting identity
///   sigma_k = sigma_k(:|i) + lambda_i sigma_{k-1}(:|i),
///   sorted monotonicity of the partials, and the partial-sum trace identity.
/// Residuals are relative; worst entry over i is kept.
struct Prop1Diagnostics {
  double min_partial = 0.0;            // min_i sigma_{k-1}(lambda|i), scaled
  double splitting_residual = 0.0;     // identity (3)
  double sorted_monotone_slack = 0.0;  // >= -tol when lambda in Gamma_k
  double trace_identity_residual = 0.0;
};
Prop1Diagnostics check_prop1(const Lambda& lambda, int k);

/// Signed slacks of the Newton-MacLaurin product inequality and the quotient
/// monotonicity chain (k,l) vs (r,s); both nonnegative on Gamma_k up to
/// round-off. Slacks are normalized by the magnitude of the sides.
struct MacLaurinDiagnostics {
  double product_slack = 0.0;
  double quotient_slack = 0.0;
};
MacLaurinDiagnostics check_maclaurin(const Lambda& lambda,
                                     const QuotientSpec& spec, int r, int s);

/// For diagonal U with entries sorted descending: true iff the diagonal of
/// F_grad is ascending (ties up to 1e-12 relative).
bool check_FL2(const SymMat& U, const QuotientSpec& spec);

}  // namespace hessquot
