#pragma once

#include <functional>

#include "hessquot/grid.hpp"
#include "hessquot/rhs.hpp"
#include "hessquot/symfunc.hpp"
#include "hessquot/symmat.hpp"

// Brute-force and finite-difference references used by the test suites.
// Everything here is deliberately independent of the production code paths
// it cross-checks; speed is a non-goal.

namespace hessquot::oracle {

/// Subset-enumeration sigma_k. Exponential in n; keep n <= 12.
double sigma_bruteforce(const Lambda& lambda, int k);

/// sigma_{k-1}(lambda|i) by deleting entry i and enumerating.
double sigma_partial_bruteforce(const Lambda& lambda, int k, int i);

/// Centered difference of fn along direction V, Richardson-extrapolated once.
/// order 1 uses step 1e-6, order 2 uses 1e-4. If fn throws ConeViolation the
/// step shrinks (at most 4 times) before the error propagates.
double fd_derivative(const std::function<double(const SymMat&)>& fn,
                     const SymMat& U, const SymMat& V, int order);

/// A radial exact solution u*(rho) = -c (cosh(r_max) - cosh(rho)) on the
/// chart box, with two right-hand sides sampled node by node:
///   f*    the exact discrete image (sigma_k/sigma_l)(U_h[u*]), whose
///         residual vanishes to round-off, and
///   f_c   the continuum image. The family is umbilic (cov Hess u* =
///         c cosh(rho) I), so f_c = (C(n,k)/C(n,l)) ((n tau - 1) c cosh
///         rho)^{k-l} in closed form; solving against it recovers u* at
///         the discretization order.
/// u* vanishes on the outer radial face and supplies its own trace as
/// Dirichlet data on the remaining faces.
struct ManufacturedCase {
  QuotientSpec spec;
  std::shared_ptr<const Grid> grid;
  double c = 0.0;
  ScalarField u_star;         // exact solution samples
  ScalarField f_star;         // exact discrete image (interior)
  RHSSpec rhs;                // tabulated f*
  RHSSpec rhs_continuum;      // tabulated closed-form image
  std::shared_ptr<const std::vector<double>> dirichlet;  // u* trace
};

/// Builds the case and verifies admissibility of the discrete U[u*] at every
/// interior node; throws Inadmissible if the family leaves Gamma_k.
ManufacturedCase make_manufactured(const QuotientSpec& spec,
                                   std::shared_ptr<const Grid> grid, double c);

/// Closed-form u*(rho) and derivatives for the radial family.
double manufactured_value(double c, double r_max, double rho);

}  // namespace hessquot::oracle
