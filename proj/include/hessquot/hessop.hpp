#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "hessquot/grid.hpp"
#include "hessquot/rhs.hpp"
#include "hessquot/symfunc.hpp"

namespace hessquot {

/// Everything the solver needs at one interior node.
struct PointState {
  std::int64_t node = -1;
  double u = 0.0;
  std::array<double, kMaxChartDim> grad{};  // orthonormal-frame gradient
  double grad_sq = 0.0;
  SymMat hess;     // frame covariant Hessian
  SymMat U;        // tau * trace(hess) * I - hess
  Lambda lambdaU;  // eigenvalues of U, ascending
  bool admissible = false;
  double cone_margin = 0.0;  // min_j sigma_j / sigma_1^j, <= 0 outside

  // Operator data, only filled when admissible and requested:
  double F = 0.0;
  SymMat Fgrad;  // dF/dU in the chart frame
  SymMat T;      // tau * trace(Fgrad) * I - Fgrad
};

/// Centered coordinate first difference; second-order one-sided at faces.
double coordinate_first_diff(const ScalarField& u, std::int64_t node, int axis);

/// Frame gradient (d_a u) / sqrt(sigma_aa).
std::array<double, kMaxChartDim> covariant_gradient(const ScalarField& u,
                                                    std::int64_t node);

/// Frame covariant Hessian at an interior node: coordinate second
/// differences corrected by Christoffel symbols, rescaled to the frame.
SymMat covariant_hessian(const ScalarField& u, std::int64_t node);

/// Divergence-form Laplace-Beltrami stencil (independent discretization,
/// used to cross-check the trace of the covariant Hessian).
double laplace_beltrami_flux(const ScalarField& u, std::int64_t node);

PointState assemble_point_state(const ScalarField& u, std::int64_t node,
                                const QuotientSpec& spec,
                                bool with_operator_data);

/// Frame components of the third covariant derivative tensor,
/// out[i][j][k] = (grad_k grad_j grad_i u) in the orthonormal frame.
/// Needs the node at least two stencils from the boundary.
using ThirdDeriv =
    std::array<std::array<std::array<double, kMaxChartDim>, kMaxChartDim>,
               kMaxChartDim>;
ThirdDeriv third_covariant_frame(const ScalarField& u, std::int64_t node);

/// r(x) = F(U[u]) - f(x,u,grad u)^{1/(k-l)} at interior nodes (boundary
/// slots stay zero). Throws ConeViolation naming the first offending node.
ScalarField residual_field(const ScalarField& u, const RHSSpec& rhs,
                           const QuotientSpec& spec);
ScalarField residual_field_serial(const ScalarField& u, const RHSSpec& rhs,
                                  const QuotientSpec& spec);

/// Sparse operator over interior unknowns (row-major so products
/// parallelize with bit-identical row sums).
struct LinearOperator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> A;
  Eigen::VectorXd boundary_term;  // A_full acting on the fixed boundary data

  std::vector<double> apply_interior(const std::vector<double>& v) const;
};

/// Per-node coefficients of a linear second-order operator in frame form:
///   L[v] = sum_ab Tf_ab (cov Hess v)_ab + sum_a b_a (frame grad v)_a + c0 v.
struct NodeCoeffs {
  SymMat Tf;
  std::array<double, kMaxChartDim> b{};
  double c0 = 0.0;
};

LinearOperator assemble_operator(const Grid& grid,
                                 const std::vector<NodeCoeffs>& coeffs,
                                 const double* boundary_values);

/// Jacobian of residual_field at u (boundary values held fixed).
LinearOperator linearize(const ScalarField& u, const RHSSpec& rhs,
                         const QuotientSpec& spec);

/// Interior admissibility certificate: min over interior nodes of the cone
/// margin of lambda(U[u]). Positive iff u is admissible everywhere.
double admissibility_margin(const ScalarField& u, const QuotientSpec& spec);
double admissibility_margin_serial(const ScalarField& u,
                                   const QuotientSpec& spec);

}  // namespace hessquot
