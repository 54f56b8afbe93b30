#pragma once

#include <array>

#include "hessquot/errors.hpp"

namespace hessquot {

struct Grid;  // grid.hpp

inline constexpr int kMaxChartDim = 4;

/// Chart point xi = (xi^1 .. xi^{n-1}, r): angular coordinates first, the
/// radial coordinate (geodesic distance from the pole) last.
struct ChartPoint {
  std::array<double, kMaxChartDim> xi{};
  int n = 0;

  ChartPoint() = default;
  ChartPoint(std::initializer_list<double> init) {
    n = static_cast<int>(init.size());
    int i = 0;
    for (double x : init) xi[i++] = x;
  }
  double operator[](int i) const { return xi[i]; }
  double& operator[](int i) { return xi[i]; }
  double radial() const { return xi[n - 1]; }
};

/// Geodesic polar coordinates on the unit hyperboloid. Admissible points
/// stay away from the pole (r >= r_min) and from chart degeneracy (every
/// cos factor appearing in the metric >= 0.1).
struct PolarChart {
  int n = 2;
  double r_min = 1e-3;

  bool admissible(const ChartPoint& p) const;
  void validate_point(const ChartPoint& p) const;  // throws ConfigError
};

/// Point of R^{n+1}_1; for hyperboloid members <X,X>_L == -1, x_{n+1} > 0.
struct LorentzPoint {
  std::array<double, kMaxChartDim + 1> x{};
  int dim = 0;  // n + 1
};

double lorentz_inner(const LorentzPoint& X, const LorentzPoint& Y);

/// The chart parameterization of the hyperboloid.
LorentzPoint embed(const PolarChart& chart, const ChartPoint& p);

/// Diagonal metric data at a point: components, inverses, orthonormal
/// coframe scales 1/sqrt(sigma_ii), and analytic first derivatives.
struct MetricAt {
  ChartPoint point;
  std::array<double, kMaxChartDim> sigma{};      // sigma_ii
  std::array<double, kMaxChartDim> inv_sigma{};  // sigma^{ii}
  std::array<double, kMaxChartDim> frame{};      // 1/sqrt(sigma_ii)
  // dsigma[a][m] = d sigma_aa / d xi^m
  std::array<std::array<double, kMaxChartDim>, kMaxChartDim> dsigma{};
  double sqrt_det = 0.0;
};

MetricAt metric_at(const PolarChart& chart, const ChartPoint& p);

struct Christoffel {
  // gamma[m][i][j] = Gamma^m_{ij}, symmetric in (i,j)
  std::array<std::array<std::array<double, kMaxChartDim>, kMaxChartDim>,
             kMaxChartDim>
      gamma{};
  int n = 0;
};

Christoffel christoffel(const PolarChart& chart, const ChartPoint& p);

/// Assembles the curvature tensor from Christoffel symbols (finite
/// differences, step 1e-4) and compares with the constant-curvature closed
/// form of the hyperboloid.
struct RiemannCheck {
  double max_residual = 0.0;             // |R_ijkl + (s_ik s_jl - s_il s_jk)|
  double max_sectional_deviation = 0.0;  // |K(e_i,e_j) + 1|
  double max_antisymmetry = 0.0;         // plane-pair swap, |R_ijkl + R_ijlk|
};
RiemannCheck riemann_check(const PolarChart& chart, const ChartPoint& p);

/// Second-difference verification of the structure equations: the second
/// fundamental form of the hyperboloid equals the metric, the position
/// vector is the timelike unit normal.
struct GaussWeingartenCheck {
  double h_vs_sigma = 0.0;        // max |h_ij - sigma_ij|
  double gauss_residual = 0.0;    // max |X_,ij - h_ij nu|
  double normal_norm = 0.0;       // |<nu,nu>_L + 1|
  double tangency = 0.0;          // max |<nu, dX_i>_L|
  double weingarten_residual = 0.0;
};
GaussWeingartenCheck gauss_weingarten_check(const PolarChart& chart,
                                            const ChartPoint& p);

/// Geodesic distance through the embedding: arcosh(-<X(p),X(q)>_L).
double geodesic_dist(const PolarChart& chart, const ChartPoint& p,
                     const ChartPoint& q);

/// Laplacian of the distance function from a base point, (n-1) coth(rho).
/// rho below 1e-8 is degenerate and rejected.
double laplace_dist(int n, double rho);

/// Distance range of a grid from the pole plus the comparison-bound slacks.
/// The pole is the fixed base point, so rho equals the radial coordinate.
struct DistBounds {
  double c_minus = 0.0;
  double c_plus = 0.0;
  double coth_bounds_slack = 0.0;  // min over nodes, both sides
  double comparison_slack = 0.0;   // Hessian/Laplace comparison chain, K = 1
};
DistBounds dist_bounds(const Grid& grid);

}  // namespace hessquot
