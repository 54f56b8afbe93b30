#pragma once

#include <string>
#include <vector>

#include "hessquot/solver.hpp"

namespace hessquot {

/// Constants of the interior-estimate test function
///   P = beta log(-u) + log u_11 + (a/2)|grad u|^2 + A rho.
struct ProbeConfig {
  double beta = 4.0;
  double a = 0.1;
  double A = 1.0;
  enum class HessNorm { Spectral, LambdaMax, Frobenius };
  HessNorm norm = HessNorm::Spectral;

  void validate() const {
    if (!(beta > 0.0) || !(a > 0.0) || !(A > 0.0))
      throw ConfigError("probe constants beta, a, A must all be positive");
  }
};

double hessian_norm(const SymMat& H, ProbeConfig::HessNorm norm);

/// max over interior nodes (>= 2 stencils from the boundary) of
/// (-u)^beta * ||cov Hess u||; ties resolved to the lowest node index.
struct EstimateMax {
  double value = 0.0;
  std::int64_t node = -1;
};
EstimateMax estimate_M(const ScalarField& u, double beta,
                       ProbeConfig::HessNorm norm);
EstimateMax estimate_M_serial(const ScalarField& u, double beta,
                              ProbeConfig::HessNorm norm);

/// One sweep cell: a (refinement, amplitude) solve evaluated at one beta.
struct EstimateCell {
  int nodes_per_axis = 0;
  double h = 0.0;  // radial spacing
  double beta = 0.0;
  double amplitude = 0.0;
  double M_spectral = 0.0;
  double M_lambda_max = 0.0;
  double M_frobenius = 0.0;
  double sup_u = 0.0;
  double sup_grad = 0.0;
  double c_minus = 0.0;
  double c_plus = 0.0;
  bool solved = false;
  std::string failure;
};

struct StabilizationFlag {
  double beta = 0.0;
  double amplitude = 0.0;
  bool stabilized = false;
  double m_coarse = 0.0, m_mid = 0.0, m_fine = 0.0;
};

struct EstimateReport {
  std::vector<EstimateCell> cells;
  std::vector<StabilizationFlag> flags;
};

/// Eq-stabilization rule across the last three refinements:
/// |M3 - M2| <= 0.2 |M2 - M1| + 0.05 |M3|.
bool cauchy_stabilized(double m1, double m2, double m3);

/// Solves the base problem per (refinement, amplitude) cell and tabulates
/// M_h(beta) plus the quantities the estimate constant may depend on.
/// Solver failures leave explicit holes rather than aborting the sweep.
EstimateReport refine_sweep(const SolveConfig& base,
                            const std::vector<int>& refinements,
                            const std::vector<double>& betas,
                            const std::vector<double>& amplitudes);

struct ProbeDiagnostics {
  bool interior_max = false;  // false: maximizer on the boundary ring
  std::int64_t x0 = -1;
  double P_max = 0.0;
  double u_at_x0 = 0.0;
  double u11 = 0.0;  // largest Hessian eigenvalue at x0
  std::array<double, kMaxChartDim> hess_eigs{};  // descending
  // Filled only for an interior maximizer:
  std::array<double, kMaxChartDim> dif1{};  // first-order condition residual
  double dif1_norm = 0.0;
  double sum_TPii = 0.0;  // sum_i T^ii P_;ii by second differences of P
  bool F_ordering = false;  // F^11 >= F^22 >= ... > 0
  bool T_ordering = false;  // 0 < T^11 <= T^22 <= ...
  double T11 = 0.0;
  double final_term = 0.0;  // A T^11 (n-1) coth(c+)
};

/// Evaluates the maximum-principle ingredients at the discrete maximizer of
/// P. Throws LogDomain when no node admits the log (u_11 <= 0 everywhere);
/// a maximizer on the boundary ring is reported, not fatal.
ProbeDiagnostics probe_P(const ScalarField& u, const ProbeConfig& probe,
                         const QuotientSpec& spec);

}  // namespace hessquot
