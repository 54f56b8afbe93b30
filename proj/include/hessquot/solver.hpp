#pragma once

#include <memory>
#include <vector>

#include "hessquot/hessop.hpp"

namespace hessquot {

struct SolveConfig {
  QuotientSpec spec;
  std::shared_ptr<const Grid> grid;
  RHSSpec rhs;
  int continuation_steps = 1;
  double newton_tol = 1e-9;        // max-norm residual
  int max_iterations = 50;         // per Newton solve
  double backtrack_factor = 0.5;
  double cone_margin = 1e-8;       // relative to the node's sigma_1 scale
  double linear_tol = 1e-10;

  // Inhomogeneous Dirichlet data (per node, boundary slots used); null
  // means the vanishing boundary condition of the main problem.
  std::shared_ptr<const std::vector<double>> dirichlet;

  void validate() const;
};

struct SolveReport {
  std::shared_ptr<const Grid> grid;
  ScalarField u;

  struct Step {
    int continuation_step = 0;
    int newton_iter = 0;
    double residual_norm = 0.0;
    double alpha = 1.0;
    int backtracks = 0;
    int cone_rejections = 0;
    double cone_margin = 0.0;
  };
  std::vector<Step> history;
  std::vector<double> continuation_amplitudes;

  int safeguard_activations = 0;  // line-search cuts forced by the cone test
  double final_residual = 0.0;
  double sup_u = 0.0;
  double sup_grad = 0.0;   // max frame gradient norm over interior nodes
  double admissibility_certificate = 0.0;  // min cone margin, final iterate
  bool negative_interior = false;          // u < 0 at all interior nodes
};

/// Admissible starting guess: solves the linear problem (Laplace u = c) with
/// the configured Dirichlet data, with c matched to the rhs amplitude so the
/// induced operator value starts near the data. Retries with doubled c (up
/// to 8 times) if the cone certificate fails.
ScalarField poisson_init(const SolveConfig& config);

/// Chooses the matched linear source level for the configured rhs.
double poisson_source_level(const SolveConfig& config);

/// Damped Newton on F(U[u]) = f^{1/(k-l)} with the Gamma_k line-search
/// safeguard: a step is accepted only when every node keeps a cone margin
/// >= config.cone_margin and the residual max-norm decreases.
SolveReport newton_solve(const ScalarField& u_init, const RHSSpec& rhs,
                         const SolveConfig& config);

/// Ramps the rhs amplitude geometrically from the init-matched level to the
/// target in config.continuation_steps steps, warm-starting each solve.
/// When the linear start fails its cone certificate on a fine grid, the
/// problem is first solved on 2:1-coarsened grids and prolonged (nested
/// iteration); the cone safeguard still vets every iterate.
SolveReport continuation_solve(const SolveConfig& config);

/// Serialize a report into the canonical text form (17 significant digits);
/// used for files and for the bit-identity determinism check.
std::string report_to_text(const SolveReport& report);

}  // namespace hessquot
