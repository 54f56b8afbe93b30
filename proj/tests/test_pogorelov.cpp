#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hessquot/oracle.hpp"
#include "hessquot/pogorelov.hpp"

using namespace hessquot;

namespace {

std::shared_ptr<const Grid> annulus_grid(int nn) {
  PolarChart chart{2, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, 0.5}, hi{0.6, 1.5};
  std::array<int, kMaxChartDim> nodes{nn, nn};
  return std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));
}

// a desk-scale feasible stand-in for the estimate harness: wide enough cone
// for the box corners at these resolutions
SolveConfig feasible_config(std::shared_ptr<const Grid> grid) {
  SolveConfig c;
  c.spec = QuotientSpec{2, 2, 0, 3.0};
  c.grid = std::move(grid);
  c.rhs.amplitude = 1.0;
  return c;
}

}  // namespace

TEST_CASE("hessian norms") {
  SymMat H(2);
  H.at(0, 0) = 3.0;
  H.at(1, 1) = -4.0;
  CHECK(hessian_norm(H, ProbeConfig::HessNorm::Spectral) == doctest::Approx(4.0));
  CHECK(hessian_norm(H, ProbeConfig::HessNorm::LambdaMax) == doctest::Approx(3.0));
  CHECK(hessian_norm(H, ProbeConfig::HessNorm::Frobenius) == doctest::Approx(5.0));
}

TEST_CASE("estimate_M basics") {
  auto grid = annulus_grid(17);

  // all-zero field: no qualifying value above zero
  ScalarField zero(*grid);
  const EstimateMax z = estimate_M(zero, 4.0, ProbeConfig::HessNorm::Spectral);
  CHECK(z.value == 0.0);

  // manufactured dish: beta = 0 reduces to the plain sup of the Hessian norm
  const QuotientSpec spec{2, 2, 0, 1.0};
  const auto mc = oracle::make_manufactured(spec, grid, 0.4);
  const EstimateMax m0 = estimate_M(mc.u_star, 0.0, ProbeConfig::HessNorm::Spectral);
  double sup = 0.0;
  for (std::int64_t node : grid->interior) {
    if (grid->boundary_distance(grid->unflat(node)) < 2) continue;
    sup = std::max(sup, hessian_norm(covariant_hessian(mc.u_star, node),
                                     ProbeConfig::HessNorm::Spectral));
  }
  CHECK(m0.value == doctest::Approx(sup).epsilon(1e-15));

  // the weight (-u)^beta only counts negative values
  const EstimateMax m4 = estimate_M(mc.u_star, 4.0, ProbeConfig::HessNorm::Spectral);
  CHECK(m4.value > 0.0);
  CHECK(m4.node >= 0);
  CHECK(grid->boundary_distance(grid->unflat(m4.node)) >= 2);

  // parallel and serial reductions agree including the argmax node
  const EstimateMax ms = estimate_M_serial(mc.u_star, 4.0, ProbeConfig::HessNorm::Spectral);
  CHECK(ms.value == m4.value);
  CHECK(ms.node == m4.node);
}

TEST_CASE("estimate is invariant under angular axis relabeling") {
  // n = 3 box symmetric in the two angular axes; relabeling them permutes
  // nodes but leaves the spectral-norm estimate unchanged
  PolarChart chart{3, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, -0.6, 0.5}, hi{0.6, 0.6, 1.5};
  std::array<int, kMaxChartDim> nodes{9, 9, 9};
  auto grid = std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));
  const QuotientSpec spec{3, 2, 0, 1.0};
  const auto mc = oracle::make_manufactured(spec, grid, 0.3);

  ScalarField swapped(*grid);
  for (std::int64_t f = 0; f < grid->total; ++f) {
    auto idx = grid->unflat(f);
    std::swap(idx[0], idx[1]);
    swapped[f] = mc.u_star[grid->flat(idx)];
  }
  const EstimateMax a = estimate_M(mc.u_star, 4.0, ProbeConfig::HessNorm::Spectral);
  const EstimateMax b = estimate_M(swapped, 4.0, ProbeConfig::HessNorm::Spectral);
  CHECK(b.value == doctest::Approx(a.value).epsilon(1e-13));
}

TEST_CASE("cauchy stabilization rule") {
  CHECK(cauchy_stabilized(1.00, 1.01, 1.011));
  CHECK_FALSE(cauchy_stabilized(1.0, 1.5, 2.5));
  // generous absolute allowance of 5 percent of the finest value
  CHECK(cauchy_stabilized(2.0, 2.0, 2.09));
}

TEST_CASE("refine_sweep tabulates cells, flags and holes") {
  auto grid = annulus_grid(17);
  const SolveConfig base = feasible_config(grid);

  const EstimateReport rep =
      refine_sweep(base, {9, 17, 33}, {2.0, 4.0}, {1.0, 2.0});
  REQUIRE(rep.cells.size() == 3 * 2 * 2);
  REQUIRE(rep.flags.size() == 2 * 2);

  int solved = 0;
  for (const auto& cell : rep.cells) {
    if (!cell.solved) continue;
    ++solved;
    CHECK(cell.M_spectral > 0.0);
    CHECK(cell.M_frobenius >= cell.M_spectral);
    CHECK(cell.sup_u > 0.0);
    CHECK(cell.sup_grad > 0.0);
    CHECK(cell.c_minus == doctest::Approx(0.5));
    CHECK(cell.c_plus == doctest::Approx(1.5));
  }
  CHECK(solved == static_cast<int>(rep.cells.size()));

  // sup|u| is nondecreasing in the amplitude at fixed refinement
  for (int r = 0; r < 3; ++r) {
    const auto& a1 = rep.cells[static_cast<std::size_t>(r) * 4 + 0];
    const auto& a2 = rep.cells[static_cast<std::size_t>(r) * 4 + 2];
    CHECK(a1.amplitude < a2.amplitude);
    CHECK(a1.sup_u <= a2.sup_u + 1e-12);
  }

  // an unsolvable cell leaves an explicit hole instead of aborting
  SolveConfig bad = base;
  bad.newton_tol = 1e-15;
  bad.max_iterations = 1;
  const EstimateReport holes = refine_sweep(bad, {9}, {4.0}, {1.0});
  REQUIRE(holes.cells.size() == 1);
  CHECK_FALSE(holes.cells[0].solved);
  CHECK_FALSE(holes.cells[0].failure.empty());
  REQUIRE(holes.flags.size() == 1);
  CHECK_FALSE(holes.flags[0].stabilized);
}

TEST_CASE("probe_P finds the interior maximizer and the estimate inequality data") {
  auto grid = annulus_grid(33);
  SolveConfig cfg = feasible_config(grid);
  const SolveReport sol = continuation_solve(cfg);

  ProbeConfig probe;
  probe.beta = 4.0;
  probe.a = 0.1;
  probe.A = 1.0;

  const ProbeDiagnostics d = probe_P(sol.u, probe, cfg.spec);
  CHECK(d.x0 >= 0);
  CHECK(d.u11 > 0.0);
  CHECK(d.u_at_x0 < 0.0);
  for (int i = 0; i + 1 < 2; ++i) CHECK(d.hess_eigs[i] >= d.hess_eigs[i + 1]);

  if (d.interior_max) {
    // first-order condition residual is small at the discrete maximizer
    CHECK(d.dif1_norm < 1.0);
    CHECK(d.F_ordering);
    CHECK(d.T_ordering);
    CHECK(d.T11 > 0.0);
    const DistBounds db = dist_bounds(*grid);
    CHECK(d.final_term ==
          doctest::Approx(probe.A * d.T11 * laplace_dist(2, db.c_plus)));
  }

  ProbeConfig invalid = probe;
  invalid.beta = -1.0;
  CHECK_THROWS_AS(probe_P(sol.u, invalid, cfg.spec), ConfigError);
}

TEST_CASE("probe_P rejects fields without a log-admissible node") {
  auto grid = annulus_grid(17);
  ScalarField convex_up(*grid);  // positive interior: -u < 0 everywhere
  for (std::int64_t f = 0; f < grid->total; ++f) convex_up[f] = 1.0;
  ProbeConfig probe;
  CHECK_THROWS_AS(probe_P(convex_up, probe, QuotientSpec{2, 2, 0, 1.0}),
                  LogDomain);
}

TEST_CASE("probe first-order residual shrinks under refinement") {
  ProbeConfig probe;
  probe.beta = 4.0;
  probe.a = 0.1;
  probe.A = 1.0;

  double res[2] = {0.0, 0.0};
  double sums[2] = {0.0, 0.0};
  bool interior[2] = {false, false};
  for (int pass = 0; pass < 2; ++pass) {
    auto grid = annulus_grid(pass == 0 ? 17 : 33);
    SolveConfig cfg = feasible_config(grid);
    const SolveReport sol = continuation_solve(cfg);
    const ProbeDiagnostics d = probe_P(sol.u, probe, cfg.spec);
    interior[pass] = d.interior_max;
    if (d.interior_max) {
      res[pass] = d.dif1_norm;
      sums[pass] = d.sum_TPii;
    }
  }
  if (interior[0] && interior[1]) {
    CHECK(res[1] <= res[0] * 1.2);
    // positive excursions of the maximum-principle sum shrink as well
    CHECK(std::max(sums[1], 0.0) <= std::max(sums[0], 0.0) + 1e-9);
  }
}
