#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "hessquot/oracle.hpp"
#include "hessquot/solver.hpp"

using namespace hessquot;

namespace {

std::shared_ptr<const Grid> annulus_grid(int nn) {
  PolarChart chart{2, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, 0.5}, hi{0.6, 1.5};
  std::array<int, kMaxChartDim> nodes{nn, nn};
  return std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));
}

// tau = 1 on an annulus-type domain admits no cone-admissible candidate
// vanishing on the whole boundary (the inner face is concave toward the
// domain), so the zero-data solves here run at tau = 2.5 where the wider
// cone accommodates the boundary layer.
SolveConfig base_config(std::shared_ptr<const Grid> grid) {
  SolveConfig c;
  c.spec = QuotientSpec{2, 2, 0, 2.5};
  c.grid = std::move(grid);
  c.rhs.amplitude = 1.0;
  return c;
}

double manufactured_error(const QuotientSpec& spec,
                          std::shared_ptr<const Grid> grid, double c) {
  const auto mc = oracle::make_manufactured(spec, grid, c);
  SolveConfig cfg;
  cfg.spec = spec;
  cfg.grid = grid;
  cfg.rhs = mc.rhs_continuum;
  cfg.dirichlet = mc.dirichlet;
  const SolveReport rep = continuation_solve(cfg);
  double err = 0.0;
  for (std::int64_t node : grid->interior)
    err = std::max(err, std::abs(rep.u[node] - mc.u_star[node]));
  return err;
}

}  // namespace

TEST_CASE("poisson init gives an admissible negative start") {
  auto grid = annulus_grid(17);
  const SolveConfig cfg = base_config(grid);

  const ScalarField u0 = poisson_init(cfg);
  for (std::int64_t f = 0; f < grid->total; ++f) {
    if (grid->is_boundary(grid->unflat(f)))
      CHECK(u0[f] == 0.0);
    else
      CHECK(u0[f] < 0.0);
  }
  CHECK(admissibility_margin(u0, cfg.spec) >= cfg.cone_margin);
  for (std::int64_t node : grid->interior)
    CHECK(assemble_point_state(u0, node, cfg.spec, false).admissible);

  // linearity: scaling the matched source level scales the solution
  SolveConfig big = cfg;
  big.rhs.amplitude = std::pow(2.0, cfg.spec.k - cfg.spec.l);  // doubles c
  const ScalarField u1 = poisson_init(big);
  CHECK(poisson_source_level(big) ==
        doctest::Approx(2.0 * poisson_source_level(cfg)).epsilon(1e-12));
  for (std::int64_t node : grid->interior)
    CHECK(u1[node] == doctest::Approx(2.0 * u0[node]).epsilon(1e-7));
}

TEST_CASE("newton converges immediately on an exact discrete image") {
  const QuotientSpec spec{2, 2, 0, 1.0};
  auto grid = annulus_grid(17);
  const auto mc = oracle::make_manufactured(spec, grid, 0.4);

  SolveConfig cfg;
  cfg.spec = spec;
  cfg.grid = grid;
  cfg.rhs = mc.rhs;
  cfg.dirichlet = mc.dirichlet;

  const SolveReport rep = newton_solve(mc.u_star, mc.rhs, cfg);
  CHECK(rep.final_residual <= 1e-12);
  CHECK(rep.history.size() == 1);  // zero residual before any step
  CHECK(rep.admissibility_certificate > 0.0);
}

TEST_CASE("manufactured recovery at the discretization order, tau = 1 and 1.5") {
  for (double tau : {1.0, 1.5}) {
    const QuotientSpec spec{2, 2, 0, tau};
    const double e17 = manufactured_error(spec, annulus_grid(17), 0.4);
    const double e33 = manufactured_error(spec, annulus_grid(33), 0.4);
    const double order = std::log2(e17 / e33);
    INFO("tau = ", tau, " e17 = ", e17, " e33 = ", e33);
    CHECK(order > 1.4);
    CHECK(order < 2.6);
  }
}

TEST_CASE("n = 3 quotient cases solve and certify the cone") {
  PolarChart chart{3, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, -0.6, 0.5}, hi{0.6, 0.6, 1.5};
  std::array<int, kMaxChartDim> nodes{9, 9, 9};
  auto grid = std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));

  // the (3,1) quotient needs the widened cone; the (2,0) operator admits
  // tau = 1 because Gamma_2 in three variables tolerates the boundary layer
  for (const QuotientSpec spec : {QuotientSpec{3, 3, 1, 1.5},
                                  QuotientSpec{3, 2, 0, 1.0}}) {
    SolveConfig cfg;
    cfg.spec = spec;
    cfg.grid = grid;
    cfg.rhs.amplitude = 1.0;

    const SolveReport rep = continuation_solve(cfg);
    CHECK(rep.final_residual <= cfg.newton_tol);
    CHECK(rep.admissibility_certificate >= cfg.cone_margin);
    CHECK(rep.negative_interior);
  }
}

TEST_CASE("zero-data solves on the annulus at tau = 1 fail admissibility") {
  // det-type convexity cannot hold against the concave inner face; the
  // cone-widening continuation stalls and reports instead of leaving the
  // cone silently
  auto grid = annulus_grid(17);
  SolveConfig cfg = base_config(grid);
  cfg.spec.tau = 1.0;
  CHECK_THROWS_AS(continuation_solve(cfg), InitFailure);
}

TEST_CASE("cone-widening start succeeds where the linear start fails") {
  // at 33^2 the linear start's corner Hessian outgrows the tau = 2.5 cone;
  // the tau ladder still reaches the target and Newton converges
  auto grid = annulus_grid(33);
  SolveConfig cfg = base_config(grid);
  CHECK_THROWS_AS(poisson_init(cfg), InitFailure);
  const SolveReport rep = continuation_solve(cfg);
  CHECK(rep.final_residual <= cfg.newton_tol);
  CHECK(rep.admissibility_certificate >= cfg.cone_margin);
  CHECK(rep.negative_interior);
}

TEST_CASE("continuation with one step matches a direct newton solve") {
  auto grid = annulus_grid(17);
  SolveConfig cfg = base_config(grid);
  cfg.continuation_steps = 1;

  const SolveReport direct = newton_solve(poisson_init(cfg), cfg.rhs, cfg);
  const SolveReport cont = continuation_solve(cfg);
  CHECK(std::memcmp(direct.u.values.data(), cont.u.values.data(),
                    direct.u.values.size() * sizeof(double)) == 0);
}

TEST_CASE("amplitude sweep: sup|u| is nondecreasing") {
  auto grid = annulus_grid(17);
  double prev = 0.0;
  for (double amp : {1.0, 2.0, 4.0}) {
    SolveConfig cfg = base_config(grid);
    cfg.rhs.amplitude = amp;
    const SolveReport rep = continuation_solve(cfg);
    CHECK(rep.sup_u >= prev);
    prev = rep.sup_u;
  }
}

TEST_CASE("identical configs produce bit-identical reports") {
  auto grid = annulus_grid(17);
  SolveConfig cfg = base_config(grid);
  cfg.rhs.mu = 0.2;
  cfg.rhs.s = 0.1;

  const SolveReport a = continuation_solve(cfg);
  const SolveReport b = continuation_solve(cfg);
  CHECK(report_to_text(a) == report_to_text(b));
  CHECK(std::memcmp(a.u.values.data(), b.u.values.data(),
                    a.u.values.size() * sizeof(double)) == 0);
}

TEST_CASE("solver error paths") {
  auto grid = annulus_grid(17);
  SolveConfig cfg = base_config(grid);
  cfg.max_iterations = 1;
  cfg.newton_tol = 1e-15;
  CHECK_THROWS_AS(continuation_solve(cfg), MaxIterations);

  SolveConfig bad = base_config(grid);
  bad.continuation_steps = 0;
  CHECK_THROWS_AS(continuation_solve(bad), ConfigError);

  SolveConfig mismatch = base_config(grid);
  mismatch.spec.n = 3;
  mismatch.spec.k = 3;
  CHECK_THROWS_AS(poisson_init(mismatch), ConfigError);
}

TEST_CASE("solve report text is stable and complete") {
  auto grid = annulus_grid(17);
  const SolveConfig cfg = base_config(grid);
  const SolveReport rep = continuation_solve(cfg);
  const std::string text = report_to_text(rep);
  CHECK(text.find("final_residual") != std::string::npos);
  CHECK(text.find("sup_u") != std::string::npos);
  CHECK(text.find("admissibility_certificate") != std::string::npos);
  CHECK(text.find("negative_interior = yes") != std::string::npos);
}
