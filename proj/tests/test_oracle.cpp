#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hessquot/hessop.hpp"
#include "hessquot/oracle.hpp"
#include "hessquot/sampling.hpp"

using namespace hessquot;

namespace {

std::shared_ptr<const Grid> annulus_grid(int nn) {
  PolarChart chart{2, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, 0.5}, hi{0.6, 1.5};
  std::array<int, kMaxChartDim> nodes{nn, nn};
  return std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));
}

}  // namespace

TEST_CASE("subset enumeration") {
  CHECK(oracle::sigma_bruteforce(Lambda{1, 2, 3}, 3) == 6.0);
  CHECK(oracle::sigma_bruteforce(Lambda::ones(5), 2) == 10.0);
  CHECK(oracle::sigma_bruteforce(Lambda{2, 5}, 0) == 1.0);
  CHECK(oracle::sigma_bruteforce(Lambda{2, 5}, 3) == 0.0);
}

TEST_CASE("fd_derivative is near-exact on linear functionals") {
  Rng rng(101);
  auto tracefn = [](const SymMat& M) { return M.trace(); };
  // cancellation noise floor at step 1e-6 is eps/h ~ 1e-10 per value
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(2, 5);
    const SymMat U = random_symmetric(rng, n, 1.0);
    const SymMat V = random_symmetric(rng, n, 1.0);
    CHECK(std::abs(oracle::fd_derivative(tracefn, U, V, 1) - V.trace()) <=
          1e-8 * (1.0 + U.max_abs() + std::abs(V.trace())));
    CHECK(std::abs(oracle::fd_derivative(tracefn, U, V, 2)) <= 1e-6);
  }
}

TEST_CASE("fd_derivative shrinks its step when the cone is nearby") {
  const QuotientSpec spec{2, 2, 0, 1.0};
  // lambda barely inside Gamma_2; full-step probes would exit the cone
  SymMat U = SymMat::diag(Lambda{1e-7, 1e-7});
  SymMat V(2);
  V.at(0, 0) = 1.0;
  V.at(1, 1) = -1.0;
  auto fval = [&](const SymMat& M) { return F_value(M, spec); };
  const double d = oracle::fd_derivative(fval, U, V, 1);
  CHECK(std::isfinite(d));
}

TEST_CASE("manufactured case construction") {
  const QuotientSpec spec{2, 2, 0, 1.0};
  auto grid = annulus_grid(17);

  CHECK_THROWS_AS(oracle::make_manufactured(spec, grid, -1.0), Inadmissible);

  for (double c : {1e-3, 0.4, 5.0}) {  // cone membership is scale-invariant
    const auto mc = oracle::make_manufactured(spec, grid, c);
    const double r_max = grid->hi[1];

    for (std::int64_t f = 0; f < grid->total; ++f) {
      const ChartPoint p = grid->point(f);
      CHECK(mc.u_star[f] ==
            doctest::Approx(-c * (std::cosh(r_max) - std::cosh(p.radial())))
                .epsilon(1e-15));
      if (p.radial() < r_max) CHECK(mc.u_star[f] < 0.0);
    }

    // residual of the exact discrete image vanishes to round-off
    const ScalarField r = residual_field(mc.u_star, mc.rhs, spec);
    for (std::int64_t node : grid->interior)
      CHECK(std::abs(r[node]) <= 1e-12 * (1.0 + c));
  }
}

TEST_CASE("continuum image approaches the discrete image at O(h^2)") {
  const QuotientSpec spec{2, 2, 0, 1.0};
  double errs[2];
  for (int pass = 0; pass < 2; ++pass) {
    auto grid = annulus_grid(pass == 0 ? 17 : 33);
    const auto mc = oracle::make_manufactured(spec, grid, 0.4);
    double worst = 0.0;
    for (std::int64_t node : grid->interior)
      worst = std::max(worst, std::abs(mc.f_star[node] -
                                       (*mc.rhs_continuum.table)[node]));
    errs[pass] = worst;
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order > 1.5);
  CHECK(order < 2.5);
}

TEST_CASE("manufactured case for the n = 3 quotient") {
  const QuotientSpec spec{3, 3, 1, 1.0};
  PolarChart chart{3, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, -0.6, 0.5}, hi{0.6, 0.6, 1.5};
  std::array<int, kMaxChartDim> nodes{9, 9, 9};
  auto grid = std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));

  const auto mc = oracle::make_manufactured(spec, grid, 0.3);
  const ScalarField r = residual_field(mc.u_star, mc.rhs, spec);
  for (std::int64_t node : grid->interior)
    CHECK(std::abs(r[node]) <= 1e-12);
}
