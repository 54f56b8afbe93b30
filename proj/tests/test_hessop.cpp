#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "hessquot/hessop.hpp"
#include "hessquot/oracle.hpp"
#include "hessquot/rng.hpp"

using namespace hessquot;

namespace {

std::shared_ptr<const Grid> annulus_grid(int nn) {
  PolarChart chart{2, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, 0.5}, hi{0.6, 1.5};
  std::array<int, kMaxChartDim> nodes{nn, nn};
  return std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));
}

std::shared_ptr<const Grid> annulus_grid3(int nn) {
  PolarChart chart{3, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, -0.6, 0.5}, hi{0.6, 0.6, 1.5};
  std::array<int, kMaxChartDim> nodes{nn, nn, nn};
  return std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));
}

ScalarField sample(const Grid& g, double (*fn)(const ChartPoint&)) {
  ScalarField u(g);
  for (std::int64_t f = 0; f < g.total; ++f) u[f] = fn(g.point(f));
  return u;
}

}  // namespace

TEST_CASE("covariant gradient basics") {
  auto grid = annulus_grid(33);

  const ScalarField c = sample(*grid, [](const ChartPoint&) { return 2.5; });
  const ScalarField r = sample(*grid, [](const ChartPoint& p) { return p.radial(); });
  for (std::int64_t node : grid->interior) {
    const auto gc = covariant_gradient(c, node);
    CHECK(gc[0] == 0.0);
    CHECK(gc[1] == 0.0);
    const auto gr = covariant_gradient(r, node);
    CHECK(gr[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gr[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  // one-sided boundary stencil is exact on linear data
  const auto idx0 = grid->unflat(0);
  REQUIRE(grid->is_boundary(idx0));
  const auto g0 = covariant_gradient(r, 0);
  CHECK(g0[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("covariant gradient matches the analytic frame gradient at O(h^2)") {
  auto fn = [](const ChartPoint& p) { return std::sin(p[0]); };
  double errs[2];
  for (int pass = 0; pass < 2; ++pass) {
    auto grid = annulus_grid(pass == 0 ? 17 : 33);
    const ScalarField u = sample(*grid, fn);
    double worst = 0.0;
    for (std::int64_t node : grid->interior) {
      const ChartPoint p = grid->point(node);
      const double target = std::cos(p[0]) / std::sinh(p[1]);
      worst = std::max(worst,
                       std::abs(covariant_gradient(u, node)[0] - target));
    }
    errs[pass] = worst;
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order > 1.5);
  CHECK(order < 2.5);
}

TEST_CASE("covariant hessian of the radial test field") {
  // u = rho^2 / 2: frame Hessian diag(rho coth rho, 1), trace 1 + rho coth rho
  // the radial quadratic is angular-independent and quadratic along the
  // radial axis, so the centered stencils reproduce it to round-off
  auto fn = [](const ChartPoint& p) { return 0.5 * p.radial() * p.radial(); };
  auto gridq = annulus_grid(33);
  const ScalarField uq = sample(*gridq, fn);
  for (std::int64_t node : gridq->interior) {
    const double rho = gridq->point(node).radial();
    const SymMat H = covariant_hessian(uq, node);
    CHECK(std::abs(H.trace() - (1.0 + rho * laplace_dist(2, rho))) <= 1e-10);
    CHECK(std::abs(H(0, 0) - rho / std::tanh(rho)) <= 1e-10);
    CHECK(std::abs(H(1, 1) - 1.0) <= 1e-10);
  }

  // pure second difference entry vanishes on data linear in the flat axis
  auto grid = annulus_grid(17);
  const ScalarField lin = sample(*grid, [](const ChartPoint& p) { return p.radial(); });
  for (std::int64_t node : grid->interior)
    CHECK(std::abs(covariant_hessian(lin, node)(1, 1)) <= 1e-10);

  CHECK_THROWS_AS(covariant_hessian(lin, 0), std::invalid_argument);
}

TEST_CASE("laplace-beltrami: hessian trace agrees with the flux stencil") {
  auto fn = [](const ChartPoint& p) {
    return std::sin(p[0]) * std::cosh(0.5 * p[1]);
  };
  double errs[2];
  for (int pass = 0; pass < 2; ++pass) {
    auto grid = annulus_grid(pass == 0 ? 17 : 33);
    const ScalarField u = sample(*grid, fn);
    double worst = 0.0;
    for (std::int64_t node : grid->interior)
      worst = std::max(worst, std::abs(covariant_hessian(u, node).trace() -
                                       laplace_beltrami_flux(u, node)));
    errs[pass] = worst;
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order > 1.5);
  CHECK(order < 2.5);
}

TEST_CASE("point state assembly") {
  const QuotientSpec spec{2, 2, 0, 1.0};
  auto grid = annulus_grid(17);

  // flat field: U = 0, sigma_k = 0, outside the cone
  const ScalarField zero = sample(*grid, [](const ChartPoint&) { return 0.0; });
  const PointState flat = assemble_point_state(zero, grid->interior[0], spec, false);
  CHECK_FALSE(flat.admissible);

  // manufactured field: admissible everywhere, U close to c cosh(rho) I
  const auto mc = oracle::make_manufactured(spec, grid, 0.4);
  for (std::int64_t node : grid->interior) {
    const PointState s = assemble_point_state(mc.u_star, node, spec, true);
    CHECK(s.admissible);
    CHECK(s.cone_margin > 0.0);
    // U = tau tr(H) I - H exactly
    const double tr = s.hess.trace();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(s.U(i, j) == (i == j ? tr - s.hess(i, j) : -s.hess(i, j)));
    // eigenvalue ordering flip: ascending U pairs with descending H
    const auto hd = jacobi_eigen(s.hess);
    CHECK(s.lambdaU[0] ==
          doctest::Approx(tr - hd.eigenvalues[1]).epsilon(1e-12));
    CHECK(s.lambdaU[1] ==
          doctest::Approx(tr - hd.eigenvalues[0]).epsilon(1e-12));
    // T is positive definite at admissible states
    CHECK(jacobi_eigen(s.T).eigenvalues[0] > 0.0);
  }
}

TEST_CASE("residual vanishes on the manufactured pair and shifts with amplitude") {
  const QuotientSpec spec{2, 2, 0, 1.0};
  auto grid = annulus_grid(33);
  const auto mc = oracle::make_manufactured(spec, grid, 0.4);

  const ScalarField r = residual_field(mc.u_star, mc.rhs, spec);
  for (std::int64_t node : grid->interior)
    CHECK(std::abs(r[node]) <= 1e-13);

  // doubling the amplitude shifts the residual by (2^{1/m} - 1) f^{1/m}
  const ScalarField r2 = residual_field(mc.u_star, mc.rhs.with_amplitude(2.0), spec);
  const int m = spec.k - spec.l;
  for (std::int64_t node : grid->interior) {
    const double phi1 = std::pow(mc.f_star[node], 1.0 / m);
    const double shift = (std::pow(2.0, 1.0 / m) - 1.0) * phi1;
    CHECK(r2[node] == doctest::Approx(r[node] - shift).epsilon(1e-12));
  }

  CHECK_THROWS_AS(
      residual_field(sample(*grid, [](const ChartPoint&) { return 0.0; }),
                     mc.rhs, spec),
      ConeViolation);
}

TEST_CASE("parallel kernels reproduce the serial reference bitwise") {
  const QuotientSpec spec{2, 2, 0, 1.0};
  auto grid = annulus_grid(33);
  const auto mc = oracle::make_manufactured(spec, grid, 0.4);

  RHSSpec rhs;  // constant profile exercises the generic path
  rhs.amplitude = 1.0;

  const ScalarField rp = residual_field(mc.u_star, rhs, spec);
  const ScalarField rs = residual_field_serial(mc.u_star, rhs, spec);
  CHECK(std::memcmp(rp.values.data(), rs.values.data(),
                    rp.values.size() * sizeof(double)) == 0);

  CHECK(admissibility_margin(mc.u_star, spec) ==
        admissibility_margin_serial(mc.u_star, spec));
}

TEST_CASE("linearize is the Jacobian of the residual") {
  Rng rng(71);
  const QuotientSpec spec{2, 2, 0, 1.0};
  auto grid = annulus_grid(17);
  const auto mc = oracle::make_manufactured(spec, grid, 0.4);

  RHSSpec rhs;
  rhs.amplitude = 1.0;
  rhs.mu = 0.3;
  rhs.s = 0.25;
  rhs.profile = RHSSpec::Profile::RadialGaussian;
  rhs.center = 1.0;
  rhs.width = 0.8;

  const LinearOperator L = linearize(mc.u_star, rhs, spec);

  // smooth random direction, zero on the boundary
  std::vector<double> v(grid->interior.size());
  ScalarField vf(*grid);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const ChartPoint p = grid->point(grid->interior[i]);
    v[i] = std::sin(2.0 * p[0] + rng.uniform(0.0, 0.1)) *
           std::sin(3.0 * p[1]);
    vf[grid->interior[i]] = v[i];
  }
  const std::vector<double> Lv = L.apply_interior(v);

  const ScalarField r0 = residual_field(mc.u_star, rhs, spec);
  auto directional_err = [&](double t) {
    ScalarField ut = mc.u_star;
    for (std::int64_t f = 0; f < grid->total; ++f) ut[f] += t * vf[f];
    const ScalarField rt = residual_field(ut, rhs, spec);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::int64_t node = grid->interior[i];
      worst = std::max(worst,
                       std::abs((rt[node] - r0[node]) / t - Lv[i]));
    }
    return worst;
  };

  double scale = 1.0;
  for (double lv : Lv) scale = std::max(scale, std::abs(lv));
  const double e5 = directional_err(1e-5);
  const double e6 = directional_err(1e-6);
  CHECK(e6 <= 2e-3 * scale);
  CHECK(e5 / e6 > 5.0);  // remainder is first-order in t
  CHECK(e5 / e6 < 20.0);

  // with mu = s = 0 the zero- and first-order f-terms drop out: rows of the
  // two operators differ exactly by those contributions at the center node
  RHSSpec plain;
  plain.amplitude = 1.0;
  const LinearOperator L0 = linearize(mc.u_star, plain, spec);
  const std::vector<double> L0v = L0.apply_interior(v);
  // operators differ (f-terms present above) but both are finite and real
  double diff = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) diff = std::max(diff, std::abs(Lv[i] - L0v[i]));
  CHECK(diff > 0.0);
}

TEST_CASE("ellipticity orderings at admissible states") {
  const QuotientSpec spec{3, 3, 1, 1.0};
  auto grid = annulus_grid3(9);
  const auto mc = oracle::make_manufactured(spec, grid, 0.3);

  for (std::int64_t node : grid->interior) {
    const PointState s = assemble_point_state(mc.u_star, node, spec, true);
    REQUIRE(s.admissible);
    const SpectralDecomp td = jacobi_eigen(s.T);
    CHECK(td.eigenvalues[0] > 0.0);

    // in the frame ordered by descending Hessian eigenvalues, F decreases
    // and T increases
    const SpectralDecomp hd = jacobi_eigen(s.hess);
    FrameMat Q;
    Q.n = 3;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) Q.at(i, j) = hd.eigenvectors(i, 2 - j);
    const SymMat Fe = to_eigenframe(Q, s.Fgrad);
    const SymMat Te = to_eigenframe(Q, s.T);
    const double tol = 1e-10 * (1.0 + Fe.max_abs());
    for (int i = 0; i + 1 < 3; ++i) {
      CHECK(Fe(i, i) >= Fe(i + 1, i + 1) - tol);
      CHECK(Te(i, i) <= Te(i + 1, i + 1) + tol);
    }
    CHECK(Fe(2, 2) > 0.0);
    CHECK(Te(0, 0) > 0.0);
  }
}

TEST_CASE("ricci commutation identity for third covariant derivatives") {
  auto fn = [](const ChartPoint& p) {
    return std::sin(p[0]) * std::cosh(0.5 * p[1]) + 0.1 * p[1] * p[1];
  };
  double errs[2];
  for (int pass = 0; pass < 2; ++pass) {
    auto grid = annulus_grid(pass == 0 ? 81 : 161);
    const ScalarField u = sample(*grid, fn);
    double worst = 0.0;
    for (std::int64_t node : grid->interior) {
      if (grid->boundary_distance(grid->unflat(node)) < 2) continue;
      const ThirdDeriv t3 = third_covariant_frame(u, node);
      const auto grad = covariant_gradient(u, node);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (i == j) continue;
          // u_{jji} - u_{ijj} = u_i on curvature -1
          worst = std::max(worst,
                           std::abs(t3[j][j][i] - t3[i][j][j] - grad[i]));
        }
    }
    errs[pass] = worst;
  }
  // nested differencing is preasymptotic on coarse grids; the rate settles
  // toward 2 from below
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order > 1.5);
  CHECK(order < 2.5);
  CHECK(errs[1] <= 2e-3);
}
