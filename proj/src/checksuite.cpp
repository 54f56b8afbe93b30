#include "hessquot/checksuite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hessquot/hessop.hpp"
#include "hessquot/oracle.hpp"
#include "hessquot/sampling.hpp"

namespace hessquot {

namespace {

struct Suite {
  std::vector<CheckResult>* results;

  void add(const std::string& name, bool pass, double worst,
           const std::string& what) {
    std::ostringstream detail;
    detail << what << " = " << worst;
    results->push_back({name, pass, detail.str()});
  }
};

ChartPoint random_admissible_point(Rng& rng, int n) {
  ChartPoint p;
  p.n = n;
  for (int a = 0; a + 2 < n; ++a) p[a] = rng.uniform(-1.0, 1.0);
  if (n >= 2) p[n - 2] = rng.uniform(-1.5, 1.5);
  p[n - 1] = rng.uniform(0.3, 2.0);
  return p;
}

void sigma_checks(Suite& s, Rng& rng, int samples) {
  double worst = 0.0;
  double worst_partial = 0.0;
  double worst_euler = 0.0;
  for (int t = 0; t < samples; ++t) {
    const int n = rng.uniform_int(2, 6);
    Lambda lam;
    lam.n = n;
    for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-2.0, 2.0);
    const int k = rng.uniform_int(1, n);

    const double a = sigma(lam, k);
    const double b = oracle::sigma_bruteforce(lam, k);
    worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));

    const int i = rng.uniform_int(0, n - 1);
    const double pa = sigma_partial(lam, k, i);
    const double pb = oracle::sigma_partial_bruteforce(lam, k, i);
    worst_partial =
        std::max(worst_partial, std::abs(pa - pb) / (1.0 + std::abs(pb)));

    double euler = 0.0;
    for (int j = 0; j < n; ++j) euler += lam[j] * sigma_partial(lam, k, j);
    worst_euler = std::max(worst_euler, std::abs(euler - k * a) /
                                            (1.0 + std::abs(k * a)));
  }
  s.add("sigma.oracle_agreement", worst <= 1e-12, worst, "max rel err");
  s.add("sigma.partial_oracle", worst_partial <= 1e-12, worst_partial,
        "max rel err");
  s.add("sigma.euler_identity", worst_euler <= 1e-11, worst_euler,
        "max rel residual");

  Lambda l{1.0, 2.0, 3.0};
  const bool conv = sigma(l, 0) == 1.0 && sigma(l, 4) == 0.0 &&
                    sigma(l, -1) == 0.0;
  s.add("sigma.convention", conv, conv ? 0.0 : 1.0, "violations");
}

void prop1_checks(Suite& s, Rng& rng, int samples) {
  double worst_res = 0.0;
  double worst_slack = 0.0;  // most negative slack / min partial
  bool nesting_ok = true;
  for (int t = 0; t < samples; ++t) {
    const int n = rng.uniform_int(2, 6);
    const int k = rng.uniform_int(1, n);
    const Lambda lam = random_gamma_k(rng, n, k);

    const Prop1Diagnostics d = check_prop1(lam, k);
    worst_res = std::max(worst_res, d.splitting_residual);
    worst_res = std::max(worst_res, d.trace_identity_residual);
    worst_slack = std::min(worst_slack, d.min_partial);
    worst_slack = std::min(worst_slack, d.sorted_monotone_slack);

    for (int j = 1; j < k && nesting_ok; ++j)
      nesting_ok = in_gamma_k(lam, j);
  }
  s.add("prop1.identities", worst_res <= 1e-10, worst_res, "max rel residual");
  s.add("prop1.positivity_monotonicity", worst_slack >= -1e-10, worst_slack,
        "min slack");
  s.add("prop1.cone_nesting", nesting_ok, nesting_ok ? 0.0 : 1.0, "violations");
}

void maclaurin_checks(Suite& s, Rng& rng, int samples) {
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    const int n = rng.uniform_int(2, 6);
    const int k = rng.uniform_int(1, n);
    const int l = rng.uniform_int(0, k - 1);
    const Lambda lam = random_gamma_k(rng, n, k);
    const int ss = l > 0 ? rng.uniform_int(0, l) : 0;
    const int r = rng.uniform_int(ss + 1, k);
    const auto d = check_maclaurin(lam, QuotientSpec{n, k, l, 1.0}, r, ss);
    worst = std::min(worst, d.product_slack);
    worst = std::min(worst, d.quotient_slack);
  }
  s.add("maclaurin.inequalities", worst >= -1e-12, worst, "min slack");
}

void operator_checks(Suite& s, Rng& rng, const QuotientSpec& extra,
                     int fd_samples, int mc_samples) {
  std::vector<QuotientSpec> specs = {{3, 2, 0, 1.0}, {3, 3, 1, 1.0}, {4, 4, 2, 1.0}};
  specs.push_back(extra);

  double worst_grad = 0.0, worst_hess = 0.0;
  for (const auto& spec : specs) {
    auto fval = [&](const SymMat& M) { return F_value(M, spec); };
    for (int t = 0; t < fd_samples; ++t) {
      const SymMat U = random_gamma_k_sym(rng, spec.n, spec.k);
      const SymMat V = random_direction(rng, spec.n);

      const SymMat G = F_grad(U, spec);
      double contr = 0.0;
      for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) contr += G(i, j) * V(i, j);
      const double fd1 = oracle::fd_derivative(fval, U, V, 1);
      worst_grad = std::max(worst_grad,
                            std::abs(contr - fd1) / (1.0 + std::abs(fd1)));

      const double form = F_hess_form(U, V, spec);
      const double fd2 = oracle::fd_derivative(fval, U, V, 2);
      worst_hess = std::max(worst_hess, std::abs(form - fd2));
    }
  }
  s.add("operator.gradient_vs_fd", worst_grad <= 1e-7, worst_grad,
        "max rel err");
  s.add("operator.hessian_vs_fd", worst_hess <= 1e-6, worst_hess,
        "max abs err");

  double worst_concavity = -1e300;
  double worst_midpoint = 0.0;
  double worst_trace = 0.0;
  double worst_homog = 0.0;
  bool t_positive = true;
  for (int t = 0; t < mc_samples; ++t) {
    const QuotientSpec spec = specs[static_cast<std::size_t>(t) % specs.size()];
    const SymMat U = random_gamma_k_sym(rng, spec.n, spec.k);
    const SymMat V = random_symmetric(rng, spec.n, 1.0);
    worst_concavity = std::max(worst_concavity, F_hess_form(U, V, spec));

    const SymMat W = random_gamma_k_sym(rng, spec.n, spec.k);
    const SymMat mid = 0.5 * (U + W);
    const double gap =
        F_value(mid, spec) - 0.5 * (F_value(U, spec) + F_value(W, spec));
    worst_midpoint = std::min(worst_midpoint, gap);

    worst_trace = std::min(worst_trace, trace_lower_bound(U, spec));

    const double tt = rng.uniform(0.25, 4.0);
    const double fU = F_value(U, spec);
    worst_homog = std::max(
        worst_homog, std::abs(F_value(tt * U, spec) - tt * fU) /
                         (1.0 + std::abs(tt * fU)));

    QuotientSpec tspec = spec;
    tspec.tau = 1.0 + 0.5 * (t % 3);
    const SymMat T = T_coeffs(U, tspec);
    if (!(jacobi_eigen(T).eigenvalues[0] > 0.0)) t_positive = false;
  }
  s.add("operator.concavity_form", worst_concavity <= 1e-10, worst_concavity,
        "max form value");
  s.add("operator.midpoint_concavity", worst_midpoint >= -1e-10,
        worst_midpoint, "min midpoint gap");
  s.add("operator.trace_lower_bound", worst_trace >= -1e-10, worst_trace,
        "min slack");
  s.add("operator.homogeneity", worst_homog <= 1e-12, worst_homog,
        "max rel err");
  s.add("operator.T_positive_definite", t_positive, t_positive ? 0.0 : 1.0,
        "violations");

  // Equality of the trace bound at the identity for (3,2,0).
  const QuotientSpec eq{3, 2, 0, 1.0};
  const double slack_id = trace_lower_bound(SymMat::identity(3), eq);
  s.add("operator.trace_bound_identity_equality", std::abs(slack_id) <= 1e-12,
        slack_id, "slack at U=I");

  // Divided-difference identity for distinct diagonal entries.
  double worst_fl1 = 0.0;
  for (int t = 0; t < 200; ++t) {
    for (const auto& spec : specs) {
      if (spec.k < 3) continue;  // stated for k >= 3
      Lambda lam = random_gamma_k(rng, spec.n, spec.k);
      std::stable_sort(lam.v.begin(), lam.v.begin() + spec.n,
                       [](double x, double y) { return x > y; });
      bool distinct = true;
      for (int i = 0; i + 1 < spec.n; ++i)
        if (std::abs(lam[i] - lam[i + 1]) < 1e-3) distinct = false;
      if (!distinct) continue;
      const SymMat U = SymMat::diag(lam);
      const SymMat G = F_grad(U, spec);
      for (int i = 1; i < spec.n; ++i) {
        SymMat V(spec.n);
        V.at(0, i) = 1.0;
        const double coeff = 0.5 * F_hess_form(U, V, spec);
        const double target = (G(0, 0) - G(i, i)) / (U(i, i) - U(0, 0));
        worst_fl1 = std::max(worst_fl1, std::abs(-coeff - target) /
                                            (1.0 + std::abs(target)));
      }
    }
  }
  s.add("operator.FL1_quotient_identity", worst_fl1 <= 1e-8, worst_fl1,
        "max rel err");

  bool fl2 = true;
  for (int t = 0; t < 1000 && fl2; ++t) {
    const QuotientSpec spec = specs[static_cast<std::size_t>(t) % 3];
    Lambda lam = random_gamma_k(rng, spec.n, spec.k);
    std::stable_sort(lam.v.begin(), lam.v.begin() + spec.n,
                     [](double x, double y) { return x > y; });
    fl2 = check_FL2(SymMat::diag(lam), spec);
  }
  s.add("operator.FL2_ordering", fl2, fl2 ? 0.0 : 1.0, "violations");
}

void geometry_checks(Suite& s, Rng& rng, const RunConfig& config, int points) {
  double worst_pullback = 0.0, worst_compat = 0.0, worst_riemann = 0.0,
         worst_gauss = 0.0;
  for (int t = 0; t < points; ++t) {
    const int n = 2 + t % 2;  // alternate n = 2 and n = 3
    PolarChart chart{n, 1e-3};
    const ChartPoint p = random_admissible_point(rng, n);

    // metric vs embedding pullback (finite-difference tangents)
    const MetricAt met = metric_at(chart, p);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b <= a; ++b) {
        ChartPoint pa = p, ma = p, pb = p, mb = p;
        pa[a] += 1e-5;
        ma[a] -= 1e-5;
        pb[b] += 1e-5;
        mb[b] -= 1e-5;
        const LorentzPoint Xa_p = embed(chart, pa), Xa_m = embed(chart, ma);
        const LorentzPoint Xb_p = embed(chart, pb), Xb_m = embed(chart, mb);
        LorentzPoint ta, tb;
        ta.dim = tb.dim = n + 1;
        for (int c = 0; c <= n; ++c) {
          ta.x[c] = (Xa_p.x[c] - Xa_m.x[c]) / 2e-5;
          tb.x[c] = (Xb_p.x[c] - Xb_m.x[c]) / 2e-5;
        }
        const double target = (a == b) ? met.sigma[a] : 0.0;
        worst_pullback = std::max(
            worst_pullback, std::abs(lorentz_inner(ta, tb) - target));
      }
    }

    // covariant derivative of the metric assembled numerically
    const Christoffel gam = christoffel(chart, p);
    for (int kdir = 0; kdir < n; ++kdir) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double v = (i == j) ? met.dsigma[i][kdir] : 0.0;
          for (int m = 0; m < n; ++m) {
            v -= gam.gamma[m][kdir][i] * (m == j ? met.sigma[j] : 0.0);
            v -= gam.gamma[m][kdir][j] * (m == i ? met.sigma[i] : 0.0);
          }
          worst_compat = std::max(worst_compat, std::abs(v));
        }
      }
    }

    const RiemannCheck rc = riemann_check(chart, p);
    worst_riemann = std::max(worst_riemann, rc.max_residual);
    worst_riemann = std::max(worst_riemann, rc.max_sectional_deviation);

    const GaussWeingartenCheck gw = gauss_weingarten_check(chart, p);
    worst_gauss = std::max(worst_gauss, gw.h_vs_sigma);
    worst_gauss = std::max(worst_gauss, gw.gauss_residual);
    worst_gauss = std::max(worst_gauss, gw.weingarten_residual);
    worst_gauss = std::max(worst_gauss, gw.normal_norm);
    worst_gauss = std::max(worst_gauss, gw.tangency);
  }
  s.add("geometry.metric_pullback", worst_pullback <= 1e-8, worst_pullback,
        "max abs err");
  s.add("geometry.metric_compatibility", worst_compat <= 1e-8, worst_compat,
        "max abs err");
  s.add("geometry.constant_curvature", worst_riemann <= 1e-6, worst_riemann,
        "max residual");
  s.add("geometry.gauss_weingarten", worst_gauss <= 1e-6, worst_gauss,
        "max residual");

  // distance axioms and Laplacian bounds
  PolarChart chart{2, 1e-3};
  double worst_dist = 0.0;
  double worst_triangle = 0.0;
  for (int t = 0; t < points; ++t) {
    const ChartPoint a = random_admissible_point(rng, 2);
    const ChartPoint b = random_admissible_point(rng, 2);
    const ChartPoint c = random_admissible_point(rng, 2);
    const double dab = geodesic_dist(chart, a, b);
    const double dba = geodesic_dist(chart, b, a);
    worst_dist = std::max(worst_dist, std::abs(dab - dba));
    worst_dist = std::max(worst_dist, geodesic_dist(chart, a, a));
    worst_triangle =
        std::min(worst_triangle,
                 geodesic_dist(chart, a, c) + geodesic_dist(chart, c, b) - dab);
  }
  s.add("geometry.distance_axioms",
        worst_dist <= 1e-12 && worst_triangle >= -1e-10,
        std::min(-worst_dist, worst_triangle), "min slack");

  bool lap_ok = std::abs(laplace_dist(2, 1.0) - 1.0 / std::tanh(1.0)) < 1e-15;
  double prev = 1e300;
  for (double rho = 0.1; rho < 15.0; rho *= 1.4) {
    const double v = laplace_dist(3, rho);
    if (!(v < prev) || !(v > 2.0)) lap_ok = false;  // decreasing, above n-1
    prev = v;
  }
  s.add("geometry.laplace_dist", lap_ok, lap_ok ? 0.0 : 1.0, "violations");

  // coth bounds and the comparison chain on the configured domain
  const auto grid = config.make_grid();
  const DistBounds db = dist_bounds(*grid);
  const double slack = std::min(db.coth_bounds_slack, db.comparison_slack);
  s.add("geometry.dist_bounds", slack >= -1e-12, slack, "min slack");
}

void discrete_checks(Suite& s, const RunConfig& config) {
  // Laplace-Beltrami consistency: trace of the covariant Hessian against the
  // divergence-form stencil, and against (n-1) coth(rho) for u = rho.
  PolarChart chart{2, 1e-3};
  std::array<double, kMaxChartDim> lo{-0.6, 0.5}, hi{0.6, 1.5};
  double errs[2];
  for (int pass = 0; pass < 2; ++pass) {
    const int nn = pass == 0 ? 17 : 33;
    std::array<int, kMaxChartDim> nodes{nn, nn};
    const Grid grid = Grid::make(chart, lo, hi, nodes);
    ScalarField u(grid);
    for (std::int64_t f = 0; f < grid.total; ++f) {
      const ChartPoint p = grid.point(f);
      u[f] = std::sin(p[0]) * std::cosh(0.5 * p[1]);
    }
    double worst = 0.0;
    for (std::int64_t node : grid.interior) {
      const double tr = covariant_hessian(u, node).trace();
      const double flux = laplace_beltrami_flux(u, node);
      worst = std::max(worst, std::abs(tr - flux));
    }
    errs[pass] = worst;
  }
  const double order = std::log2(errs[0] / errs[1]);
  s.add("hessop.laplace_consistency", order > 1.5 && order < 2.5, order,
        "measured order");

  // rho-field Laplacian against the closed form
  double rerrs[2];
  for (int pass = 0; pass < 2; ++pass) {
    const int nn = pass == 0 ? 17 : 33;
    std::array<int, kMaxChartDim> nodes{nn, nn};
    const Grid grid = Grid::make(chart, lo, hi, nodes);
    ScalarField rho(grid);
    for (std::int64_t f = 0; f < grid.total; ++f)
      rho[f] = grid.point(f).radial();
    double worst = 0.0;
    for (std::int64_t node : grid.interior) {
      const double lap = covariant_hessian(rho, node).trace();
      worst = std::max(
          worst, std::abs(lap - laplace_dist(2, grid.point(node).radial())));
    }
    rerrs[pass] = worst;
  }
  s.add("hessop.laplace_dist_field",
        rerrs[1] <= 1e-4 && rerrs[1] < rerrs[0], rerrs[1], "fine-grid err");

  // Ricci commutation: u_{ijj} - u_{jji} = u_i for i != j on a smooth field,
  // with the O(h^2) rate confirmed across a refinement.
  double cerrs[2];
  for (int pass = 0; pass < 2; ++pass) {
    const int nn = pass == 0 ? 41 : 81;
    std::array<int, kMaxChartDim> nodes{nn, nn};
    const Grid grid = Grid::make(chart, lo, hi, nodes);
    ScalarField u(grid);
    for (std::int64_t f = 0; f < grid.total; ++f) {
      const ChartPoint p = grid.point(f);
      u[f] = std::sin(p[0]) * std::cosh(0.5 * p[1]) + 0.1 * p[1] * p[1];
    }
    double worst = 0.0;
    for (std::int64_t node : grid.interior) {
      if (grid.boundary_distance(grid.unflat(node)) < 2) continue;
      const ThirdDeriv t3 = third_covariant_frame(u, node);
      const auto grad = covariant_gradient(u, node);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          if (i == j) continue;
          const double lhs = t3[j][j][i] - t3[i][j][j];
          worst = std::max(worst, std::abs(lhs - grad[i]));
        }
      }
    }
    cerrs[pass] = worst;
  }
  const double corder = std::log2(cerrs[0] / cerrs[1]);
  s.add("hessop.ricci_commutation",
        corder > 1.3 && corder < 2.5 && cerrs[1] < 1e-2, corder,
        "measured order");

  (void)config;
}

}  // namespace

std::vector<CheckResult> run_check_suite(const RunConfig& config,
                                         std::uint64_t seed) {
  std::vector<CheckResult> results;
  Suite s{&results};
  Rng rng(seed);

  sigma_checks(s, rng, 10000);
  prop1_checks(s, rng, 10000);
  maclaurin_checks(s, rng, 10000);
  operator_checks(s, rng, config.quotient, 100, 10000);
  geometry_checks(s, rng, config, 500);
  discrete_checks(s, config);
  return results;
}

}  // namespace hessquot
