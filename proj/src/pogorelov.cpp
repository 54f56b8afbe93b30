#include "hessquot/pogorelov.hpp"

#include <cmath>
#include <sstream>

#include "hessquot/parallel.hpp"

namespace hessquot {

namespace {

constexpr double kExcluded = -1e300;

}  // namespace

double hessian_norm(const SymMat& H, ProbeConfig::HessNorm norm) {
  if (norm == ProbeConfig::HessNorm::Frobenius) return H.frobenius();
  const SpectralDecomp d = jacobi_eigen(H);
  if (norm == ProbeConfig::HessNorm::LambdaMax)
    return d.eigenvalues[H.n - 1];
  return std::max(std::abs(d.eigenvalues[0]),
                  std::abs(d.eigenvalues[H.n - 1]));
}

namespace {

template <bool Parallel>
EstimateMax estimate_impl(const ScalarField& u, double beta,
                          ProbeConfig::HessNorm norm) {
  const Grid& g = *u.grid;
  const std::int64_t cnt = static_cast<std::int64_t>(g.interior.size());
  auto eval = [&](std::int64_t ii) {
    const std::int64_t node = g.interior[ii];
    if (g.boundary_distance(g.unflat(node)) < 2) return kExcluded;
    const double w = -u[node];
    if (!(w > 0.0)) return kExcluded;
    return std::pow(w, beta) * hessian_norm(covariant_hessian(u, node), norm);
  };

  EstimateMax out;
  if constexpr (Parallel) {
    const auto [ii, v] = parallel_argmax(cnt, eval);
    if (ii >= 0 && v > kExcluded) {
      out.node = g.interior[ii];
      out.value = v;
    }
  } else {
    double best = kExcluded;
    std::int64_t bi = -1;
    for (std::int64_t ii = 0; ii < cnt; ++ii) {
      const double v = eval(ii);
      if (v > best) {
        best = v;
        bi = ii;
      }
    }
    if (bi >= 0 && best > kExcluded) {
      out.node = g.interior[bi];
      out.value = best;
    }
  }
  return out;
}

}  // namespace

EstimateMax estimate_M(const ScalarField& u, double beta,
                       ProbeConfig::HessNorm norm) {
  return estimate_impl<true>(u, beta, norm);
}

EstimateMax estimate_M_serial(const ScalarField& u, double beta,
                              ProbeConfig::HessNorm norm) {
  return estimate_impl<false>(u, beta, norm);
}

bool cauchy_stabilized(double m1, double m2, double m3) {
  return std::abs(m3 - m2) <= 0.2 * std::abs(m2 - m1) + 0.05 * std::abs(m3);
}

EstimateReport refine_sweep(const SolveConfig& base,
                            const std::vector<int>& refinements,
                            const std::vector<double>& betas,
                            const std::vector<double>& amplitudes) {
  EstimateReport report;
  const Grid& g0 = *base.grid;

  for (int nref : refinements) {
    std::array<int, kMaxChartDim> nn{};
    for (int a = 0; a < g0.dim(); ++a) nn[a] = nref;
    auto grid = std::make_shared<const Grid>(
        Grid::make(g0.chart, g0.lo, g0.hi, nn));
    const DistBounds db = dist_bounds(*grid);

    for (double amp : amplitudes) {
      SolveConfig cfg = base;
      cfg.grid = grid;
      cfg.rhs = base.rhs.with_amplitude(amp);

      bool solved = false;
      std::string failure;
      SolveReport rep;
      try {
        rep = continuation_solve(cfg);
        solved = true;
      } catch (const std::runtime_error& err) {
        failure = err.what();
      }

      for (double beta : betas) {
        EstimateCell cell;
        cell.nodes_per_axis = nref;
        cell.h = grid->h[g0.dim() - 1];
        cell.beta = beta;
        cell.amplitude = amp;
        cell.c_minus = db.c_minus;
        cell.c_plus = db.c_plus;
        cell.solved = solved;
        cell.failure = failure;
        if (solved) {
          cell.M_spectral =
              estimate_M(rep.u, beta, ProbeConfig::HessNorm::Spectral).value;
          cell.M_lambda_max =
              estimate_M(rep.u, beta, ProbeConfig::HessNorm::LambdaMax).value;
          cell.M_frobenius =
              estimate_M(rep.u, beta, ProbeConfig::HessNorm::Frobenius).value;
          cell.sup_u = rep.sup_u;
          cell.sup_grad = rep.sup_grad;
        }
        report.cells.push_back(cell);
      }
    }
  }

  // Stabilization over the last three solved refinements per (beta, amp).
  for (double beta : betas) {
    for (double amp : amplitudes) {
      std::vector<double> ms;
      for (const auto& cell : report.cells)
        if (cell.solved && cell.beta == beta && cell.amplitude == amp)
          ms.push_back(cell.M_spectral);
      StabilizationFlag flag;
      flag.beta = beta;
      flag.amplitude = amp;
      if (ms.size() >= 3) {
        flag.m_coarse = ms[ms.size() - 3];
        flag.m_mid = ms[ms.size() - 2];
        flag.m_fine = ms[ms.size() - 1];
        flag.stabilized =
            cauchy_stabilized(flag.m_coarse, flag.m_mid, flag.m_fine);
      }
      report.flags.push_back(flag);
    }
  }
  return report;
}

ProbeDiagnostics probe_P(const ScalarField& u, const ProbeConfig& probe,
                         const QuotientSpec& spec) {
  probe.validate();
  const Grid& g = *u.grid;
  const int n = g.dim();

  // P over interior nodes; nodes without a positive largest eigenvalue (or
  // nonnegative u) cannot carry the log terms and are excluded.
  ScalarField P(g);
  for (auto& v : P.values) v = kExcluded;
  parallel_for(static_cast<std::int64_t>(g.interior.size()), [&](std::int64_t ii) {
    const std::int64_t node = g.interior[ii];
    if (!(u[node] < 0.0)) return;
    const SymMat H = covariant_hessian(u, node);
    const SpectralDecomp d = jacobi_eigen(H);
    const double u11 = d.eigenvalues[n - 1];
    if (!(u11 > 0.0)) return;
    const auto grad = covariant_gradient(u, node);
    double gsq = 0.0;
    for (int a = 0; a < n; ++a) gsq += grad[a] * grad[a];
    P[node] = probe.beta * std::log(-u[node]) + std::log(u11) +
              0.5 * probe.a * gsq + probe.A * g.point(node).radial();
  });

  const auto [arg_ii, pmax] = parallel_argmax(
      static_cast<std::int64_t>(g.interior.size()),
      [&](std::int64_t ii) { return P[g.interior[ii]]; });
  if (arg_ii < 0 || !(pmax > kExcluded))
    throw LogDomain("probe_P: u_11 <= 0 at every interior node");
  const std::int64_t x0 = g.interior[arg_ii];

  ProbeDiagnostics out;
  out.x0 = x0;
  out.P_max = pmax;
  out.u_at_x0 = u[x0];

  const SymMat H = covariant_hessian(u, x0);
  SpectralDecomp hd = jacobi_eigen(H);
  // Descending order, matching u_11 >= u_22 >= ... >= u_nn.
  FrameMat Q;
  Q.n = n;
  for (int j = 0; j < n; ++j) {
    out.hess_eigs[j] = hd.eigenvalues[n - 1 - j];
    for (int i = 0; i < n; ++i) Q.at(i, j) = hd.eigenvectors(i, n - 1 - j);
  }
  out.u11 = out.hess_eigs[0];
  if (!(out.u11 > 0.0)) throw LogDomain("probe_P: u_11 <= 0 at the maximizer");

  if (g.boundary_distance(g.unflat(x0)) < 2) {
    out.interior_max = false;  // MaxOnBoundary: report and stop here
    return out;
  }
  out.interior_max = true;

  // Gradient, rho-gradient and third derivatives in the eigenframe of H.
  const auto grad = covariant_gradient(u, x0);
  const ThirdDeriv t3 = third_covariant_frame(u, x0);
  double grad_e[kMaxChartDim], rho_e[kMaxChartDim], u11i[kMaxChartDim];
  for (int i = 0; i < n; ++i) {
    grad_e[i] = 0.0;
    for (int a = 0; a < n; ++a) grad_e[i] += grad[a] * Q(a, i);
    rho_e[i] = Q(n - 1, i);  // frame gradient of rho is the radial unit
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          s += t3[a][b][c] * Q(a, 0) * Q(b, 0) * Q(c, i);
    u11i[i] = s;
  }

  out.dif1_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    out.dif1[i] = probe.beta * grad_e[i] / out.u_at_x0 + u11i[i] / out.u11 +
                  probe.a * out.hess_eigs[i] * grad_e[i] + probe.A * rho_e[i];
    out.dif1_norm = std::max(out.dif1_norm, std::abs(out.dif1[i]));
  }

  // Operator data at x0 rotated into the same frame.
  const PointState st = assemble_point_state(u, x0, spec, true);
  const SymMat Fe = to_eigenframe(Q, st.Fgrad);
  const SymMat Te = to_eigenframe(Q, st.T);
  const double ftol = 1e-10 * (1.0 + Fe.max_abs());
  out.F_ordering = Fe(n - 1, n - 1) > 0.0;
  out.T_ordering = Te(0, 0) > 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    if (Fe(i, i) < Fe(i + 1, i + 1) - ftol) out.F_ordering = false;
    if (Te(i, i) > Te(i + 1, i + 1) + ftol) out.T_ordering = false;
  }
  out.T11 = Te(0, 0);

  // Second differences of P along the eigenframe axes. Frame direction
  // q_i maps to the coordinate displacement step * q_i^a / sqrt(sigma_aa).
  const MetricAt met = metric_at(g.chart, g.point(x0));
  double step = 1e300;
  for (int a = 0; a < n; ++a)
    step = std::min(step, g.h[a] * std::sqrt(met.sigma[a]));
  const ChartPoint p0 = g.point(x0);
  out.sum_TPii = 0.0;
  for (int i = 0; i < n; ++i) {
    ChartPoint pp = p0, pm = p0;
    for (int a = 0; a < n; ++a) {
      const double d = step * Q(a, i) * met.frame[a];
      pp[a] += d;
      pm[a] -= d;
    }
    const double second =
        (multilinear_sample(P, pp) - 2.0 * P[x0] + multilinear_sample(P, pm)) /
        (step * step);
    out.sum_TPii += Te(i, i) * second;
  }

  const DistBounds db = dist_bounds(g);
  out.final_term = probe.A * out.T11 * laplace_dist(n, db.c_plus);
  return out;
}

}  // namespace hessquot
