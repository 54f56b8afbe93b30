#include "hessquot/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "hessquot/parallel.hpp"

namespace hessquot {

namespace {

constexpr double kAlphaFloor = 1e-8;

double boundary_value(const SolveConfig& config, std::int64_t node) {
  return config.dirichlet ? (*config.dirichlet)[node] : 0.0;
}

Eigen::VectorXd solve_sparse(const LinearOperator& op,
                             const Eigen::VectorXd& rhs, double tol,
                             const char* where) {
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>> krylov;
  krylov.setTolerance(tol);
  krylov.setMaxIterations(20000);
  krylov.compute(op.A);
  Eigen::VectorXd x = krylov.solve(rhs);
  if (krylov.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << where << ": BiCGSTAB stopped at error " << krylov.error()
        << " after " << krylov.iterations() << " iterations";
    throw LinearSolveFailure(msg.str());
  }
  return x;
}

double interior_max_abs(const Grid& g, const ScalarField& r) {
  return parallel_argmax(static_cast<std::int64_t>(g.interior.size()),
                         [&](std::int64_t i) {
                           return std::abs(r[g.interior[i]]);
                         })
      .second;
}

void finalize_report(SolveReport& rep, const SolveConfig& config) {
  const Grid& g = *rep.grid;
  rep.sup_u = rep.u.max_abs();
  rep.sup_grad =
      parallel_argmax(g.total,
                      [&](std::int64_t f) {
                        const auto gr = covariant_gradient(rep.u, f);
                        double s = 0.0;
                        for (int a = 0; a < g.dim(); ++a) s += gr[a] * gr[a];
                        return std::sqrt(s);
                      })
          .second;
  rep.admissibility_certificate = admissibility_margin(rep.u, config.spec);
  const double max_interior_u =
      parallel_argmax(static_cast<std::int64_t>(g.interior.size()),
                      [&](std::int64_t i) { return rep.u[g.interior[i]]; })
          .second;
  rep.negative_interior = max_interior_u < 0.0;
}

}  // namespace

void SolveConfig::validate() const {
  spec.validate();
  rhs.validate();
  if (!grid) throw ConfigError("solve config has no grid");
  if (grid->chart.n != spec.n)
    throw ConfigError("grid dimension does not match quotient.n");
  if (continuation_steps < 1)
    throw ConfigError("solve.continuation_steps must be >= 1");
  if (!(newton_tol > 0.0) || !(cone_margin > 0.0) || !(linear_tol > 0.0))
    throw ConfigError("solver tolerances must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw ConfigError("solve.backtrack_factor must lie in (0,1)");
  if (max_iterations < 1) throw ConfigError("solve.max_iterations must be >= 1");
  if (dirichlet && static_cast<std::int64_t>(dirichlet->size()) != grid->total)
    throw ConfigError("dirichlet data size does not match the grid");
}

double poisson_source_level(const SolveConfig& config) {
  const Grid& g = *config.grid;
  const int m = config.spec.k - config.spec.l;
  double gbar = 0.0;
  for (std::int64_t node : g.interior)
    gbar += config.rhs.g_at(g.point(node), node);
  gbar /= static_cast<double>(g.interior.size());
  const double phi_bar = std::pow(config.rhs.amplitude * gbar, 1.0 / m);
  const double cnkl = std::pow(
      binomial(config.spec.n, config.spec.k) / binomial(config.spec.n, config.spec.l),
      1.0 / m);
  return phi_bar / ((config.spec.tau - 1.0 / config.spec.n) * cnkl);
}

namespace {

/// Solves the linear Dirichlet problem (Laplace u = c) without any cone
/// certificate.
ScalarField poisson_field(const SolveConfig& config, double c) {
  const Grid& g = *config.grid;
  const std::int64_t rows = static_cast<std::int64_t>(g.interior.size());

  std::vector<NodeCoeffs> coeffs(rows);
  for (auto& nc : coeffs) nc.Tf = SymMat::identity(g.dim());
  std::vector<double> bvals(g.total, 0.0);
  if (config.dirichlet)
    for (std::int64_t f = 0; f < g.total; ++f) bvals[f] = boundary_value(config, f);
  const LinearOperator lap = assemble_operator(g, coeffs, bvals.data());

  Eigen::VectorXd rhs_vec = Eigen::VectorXd::Constant(rows, c) - lap.boundary_term;
  const Eigen::VectorXd x =
      solve_sparse(lap, rhs_vec, config.linear_tol, "poisson_init");

  ScalarField u0(g);
  for (std::int64_t f = 0; f < g.total; ++f) u0[f] = bvals[f];
  for (std::int64_t ri = 0; ri < rows; ++ri) u0[g.interior[ri]] = x[ri];
  return u0;
}

/// Local repair for small, isolated cone deficits (box-corner spikes of the
/// linear start): lowering a node's value raises every frame second
/// difference through it, moving lambda(U) cone-ward for tau >= 1. The dents
/// damage neighbours by about half the gain, so the iteration converges only
/// when deficits are small; large or strip-shaped deficits are declined and
/// left to the cone-widening continuation.
bool repair_admissibility(ScalarField& u, const SolveConfig& config) {
  const Grid& g = *config.grid;
  const double target = 2.0 * config.cone_margin;

  double worst_rel_deficit = 0.0;
  for (std::int64_t node : g.interior) {
    const PointState s = assemble_point_state(u, node, config.spec, false);
    if (s.cone_margin >= target) continue;
    const double scale = 1.0 + s.lambdaU.max_abs();
    worst_rel_deficit = std::max(worst_rel_deficit, -s.lambdaU[0] / scale);
  }
  if (worst_rel_deficit > 0.25) return false;

  for (int sweep = 0; sweep < 20; ++sweep) {
    bool any_bad = false;
    for (std::int64_t node : g.interior) {
      PointState s = assemble_point_state(u, node, config.spec, false);
      if (s.cone_margin >= target) continue;
      any_bad = true;
      const MetricAt met = metric_at(g.chart, g.point(node));
      double hmin2 = 1e300;
      for (int a = 0; a < g.dim(); ++a)
        hmin2 = std::min(hmin2, g.h[a] * g.h[a] * met.sigma[a]);
      double dent = hmin2 * std::max(1e-3, 1e-3 - s.lambdaU[0]);
      const double cap = 64.0 * dent;
      while (dent < cap) {
        u[node] -= dent;
        if (assemble_point_state(u, node, config.spec, false).cone_margin >=
            target)
          break;
        dent *= 2.0;
      }
      if (dent >= cap) return false;
    }
    if (!any_bad) return admissibility_margin(u, config.spec) >= config.cone_margin;
  }
  return false;
}

/// Smallest extra tau that moves every node of u into the cone with relative
/// eigenvalue headroom eps: raising tau shifts lambda(U) by dtau * trace(H)
/// in the unchanged eigenframe. Returns +inf when some node has a
/// nonpositive Laplacian and negative eigenvalue headroom.
double tau_boost_needed(const ScalarField& u, const QuotientSpec& spec,
                        double eps) {
  const Grid& g = *u.grid;
  double boost = 0.0;
  for (std::int64_t node : g.interior) {
    const PointState s = assemble_point_state(u, node, spec, false);
    const double scale = 1.0 + s.lambdaU.max_abs();
    const double lack = eps * scale - s.lambdaU[0];
    if (lack <= 0.0) continue;
    const double lap = s.hess.trace();
    if (!(lap > 0.0)) return 1e300;
    boost = std::max(boost, lack / lap);
  }
  return boost;
}

/// Largest tau decrease that keeps every node's eigenvalue headroom at eps.
double tau_slack(const ScalarField& u, const QuotientSpec& spec, double eps) {
  const Grid& g = *u.grid;
  double slack = 1e300;
  for (std::int64_t node : g.interior) {
    const PointState s = assemble_point_state(u, node, spec, false);
    const double scale = 1.0 + s.lambdaU.max_abs();
    const double lap = s.hess.trace();
    if (lap > 0.0)
      slack = std::min(slack, (s.lambdaU[0] - eps * scale) / lap);
  }
  return std::max(slack, 0.0);
}

}  // namespace

ScalarField poisson_init(const SolveConfig& config) {
  config.validate();
  double c = poisson_source_level(config);
  for (int attempt = 0; attempt < 8; ++attempt, c *= 2.0) {
    ScalarField u0 = poisson_field(config, c);
    if (admissibility_margin(u0, config.spec) >= config.cone_margin) return u0;
  }
  throw InitFailure(
      "poisson_init: no admissible start found after 8 source levels");
}

namespace {

/// Admissible start for the target problem. The source-matched linear solve
/// is tried first. When its cone certificate fails (box corners push the
/// linear solution's Hessian out of any fixed cone under refinement), the
/// problem is solved with a widened tau that admits the linear start and tau
/// is then ridden down to the target: each rung is a certified Newton solve
/// and the rung size is the certified eigenvalue slack. A stall before the
/// target tau is the honest signature that the admissible branch dies out.
ScalarField initial_guess(const SolveConfig& config) {
  try {
    return poisson_init(config);
  } catch (const InitFailure& primary) {
    constexpr double kHeadroom = 0.05;
    constexpr int kMaxRungs = 64;
    const double tau_target = config.spec.tau;

    {
      ScalarField dented = poisson_field(config, poisson_source_level(config));
      if (repair_admissibility(dented, config)) return dented;
    }

    ScalarField u = poisson_field(config, poisson_source_level(config));
    double eps = kHeadroom;
    double tau = 0.0;
    for (int tries = 0;; ++tries) {
      const double boost = tau_boost_needed(u, config.spec, eps);
      if (boost >= 1e300 || tau_target + boost > 128.0) {
        std::ostringstream msg;
        msg << primary.what()
            << "; no widened cone admits the linear start (needed boost "
            << boost << ")";
        throw InitFailure(msg.str());
      }
      tau = tau_target + boost;
      QuotientSpec wide = config.spec;
      wide.tau = tau;
      if (admissibility_margin(u, wide) >= config.cone_margin) break;
      if (tries >= 6) throw;
      eps *= 2.0;  // headroom in lambda terms was too thin for the margin
    }

    for (int rung = 0; rung < kMaxRungs; ++rung) {
      SolveConfig step = config;
      step.spec.tau = tau;
      SolveReport rep;
      try {
        rep = newton_solve(u, step.rhs, step);
      } catch (const std::runtime_error& err) {
        std::ostringstream msg;
        msg << primary.what() << "; cone-widening continuation failed at tau = "
            << tau << ": " << err.what();
        throw InitFailure(msg.str());
      }
      u = rep.u;
      if (tau == tau_target) return u;

      const double slack = tau_slack(u, step.spec, kHeadroom);
      const double dtau = 0.9 * slack;
      if (!(dtau > 1e-4 * tau)) {
        std::ostringstream msg;
        msg << primary.what()
            << "; cone-widening continuation stalled at tau = " << tau
            << " (target " << tau_target
            << "): the admissible branch loses its margin";
        throw InitFailure(msg.str());
      }
      tau = std::max(tau_target, tau - dtau);
    }
    std::ostringstream msg;
    msg << primary.what() << "; cone-widening continuation exceeded "
        << kMaxRungs << " rungs before reaching tau = " << tau_target;
    throw InitFailure(msg.str());
  }
}

}  // namespace

SolveReport newton_solve(const ScalarField& u_init, const RHSSpec& rhs,
                         const SolveConfig& config) {
  config.validate();
  const Grid& g = *config.grid;
  const std::int64_t rows = static_cast<std::int64_t>(g.interior.size());

  SolveReport rep;
  rep.grid = config.grid;
  rep.u = u_init;
  rep.u.grid = config.grid.get();

  ScalarField r = residual_field(rep.u, rhs, config.spec);
  double norm = interior_max_abs(g, r);
  rep.history.push_back({0, 0, norm, 0.0, 0, 0,
                         admissibility_margin(rep.u, config.spec)});

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    if (norm <= config.newton_tol) {
      rep.final_residual = norm;
      finalize_report(rep, config);
      return rep;
    }

    const LinearOperator jac = linearize(rep.u, rhs, config.spec);
    Eigen::VectorXd minus_r(rows);
    for (std::int64_t ri = 0; ri < rows; ++ri) minus_r[ri] = -r[g.interior[ri]];
    const Eigen::VectorXd delta =
        solve_sparse(jac, minus_r, config.linear_tol, "newton_solve");

    double alpha = 1.0;
    int backtracks = 0, cone_rejections = 0;
    ScalarField u_try(g);
    double margin = 0.0;
    for (;;) {
      u_try.values = rep.u.values;
      for (std::int64_t ri = 0; ri < rows; ++ri)
        u_try[g.interior[ri]] += alpha * delta[ri];

      // Cone first: F is undefined outside Gamma_k, so the eigen test must
      // precede any residual evaluation.
      margin = admissibility_margin(u_try, config.spec);
      if (margin < config.cone_margin) {
        ++backtracks;
        ++cone_rejections;
        ++rep.safeguard_activations;
        alpha *= config.backtrack_factor;
        if (alpha < kAlphaFloor)
          throw LineSearchStall("newton_solve: cone safeguard drove alpha below 1e-8");
        continue;
      }
      ScalarField r_try = residual_field(u_try, rhs, config.spec);
      const double norm_try = interior_max_abs(g, r_try);
      if (norm_try < norm) {
        r = std::move(r_try);
        norm = norm_try;
        break;
      }
      ++backtracks;
      alpha *= config.backtrack_factor;
      if (alpha < kAlphaFloor)
        throw LineSearchStall("newton_solve: no residual decrease above alpha = 1e-8");
    }
    rep.u.values = u_try.values;
    rep.history.push_back({0, iter, norm, alpha, backtracks, cone_rejections, margin});
  }

  if (norm <= config.newton_tol) {
    rep.final_residual = norm;
    finalize_report(rep, config);
    return rep;
  }
  std::ostringstream msg;
  msg << "newton_solve: residual " << norm << " above tolerance "
      << config.newton_tol << " after " << config.max_iterations
      << " iterations";
  throw MaxIterations(msg.str());
}

SolveReport continuation_solve(const SolveConfig& config) {
  config.validate();
  const Grid& g = *config.grid;
  const int m = config.spec.k - config.spec.l;

  ScalarField u = initial_guess(config);

  // Init-matched amplitude: the median per-node ratio between the operator
  // value and the amplitude-one data.
  std::vector<double> match;
  match.reserve(g.interior.size());
  for (std::int64_t node : g.interior) {
    const PointState s = assemble_point_state(u, node, config.spec, false);
    const double f1 = config.rhs.with_amplitude(1.0).f_value(
        g.point(node), node, s.u, s.grad_sq);
    match.push_back(std::pow(s.F, m) / f1);
  }
  std::nth_element(match.begin(), match.begin() + match.size() / 2, match.end());
  double a_start = match[match.size() / 2];
  const double a_target = config.rhs.amplitude;
  if (!(a_start > 0.0) || !std::isfinite(a_start)) a_start = a_target;

  SolveReport rep;
  const int steps = config.continuation_steps;
  for (int j = 1; j <= steps; ++j) {
    const double a_j =
        j == steps ? a_target
                   : a_start * std::pow(a_target / a_start,
                                        static_cast<double>(j) / steps);
    SolveReport sub;
    try {
      sub = newton_solve(u, config.rhs.with_amplitude(a_j), config);
    } catch (const std::runtime_error& err) {
      std::ostringstream msg;
      msg << "continuation step " << j << "/" << steps << " (amplitude " << a_j
          << "): " << err.what();
      if (dynamic_cast<const LineSearchStall*>(&err)) throw LineSearchStall(msg.str());
      if (dynamic_cast<const MaxIterations*>(&err)) throw MaxIterations(msg.str());
      if (dynamic_cast<const LinearSolveFailure*>(&err))
        throw LinearSolveFailure(msg.str());
      if (dynamic_cast<const ConeViolation*>(&err)) throw ConeViolation(msg.str());
      throw;
    }
    u = sub.u;
    for (auto& h : sub.history) h.continuation_step = j;
    rep.history.insert(rep.history.end(), sub.history.begin(), sub.history.end());
    rep.continuation_amplitudes.push_back(a_j);
    rep.safeguard_activations += sub.safeguard_activations;
    rep.grid = sub.grid;
    rep.u = sub.u;
    rep.u.grid = rep.grid.get();
    rep.final_residual = sub.final_residual;
    rep.sup_u = sub.sup_u;
    rep.sup_grad = sub.sup_grad;
    rep.admissibility_certificate = sub.admissibility_certificate;
    rep.negative_interior = sub.negative_interior;
  }
  return rep;
}

std::string report_to_text(const SolveReport& report) {
  std::ostringstream os;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  const Grid& g = *report.grid;
  os << "grid =";
  for (int a = 0; a < g.dim(); ++a) os << " " << g.nodes[a];
  os << "\n";
  os << "final_residual = " << num(report.final_residual) << "\n";
  os << "sup_u = " << num(report.sup_u) << "\n";
  os << "sup_grad = " << num(report.sup_grad) << "\n";
  os << "admissibility_certificate = " << num(report.admissibility_certificate)
     << "\n";
  os << "negative_interior = " << (report.negative_interior ? "yes" : "no")
     << "\n";
  os << "safeguard_activations = " << report.safeguard_activations << "\n";
  os << "continuation_amplitudes =";
  for (double a : report.continuation_amplitudes) os << " " << num(a);
  os << "\n";
  os << "history = step iter residual alpha backtracks cone_rejections margin\n";
  for (const auto& h : report.history) {
    os << "  " << h.continuation_step << " " << h.newton_iter << " "
       << num(h.residual_norm) << " " << num(h.alpha) << " " << h.backtracks
       << " " << h.cone_rejections << " " << num(h.cone_margin) << "\n";
  }
  return os.str();
}

}  // namespace hessquot
