#include "hessquot/hessop.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include "hessquot/parallel.hpp"

namespace hessquot {

namespace {

std::array<std::int64_t, kMaxChartDim> axis_strides(const Grid& g) {
  std::array<std::int64_t, kMaxChartDim> s{};
  std::int64_t acc = 1;
  for (int a = 0; a < g.dim(); ++a) {
    s[a] = acc;
    acc *= g.nodes[a];
  }
  return s;
}

double cone_margin_of(const Lambda& lam, int k) {
  const double s1 = sigma(lam, 1);
  if (!(s1 > 0.0)) return s1 / (1.0 + lam.max_abs());
  double m = 1.0;
  double s1p = 1.0;
  for (int j = 1; j <= k; ++j) {
    s1p *= s1;
    m = std::min(m, sigma(lam, j) / s1p);
  }
  return m;
}

// Coordinate covariant Hessian (second differences minus Christoffel terms),
// before any frame rescaling. Needs all +-1 neighbors.
void coordinate_cov_hessian(const ScalarField& u, std::int64_t node,
                            const std::array<std::int64_t, kMaxChartDim>& st,
                            double out[kMaxChartDim][kMaxChartDim]) {
  const Grid& g = *u.grid;
  const int n = g.dim();
  const ChartPoint p = g.point(node);
  const Christoffel gam = christoffel(g.chart, p);

  double grad[kMaxChartDim];
  for (int a = 0; a < n; ++a)
    grad[a] = (u[node + st[a]] - u[node - st[a]]) / (2.0 * g.h[a]);

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b <= a; ++b) {
      double d2;
      if (a == b) {
        d2 = (u[node + st[a]] - 2.0 * u[node] + u[node - st[a]]) /
             (g.h[a] * g.h[a]);
      } else {
        d2 = (u[node + st[a] + st[b]] - u[node + st[a] - st[b]] -
              u[node - st[a] + st[b]] + u[node - st[a] - st[b]]) /
             (4.0 * g.h[a] * g.h[b]);
      }
      for (int m = 0; m < n; ++m) d2 -= gam.gamma[m][a][b] * grad[m];
      out[a][b] = d2;
      out[b][a] = d2;
    }
  }
}

}  // namespace

double coordinate_first_diff(const ScalarField& u, std::int64_t node,
                             int axis) {
  const Grid& g = *u.grid;
  const auto st = axis_strides(g);
  const auto idx = g.unflat(node);
  const double h = g.h[axis];
  const std::int64_t s = st[axis];
  if (idx[axis] == 0)
    return (-3.0 * u[node] + 4.0 * u[node + s] - u[node + 2 * s]) / (2.0 * h);
  if (idx[axis] == g.nodes[axis] - 1)
    return (3.0 * u[node] - 4.0 * u[node - s] + u[node - 2 * s]) / (2.0 * h);
  return (u[node + s] - u[node - s]) / (2.0 * h);
}

std::array<double, kMaxChartDim> covariant_gradient(const ScalarField& u,
                                                    std::int64_t node) {
  const Grid& g = *u.grid;
  const MetricAt met = metric_at(g.chart, g.point(node));
  std::array<double, kMaxChartDim> out{};
  for (int a = 0; a < g.dim(); ++a)
    out[a] = coordinate_first_diff(u, node, a) * met.frame[a];
  return out;
}

SymMat covariant_hessian(const ScalarField& u, std::int64_t node) {
  const Grid& g = *u.grid;
  const int n = g.dim();
  const auto idx = g.unflat(node);
  if (g.is_boundary(idx))
    throw std::invalid_argument("covariant_hessian: boundary node");
  const auto st = axis_strides(g);
  const MetricAt met = metric_at(g.chart, g.point(node));

  double cov[kMaxChartDim][kMaxChartDim];
  coordinate_cov_hessian(u, node, st, cov);
  SymMat H(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b <= a; ++b)
      H.at(a, b) = cov[a][b] * met.frame[a] * met.frame[b];
  return H;
}

double laplace_beltrami_flux(const ScalarField& u, std::int64_t node) {
  const Grid& g = *u.grid;
  const int n = g.dim();
  const auto st = axis_strides(g);
  const ChartPoint p = g.point(node);
  const MetricAt met = metric_at(g.chart, p);

  double lap = 0.0;
  for (int a = 0; a < n; ++a) {
    ChartPoint pp = p, pm = p;
    pp[a] += 0.5 * g.h[a];
    pm[a] -= 0.5 * g.h[a];
    const MetricAt mp = metric_at(g.chart, pp);
    const MetricAt mm = metric_at(g.chart, pm);
    const double wp = mp.sqrt_det * mp.inv_sigma[a];
    const double wm = mm.sqrt_det * mm.inv_sigma[a];
    lap += (wp * (u[node + st[a]] - u[node]) - wm * (u[node] - u[node - st[a]])) /
           (g.h[a] * g.h[a]);
  }
  return lap / met.sqrt_det;
}

PointState assemble_point_state(const ScalarField& u, std::int64_t node,
                                const QuotientSpec& spec,
                                bool with_operator_data) {
  const int n = u.grid->dim();
  PointState s;
  s.node = node;
  s.u = u[node];
  s.grad = covariant_gradient(u, node);
  for (int a = 0; a < n; ++a) s.grad_sq += s.grad[a] * s.grad[a];
  s.hess = covariant_hessian(u, node);

  s.U = s.hess;
  s.U *= -1.0;
  const double tr = spec.tau * s.hess.trace();
  for (int a = 0; a < n; ++a) s.U.at(a, a) += tr;

  const SpectralDecomp eig = jacobi_eigen(s.U);
  s.lambdaU = eig.eigenvalues;
  s.cone_margin = cone_margin_of(s.lambdaU, spec.k);
  s.admissible = in_gamma_k(s.lambdaU, spec.k);

  if (s.admissible) {
    const QuotientDerivs qd = quotient_derivs(s.lambdaU, spec, false);
    s.F = qd.value;
    if (with_operator_data) {
      Lambda gl;
      gl.n = n;
      for (int i = 0; i < n; ++i) gl[i] = qd.grad[i];
      s.Fgrad = reassemble(eig, gl);
      s.T = s.Fgrad;
      s.T *= -1.0;
      const double trf = spec.tau * s.Fgrad.trace();
      for (int a = 0; a < n; ++a) s.T.at(a, a) += trf;
    }
  }
  return s;
}

ThirdDeriv third_covariant_frame(const ScalarField& u, std::int64_t node) {
  const Grid& g = *u.grid;
  const int n = g.dim();
  const auto idx = g.unflat(node);
  if (g.boundary_distance(idx) < 2)
    throw std::invalid_argument(
        "third_covariant_frame: node too close to the boundary");
  const auto st = axis_strides(g);
  const MetricAt met = metric_at(g.chart, g.point(node));
  const Christoffel gam = christoffel(g.chart, g.point(node));

  double h0[kMaxChartDim][kMaxChartDim];
  coordinate_cov_hessian(u, node, st, h0);
  double hp[kMaxChartDim][kMaxChartDim][kMaxChartDim];
  double hm[kMaxChartDim][kMaxChartDim][kMaxChartDim];
  for (int k = 0; k < n; ++k) {
    coordinate_cov_hessian(u, node + st[k], st, hp[k]);
    coordinate_cov_hessian(u, node - st[k], st, hm[k]);
  }

  ThirdDeriv out{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double t = (hp[k][i][j] - hm[k][i][j]) / (2.0 * g.h[k]);
        for (int m = 0; m < n; ++m)
          t -= gam.gamma[m][k][i] * h0[m][j] + gam.gamma[m][k][j] * h0[i][m];
        out[i][j][k] = t * met.frame[i] * met.frame[j] * met.frame[k];
      }
    }
  }
  return out;
}

namespace {

template <bool Parallel>
ScalarField residual_impl(const ScalarField& u, const RHSSpec& rhs,
                          const QuotientSpec& spec) {
  const Grid& g = *u.grid;
  const int m = spec.k - spec.l;
  ScalarField r(g);
  std::atomic<std::int64_t> bad{-1};

  auto body = [&](std::int64_t ii) {
    const std::int64_t node = g.interior[ii];
    const PointState s = assemble_point_state(u, node, spec, false);
    if (!s.admissible) {
      // keep the lowest failing node for a deterministic message
      std::int64_t prev = bad.load();
      while ((prev < 0 || node < prev) && !bad.compare_exchange_weak(prev, node)) {
      }
      return;
    }
    const auto re =
        rhs.root_eval(g.point(node), node, s.u, s.grad_sq, m);
    r[node] = s.F - re.phi;
  };

  if constexpr (Parallel)
    parallel_for(static_cast<std::int64_t>(g.interior.size()), body);
  else
    serial_for(static_cast<std::int64_t>(g.interior.size()), body);

  if (bad.load() >= 0) {
    std::ostringstream msg;
    const auto idx = g.unflat(bad.load());
    msg << "residual: lambda(U[u]) left Gamma_" << spec.k << " at node (";
    for (int a = 0; a < g.dim(); ++a) msg << (a ? "," : "") << idx[a];
    msg << ")";
    throw ConeViolation(msg.str());
  }
  return r;
}

}  // namespace

ScalarField residual_field(const ScalarField& u, const RHSSpec& rhs,
                           const QuotientSpec& spec) {
  return residual_impl<true>(u, rhs, spec);
}

ScalarField residual_field_serial(const ScalarField& u, const RHSSpec& rhs,
                                  const QuotientSpec& spec) {
  return residual_impl<false>(u, rhs, spec);
}

std::vector<double> LinearOperator::apply_interior(
    const std::vector<double>& v) const {
  Eigen::Map<const Eigen::VectorXd> x(v.data(), v.size());
  Eigen::VectorXd y = A * x;
  return std::vector<double>(y.data(), y.data() + y.size());
}

LinearOperator assemble_operator(const Grid& grid,
                                 const std::vector<NodeCoeffs>& coeffs,
                                 const double* boundary_values) {
  const int n = grid.dim();
  const auto st = axis_strides(grid);
  const std::int64_t rows = static_cast<std::int64_t>(grid.interior.size());

  struct Entry {
    std::int64_t col;
    double val;
  };
  constexpr int kCap = 1 + 2 * kMaxChartDim + 2 * kMaxChartDim * (kMaxChartDim - 1);
  std::vector<std::array<Entry, kCap>> entries(rows);
  std::vector<int> counts(rows, 0);

  parallel_for(rows, [&](std::int64_t ri) {
    const std::int64_t node = grid.interior[ri];
    const ChartPoint p = grid.point(node);
    const MetricAt met = metric_at(grid.chart, p);
    const Christoffel gam = christoffel(grid.chart, p);
    const NodeCoeffs& c = coeffs[ri];

    auto& row = entries[ri];
    int cnt = 0;
    auto add = [&](std::int64_t col, double v) {
      row[cnt++] = Entry{col, v};
    };

    // First-order coordinate coefficients: Christoffel part of the
    // covariant Hessian plus the explicit frame-gradient terms.
    double c1[kMaxChartDim];
    for (int mdir = 0; mdir < n; ++mdir) {
      double v = c.b[mdir] * met.frame[mdir];
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          v -= c.Tf(a, b) * met.frame[a] * met.frame[b] * gam.gamma[mdir][a][b];
      c1[mdir] = v;
    }

    double center = c.c0;
    for (int a = 0; a < n; ++a) {
      const double c2 = c.Tf(a, a) * met.frame[a] * met.frame[a] /
                        (grid.h[a] * grid.h[a]);
      const double c1h = c1[a] / (2.0 * grid.h[a]);
      add(node + st[a], c2 + c1h);
      add(node - st[a], c2 - c1h);
      center -= 2.0 * c2;
    }
    add(node, center);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < a; ++b) {
        const double cx = 2.0 * c.Tf(a, b) * met.frame[a] * met.frame[b] /
                          (4.0 * grid.h[a] * grid.h[b]);
        add(node + st[a] + st[b], cx);
        add(node - st[a] - st[b], cx);
        add(node + st[a] - st[b], -cx);
        add(node - st[a] + st[b], -cx);
      }
    }
    counts[ri] = cnt;
  });

  LinearOperator op;
  op.A.resize(rows, rows);
  op.boundary_term = Eigen::VectorXd::Zero(rows);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(rows) * kCap);
  for (std::int64_t ri = 0; ri < rows; ++ri) {
    for (int e = 0; e < counts[ri]; ++e) {
      const auto& en = entries[ri][e];
      const std::int64_t cr = grid.interior_rank[en.col];
      if (cr >= 0) {
        trips.emplace_back(static_cast<int>(ri), static_cast<int>(cr), en.val);
      } else if (boundary_values) {
        op.boundary_term[ri] += en.val * boundary_values[en.col];
      }
    }
  }
  op.A.setFromTriplets(trips.begin(), trips.end());
  return op;
}

LinearOperator linearize(const ScalarField& u, const RHSSpec& rhs,
                         const QuotientSpec& spec) {
  const Grid& g = *u.grid;
  const int m = spec.k - spec.l;
  const std::int64_t rows = static_cast<std::int64_t>(g.interior.size());
  std::vector<NodeCoeffs> coeffs(rows);
  std::atomic<std::int64_t> bad{-1};

  parallel_for(rows, [&](std::int64_t ri) {
    const std::int64_t node = g.interior[ri];
    const PointState s = assemble_point_state(u, node, spec, true);
    if (!s.admissible) {
      std::int64_t prev = bad.load();
      while ((prev < 0 || node < prev) && !bad.compare_exchange_weak(prev, node)) {
      }
      return;
    }
    const auto re = rhs.root_eval(g.point(node), node, s.u, s.grad_sq, m);
    NodeCoeffs& c = coeffs[ri];
    c.Tf = s.T;
    for (int a = 0; a < g.dim(); ++a)
      c.b[a] = -2.0 * re.dphi_dgradsq * s.grad[a];
    c.c0 = -re.dphi_du;
  });

  if (bad.load() >= 0)
    throw ConeViolation("linearize: inadmissible point state");
  return assemble_operator(g, coeffs, nullptr);
}

namespace {

template <bool Parallel>
double margin_impl(const ScalarField& u, const QuotientSpec& spec) {
  const Grid& g = *u.grid;
  auto eval = [&](std::int64_t ii) {
    return assemble_point_state(u, g.interior[ii], spec, false).cone_margin;
  };
  const std::int64_t cnt = static_cast<std::int64_t>(g.interior.size());
  if constexpr (Parallel) return parallel_min(cnt, eval);
  double m = 1e300;
  for (std::int64_t i = 0; i < cnt; ++i) m = std::min(m, eval(i));
  return m;
}

}  // namespace

double admissibility_margin(const ScalarField& u, const QuotientSpec& spec) {
  return margin_impl<true>(u, spec);
}

double admissibility_margin_serial(const ScalarField& u,
                                   const QuotientSpec& spec) {
  return margin_impl<false>(u, spec);
}

}  // namespace hessquot
