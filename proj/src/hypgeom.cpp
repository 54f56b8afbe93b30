#include "hessquot/hypgeom.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hessquot/grid.hpp"

namespace hessquot {

namespace {

constexpr double kRiemannStep = 1e-4;
constexpr double kSecondStep = 1e-4;
constexpr double kFirstStep = 1e-5;

LorentzPoint fd_tangent(const PolarChart& chart, const ChartPoint& p, int a,
                        double step) {
  ChartPoint pp = p, pm = p;
  pp[a] += step;
  pm[a] -= step;
  const LorentzPoint Xp = embed(chart, pp);
  const LorentzPoint Xm = embed(chart, pm);
  LorentzPoint t;
  t.dim = Xp.dim;
  for (int c = 0; c < t.dim; ++c) t.x[c] = (Xp.x[c] - Xm.x[c]) / (2.0 * step);
  return t;
}

LorentzPoint fd_second(const PolarChart& chart, const ChartPoint& p, int a,
                       int b, double step) {
  LorentzPoint out;
  if (a == b) {
    ChartPoint pp = p, pm = p;
    pp[a] += step;
    pm[a] -= step;
    const LorentzPoint Xp = embed(chart, pp);
    const LorentzPoint X0 = embed(chart, p);
    const LorentzPoint Xm = embed(chart, pm);
    out.dim = X0.dim;
    for (int c = 0; c < out.dim; ++c)
      out.x[c] = (Xp.x[c] - 2.0 * X0.x[c] + Xm.x[c]) / (step * step);
  } else {
    ChartPoint pp = p, pm = p, mp = p, mm = p;
    pp[a] += step; pp[b] += step;
    pm[a] += step; pm[b] -= step;
    mp[a] -= step; mp[b] += step;
    mm[a] -= step; mm[b] -= step;
    const LorentzPoint Xpp = embed(chart, pp);
    const LorentzPoint Xpm = embed(chart, pm);
    const LorentzPoint Xmp = embed(chart, mp);
    const LorentzPoint Xmm = embed(chart, mm);
    out.dim = Xpp.dim;
    for (int c = 0; c < out.dim; ++c)
      out.x[c] =
          (Xpp.x[c] - Xpm.x[c] - Xmp.x[c] + Xmm.x[c]) / (4.0 * step * step);
  }
  return out;
}

}  // namespace

bool PolarChart::admissible(const ChartPoint& p) const {
  if (p.n != n) return false;
  if (!(p.radial() >= r_min)) return false;
  for (int a = 0; a + 2 < n; ++a)
    if (!(std::cos(p[a]) >= 0.1)) return false;
  return true;
}

void PolarChart::validate_point(const ChartPoint& p) const {
  if (p.n != n) throw ConfigError("chart point dimension mismatch");
  if (!(p.radial() >= r_min)) {
    std::ostringstream msg;
    msg << "radial coordinate " << p.radial() << " below r_min = " << r_min;
    throw ConfigError(msg.str());
  }
  for (int a = 0; a + 2 < n; ++a) {
    if (!(std::cos(p[a]) >= 0.1)) {
      std::ostringstream msg;
      msg << "angular coordinate xi^" << (a + 1) << " = " << p[a]
          << " too close to chart degeneracy (cos < 0.1)";
      throw ConfigError(msg.str());
    }
  }
}

double lorentz_inner(const LorentzPoint& X, const LorentzPoint& Y) {
  double s = 0.0;
  for (int i = 0; i + 1 < X.dim; ++i) s += X.x[i] * Y.x[i];
  return s - X.x[X.dim - 1] * Y.x[Y.dim - 1];
}

LorentzPoint embed(const PolarChart& chart, const ChartPoint& p) {
  const int n = chart.n;
  const double sh = std::sinh(p.radial());
  LorentzPoint X;
  X.dim = n + 1;

  // x^1 carries every cosine; x^m (m >= 2) stops at angle n-m and picks up
  // one sine; x^{n+1} is the timelike component.
  double prod = 1.0;
  for (int j = 0; j <= n - 2; ++j) prod *= std::cos(p[j]);
  X.x[0] = prod * sh;
  for (int m = 2; m <= n; ++m) {
    prod = 1.0;
    for (int j = 0; j <= n - m - 1; ++j) prod *= std::cos(p[j]);
    X.x[m - 1] = prod * std::sin(p[n - m]) * sh;
  }
  X.x[n] = std::cosh(p.radial());
  return X;
}

MetricAt metric_at(const PolarChart& chart, const ChartPoint& p) {
  const int n = chart.n;
  const double r = p.radial();
  const double sh2 = std::sinh(r) * std::sinh(r);
  const double dr_factor = 2.0 * std::sinh(r) * std::cosh(r);

  MetricAt m;
  m.point = p;
  double det = 1.0;
  for (int a = 0; a < n; ++a) {
    if (a == n - 1) {
      m.sigma[a] = 1.0;
    } else {
      double prod = 1.0;
      for (int j = 0; j < a; ++j) {
        const double c = std::cos(p[j]);
        prod *= c * c;
      }
      m.sigma[a] = sh2 * prod;
      m.dsigma[a][n - 1] = dr_factor * prod;
      for (int j = 0; j < a; ++j)
        m.dsigma[a][j] = -2.0 * std::tan(p[j]) * m.sigma[a];
    }
    m.inv_sigma[a] = 1.0 / m.sigma[a];
    m.frame[a] = 1.0 / std::sqrt(m.sigma[a]);
    det *= m.sigma[a];
  }
  m.sqrt_det = std::sqrt(det);
  return m;
}

Christoffel christoffel(const PolarChart& chart, const ChartPoint& p) {
  const int n = chart.n;
  const MetricAt m = metric_at(chart, p);
  Christoffel out;
  out.n = n;
  // Diagonal metric: only three symbol patterns survive.
  for (int a = 0; a < n; ++a) {
    out.gamma[a][a][a] = 0.5 * m.inv_sigma[a] * m.dsigma[a][a];
    for (int j = 0; j < n; ++j) {
      if (j == a) continue;
      const double g = 0.5 * m.inv_sigma[a] * m.dsigma[a][j];
      out.gamma[a][a][j] = g;
      out.gamma[a][j][a] = g;
      out.gamma[j][a][a] = -0.5 * m.inv_sigma[j] * m.dsigma[a][j];
    }
  }
  return out;
}

RiemannCheck riemann_check(const PolarChart& chart, const ChartPoint& p) {
  const int n = chart.n;
  const double h = kRiemannStep;
  const Christoffel g0 = christoffel(chart, p);
  const MetricAt met = metric_at(chart, p);

  // dgamma[d][m][i][j] = d Gamma^m_{ij} / d xi^d
  std::array<Christoffel, kMaxChartDim> dgamma;
  for (int d = 0; d < n; ++d) {
    ChartPoint pp = p, pm = p;
    pp[d] += h;
    pm[d] -= h;
    const Christoffel gp = christoffel(chart, pp);
    const Christoffel gm = christoffel(chart, pm);
    dgamma[d].n = n;
    for (int mm = 0; mm < n; ++mm)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dgamma[d].gamma[mm][i][j] =
              (gp.gamma[mm][i][j] - gm.gamma[mm][i][j]) / (2.0 * h);
  }

  // Curvature convention of the structure equations used here:
  // R(X,Y)Z = -grad_X grad_Y Z + grad_Y grad_X Z + grad_{[X,Y]} Z,
  // R_ijkl = sigma_jm R^m_{ikl} with (i) the Z slot and (k,l) the X,Y pair.
  auto rm = [&](int m, int i, int k, int l) {
    double v = -dgamma[k].gamma[m][l][i] + dgamma[l].gamma[m][k][i];
    for (int q = 0; q < n; ++q)
      v += -g0.gamma[q][l][i] * g0.gamma[m][k][q] +
           g0.gamma[q][k][i] * g0.gamma[m][l][q];
    return v;
  };

  RiemannCheck out;
  double R[kMaxChartDim][kMaxChartDim][kMaxChartDim][kMaxChartDim];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) R[i][j][k][l] = met.sigma[j] * rm(j, i, k, l);

  auto sig = [&](int i, int j) { return i == j ? met.sigma[i] : 0.0; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const double target = -(sig(i, k) * sig(j, l) - sig(i, l) * sig(j, k));
          out.max_residual =
              std::max(out.max_residual, std::abs(R[i][j][k][l] - target));
          // antisymmetry in the plane pair is structural in the assembly
          out.max_antisymmetry =
              std::max(out.max_antisymmetry, std::abs(R[i][j][k][l] + R[i][j][l][k]));
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double K = -R[j][i][i][j] / (met.sigma[i] * met.sigma[j]);
      out.max_sectional_deviation =
          std::max(out.max_sectional_deviation, std::abs(K + 1.0));
    }
  }
  return out;
}

GaussWeingartenCheck gauss_weingarten_check(const PolarChart& chart,
                                            const ChartPoint& p) {
  const int n = chart.n;
  const MetricAt met = metric_at(chart, p);
  const Christoffel gam = christoffel(chart, p);
  const LorentzPoint nu = embed(chart, p);  // position doubles as the normal

  LorentzPoint tang[kMaxChartDim];
  for (int a = 0; a < n; ++a) tang[a] = fd_tangent(chart, p, a, kFirstStep);

  GaussWeingartenCheck out;
  out.normal_norm = std::abs(lorentz_inner(nu, nu) + 1.0);
  for (int a = 0; a < n; ++a)
    out.tangency = std::max(out.tangency, std::abs(lorentz_inner(nu, tang[a])));

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b <= a; ++b) {
      LorentzPoint cov = fd_second(chart, p, a, b, kSecondStep);
      for (int m = 0; m < n; ++m)
        for (int c = 0; c < cov.dim; ++c)
          cov.x[c] -= gam.gamma[m][a][b] * tang[m].x[c];

      const double h_ab = -lorentz_inner(cov, nu);
      const double sigma_ab = (a == b) ? met.sigma[a] : 0.0;
      out.h_vs_sigma = std::max(out.h_vs_sigma, std::abs(h_ab - sigma_ab));
      for (int c = 0; c < cov.dim; ++c)
        out.gauss_residual =
            std::max(out.gauss_residual, std::abs(cov.x[c] - h_ab * nu.x[c]));
    }
  }

  // nu_,a = h_ab sigma^{bb} X_b; for the hyperboloid both sides are dX_a.
  for (int a = 0; a < n; ++a) {
    const LorentzPoint dnu = fd_tangent(chart, p, a, kFirstStep);
    for (int c = 0; c < dnu.dim; ++c) {
      double rhs = 0.0;
      for (int b = 0; b < n; ++b) {
        const double h_ab = (a == b) ? met.sigma[a] : 0.0;
        rhs += h_ab * met.inv_sigma[b] * tang[b].x[c];
      }
      out.weingarten_residual =
          std::max(out.weingarten_residual, std::abs(dnu.x[c] - rhs));
    }
  }
  return out;
}

double geodesic_dist(const PolarChart& chart, const ChartPoint& p,
                     const ChartPoint& q) {
  // arcosh(-<X,Y>) in the chord form 2 asinh(|X-Y|_L / 2), which is exact at
  // p == q where the direct inner product cancels catastrophically.
  const LorentzPoint X = embed(chart, p);
  const LorentzPoint Y = embed(chart, q);
  LorentzPoint D;
  D.dim = X.dim;
  for (int c = 0; c < X.dim; ++c) D.x[c] = X.x[c] - Y.x[c];
  const double chord_sq = std::max(0.0, lorentz_inner(D, D));
  return 2.0 * std::asinh(0.5 * std::sqrt(chord_sq));
}

double laplace_dist(int n, double rho) {
  if (!(rho >= 1e-8))
    throw std::domain_error("laplace_dist: rho below 1e-8 is degenerate");
  return (n - 1) / std::tanh(rho);
}

DistBounds dist_bounds(const Grid& grid) {
  const int n = grid.dim();
  DistBounds out;
  out.c_minus = 1e300;
  out.c_plus = -1e300;
  for (std::int64_t f = 0; f < grid.total; ++f) {
    const double rho = grid.point(f).radial();
    out.c_minus = std::min(out.c_minus, rho);
    out.c_plus = std::max(out.c_plus, rho);
  }
  if (!(out.c_minus > 0.0))
    throw QInsideDomain("dist_bounds: base point lies in the closed domain");

  const double lower = laplace_dist(n, out.c_plus);
  const double upper = laplace_dist(n, out.c_minus);
  // Comparison chain on a Cartan-Hadamard manifold with Ric >= -(n-1)K:
  // (n-1)/c+ <= laplace(rho) <= (n-1)(sqrt(K) + 1/c-), here K = 1.
  const double cmp_lower = (n - 1) / out.c_plus;
  const double cmp_upper = (n - 1) * (1.0 + 1.0 / out.c_minus);

  out.coth_bounds_slack = 1e300;
  out.comparison_slack = 1e300;
  for (std::int64_t f = 0; f < grid.total; ++f) {
    const double lap = laplace_dist(n, grid.point(f).radial());
    out.coth_bounds_slack =
        std::min(out.coth_bounds_slack, std::min(lap - lower, upper - lap));
    out.comparison_slack =
        std::min(out.comparison_slack, std::min(lap - cmp_lower, cmp_upper - lap));
  }
  return out;
}

}  // namespace hessquot
