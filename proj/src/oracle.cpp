#include "hessquot/oracle.hpp"

#include <cmath>
#include <sstream>

#include "hessquot/hessop.hpp"

namespace hessquot::oracle {

double sigma_bruteforce(const Lambda& lambda, int k) {
  const int n = lambda.n;
  if (k == 0) return 1.0;
  if (k < 0 || k > n) return 0.0;
  double total = 0.0;
  // Enumerate k-subsets by bitmask; n is small by contract.
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) prod *= lambda[i];
    total += prod;
  }
  return total;
}

double sigma_partial_bruteforce(const Lambda& lambda, int k, int i) {
  Lambda reduced;
  reduced.n = lambda.n - 1;
  int j = 0;
  for (int a = 0; a < lambda.n; ++a)
    if (a != i) reduced[j++] = lambda[a];
  return sigma_bruteforce(reduced, k - 1);
}

double fd_derivative(const std::function<double(const SymMat&)>& fn,
                     const SymMat& U, const SymMat& V, int order) {
  const double step0 = order == 1 ? 1e-6 : 1e-4;
  for (int attempt = 0;; ++attempt) {
    const double h = step0 / static_cast<double>(1 << attempt);
    try {
      auto diff = [&](double t) {
        const SymMat Up = U + t * V;
        const SymMat Um = U + (-t) * V;
        if (order == 1) return (fn(Up) - fn(Um)) / (2.0 * t);
        return (fn(Up) - 2.0 * fn(U) + fn(Um)) / (t * t);
      };
      // one Richardson step: both stencils have O(h^2) leading error
      const double d1 = diff(h);
      const double d2 = diff(0.5 * h);
      return (4.0 * d2 - d1) / 3.0;
    } catch (const ConeViolation&) {
      if (attempt >= 4) throw;
    }
  }
}

double manufactured_value(double c, double r_max, double rho) {
  return -c * (std::cosh(r_max) - std::cosh(rho));
}

ManufacturedCase make_manufactured(const QuotientSpec& spec,
                                   std::shared_ptr<const Grid> grid, double c) {
  if (!(c > 0.0)) throw Inadmissible("make_manufactured: c must be positive");
  ManufacturedCase mc;
  mc.spec = spec;
  mc.grid = std::move(grid);
  mc.c = c;
  const Grid& g = *mc.grid;

  const double r_max = g.hi[g.dim() - 1];
  mc.u_star = ScalarField(g);
  for (std::int64_t f = 0; f < g.total; ++f)
    mc.u_star[f] = manufactured_value(c, r_max, g.point(f).radial());

  auto table = std::make_shared<std::vector<double>>(g.total, 1.0);
  mc.f_star = ScalarField(g);
  for (std::int64_t node : g.interior) {
    const PointState s = assemble_point_state(mc.u_star, node, spec, false);
    if (!s.admissible) {
      std::ostringstream msg;
      msg << "make_manufactured: radial family leaves Gamma_" << spec.k
          << " at node " << node << " for c = " << c;
      throw Inadmissible(msg.str());
    }
    const double fv = sigma(s.lambdaU, spec.k) / sigma(s.lambdaU, spec.l);
    (*table)[node] = fv;
    mc.f_star[node] = fv;
  }

  mc.rhs.amplitude = 1.0;
  mc.rhs.profile = RHSSpec::Profile::Tabulated;
  mc.rhs.table = table;

  // Continuum image of the umbilic family, lambda_i = (n tau - 1) c cosh rho.
  auto cont = std::make_shared<std::vector<double>>(g.total, 1.0);
  const double ratio = binomial(spec.n, spec.k) / binomial(spec.n, spec.l);
  for (std::int64_t f = 0; f < g.total; ++f) {
    const double t = (spec.n * spec.tau - 1.0) * c *
                     std::cosh(g.point(f).radial());
    (*cont)[f] = ratio * std::pow(t, spec.k - spec.l);
  }
  mc.rhs_continuum.amplitude = 1.0;
  mc.rhs_continuum.profile = RHSSpec::Profile::Tabulated;
  mc.rhs_continuum.table = cont;

  mc.dirichlet = std::make_shared<const std::vector<double>>(mc.u_star.values);
  return mc;
}

}  // namespace hessquot::oracle
