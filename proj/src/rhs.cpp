#include "hessquot/rhs.hpp"

#include <cmath>
#include <sstream>

namespace hessquot {

void RHSSpec::validate() const {
  if (!(amplitude > 0.0)) throw ConfigError("rhs.amplitude must be > 0");
  if (profile == Profile::RadialGaussian && !(width > 0.0))
    throw ConfigError("rhs.width must be > 0");
  if (profile == Profile::CosineProduct && !(std::abs(eps) < 1.0))
    throw ConfigError("rhs.eps must satisfy |eps| < 1 to keep f positive");
  if (profile == Profile::Tabulated && !table)
    throw ConfigError("tabulated rhs has no samples");
}

double RHSSpec::g_at(const ChartPoint& p, std::int64_t node) const {
  switch (profile) {
    case Profile::Constant:
      return 1.0;
    case Profile::RadialGaussian: {
      const double t = (p.radial() - center) / width;
      return std::exp(-t * t);
    }
    case Profile::CosineProduct: {
      double g = 1.0;
      for (int a = 0; a < p.n; ++a) g *= 1.0 + eps * std::cos(freq * p[a]);
      return g;
    }
    case Profile::Tabulated:
      return (*table)[static_cast<std::size_t>(node)];
  }
  return 1.0;
}

double RHSSpec::f_value(const ChartPoint& p, std::int64_t node, double u,
                        double grad_sq) const {
  return amplitude * g_at(p, node) * std::exp(-mu * u) *
         std::pow(1.0 + grad_sq, s);
}

RHSSpec::RootEval RHSSpec::root_eval(const ChartPoint& p, std::int64_t node,
                                     double u, double grad_sq, int m) const {
  RootEval out;
  out.phi = std::pow(f_value(p, node, u, grad_sq), 1.0 / m);
  out.dphi_du = -(mu / m) * out.phi;
  out.dphi_dgradsq = (s / m) * out.phi / (1.0 + grad_sq);
  return out;
}

}  // namespace hessquot
