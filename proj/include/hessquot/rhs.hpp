#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hessquot/errors.hpp"
#include "hessquot/hypgeom.hpp"

namespace hessquot {

/// Right-hand side family f(x,u,p) = A g(x) exp(-mu u) (1+|p|^2_g)^s with
/// g one of a closed set of positive spatial profiles, so every derivative
/// the linearization needs is analytic.
struct RHSSpec {
  enum class Profile { Constant, RadialGaussian, CosineProduct, Tabulated };

  double amplitude = 1.0;
  Profile profile = Profile::Constant;
  double center = 1.0;  // radial gaussian: exp(-((rho-center)/width)^2)
  double width = 0.5;
  double eps = 0.0;  // cosine product: prod_a (1 + eps cos(freq xi^a))
  double freq = 1.0;
  double mu = 0.0;
  double s = 0.0;

  // Node-indexed spatial samples; test-only path for manufactured cases.
  std::shared_ptr<const std::vector<double>> table;

  void validate() const;

  double g_at(const ChartPoint& p, std::int64_t node) const;
  double f_value(const ChartPoint& p, std::int64_t node, double u,
                 double grad_sq) const;

  /// phi = f^{1/m} and its u- and |grad u|^2-derivatives.
  struct RootEval {
    double phi = 0.0;
    double dphi_du = 0.0;
    double dphi_dgradsq = 0.0;
  };
  RootEval root_eval(const ChartPoint& p, std::int64_t node, double u,
                     double grad_sq, int m) const;

  RHSSpec with_amplitude(double a) const {
    RHSSpec r = *this;
    r.amplitude = a;
    return r;
  }
};

}  // namespace hessquot
