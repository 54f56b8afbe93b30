#include "hessquot/grid.hpp"

#include <cmath>
#include <sstream>

namespace hessquot {

Grid Grid::make(const PolarChart& chart,
                const std::array<double, kMaxChartDim>& lo,
                const std::array<double, kMaxChartDim>& hi,
                const std::array<int, kMaxChartDim>& nodes) {
  const int n = chart.n;
  Grid g;
  g.chart = chart;
  g.lo = lo;
  g.hi = hi;
  g.nodes = nodes;
  g.total = 1;
  for (int a = 0; a < n; ++a) {
    if (nodes[a] < 5) {
      std::ostringstream msg;
      msg << "grid axis " << a << " needs at least 5 nodes, got " << nodes[a];
      throw ConfigError(msg.str());
    }
    if (!(hi[a] > lo[a])) {
      std::ostringstream msg;
      msg << "grid axis " << a << " has empty extent [" << lo[a] << ", "
          << hi[a] << "]";
      throw ConfigError(msg.str());
    }
    g.h[a] = (hi[a] - lo[a]) / (nodes[a] - 1);
    g.total *= nodes[a];
  }

  // The whole box must be admissible; extremes suffice for the cos bounds.
  ChartPoint corner;
  corner.n = n;
  for (int a = 0; a < n; ++a)
    corner[a] = std::abs(lo[a]) > std::abs(hi[a]) ? lo[a] : hi[a];
  corner[n - 1] = lo[n - 1];
  chart.validate_point(corner);

  g.interior_rank.assign(g.total, -1);
  for (std::int64_t f = 0; f < g.total; ++f) {
    if (!g.is_boundary(g.unflat(f))) {
      g.interior_rank[f] = static_cast<std::int64_t>(g.interior.size());
      g.interior.push_back(f);
    }
  }
  return g;
}

double multilinear_sample(const ScalarField& f, const ChartPoint& p) {
  const Grid& g = *f.grid;
  const int n = g.dim();
  int base[kMaxChartDim];
  double w[kMaxChartDim];
  for (int a = 0; a < n; ++a) {
    double t = (p[a] - g.lo[a]) / g.h[a];
    t = std::min(std::max(t, 0.0), static_cast<double>(g.nodes[a] - 1));
    int i0 = static_cast<int>(t);
    i0 = std::min(i0, g.nodes[a] - 2);
    base[a] = i0;
    w[a] = t - i0;
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    std::array<int, kMaxChartDim> idx{};
    double weight = 1.0;
    for (int a = 0; a < n; ++a) {
      const int bit = (corner >> a) & 1;
      idx[a] = base[a] + bit;
      weight *= bit ? w[a] : 1.0 - w[a];
    }
    acc += weight * f[g.flat(idx)];
  }
  return acc;
}

}  // namespace hessquot
