#pragma once

#include <cstdint>
#include <vector>

#include "hessquot/hypgeom.hpp"

namespace hessquot {

/// Tensor-product grid over a coordinate box of the polar chart. Uniform
/// spacing per axis; boundary nodes are the box faces. Node order is
/// lexicographic with axis 0 fastest, which fixes every reduction order.
struct Grid {
  PolarChart chart;
  std::array<double, kMaxChartDim> lo{};
  std::array<double, kMaxChartDim> hi{};
  std::array<int, kMaxChartDim> nodes{};  // >= 5 per axis
  std::array<double, kMaxChartDim> h{};

  std::int64_t total = 0;
  std::vector<std::int64_t> interior;  // flat indices of interior nodes
  std::vector<std::int64_t> interior_rank;  // flat index -> interior slot or -1

  static Grid make(const PolarChart& chart,
                   const std::array<double, kMaxChartDim>& lo,
                   const std::array<double, kMaxChartDim>& hi,
                   const std::array<int, kMaxChartDim>& nodes);

  int dim() const { return chart.n; }

  std::int64_t flat(const std::array<int, kMaxChartDim>& idx) const {
    std::int64_t f = 0;
    for (int a = chart.n - 1; a >= 0; --a) f = f * nodes[a] + idx[a];
    return f;
  }
  std::array<int, kMaxChartDim> unflat(std::int64_t f) const {
    std::array<int, kMaxChartDim> idx{};
    for (int a = 0; a < chart.n; ++a) {
      idx[a] = static_cast<int>(f % nodes[a]);
      f /= nodes[a];
    }
    return idx;
  }
  ChartPoint point(const std::array<int, kMaxChartDim>& idx) const {
    ChartPoint p;
    p.n = chart.n;
    for (int a = 0; a < chart.n; ++a) p[a] = lo[a] + idx[a] * h[a];
    return p;
  }
  ChartPoint point(std::int64_t f) const { return point(unflat(f)); }

  bool is_boundary(const std::array<int, kMaxChartDim>& idx) const {
    for (int a = 0; a < chart.n; ++a)
      if (idx[a] == 0 || idx[a] == nodes[a] - 1) return true;
    return false;
  }
  /// Smallest index distance to any face.
  int boundary_distance(const std::array<int, kMaxChartDim>& idx) const {
    int d = nodes[0];
    for (int a = 0; a < chart.n; ++a)
      d = std::min(d, std::min(idx[a], nodes[a] - 1 - idx[a]));
    return d;
  }
};

struct ScalarField;

/// Multilinear interpolation of a node field at a chart point inside the box
/// (coordinates clamped to the box).
double multilinear_sample(const ScalarField& f, const ChartPoint& p);

/// One real value per grid node. Fields do not own their grid.
struct ScalarField {
  const Grid* grid = nullptr;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(&g), values(g.total, 0.0) {}

  double operator[](std::int64_t i) const { return values[i]; }
  double& operator[](std::int64_t i) { return values[i]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

}  // namespace hessquot
