// Timing comparison between the OpenMP grid kernels and their serial
// reference implementations. Usage: bench_kernels [dim] [nodes] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "hessquot/hessop.hpp"
#include "hessquot/oracle.hpp"
#include "hessquot/parallel.hpp"
#include "hessquot/pogorelov.hpp"

using namespace hessquot;
using clk = std::chrono::steady_clock;

namespace {

double ms_per_call(int reps, const std::function<void()>& fn) {
  fn();  // warm up
  const auto t0 = clk::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = clk::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const int dim = argc > 1 ? std::atoi(argv[1]) : 2;
  const int nn = argc > 2 ? std::atoi(argv[2]) : 129;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 5;
  if (dim < 2 || dim > 3) {
    std::fprintf(stderr, "dim must be 2 or 3\n");
    return 1;
  }

  PolarChart chart{dim, 1e-3};
  std::array<double, kMaxChartDim> lo{}, hi{};
  std::array<int, kMaxChartDim> nodes{};
  for (int a = 0; a < dim - 1; ++a) {
    lo[a] = -0.6;
    hi[a] = 0.6;
  }
  lo[dim - 1] = 0.5;
  hi[dim - 1] = 1.5;
  for (int a = 0; a < dim; ++a) nodes[a] = nn;
  auto grid = std::make_shared<const Grid>(Grid::make(chart, lo, hi, nodes));

  const QuotientSpec spec{dim, dim == 2 ? 2 : 3, dim == 2 ? 0 : 1, 1.0};
  const auto mc = oracle::make_manufactured(spec, grid, 0.4);
  const ScalarField& u = mc.u_star;

  std::printf("grid %d^%d (%lld nodes), %d threads\n", nn, dim,
              static_cast<long long>(grid->total), max_threads());
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial ms", "openmp ms",
              "speedup");

  struct Row {
    const char* name;
    std::function<void()> serial;
    std::function<void()> parallel;
  };
  const Row rows[] = {
      {"residual assembly",
       [&] { residual_field_serial(u, mc.rhs, spec); },
       [&] { residual_field(u, mc.rhs, spec); }},
      {"admissibility margin",
       [&] { admissibility_margin_serial(u, spec); },
       [&] { admissibility_margin(u, spec); }},
      {"pogorelov max (spectral)",
       [&] { estimate_M_serial(u, 4.0, ProbeConfig::HessNorm::Spectral); },
       [&] { estimate_M(u, 4.0, ProbeConfig::HessNorm::Spectral); }},
  };

  for (const auto& row : rows) {
    const double ts = ms_per_call(reps, row.serial);
    const double tp = ms_per_call(reps, row.parallel);
    std::printf("%-28s %12.3f %12.3f %8.2fx\n", row.name, ts, tp, ts / tp);
  }

  // Consistency: the parallel kernels must reproduce the serial results.
  const ScalarField rs = residual_field_serial(u, mc.rhs, spec);
  const ScalarField rp = residual_field(u, mc.rhs, spec);
  double dmax = 0.0;
  for (std::int64_t f = 0; f < grid->total; ++f)
    dmax = std::max(dmax, std::abs(rs[f] - rp[f]));
  std::printf("serial/openmp residual max diff: %g\n", dmax);
  return dmax == 0.0 ? 0 : 1;
}
