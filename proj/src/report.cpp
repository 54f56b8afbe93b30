#include "hessquot/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hessquot {

std::string format_real17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string u_csv_text(const ScalarField& u, const std::string& config_hash) {
  const Grid& g = *u.grid;
  std::ostringstream os;
  os << "# config_hash=" << config_hash << "\n";
  for (int a = 0; a < g.dim(); ++a) os << "xi" << (a + 1) << ",";
  os << "u\n";
  for (std::int64_t f = 0; f < g.total; ++f) {
    const ChartPoint p = g.point(f);
    for (int a = 0; a < g.dim(); ++a) os << format_real17(p[a]) << ",";
    os << format_real17(u[f]) << "\n";
  }
  return os.str();
}

std::string solve_report_text(const SolveReport& report,
                              const std::string& config_hash) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash << "\n";
  os << report_to_text(report);
  return os.str();
}

std::string estimate_cells_csv(const EstimateReport& report,
                               const std::string& config_hash) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash << "\n";
  os << "nodes_per_axis,h,beta,amplitude,M_spectral,M_lambda_max,M_frobenius,"
        "sup_u,sup_grad,c_minus,c_plus,solved,failure\n";
  for (const auto& c : report.cells) {
    os << c.nodes_per_axis << "," << format_real17(c.h) << ","
       << format_real17(c.beta) << "," << format_real17(c.amplitude) << ","
       << format_real17(c.M_spectral) << "," << format_real17(c.M_lambda_max)
       << "," << format_real17(c.M_frobenius) << "," << format_real17(c.sup_u)
       << "," << format_real17(c.sup_grad) << "," << format_real17(c.c_minus)
       << "," << format_real17(c.c_plus) << "," << (c.solved ? 1 : 0) << ","
       << (c.failure.empty() ? "-" : c.failure) << "\n";
  }
  return os.str();
}

std::string estimate_flags_csv(const EstimateReport& report,
                               const std::string& config_hash) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash << "\n";
  os << "beta,amplitude,stabilized,M_coarse,M_mid,M_fine\n";
  for (const auto& f : report.flags) {
    os << format_real17(f.beta) << "," << format_real17(f.amplitude) << ","
       << (f.stabilized ? 1 : 0) << "," << format_real17(f.m_coarse) << ","
       << format_real17(f.m_mid) << "," << format_real17(f.m_fine) << "\n";
  }
  return os.str();
}

std::string probe_summary_text(const ProbeDiagnostics& diag,
                               const ProbeConfig& probe, const Grid& grid,
                               const std::string& config_hash) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash << "\n";
  os << "test function constants: beta = " << format_real17(probe.beta)
     << ", a = " << format_real17(probe.a)
     << ", A = " << format_real17(probe.A) << "\n";
  const auto idx = grid.unflat(diag.x0);
  os << "maximizer node:";
  for (int a = 0; a < grid.dim(); ++a) os << " " << idx[a];
  os << "  (flat " << diag.x0 << ")\n";
  os << "interior_max = " << (diag.interior_max ? "yes" : "no (MaxOnBoundary)")
     << "\n";
  os << "P_max = " << format_real17(diag.P_max) << "\n";
  os << "u(x0) = " << format_real17(diag.u_at_x0) << "\n";
  os << "hessian eigenvalues (descending):";
  for (int a = 0; a < grid.dim(); ++a)
    os << " " << format_real17(diag.hess_eigs[a]);
  os << "\n";
  if (!diag.interior_max) {
    os << "maximizer on the boundary ring; second-order diagnostics omitted\n";
    return os.str();
  }
  os << "first-order condition residual:";
  for (int a = 0; a < grid.dim(); ++a) os << " " << format_real17(diag.dif1[a]);
  os << "\n";
  os << "first-order residual max = " << format_real17(diag.dif1_norm) << "\n";
  os << "sum_i T^ii P_ii = " << format_real17(diag.sum_TPii) << "\n";
  os << "F ordering (descending, positive) = " << (diag.F_ordering ? "yes" : "no")
     << "\n";
  os << "T ordering (ascending, positive) = " << (diag.T_ordering ? "yes" : "no")
     << "\n";
  os << "T11 = " << format_real17(diag.T11) << "\n";
  os << "A * T11 * (n-1) coth(c_plus) = " << format_real17(diag.final_term)
     << "\n";
  return os.str();
}

}  // namespace hessquot
