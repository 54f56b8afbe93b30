#pragma once

#include <string>

#include "hessquot/pogorelov.hpp"
#include "hessquot/solver.hpp"

namespace hessquot {

// Artifact writers. Every CSV carries a leading comment line with the config
// hash and a header row; reals use 17 significant digits with '.' decimals.

std::string format_real17(double v);

void write_text_file(const std::string& path, const std::string& content);

std::string u_csv_text(const ScalarField& u, const std::string& config_hash);
std::string solve_report_text(const SolveReport& report,
                              const std::string& config_hash);
std::string estimate_cells_csv(const EstimateReport& report,
                               const std::string& config_hash);
std::string estimate_flags_csv(const EstimateReport& report,
                               const std::string& config_hash);
std::string probe_summary_text(const ProbeDiagnostics& diag,
                               const ProbeConfig& probe, const Grid& grid,
                               const std::string& config_hash);

}  // namespace hessquot
