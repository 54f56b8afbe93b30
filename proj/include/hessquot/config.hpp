#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hessquot/pogorelov.hpp"
#include "hessquot/solver.hpp"

namespace hessquot {

/// Fully validated run configuration. Every field has a default; unknown or
/// duplicate keys are rejected at parse time.
struct RunConfig {
  QuotientSpec quotient;

  std::vector<double> angle_min{-0.6};
  std::vector<double> angle_max{0.6};
  double r_min = 0.5;
  double r_max = 1.5;
  std::vector<int> grid_nodes{33};

  RHSSpec rhs;

  int continuation_steps = 1;
  double newton_tol = 1e-9;
  int max_iterations = 50;
  double backtrack_factor = 0.5;
  double cone_margin = 1e-8;
  double linear_tol = 1e-10;

  ProbeConfig probe;

  std::vector<double> sweep_betas{1.0, 2.0, 4.0, 8.0};
  std::vector<double> sweep_amplitudes{1.0, 2.0, 4.0};
  std::vector<int> sweep_refinements{33, 65, 129};

  std::vector<std::string> notices;  // informational, not part of the echo

  void validate();  // normalizes broadcast lists, fills notices

  std::shared_ptr<const Grid> make_grid() const;
  std::shared_ptr<const Grid> make_grid(int nodes_per_axis) const;
  SolveConfig make_solve_config() const;

  /// Canonical text form: fixed key order, 17 significant digits. Parsing
  /// it back yields an identical configuration.
  std::string canonical_text() const;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config(const std::string& path);

std::uint64_t fnv1a64(std::string_view s);
/// Stable digest of the canonical text, embedded in every artifact.
std::string config_hash_hex(const RunConfig& config);

}  // namespace hessquot
