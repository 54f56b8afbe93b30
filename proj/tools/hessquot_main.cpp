#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hessquot/checksuite.hpp"
#include "hessquot/config.hpp"
#include "hessquot/parallel.hpp"
#include "hessquot/report.hpp"

namespace fs = std::filesystem;
using namespace hessquot;

namespace {

std::uint64_t seed_from_env() {
  const char* env = std::getenv("HESSQUOT_SEED");
  if (!env) return 0;
  return std::strtoull(env, nullptr, 10);
}

int cmd_check(const RunConfig& config) {
  const auto results = run_check_suite(config, seed_from_env());
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name
              << std::string(width + 2 - r.name.size(), ' ') << r.detail
              << "\n";
  }
  std::cout << (all_pass ? "all checks passed" : "CHECK SUITE FAILED") << "\n";
  return all_pass ? 0 : 4;
}

int cmd_solve(const RunConfig& config, const fs::path& out) {
  const SolveConfig sc = config.make_solve_config();
  const SolveReport rep = continuation_solve(sc);
  const std::string hash = config_hash_hex(config);
  write_text_file((out / "report.txt").string(), solve_report_text(rep, hash));
  write_text_file((out / "u.csv").string(), u_csv_text(rep.u, hash));
  std::cout << "solved: residual " << format_real17(rep.final_residual)
            << ", sup|u| " << format_real17(rep.sup_u) << ", cone margin "
            << format_real17(rep.admissibility_certificate) << "\n";
  return 0;
}

int cmd_estimate(const RunConfig& config, const fs::path& out) {
  const SolveConfig sc = config.make_solve_config();
  const EstimateReport rep = refine_sweep(sc, config.sweep_refinements,
                                          {config.probe.beta},
                                          {config.rhs.amplitude});
  const std::string hash = config_hash_hex(config);
  write_text_file((out / "estimate_cells.csv").string(),
                  estimate_cells_csv(rep, hash));
  write_text_file((out / "estimate_flags.csv").string(),
                  estimate_flags_csv(rep, hash));
  for (const auto& f : rep.flags)
    std::cout << "beta " << f.beta << " amplitude " << f.amplitude << ": "
              << (f.stabilized ? "stabilized" : "not stabilized") << "\n";
  return 0;
}

int cmd_probe(const RunConfig& config, const fs::path& out) {
  const SolveConfig sc = config.make_solve_config();
  const SolveReport rep = continuation_solve(sc);
  const ProbeDiagnostics diag = probe_P(rep.u, config.probe, config.quotient);
  const std::string hash = config_hash_hex(config);
  const std::string text = probe_summary_text(diag, config.probe, *sc.grid, hash);
  write_text_file((out / "probe.txt").string(), text);
  std::cout << text;
  return 0;
}

int cmd_sweep(const RunConfig& config, const fs::path& out) {
  const SolveConfig sc = config.make_solve_config();
  const EstimateReport rep = refine_sweep(sc, config.sweep_refinements,
                                          config.sweep_betas,
                                          config.sweep_amplitudes);
  const std::string hash = config_hash_hex(config);
  write_text_file((out / "sweep_cells.csv").string(),
                  estimate_cells_csv(rep, hash));
  write_text_file((out / "sweep_flags.csv").string(),
                  estimate_flags_csv(rep, hash));
  int stabilized = 0;
  for (const auto& f : rep.flags) stabilized += f.stabilized ? 1 : 0;
  std::cout << "sweep finished: " << stabilized << "/" << rep.flags.size()
            << " cells stabilized\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian quotient Dirichlet problems on the hyperbolic plane"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;

  for (const char* name : {"check", "solve", "estimate", "probe", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--threads", threads, "OpenMP thread count (0 = default)");
  }

  CLI11_PARSE(app, argc, argv);
  set_threads(threads);

  try {
    const RunConfig config = parse_config(config_path);
    for (const auto& note : config.notices) std::cout << note << "\n";

    const fs::path out(out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
      std::cerr << "error: cannot create output directory '" << out_dir
                << "': " << ec.message() << "\n";
      return 5;
    }
    write_text_file((out / "resolved.cfg").string(), config.canonical_text());

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "check") return cmd_check(config);
    if (cmd == "solve") return cmd_solve(config, out);
    if (cmd == "estimate") return cmd_estimate(config, out);
    if (cmd == "probe") return cmd_probe(config, out);
    return cmd_sweep(config, out);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const IoError& err) {
    std::cerr << "i/o error: " << err.what() << "\n";
    return 5;
  } catch (const std::runtime_error& err) {
    std::cerr << "solver error: " << err.what() << "\n";
    return 3;
  }
}
